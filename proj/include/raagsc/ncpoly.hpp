#pragma once

#include <complex>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "raagsc/error.hpp"
#include "raagsc/graph.hpp"
#include "raagsc/linalg.hpp"

namespace raagsc {

// x_v or x_v*.
struct Symbol {
  VertexId vertex = 0;
  bool star = false;

  unsigned key() const noexcept { return 2u * vertex + (star ? 1u : 0u); }
  Symbol adjoint() const noexcept { return {vertex, !star}; }
  auto operator<=>(const Symbol& o) const { return key() <=> o.key(); }
  bool operator==(const Symbol& o) const = default;
};

using Monomial = std::vector<Symbol>;

// Shortlex, so the constant term comes first.
struct MonomialLess {
  bool operator()(const Monomial& a, const Monomial& b) const {
    if (a.size() != b.size()) return a.size() < b.size();
    return a < b;
  }
};

class NcPolynomial {
 public:
  using Terms = std::map<Monomial, cd, MonomialLess>;

  NcPolynomial() = default;
  static NcPolynomial constant(cd c);
  static NcPolynomial variable(Symbol s);

  const Terms& terms() const noexcept { return terms_; }
  void add(const Monomial& m, cd c);  // zero coefficients are never stored
  cd coefficient(const Monomial& m) const;
  std::size_t degree() const;
  bool is_zero() const { return terms_.empty(); }
  bool has_star() const;
  std::vector<VertexId> vertices() const;

  friend NcPolynomial operator+(const NcPolynomial& a, const NcPolynomial& b);
  friend NcPolynomial operator-(const NcPolynomial& a, const NcPolynomial& b);
  friend NcPolynomial operator*(const NcPolynomial& a, const NcPolynomial& b);
  friend NcPolynomial operator*(cd c, const NcPolynomial& a);
  bool operator==(const NcPolynomial& o) const = default;

 private:
  Terms terms_;
};

// Grammar: `X_v` or `X_{v}` variables with optional postfix `*` for the adjoint,
// complex literals (`2`, `1.5i`, `i`), binary `+ - *`, unary sign, parentheses.
// A `*` right after a factor is an adjoint unless a factor follows it.
NcPolynomial parse_poly(const SimpleGraph& g, std::string_view text);
std::string poly_to_string(const SimpleGraph& g, const NcPolynomial& p);

NcPolynomial adjoint(const NcPolynomial& p);
NcPolynomial poly_multiply(const NcPolynomial& p, const NcPolynomial& q);
double l1_norm(const NcPolynomial& p);

// q with p(x_v + x_v*) = q(x_v, x_v*); rejects starred input.
NcPolynomial hermitian_substitution(const NcPolynomial& p);

// JSON list of {"monomial": ["X_a", "X_b*", ...], "coeff": [re, im]}.
std::string poly_to_json(const SimpleGraph& g, const NcPolynomial& p);
NcPolynomial poly_from_json(const SimpleGraph& g, std::string_view text);

namespace detail {
template <class Op>
Eigen::Index op_rows(const Op& o) {
  if constexpr (requires { o.rows(); }) return o.rows();
  else return o.dim();
}
template <class Op>
Eigen::Index op_cols(const Op& o) {
  if constexpr (requires { o.cols(); }) return o.cols();
  else return o.dim();
}
}  // namespace detail

// Evaluates p by left-to-right composition in any operator type supporting
// Op*Op, Op+Op and cd*Op.
template <class Op>
Op evaluate(const NcPolynomial& p, const std::map<Symbol, Op>& context, const Op& unit) {
  const Eigen::Index n = detail::op_rows(unit);
  if (detail::op_cols(unit) != n) throw InvalidArgument("unit operator is not square");
  for (const auto& [mono, c] : p.terms())
    for (const Symbol& s : mono) {
      auto it = context.find(s);
      if (it == context.end())
        throw InvalidArgument("evaluation context has no operator for symbol of vertex " + std::to_string(s.vertex));
      if (detail::op_rows(it->second) != n || detail::op_cols(it->second) != n)
        throw InvalidArgument("operator dimension mismatch in evaluation context");
    }
  Op result = cd(0.0) * unit;
  for (const auto& [mono, c] : p.terms()) {
    if (mono.empty()) {
      result = Op(result + c * unit);
      continue;
    }
    Op term = context.at(mono.front());
    for (std::size_t i = 1; i < mono.size(); ++i) term = Op(term * context.at(mono[i]));
    result = Op(result + c * term);
  }
  return result;
}

}  // namespace raagsc
