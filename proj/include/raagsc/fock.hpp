#pragma once

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "raagsc/graph.hpp"
#include "raagsc/linalg.hpp"
#include "raagsc/ncpoly.hpp"

namespace raagsc {

// Canonical (lexicographically least) word of a commutation class.
using Trace = std::vector<VertexId>;

Trace canonical_trace(const SimpleGraph& g, std::span<const VertexId> word);
// Whitespace-separated vertex names.
std::vector<VertexId> parse_vertices(const SimpleGraph& g, std::string_view text);

// All traces of length exactly k in lexicographic order.
std::vector<Trace> enumerate_traces(const SimpleGraph& g, unsigned k);

// Removes v from the front of t if it commutes to the leftmost position.
std::optional<Trace> remove_front(const SimpleGraph& g, VertexId v, const Trace& t);

inline constexpr std::size_t kDefaultDimGuard = std::size_t{1} << 24;

// Orthonormal basis of the degree <= D truncation: by degree, then lexicographic.
class FockBasis {
 public:
  FockBasis(const SimpleGraph& g, unsigned depth, std::size_t guard = kDefaultDimGuard);

  const SimpleGraph& graph() const noexcept { return graph_; }
  unsigned depth() const noexcept { return depth_; }
  std::size_t dim() const noexcept { return traces_.size(); }
  // Number of basis traces of degree <= k.
  std::size_t dim_upto(unsigned k) const { return offsets_.at(std::min(k, depth_) + 1); }
  const Trace& trace(std::size_t i) const { return traces_.at(i); }
  std::optional<std::size_t> index(const Trace& t) const;

 private:
  static std::string key(const Trace& t);
  SimpleGraph graph_;
  unsigned depth_;
  std::vector<Trace> traces_;
  std::vector<std::size_t> offsets_;
  std::unordered_map<std::string, std::size_t> index_;
};

using FockBasisPtr = std::shared_ptr<const FockBasis>;

struct TruncatedFockOperator {
  FockBasisPtr basis;
  SparseOp matrix;

  unsigned depth() const { return basis->depth(); }
  TruncatedFockOperator adjoint() const { return {basis, SparseOp(matrix.adjoint())}; }
};

TruncatedFockOperator identity_op(const FockBasisPtr& basis);
TruncatedFockOperator creation_op(const FockBasisPtr& basis, VertexId v);
TruncatedFockOperator annihilation_op(const FockBasisPtr& basis, VertexId v);
TruncatedFockOperator semicircular_op(const FockBasisPtr& basis, VertexId v);
TruncatedFockOperator creation_op(const SimpleGraph& g, VertexId v, unsigned depth);
TruncatedFockOperator semicircular_op(const SimpleGraph& g, VertexId v, unsigned depth);

cd vacuum_state(const TruncatedFockOperator& op);
NormEstimate op_norm(const TruncatedFockOperator& op, const NormOptions& opts = {});

// Evaluates p(l_v, l_v*) as a sparse matrix on `basis`.
SparseOp evaluate_on_fock(const FockBasisPtr& basis, const NcPolynomial& p);

struct FockNormReport {
  double value = 0.0;
  unsigned depth = 0;
  bool converged = false;  // |value_D - value_{D-1}| < 1e-6 max(1, value_D)
  double previous = 0.0;   // value at D-1 (0 when D-1 < deg p)
  int iterations = 0;
};

// Norm of the compression of p(l_v, l_v*) to degrees <= D. The operator is
// formed at depth D + deg p so truncation never touches the compressed block.
double fock_compression_norm(const SimpleGraph& g, const NcPolynomial& p, unsigned depth,
                             std::size_t guard = kDefaultDimGuard, int* iterations = nullptr);
FockNormReport fock_poly_norm(const SimpleGraph& g, const NcPolynomial& p, unsigned depth,
                              std::size_t guard = kDefaultDimGuard);

// Reduces a word in l_v (unstarred) and l_v* (starred) with l_v*l_v = 1,
// l_v*l_w = l_w l_v* (v ~ w) and l_v*l_w = 0 (v, w distinct and non-adjacent)
// to creations followed by annihilations; nullopt means the word is zero.
std::optional<Monomial> toeplitz_normal_form(const SimpleGraph& g, const Monomial& word);

// ---- moments ----

// Number of Dyck paths with n steps (0 for odd n), counted by dynamic programming.
std::uint64_t dyck_count(unsigned n);

struct MomentFactor {
  VertexId vertex = 0;
  std::vector<cd> coeffs;  // coefficients of s_v^0, s_v^1, ...
};
using MomentQuery = std::vector<MomentFactor>;

// Semicircle moment of one factor: sum_i c_i * dyck(i).
cd single_vertex_moment(const MomentFactor& a);

// tau_vac(a_1 ... a_n) from single-vertex semicircle moments by merging
// same-vertex factors across commuting ones and centring the first
// uncentred factor of a Gamma-reduced sequence.
cd moment_factorize(const SimpleGraph& g, const MomentQuery& q, std::size_t max_calls = 1'000'000);

// Same quantity by applying the factors to Omega on a Fock basis of sufficient depth.
cd moment_direct(const FockBasisPtr& basis, const MomentQuery& q);
cd moment_direct(const SimpleGraph& g, const MomentQuery& q);

}  // namespace raagsc
