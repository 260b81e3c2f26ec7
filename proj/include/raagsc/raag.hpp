#pragma once

#include <complex>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "raagsc/graph.hpp"
#include "raagsc/linalg.hpp"

namespace raagsc {

// Generator v or its inverse. Letters order by (vertex position, positive first).
struct Letter {
  VertexId vertex = 0;
  bool inverse = false;

  unsigned key() const noexcept { return 2u * vertex + (inverse ? 1u : 0u); }
  Letter inv() const noexcept { return {vertex, !inverse}; }
  bool operator==(const Letter&) const = default;
};

// Element of the right-angled Artin group, stored as its canonical reduced word.
class RaagElement {
 public:
  explicit RaagElement(GraphPtr g);  // identity
  RaagElement(GraphPtr g, std::span<const Letter> letters);

  const std::vector<Letter>& word() const noexcept { return word_; }
  std::size_t length() const noexcept { return word_.size(); }
  bool is_identity() const noexcept { return word_.empty(); }
  const GraphPtr& graph() const noexcept { return graph_; }

  RaagElement inverse() const;
  friend RaagElement operator*(const RaagElement& x, const RaagElement& y);

  // Compact byte key; equal keys iff equal elements (same graph assumed).
  std::string key() const;
  std::string to_string() const;

  bool operator==(const RaagElement& o) const { return word_ == o.word_; }
  // Shortlex on letter keys.
  bool operator<(const RaagElement& o) const;

 private:
  RaagElement(GraphPtr g, std::vector<Letter> canonical, int);
  GraphPtr graph_;
  std::vector<Letter> word_;
};

// Canonical reduced word of `letters` (free cancellation modulo commutation,
// then the lexicographically least arrangement).
std::vector<Letter> reduce_word(const SimpleGraph& g, std::span<const Letter> letters);

RaagElement normal_form(GraphPtr g, std::span<const Letter> letters);
RaagElement multiply(const RaagElement& x, const RaagElement& y);
RaagElement inverse(const RaagElement& x);
bool is_identity(const RaagElement& x);

// Whitespace-separated vertex names, each optionally followed by an apostrophe.
std::vector<Letter> parse_word(const SimpleGraph& g, std::string_view text);
std::string word_to_string(const SimpleGraph& g, std::span<const Letter> letters);

// [x, y] = x y x^-1 y^-1
std::vector<Letter> commutator(std::span<const Letter> x, std::span<const Letter> y);

class GroupAlgebraElement {
 public:
  explicit GroupAlgebraElement(GraphPtr g) : graph_(std::move(g)) {}
  static GroupAlgebraElement basis(const RaagElement& x, cd coeff = 1.0);

  const GraphPtr& graph() const noexcept { return graph_; }
  const std::map<RaagElement, cd>& terms() const noexcept { return terms_; }
  cd coefficient(const RaagElement& x) const;
  void add(const RaagElement& x, cd coeff);  // drops exact zeros

  GroupAlgebraElement adjoint() const;
  double l1_norm() const;
  std::size_t max_length() const;
  bool is_self_adjoint() const { return adjoint().terms_ == terms_; }

  friend GroupAlgebraElement operator+(const GroupAlgebraElement& a, const GroupAlgebraElement& b);
  friend GroupAlgebraElement operator-(const GroupAlgebraElement& a, const GroupAlgebraElement& b);
  friend GroupAlgebraElement operator*(const GroupAlgebraElement& a, const GroupAlgebraElement& b);
  friend GroupAlgebraElement operator*(cd c, const GroupAlgebraElement& a);

  std::string to_string() const;

 private:
  GraphPtr graph_;
  std::map<RaagElement, cd> terms_;
};

// Sum of terms `coeff * [word]`; coeff is a real, `bi`, `a+bi` or a
// parenthesised complex literal and may be omitted; `[]` is the identity.
GroupAlgebraElement parse_group_algebra(GraphPtr g, std::string_view text);

inline constexpr std::size_t kDefaultSupportGuard = 5'000'000;

// All elements of word length <= radius, by length then lexicographic order.
std::vector<RaagElement> ball(GraphPtr g, unsigned radius, std::size_t guard = kDefaultSupportGuard);
std::vector<std::size_t> sphere_sizes(GraphPtr g, unsigned radius, std::size_t guard = kDefaultSupportGuard);

cd group_trace(const GroupAlgebraElement& z);

// Norm of the compression of the left regular representation of z to the ball.
NormEstimate regular_norm_lower(const GroupAlgebraElement& z, unsigned radius,
                                std::size_t guard = kDefaultSupportGuard, const NormOptions& opts = {});

// tau((z*z)^k)^(1/2k); trace of the power is formed as a pairing of two half powers.
double moment_norm_lower(const GroupAlgebraElement& z, unsigned k, std::size_t guard = kDefaultSupportGuard);

}  // namespace raagsc
