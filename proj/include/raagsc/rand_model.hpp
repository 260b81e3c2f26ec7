#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string_view>
#include <string>
#include <utility>
#include <vector>

#include "raagsc/graph.hpp"
#include "raagsc/linalg.hpp"

namespace raagsc {

// A 64-bit seed plus a stream label; identical pairs give identical samples.
struct RngSeed {
  std::uint64_t seed = 0;
  std::string label;
};

// Hermitian n x n: real N(0, sigma2) diagonal, off-diagonal real and imaginary parts N(0, sigma2/2).
CMatrix sample_sgrm(std::size_t n, double sigma2, const RngSeed& seed);
// i.i.d. complex entries with E|Y_ij|^2 = sigma2.
CMatrix sample_grm(std::size_t n, double sigma2, const RngSeed& seed);

// X1 = (Y + Y*)/sqrt2, X2 = -i (Y - Y*)/sqrt2.
std::pair<CMatrix, CMatrix> grm_split(const CMatrix& y);
// (X1 + i X2)/sqrt2.
CMatrix sgrm_combine(const CMatrix& x1, const CMatrix& x2);

// Channels: one C^m per non-edge (in ChannelIndex order), then one C^K(v) per
// vertex. Mixed radix with the last channel varying fastest.
class ChannelLayout {
 public:
  struct Channel {
    std::size_t dim;
    bool aux;
    VertexId a, b;  // non-edge endpoints; for aux channels a == b == the vertex
  };

  ChannelLayout(const SimpleGraph& g, std::size_t m, const std::vector<std::size_t>& k,
                std::size_t guard = std::size_t{1} << 24);
  // Layout over an explicit channel list (used for restricted checks).
  ChannelLayout(std::vector<Channel> channels, std::size_t guard = std::size_t{1} << 24);

  std::size_t dim() const noexcept { return total_; }
  std::size_t channel_count() const noexcept { return channels_.size(); }
  const Channel& channel(std::size_t c) const { return channels_.at(c); }
  std::size_t stride(std::size_t c) const { return strides_.at(c); }
  std::size_t m() const noexcept { return m_; }

  std::size_t flatten(const std::vector<std::size_t>& multi) const;
  std::vector<std::size_t> unflatten(std::size_t flat) const;

  // F(v) channels in order, then aux_v.
  std::vector<std::size_t> acting_channels(VertexId v) const;
  std::optional<std::size_t> aux_channel(VertexId v) const;

 private:
  void finish(std::size_t guard);
  std::vector<Channel> channels_;
  std::vector<std::size_t> strides_;
  std::size_t total_ = 1;
  std::size_t m_ = 0;
};

using LayoutPtr = std::shared_ptr<const ChannelLayout>;

// block (on the acting channels, first listed most significant) tensored with
// the identity elsewhere, applied by gather / GEMM / scatter over fixed chunks.
class MatrixFreeOperator {
 public:
  MatrixFreeOperator(LayoutPtr layout, std::vector<std::size_t> acting, CMatrix block);

  const LayoutPtr& layout() const noexcept { return layout_; }
  const std::vector<std::size_t>& acting() const noexcept { return acting_; }
  const CMatrix& block() const noexcept { return block_; }
  std::size_t dim() const { return layout_->dim(); }

  void apply(const CVector& in, CVector& out) const;
  void apply_adjoint(const CVector& in, CVector& out) const;
  // Same block on another layout whose channels include the acting ones (matched by identity).
  MatrixFreeOperator on_layout(LayoutPtr other) const;

 private:
  void apply_block(const CMatrix& b, const CVector& in, CVector& out) const;
  LayoutPtr layout_;
  std::vector<std::size_t> acting_;
  CMatrix block_;
  std::vector<std::size_t> inner_;  // offsets of block indices
  std::vector<std::size_t> outer_;  // offsets of the complementary indices
};

using MfOpPtr = std::shared_ptr<const MatrixFreeOperator>;

// Linear combination of products of MatrixFreeOperators and their adjoints.
class MfExpression {
 public:
  struct Factor {
    std::size_t op;
    bool adjoint;
  };
  struct Term {
    cd coeff;
    std::vector<Factor> factors;  // left to right
  };

  static MfExpression identity(LayoutPtr layout);
  static MfExpression zero(LayoutPtr layout);
  static MfExpression of(MfOpPtr op);

  std::size_t dim() const { return layout_->dim(); }
  const LayoutPtr& layout() const noexcept { return layout_; }
  const std::vector<Term>& terms() const noexcept { return terms_; }

  MfExpression adjoint() const;
  void apply(const CVector& in, CVector& out) const;
  LinearMap as_linear_map(bool hermitian = false) const;

  friend MfExpression operator+(const MfExpression& a, const MfExpression& b);
  friend MfExpression operator-(const MfExpression& a, const MfExpression& b);
  friend MfExpression operator*(const MfExpression& a, const MfExpression& b);
  friend MfExpression operator*(cd c, const MfExpression& a);

 private:
  explicit MfExpression(LayoutPtr layout) : layout_(std::move(layout)) {}
  // Merges b's operator list into ours and returns b's terms re-indexed.
  std::vector<Term> absorb(const MfExpression& b);
  LayoutPtr layout_;
  std::vector<MfOpPtr> ops_;
  std::vector<Term> terms_;
};

// Stream label of the per-vertex sample used by assemble_Xv / block_decompose.
std::string vertex_stream(const SimpleGraph& g, VertexId v);

// Blocks of one vertex sample: Q[I*M+J] = (X[.] + i Y[.])/sqrt2 for M = m^|F(v)|.
struct BlockForm {
  std::size_t M = 0, K = 0;
  std::vector<CMatrix> Q, X, Y;
};

BlockForm block_decompose(const SimpleGraph& g, VertexId v, std::size_t m, std::size_t k, std::uint64_t seed);
// (R + R*)/sqrt2 with R = M^{-1/2} sum_IJ e_IJ (x) Q_IJ.
CMatrix reassemble(const BlockForm& b);

// The small Hermitian factor of X_v on channels F(v) and aux_v.
CMatrix sample_Xv_block(const SimpleGraph& g, VertexId v, std::size_t m, std::size_t k, std::uint64_t seed);
MatrixFreeOperator assemble_Xv(const SimpleGraph& g, const LayoutPtr& layout, VertexId v, std::uint64_t seed);
MatrixFreeOperator assemble_Xv(const SimpleGraph& g, VertexId v, std::size_t m, const std::vector<std::size_t>& k,
                               std::uint64_t seed, std::size_t guard = std::size_t{1} << 24);

// "all=8" or "a=8,b=16"; every vertex must be covered.
std::vector<std::size_t> parse_k_spec(const SimpleGraph& g, std::string_view text);

// K(v_1) = i, K(v_k) = round(K(v_{k-1})^delta); delta must exceed 4.
std::vector<std::uint64_t> dimension_schedule(std::uint64_t i, double delta, const SimpleGraph& g);

struct GrowthCheck {
  double lhs, rhs;  // delta^(k-1) and 3 (1 + delta + ... + delta^(k-2))
  bool holds;
};
GrowthCheck growth_inequality(double delta, unsigned k);

NormEstimate operator_norm_mf(const MfExpression& e, bool hermitian = false, const NormOptions& opts = {1e-8});

}  // namespace raagsc
