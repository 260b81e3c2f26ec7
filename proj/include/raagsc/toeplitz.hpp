#pragma once

#include <memory>
#include <vector>

#include "raagsc/graph.hpp"
#include "raagsc/linalg.hpp"
#include "raagsc/ncpoly.hpp"

namespace raagsc {

// Gaussian-integer matrix as separate real and imaginary parts.
struct GaussianIntMatrix {
  Eigen::Matrix<long long, Eigen::Dynamic, Eigen::Dynamic> re, im;
  bool operator==(const GaussianIntMatrix& o) const { return re == o.re && im == o.im; }
};

// r+ = e_IJ + e_JI, r- = i(e_IJ - e_JI) on C^M.
CMatrix runit(std::size_t M, std::size_t I, std::size_t J, bool plus);
GaussianIntMatrix runit_int(std::size_t M, std::size_t I, std::size_t J, bool plus);
// sum_{I,J} (r+ r+ + r- r-), in exact integer arithmetic.
GaussianIntMatrix runit_completeness(std::size_t M);

// (C^m)^{(x)F} tensored with a truncated Boltzmann Fock space for each listed
// vertex; vertices not listed carry the identity and are left out.
class LimitModel {
 public:
  LimitModel(const SimpleGraph& g, std::size_t m, unsigned depth, std::vector<VertexId> factors,
             std::size_t guard = std::size_t{1} << 24);

  std::size_t dim() const noexcept { return dim_; }
  std::size_t m() const noexcept { return m_; }
  unsigned depth() const noexcept { return depth_; }
  const std::vector<VertexId>& factors() const noexcept { return factors_; }
  // M = m^|F(v)| and G(v) = 2 M^2.
  std::size_t channel_block(VertexId v) const;
  std::size_t generators(VertexId v) const { return 2 * channel_block(v) * channel_block(v); }
  std::size_t fock_dim(VertexId v) const;

  // Fock degree in the factor of v of the basis vector at `flat`.
  unsigned degree_in(VertexId v, std::size_t flat) const;

  // L_v of the limit model (built on first use).
  const SparseOp& L(VertexId v) const;

  // e_I (x) Omega (x) ... (x) Omega with I the all-zero channel index.
  CVector vacuum() const;

 private:
  std::size_t factor_pos(VertexId v) const;
  SparseOp build_L(VertexId v) const;

  SimpleGraph graph_;
  std::size_t m_;
  unsigned depth_;
  std::vector<VertexId> factors_;
  std::vector<std::pair<VertexId, VertexId>> non_edges_;
  std::vector<std::size_t> dims_, strides_;  // channels then factors, last fastest
  std::vector<std::vector<std::size_t>> level_offsets_;
  std::size_t dim_ = 1;
  mutable std::vector<std::unique_ptr<SparseOp>> cache_;
};

// Matrix-free p(L_v, L_v*) on the model.
LinearMap limit_poly_map(const LimitModel& model, const NcPolynomial& p);

NormEstimate key_norm(const SimpleGraph& g, VertexId v, VertexId w, std::size_t m, unsigned depth = 2,
                      std::size_t guard = std::size_t{1} << 24);

struct T3Result {
  CVector xi;
  double residual = 0.0;  // ||prod (1 - L L*) xi - xi||
  double norm = 0.0;
  bool fixed = false;
};
T3Result t3_witness(const SimpleGraph& g, const std::vector<VertexId>& vertices, std::size_t m, unsigned depth);

NormEstimate limit_poly_norm(const SimpleGraph& g, const NcPolynomial& q, std::size_t m, unsigned depth,
                             std::size_t guard = std::size_t{1} << 24);

}  // namespace raagsc
