#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace raagsc {

using cd = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;
using SparseOp = Eigen::SparseMatrix<cd, Eigen::RowMajor>;

// A linear operator known only through its action. `apply_adjoint` may be
// empty when `hermitian` is set.
struct LinearMap {
  Eigen::Index dim = 0;
  std::function<void(const CVector& in, CVector& out)> apply;
  std::function<void(const CVector& in, CVector& out)> apply_adjoint;
  bool hermitian = false;
};

LinearMap as_linear_map(const SparseOp& op, bool hermitian = false);
LinearMap as_linear_map(const CMatrix& op, bool hermitian = false);

struct NormOptions {
  double rel_tol = 1e-10;
  int max_iter = 10000;
  // Basis vector the start vector is centred on (Omega, delta_e, ...).
  std::optional<Eigen::Index> seed_index = 0;
  // Iterations whose Ritz value must stay within rel_tol before stopping.
  int stable_steps = 3;
};

struct NormEstimate {
  double value = 0.0;
  int iterations = 0;
  bool converged = false;
};

// Largest singular value by Lanczos. For hermitian maps Lanczos runs on the
// map itself (value = largest |Ritz value|), otherwise on A*A. Every reported
// value is a Ritz value, hence a lower bound on the true norm.
NormEstimate top_singular_value(const LinearMap& a, const NormOptions& opts = {});

// Deterministic unit start vector: half its weight on the seed basis vector,
// the rest spread pseudo-randomly over all coordinates.
CVector deterministic_start(Eigen::Index dim, std::optional<Eigen::Index> seed_index);

// Extreme eigenvalues of the symmetric tridiagonal (alpha, beta) by Sturm bisection.
double tridiagonal_max_eigenvalue(const std::vector<double>& alpha, const std::vector<double>& beta);
double tridiagonal_min_eigenvalue(const std::vector<double>& alpha, const std::vector<double>& beta);

// Round-trippable text form: `1.5`, `2i`, `(1.5-2i)`.
std::string format_complex(cd c);

// Counter-based generator: every draw is a pure function of (seed, stream, index).
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::string_view stream);
  std::uint64_t bits(std::uint64_t index) const;
  double uniform(std::uint64_t index) const;  // in (0, 1)
  double normal(std::uint64_t index) const;   // standard normal

 private:
  std::uint64_t key_;
};

}  // namespace raagsc
