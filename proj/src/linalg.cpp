#include "raagsc/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>

namespace raagsc {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001B3ULL;
  }
  return h;
}

// Number of eigenvalues of the tridiagonal strictly below x.
int sturm_count(const std::vector<double>& alpha, const std::vector<double>& beta, double x) {
  int count = 0;
  double d = 1.0;
  for (std::size_t i = 0; i < alpha.size(); ++i) {
    const double b2 = i == 0 ? 0.0 : beta[i - 1] * beta[i - 1];
    d = alpha[i] - x - (i == 0 ? 0.0 : b2 / d);
    if (d == 0.0) d = -1e-300;
    if (d < 0) ++count;
  }
  return count;
}

std::pair<double, double> gershgorin(const std::vector<double>& alpha, const std::vector<double>& beta) {
  double lo = INFINITY, hi = -INFINITY;
  for (std::size_t i = 0; i < alpha.size(); ++i) {
    double r = (i > 0 ? std::abs(beta[i - 1]) : 0.0) + (i < beta.size() ? std::abs(beta[i]) : 0.0);
    lo = std::min(lo, alpha[i] - r);
    hi = std::max(hi, alpha[i] + r);
  }
  return {lo, hi};
}

double bisect_to(const std::vector<double>& alpha, const std::vector<double>& beta, int target, double lo,
                 double hi) {
  // Smallest x with sturm_count(x) >= target, i.e. the target-th eigenvalue (1-based).
  const bool zero = std::all_of(alpha.begin(), alpha.end(), [](double a) { return a == 0.0; }) &&
                    std::all_of(beta.begin(), beta.end(), [](double b) { return b == 0.0; });
  if (zero) return 0.0;
  const double width = 2.0 * std::numeric_limits<double>::epsilon() * std::max(std::abs(lo), std::abs(hi));
  for (int i = 0; i < 200 && hi - lo > width; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (sturm_count(alpha, beta, mid) >= target) hi = mid;
    else lo = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

std::string format_complex(cd c) {
  auto num = [](double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return std::string(buf);
  };
  if (c.imag() == 0.0) return num(c.real());
  if (c.real() == 0.0) return num(c.imag()) + "i";
  return "(" + num(c.real()) + (c.imag() < 0 ? "" : "+") + num(c.imag()) + "i)";
}

CounterRng::CounterRng(std::uint64_t seed, std::string_view stream)
    : key_(splitmix64(seed ^ splitmix64(fnv1a(stream)))) {}

std::uint64_t CounterRng::bits(std::uint64_t index) const { return splitmix64(key_ ^ splitmix64(index)); }

double CounterRng::uniform(std::uint64_t index) const {
  return (static_cast<double>(bits(index) >> 11) + 0.5) * 0x1.0p-53;
}

double CounterRng::normal(std::uint64_t index) const {
  const double u1 = uniform(2 * index), u2 = uniform(2 * index + 1);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

double tridiagonal_max_eigenvalue(const std::vector<double>& alpha, const std::vector<double>& beta) {
  auto [lo, hi] = gershgorin(alpha, beta);
  const double pad = 1e-12 * std::max(1.0, std::max(std::abs(lo), std::abs(hi)));
  return bisect_to(alpha, beta, static_cast<int>(alpha.size()), lo - pad, hi + pad);
}

double tridiagonal_min_eigenvalue(const std::vector<double>& alpha, const std::vector<double>& beta) {
  auto [lo, hi] = gershgorin(alpha, beta);
  const double pad = 1e-12 * std::max(1.0, std::max(std::abs(lo), std::abs(hi)));
  return bisect_to(alpha, beta, 1, lo - pad, hi + pad);
}

LinearMap as_linear_map(const SparseOp& op, bool hermitian) {
  LinearMap m;
  m.dim = op.rows();
  m.hermitian = hermitian;
  m.apply = [&op](const CVector& in, CVector& out) { out.noalias() = op * in; };
  m.apply_adjoint = [&op](const CVector& in, CVector& out) { out.noalias() = op.adjoint() * in; };
  return m;
}

LinearMap as_linear_map(const CMatrix& op, bool hermitian) {
  LinearMap m;
  m.dim = op.rows();
  m.hermitian = hermitian;
  m.apply = [&op](const CVector& in, CVector& out) { out.noalias() = op * in; };
  m.apply_adjoint = [&op](const CVector& in, CVector& out) { out.noalias() = op.adjoint() * in; };
  return m;
}

CVector deterministic_start(Eigen::Index dim, std::optional<Eigen::Index> seed_index) {
  CounterRng rng(0x5EED, "lanczos-start");
  CVector v(dim);
  for (Eigen::Index i = 0; i < dim; ++i)
    v[i] = cd(rng.uniform(2 * i) - 0.5, rng.uniform(2 * i + 1) - 0.5);
  v /= v.norm();
  if (seed_index && *seed_index >= 0 && *seed_index < dim) {
    v[*seed_index] += 1.0;
    v /= v.norm();
  }
  return v;
}

NormEstimate top_singular_value(const LinearMap& a, const NormOptions& opts) {
  NormEstimate est;
  const Eigen::Index n = a.dim;
  if (n == 0) {
    est.converged = true;
    return est;
  }
  const bool herm = a.hermitian;
  CVector tmp(n);
  auto op = [&](const CVector& x, CVector& y) {
    if (herm) {
      a.apply(x, y);
    } else {
      a.apply(x, tmp);
      a.apply_adjoint(tmp, y);
    }
  };

  CVector q = deterministic_start(n, opts.seed_index);
  CVector q_prev = CVector::Zero(n);
  CVector w(n);
  std::vector<double> alpha, beta;
  double theta = 0.0, theta_prev = 0.0, beta_prev = 0.0;
  int stable = 0;

  for (int it = 1; it <= opts.max_iter; ++it) {
    op(q, w);
    const double a_k = q.dot(w).real();
    w -= a_k * q;
    if (it > 1) w -= beta_prev * q_prev;
    const double b_k = w.norm();
    alpha.push_back(a_k);

    if (it <= 500 || it % 10 == 0 || b_k == 0.0) {
      const double top = tridiagonal_max_eigenvalue(alpha, beta);
      theta = herm ? std::max(std::abs(top), std::abs(tridiagonal_min_eigenvalue(alpha, beta))) : top;
      if (it > 1 && std::abs(theta - theta_prev) <= opts.rel_tol * std::abs(theta)) ++stable;
      else stable = 0;
      theta_prev = theta;
    }
    est.iterations = it;
    const double scale = std::max(std::abs(theta), std::numeric_limits<double>::min());
    if (b_k <= 1e-13 * scale || stable >= opts.stable_steps) {
      est.converged = true;
      break;
    }
    beta.push_back(b_k);
    beta_prev = b_k;
    std::swap(q_prev, q);
    q = w / b_k;
  }
  est.value = herm ? theta : std::sqrt(std::max(theta, 0.0));
  return est;
}

}  // namespace raagsc
