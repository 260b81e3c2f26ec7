#include "raagsc/spectral.hpp"

#include <cmath>
#include <numbers>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "raagsc/error.hpp"

namespace raagsc {

namespace {

constexpr double kQuadTol = 1e-10;

// 0 for x <= 0, 1 for x >= 1, C-infinity in between.
double smoothstep(double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double a = std::exp(-1.0 / x), b = std::exp(-1.0 / (1.0 - x));
  return a / (a + b);
}

template <class F>
double integrate(F f, double a, double b) {
  double err = 0.0;
  const double v = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, a, b, 15, kQuadTol, &err);
  return v;
}

// Integrate over the support split at the ramp ends so each piece is smooth.
template <class F>
double integrate_bump(const BumpSpec& s, F f) {
  return integrate(f, s.T, s.T + s.eps) + integrate(f, s.T + s.eps, s.T + 1 - s.eps) +
         integrate(f, s.T + 1 - s.eps, s.T + 1);
}

}  // namespace

void validate(const BumpSpec& s) {
  if (!(s.T > 1.0)) throw InvalidArgument("bump needs T > 1");
  if (!(s.eps > 0.0 && s.eps < 0.25)) throw InvalidArgument("bump needs 0 < eps < 1/4");
}

double spherical_coeff(double u, double r) {
  if (!(u > 0.0 && u <= 2.0)) throw InvalidArgument("spherical_coeff needs 0 < u <= 2");
  if (!(r >= 0.0)) throw InvalidArgument("spherical_coeff needs r >= 0");
  if (r < 1e-4) {
    // (2/u) sinh(ur/2)/sinh(r) = 1 + r^2 (u^2 - 4)/24 + O(r^4)
    return 1.0 + r * r * (u * u - 4.0) / 24.0;
  }
  if (r > 20.0) {
    // Ratio of exponentials, avoiding overflow of sinh.
    const double num = -std::expm1(-u * r), den = -std::expm1(-2.0 * r);
    return (2.0 / u) * std::exp((u / 2.0 - 1.0) * r) * num / den;
  }
  return (2.0 / u) * std::sinh(u * r / 2.0) / std::sinh(r);
}

double spherical_vector(double u, std::complex<double> z) {
  if (!(u > 0.0 && u < 2.0)) throw InvalidArgument("spherical_vector needs 0 < u < 2");
  return std::pow(std::norm(z) + 1.0, -(2.0 + u) / 2.0) / std::sqrt(std::numbers::pi);
}

double bump_value(const BumpSpec& s, double r) {
  validate(s);
  if (r <= s.T || r >= s.T + 1.0) return 0.0;
  return smoothstep((r - s.T) / s.eps) * smoothstep((s.T + 1.0 - r) / s.eps);
}

double lp_norm_bound(const BumpSpec& s, double p) {
  validate(s);
  if (!(p >= 1.0 && p < 2.0)) throw InvalidArgument("lp_norm_bound needs 1 <= p < 2");
  const double v = integrate_bump(s, [&](double r) {
    const double sh = std::sinh(r);
    return std::pow(bump_value(s, r), p) * sh * sh;
  });
  return std::pow(v, 1.0 / p);
}

Pairing pairing_lower(double u, const BumpSpec& s) {
  validate(s);
  if (!(u > 0.0 && u < 2.0)) throw InvalidArgument("pairing_lower needs 0 < u < 2");
  const double v = integrate_bump(s, [&](double r) { return bump_value(s, r) * std::sinh(r) * std::sinh(u * r / 2.0); });
  return {(2.0 / u) * v, std::exp(s.T * (1.0 + u / 2.0)) / (u * u)};
}

Threshold contradiction_threshold(double eta, double p, double c, double grid_step) {
  if (!(eta > 0.0 && eta < 2.0)) throw InvalidArgument("contradiction_threshold needs 0 < eta < 2");
  if (!(c > 0.0)) throw InvalidArgument("contradiction_threshold needs c > 0");
  if (!(grid_step > 0.0)) throw InvalidArgument("grid step must be positive");
  const double lhs_exp = 1.0 + eta / 2.0, rhs_exp = 2.0 / p;
  if (!(p > 2.0 / lhs_exp && p < 2.0))
    throw InvalidArgument("contradiction_threshold needs 2/(1+eta/2) < p < 2");
  // Compare logarithms: T lhs_exp - 2 ln eta > ln c + T rhs_exp. The gap is
  // increasing in T, so the first grid point is found by bracketing and bisection.
  auto holds = [&](double t) { return t * lhs_exp - 2.0 * std::log(eta) > std::log(c) + t * rhs_exp; };
  auto at = [&](long long i) { return kThresholdGridStart + static_cast<double>(i) * grid_step; };
  long long lo = 0, hi = 1;
  if (holds(at(0))) {
    hi = 0;
  } else {
    while (!holds(at(hi))) {
      lo = hi;
      hi *= 2;
      if (hi > (1LL << 50)) throw InvalidArgument("threshold search did not terminate");
    }
    while (hi - lo > 1) {
      const long long mid = lo + (hi - lo) / 2;
      (holds(at(mid)) ? hi : lo) = mid;
    }
  }
  return {at(hi), std::log(c * eta * eta) / (lhs_exp - rhs_exp), lhs_exp, rhs_exp};
}

}  // namespace raagsc
