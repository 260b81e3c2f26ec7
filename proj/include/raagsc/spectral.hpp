#pragma once

#include <complex>

namespace raagsc {

// Smooth bump on [T, T+1], equal to 1 on [T+eps, T+1-eps]; ramps use the
// exp(-1/x) smoothstep.
struct BumpSpec {
  double T = 2.0;
  double eps = 0.02;
};

void validate(const BumpSpec& s);

// (2/u) sinh(ur/2) / sinh(r), extended by continuity to r = 0.
double spherical_coeff(double u, double r);
// pi^{-1/2} (|z|^2 + 1)^{-(2+u)/2}.
double spherical_vector(double u, std::complex<double> z);

double bump_value(const BumpSpec& s, double r);
// (int f(r)^p sinh^2(r) dr)^{1/p} by adaptive Gauss-Kronrod.
double lp_norm_bound(const BumpSpec& s, double p);

struct Pairing {
  double value;  // (2/u) int f(r) sinh(r) sinh(ur/2) dr
  double bound;  // u^{-2} e^{T(1+u/2)}
};
Pairing pairing_lower(double u, const BumpSpec& s);

struct Threshold {
  double t_star;       // smallest grid T with u^{-2} e^{T(1+eta/2)} > c e^{2T/p}
  double closed_form;  // ln(c eta^2) / (1 + eta/2 - 2/p)
  double lhs_exponent, rhs_exponent;
};
Threshold contradiction_threshold(double eta, double p, double c, double grid_step = 1e-3);

// Smallest T in grid used by the search (search starts here).
inline constexpr double kThresholdGridStart = 1.0;

}  // namespace raagsc
