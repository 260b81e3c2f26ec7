#include <gtest/gtest.h>

#include <cmath>
#include <functional>

#include "raagsc/error.hpp"
#include "raagsc/spectral.hpp"

using namespace raagsc;

namespace {

// sinh by its Taylor series, independent of the math library.
double series_sinh(double x) {
  double term = x, sum = x;
  for (int k = 1; k < 80; ++k) {
    term *= x * x / ((2.0 * k) * (2.0 * k + 1));
    sum += term;
  }
  return sum;
}

double simpson(const std::function<double(double)>& f, double a, double b, int n) {
  const double h = (b - a) / n;
  double s = f(a) + f(b);
  for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
  return s * h / 3.0;
}

}  // namespace

TEST(Spectral, SphericalCoefficient) {
  EXPECT_NEAR(spherical_coeff(1.0, 2.0), 2.0 * series_sinh(1.0) / series_sinh(2.0), 1e-14);
  EXPECT_NEAR(spherical_coeff(1.0, 2.0), 0.64805, 1e-5);
  EXPECT_NEAR(spherical_coeff(0.7, 0.0), 1.0, 1e-15);
  EXPECT_NEAR(spherical_coeff(0.7, 1e-9), 1.0, 1e-12);
  for (double r : {0.0, 0.5, 3.0, 40.0}) EXPECT_NEAR(spherical_coeff(2.0, r), 1.0, 1e-14);
  for (double u : {0.25, 1.0, 1.9}) {
    double prev = 1.0 + 1e-15;
    for (int i = 1; i <= 400; ++i) {
      const double v = spherical_coeff(u, i * 0.05);
      ASSERT_GT(v, 0.0);
      ASSERT_LT(v, prev);
      prev = v;
    }
  }
  EXPECT_THROW(spherical_coeff(0.0, 1.0), InvalidArgument);
  EXPECT_THROW(spherical_coeff(2.5, 1.0), InvalidArgument);
  EXPECT_THROW(spherical_coeff(1.0, -1.0), InvalidArgument);
}

TEST(Spectral, SphericalVector) {
  EXPECT_NEAR(spherical_vector(1.0, 0.0), 1.0 / std::sqrt(M_PI), 1e-15);
  EXPECT_GT(spherical_vector(1.0, 0.5), spherical_vector(1.0, {0.5, 0.5}));
  EXPECT_GT(spherical_vector(0.5, 2.0), spherical_vector(1.5, 2.0));
  EXPECT_THROW(spherical_vector(2.0, 1.0), InvalidArgument);
}

TEST(Spectral, Bump) {
  const BumpSpec s{3.0, 0.02};
  EXPECT_EQ(bump_value(s, 3.5), 1.0);
  EXPECT_EQ(bump_value(s, 2.9), 0.0);
  EXPECT_EQ(bump_value(s, 4.2), 0.0);
  EXPECT_EQ(bump_value(s, 3.0), 0.0);
  EXPECT_EQ(bump_value(s, 3.02), 1.0);
  for (int i = 0; i <= 1000; ++i) {
    const double v = bump_value(s, 3.0 + i * 1e-3);
    ASSERT_GE(v, 0.0);
    ASSERT_LE(v, 1.0);
  }
  EXPECT_THROW(validate(BumpSpec{1.0, 0.02}), InvalidArgument);
  EXPECT_THROW(validate(BumpSpec{3.0, 0.3}), InvalidArgument);
}

TEST(Spectral, LpNormMatchesQuadrature) {
  const BumpSpec s{3.0, 0.02};
  for (double p : {1.0, 1.5}) {
    const double ref = std::pow(
        simpson([&](double r) { return std::pow(bump_value(s, r), p) * std::sinh(r) * std::sinh(r); }, 3.0, 4.0, 200000),
        1.0 / p);
    EXPECT_NEAR(lp_norm_bound(s, p), ref, 1e-8 * ref);
  }
  const double plain = simpson([](double r) { return std::sinh(r) * std::sinh(r); }, 3.0, 4.0, 2000);
  // Antiderivative of sinh^2 is sinh(2r)/4 - r/2.
  EXPECT_NEAR(plain, (std::sinh(8.0) - std::sinh(6.0)) / 4.0 - 0.5, 1e-8);
  EXPECT_LE(lp_norm_bound(s, 1.0), plain);
  EXPECT_LE(lp_norm_bound(s, 1.0), 2.0 * std::exp(6.0));
  EXPECT_THROW(lp_norm_bound(s, 2.0), InvalidArgument);
  EXPECT_THROW(lp_norm_bound(s, 0.5), InvalidArgument);
}

TEST(Spectral, Pairing) {
  const BumpSpec s{3.0, 0.02};
  const Pairing pr = pairing_lower(1.0, s);
  const double ref =
      2.0 * simpson([&](double r) { return bump_value(s, r) * std::sinh(r) * std::sinh(r / 2); }, 3.0, 4.0, 200000);
  EXPECT_NEAR(pr.value, ref, 1e-8 * ref);
  EXPECT_NEAR(pr.bound, std::exp(4.5), 1e-10);
  EXPECT_GE(pr.value, pr.bound);
  double prev = 0.0;
  for (double T : {2.0, 3.0, 4.0, 5.0}) {
    const double v = pairing_lower(0.5, {T, 0.02}).value;
    EXPECT_GT(v, prev);
    prev = v;
  }
  // As u approaches 2 the pairing tends to the Haar-weighted integral of the bump.
  EXPECT_NEAR(pairing_lower(1.99999, s).value / lp_norm_bound(s, 1.0), 1.0, 1e-4);
  EXPECT_THROW(pairing_lower(2.0, s), InvalidArgument);
}

TEST(Spectral, ContradictionThreshold) {
  const Threshold t = contradiction_threshold(1.0, 1.5, 10.0);
  EXPECT_NEAR(t.closed_form, std::log(10.0) / (1.5 - 4.0 / 3.0), 1e-12);
  EXPECT_NEAR(t.t_star, 13.8, 0.2);
  EXPECT_LE(std::abs(t.t_star - t.closed_form), 1e-3 + 1e-12);
  EXPECT_GT(t.lhs_exponent, t.rhs_exponent);
  // Just before the threshold the inequality fails, at the threshold it holds.
  auto holds = [](double T) { return std::exp(1.5 * T) > 10.0 * std::exp(4.0 * T / 3.0); };
  EXPECT_TRUE(holds(t.t_star));
  EXPECT_FALSE(holds(t.t_star - 1e-3));
  EXPECT_THROW(contradiction_threshold(1.0, 1.3, 10.0), InvalidArgument);
  EXPECT_THROW(contradiction_threshold(1.0, 1.5, -1.0), InvalidArgument);
}
