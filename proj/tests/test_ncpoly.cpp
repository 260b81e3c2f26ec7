#include <gtest/gtest.h>

#include <random>

#include "raagsc/ncpoly.hpp"

using namespace raagsc;

namespace {

const SimpleGraph kG = make_edgeless({"a", "b", "c", "d"});

NcPolynomial P(const char* text) { return parse_poly(kG, text); }

CMatrix random_matrix(Eigen::Index n, std::mt19937_64& rng, double scale = 1.0) {
  std::normal_distribution<double> nd;
  CMatrix a(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) a(i, j) = cd(nd(rng), nd(rng)) * scale;
  return a;
}

double norm2(const CMatrix& a) { return Eigen::JacobiSVD<CMatrix>(a).singularValues()[0]; }

std::map<Symbol, CMatrix> context(const std::vector<CMatrix>& ops) {
  std::map<Symbol, CMatrix> ctx;
  for (VertexId v = 0; v < ops.size(); ++v) {
    ctx[{v, false}] = ops[v];
    ctx[{v, true}] = ops[v].adjoint();
  }
  return ctx;
}

}  // namespace

TEST(NcPoly, ParseExamples) {
  const NcPolynomial p = P("X_a*X_b + 2*X_c");
  ASSERT_EQ(p.terms().size(), 2u);
  EXPECT_EQ(p.degree(), 2u);
  EXPECT_EQ(p.coefficient({{2, false}}), cd(2.0));
  EXPECT_EQ(P("X_a* + X_b").terms().size(), 2u);
  EXPECT_EQ(P("X_a*").coefficient({{0, true}}), cd(1.0));
  EXPECT_EQ(P("X_{a}**X_b"), P("X_a* * X_b"));
  EXPECT_EQ(P("(X_a + X_b)*(X_a - X_b)"), P("X_a*X_a - X_a*X_b + X_b*X_a - X_b*X_b"));
  EXPECT_EQ(P("2i*X_a - 1.5"), NcPolynomial::constant(-1.5) + cd(0, 2) * NcPolynomial::variable({0, false}));
  EXPECT_EQ(P("(X_a*X_b)*"), P("X_b* * X_a*"));
}

TEST(NcPoly, ParseErrorsCarryPosition) {
  try {
    P("X_a + + ");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_GT(e.position(), 0u);
  }
  EXPECT_THROW(P("X_a X_b"), ParseError);
  EXPECT_THROW(P("X_q"), ParseError);
  EXPECT_THROW(P("(X_a"), ParseError);
}

TEST(NcPoly, Adjoint) {
  EXPECT_EQ(adjoint(P("2i*X_a*X_b")), P("-2i*X_b* * X_a*"));
  std::mt19937_64 rng(1);
  const NcPolynomial q = P("(1+2i)*X_a*X_b* - 3*X_c*X_c + 0.5i");
  EXPECT_EQ(adjoint(adjoint(q)), q);
  EXPECT_DOUBLE_EQ(l1_norm(adjoint(q)), l1_norm(q));
}

TEST(NcPoly, L1Norm) {
  EXPECT_DOUBLE_EQ(l1_norm(P("X_a*X_b + 2*X_c")), 3.0);
  EXPECT_EQ(l1_norm(NcPolynomial{}), 0.0);
  EXPECT_DOUBLE_EQ(l1_norm(P("X_a + X_a* + X_b + X_b* + X_c + X_c* + X_d + X_d*")), 8.0);
  const NcPolynomial p = P("X_a + 2i*X_b* - 1"), q = P("3*X_c*X_a - X_d + 0.5");
  EXPECT_LE(l1_norm(poly_multiply(p, q)), l1_norm(p) * l1_norm(q) + 1e-12);
}

TEST(NcPoly, HermitianSubstitution) {
  EXPECT_EQ(hermitian_substitution(P("X_a")), P("X_a + X_a*"));
  EXPECT_EQ(hermitian_substitution(P("X_a*X_a")), P("X_a*X_a + X_a*X_a* + X_a* *X_a + X_a* *X_a*"));
  EXPECT_DOUBLE_EQ(l1_norm(hermitian_substitution(P("X_a*X_b"))), 4.0);
  EXPECT_THROW(hermitian_substitution(P("X_a*")), InvalidArgument);
}

TEST(NcPoly, JsonRoundTrip) {
  const NcPolynomial p = P("(1+2i)*X_a*X_b* - 3*X_c + 0.25");
  EXPECT_EQ(poly_from_json(kG, poly_to_json(kG, p)), p);
  EXPECT_EQ(parse_poly(kG, poly_to_string(kG, p)), p);
}

TEST(NcPoly, EvaluateExamples) {
  std::mt19937_64 rng(2);
  const CMatrix unit = CMatrix::Identity(6, 6);
  const auto ctx = context({random_matrix(6, rng), random_matrix(6, rng), random_matrix(6, rng), random_matrix(6, rng)});
  EXPECT_TRUE(evaluate(P("3 - 2i"), ctx, unit).isApprox(cd(3, -2) * unit));
  // A unitary is an isometry, so x* x evaluates to the unit.
  Eigen::HouseholderQR<CMatrix> qr(random_matrix(6, rng));
  const CMatrix u = qr.householderQ();
  const auto uctx = context({u, u, u, u});
  EXPECT_LT((evaluate(P("X_a* * X_a"), uctx, unit) - unit).norm(), 1e-13);
  // A partial isometry L with L*L = 1 on its domain: L L* is a projection.
  CMatrix l = CMatrix::Zero(6, 6);
  l.block(0, 0, 6, 3) = u.leftCols(3);
  const CMatrix proj = evaluate(P("X_a*X_a*"), context({l, l, l, l}), unit);
  EXPECT_LT((proj * proj - proj).norm(), 1e-13);
  std::map<Symbol, CMatrix> partial{{{0, false}, u}};
  EXPECT_THROW(evaluate(P("X_a*X_b"), partial, unit), InvalidArgument);
  std::map<Symbol, CMatrix> wrong{{{0, false}, CMatrix::Identity(3, 3)}};
  EXPECT_THROW(evaluate(P("X_a"), wrong, unit), InvalidArgument);
}

TEST(NcPoly, LipschitzAndSubstitutionCommute) {
  std::mt19937_64 rng(3);
  const CMatrix unit = CMatrix::Identity(5, 5);
  std::vector<CMatrix> ops;
  for (int i = 0; i < 4; ++i) {
    CMatrix a = random_matrix(5, rng);
    ops.push_back(a / norm2(a) * 0.9);
  }
  const auto ctx = context(ops);
  const NcPolynomial p = P("X_a*X_b* - 2*X_c + i*X_d*X_d*X_a"), q = P("X_a*X_b* - 1.5*X_c + i*X_d*X_d*X_a + 0.1");
  const double lhs = norm2(evaluate(p, ctx, unit) - evaluate(q, ctx, unit));
  EXPECT_LE(lhs, std::max(1.0, std::pow(0.9, 3)) * l1_norm(p - q) + 1e-12);

  const NcPolynomial r = P("X_a*X_b - 2i*X_c*X_a*X_a + 1");
  std::map<Symbol, CMatrix> sctx;
  for (VertexId v = 0; v < 4; ++v) sctx[{v, false}] = ops[v] + ops[v].adjoint();
  EXPECT_LT((evaluate(hermitian_substitution(r), ctx, unit) - evaluate(r, sctx, unit)).norm(), 1e-12);
}
