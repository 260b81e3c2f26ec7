#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "raagsc/rand_model.hpp"

using namespace raagsc;

namespace {

const SimpleGraph kP4 = make_path({"a", "b", "c", "d"});

CVector random_vector(Eigen::Index n, std::mt19937_64& rng) {
  std::normal_distribution<double> nd;
  CVector x(n);
  for (Eigen::Index i = 0; i < n; ++i) x[i] = cd(nd(rng), nd(rng));
  return x;
}

CMatrix dense_of(const MatrixFreeOperator& op, bool adjoint) {
  const auto n = static_cast<Eigen::Index>(op.dim());
  CMatrix m(n, n);
  CVector e = CVector::Zero(n), out(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    e[j] = 1.0;
    adjoint ? op.apply_adjoint(e, out) : op.apply(e, out);
    m.col(j) = out;
    e[j] = 0.0;
  }
  return m;
}

}  // namespace

TEST(RandModel, SgrmIsHermitianWithRightVariance) {
  const CMatrix x = sample_sgrm(30, 0.5, {1, "s"});
  EXPECT_EQ(x, CMatrix(x.adjoint()));
  EXPECT_EQ(x, sample_sgrm(30, 0.5, {1, "s"}));
  EXPECT_NE(x, sample_sgrm(30, 0.5, {1, "t"}));
  const double sigma2 = 0.3;
  double diag = 0.0, off = 0.0;
  std::size_t nd = 0, no = 0;
  for (std::uint64_t s = 0; s < 1000; ++s) {
    const CMatrix y = sample_sgrm(100, sigma2, {s, "var"});
    for (Eigen::Index i = 0; i < 100; ++i) {
      diag += std::norm(y(i, i));
      ++nd;
      if (i + 1 < 100) {
        off += std::norm(y(i, i + 1));
        ++no;
      }
    }
  }
  EXPECT_GE(diag / nd, 0.97 * sigma2);
  EXPECT_LE(diag / nd, 1.03 * sigma2);
  EXPECT_NEAR(off / no, sigma2, 0.03 * sigma2);
  EXPECT_THROW(sample_sgrm(0, 1.0, {1, "s"}), InvalidArgument);
  EXPECT_THROW(sample_sgrm(3, -1.0, {1, "s"}), InvalidArgument);
}

TEST(RandModel, GrmMoments) {
  const double sigma2 = 2.0;
  cd mean = 0.0;
  double second = 0.0;
  std::size_t n = 0;
  for (std::uint64_t s = 0; s < 10; ++s) {
    const CMatrix y = sample_grm(100, sigma2, {s, "grm"});
    EXPECT_GT((y - y.adjoint()).norm(), 0.0);
    mean += y.sum();
    second += y.cwiseAbs2().sum();
    n += 10000;
  }
  mean /= static_cast<double>(n);
  EXPECT_LE(std::abs(mean), 4.0 * std::sqrt(sigma2 / n));
  EXPECT_NEAR(second / n, sigma2, 0.03 * sigma2);
}

TEST(RandModel, SplitCombine) {
  const CMatrix y = sample_grm(9, 1.0, {4, "g"});
  const auto [x1, x2] = grm_split(y);
  EXPECT_EQ(x1, CMatrix(x1.adjoint()));
  EXPECT_EQ(x2, CMatrix(x2.adjoint()));
  EXPECT_LE((sgrm_combine(x1, x2) - y).cwiseAbs().maxCoeff(), 4 * std::numeric_limits<double>::epsilon() * y.cwiseAbs().maxCoeff());
  const auto [z1, z2] = grm_split(sgrm_combine(x1, x2));
  EXPECT_LE((z1 - x1).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_LE((z2 - x2).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_THROW(sgrm_combine(x1, CMatrix::Zero(3, 3)), InvalidArgument);
  EXPECT_THROW(grm_split(CMatrix::Zero(2, 3)), InvalidArgument);

  // Entries of X1 and X2 are uncorrelated.
  const int trials = 10000;
  double cov = 0.0;
  for (int t = 0; t < trials; ++t) {
    const auto [a, b] = grm_split(sample_grm(2, 1.0, {static_cast<std::uint64_t>(t), "cov"}));
    cov += (a(0, 1) * std::conj(b(0, 1))).real();
  }
  EXPECT_LE(std::abs(cov / trials), 4.0 / std::sqrt(trials));
}

TEST(RandModel, ChannelLayout) {
  const ChannelLayout l(kP4, 2, {2, 2, 2, 2});
  EXPECT_EQ(l.dim(), 128u);
  EXPECT_EQ(l.channel_count(), 7u);
  EXPECT_EQ(l.stride(l.channel_count() - 1), 1u);
  for (std::size_t c = 0; c + 1 < l.channel_count(); ++c) EXPECT_EQ(l.stride(c), l.stride(c + 1) * l.channel(c + 1).dim);
  EXPECT_EQ(l.acting_channels(0), (std::vector<std::size_t>{0, 1, 3}));
  const ChannelLayout big(kP4, 3, {5, 7, 4, 3});
  for (std::size_t i = 0; i < big.dim(); i += 7) EXPECT_EQ(big.flatten(big.unflatten(i)), i);
  EXPECT_THROW(ChannelLayout(kP4, 16, {64, 64, 64, 64}), GuardError);
}

TEST(RandModel, MatrixFreeMatchesKronecker) {
  auto layout = std::make_shared<const ChannelLayout>(kP4, 2, std::vector<std::size_t>{2, 3, 2, 2});
  for (VertexId v = 0; v < 4; ++v) {
    const MatrixFreeOperator x = assemble_Xv(kP4, layout, v, 9);
    const CMatrix full = dense_of(x, false);
    const auto acting = layout->acting_channels(v);
    // Entry (r, c) is block(inner(r), inner(c)) when the remaining digits agree.
    for (std::size_t r = 0; r < layout->dim(); r += 3)
      for (std::size_t c = 0; c < layout->dim(); ++c) {
        const auto mr = layout->unflatten(r), mc = layout->unflatten(c);
        bool same = true;
        std::size_t ir = 0, ic = 0;
        for (std::size_t ch = 0; ch < layout->channel_count(); ++ch) {
          const bool act = std::find(acting.begin(), acting.end(), ch) != acting.end();
          if (!act) same = same && mr[ch] == mc[ch];
        }
        for (std::size_t ch : acting) {
          ir = ir * layout->channel(ch).dim + mr[ch];
          ic = ic * layout->channel(ch).dim + mc[ch];
        }
        const cd expect = same ? x.block()(static_cast<Eigen::Index>(ir), static_cast<Eigen::Index>(ic)) : cd(0.0);
        ASSERT_EQ(full(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)), expect);
      }
    EXPECT_LE((dense_of(x, true) - full.adjoint()).cwiseAbs().maxCoeff(), 0.0);
    EXPECT_LE((full - full.adjoint()).cwiseAbs().maxCoeff(), 0.0);
    const Eigen::Index block_dims[] = {4 * 2, 2 * 3, 2 * 2, 4 * 2};  // m^|F(v)| * K(v)
    EXPECT_EQ(x.block().rows(), block_dims[v]);
  }
}

TEST(RandModel, AdjacentVerticesCommute) {
  auto layout = std::make_shared<const ChannelLayout>(kP4, 2, std::vector<std::size_t>{2, 2, 2, 2});
  std::mt19937_64 rng(4);
  for (const auto& [v, w] : kP4.edges()) {
    const auto xv = assemble_Xv(kP4, layout, v, 3), xw = assemble_Xv(kP4, layout, w, 3);
    const CVector x = random_vector(128, rng);
    CVector a(128), b(128), c(128), d(128);
    xw.apply(x, a);
    xv.apply(a, b);
    xv.apply(x, c);
    xw.apply(c, d);
    EXPECT_LE((b - d).norm(), 1e-12 * x.norm());
  }
  // Non-adjacent vertices share a channel and generically do not commute.
  const auto xa = assemble_Xv(kP4, layout, 0, 3), xc = assemble_Xv(kP4, layout, 2, 3);
  const CVector x = random_vector(128, rng);
  CVector a(128), b(128), c(128), d(128);
  xc.apply(x, a);
  xa.apply(a, b);
  xa.apply(x, c);
  xc.apply(c, d);
  EXPECT_GT((b - d).norm(), 1e-6);
}

TEST(RandModel, BlockDecomposition) {
  for (VertexId v = 0; v < 4; ++v) {
    const BlockForm b = block_decompose(kP4, v, 2, 3, 17);
    const std::size_t M = v == 0 || v == 3 ? 4 : 2;
    EXPECT_EQ(b.M, M);
    EXPECT_EQ(b.Q.size(), M * M);
    for (std::size_t i = 0; i < b.Q.size(); ++i) {
      EXPECT_EQ(b.X[i], CMatrix(b.X[i].adjoint()));
      EXPECT_EQ(b.Y[i], CMatrix(b.Y[i].adjoint()));
      EXPECT_LE((b.Q[i] - (b.X[i] + cd(0, 1) * b.Y[i]) / std::sqrt(2.0)).cwiseAbs().maxCoeff(), 1e-15);
    }
    EXPECT_EQ(reassemble(b), sample_Xv_block(kP4, v, 2, 3, 17));
  }
}

TEST(RandModel, DimensionSchedule) {
  const SimpleGraph two = make_edgeless({"a", "b"});
  EXPECT_EQ(dimension_schedule(2, 5.0, two), (std::vector<std::uint64_t>{2, 32}));
  EXPECT_EQ(dimension_schedule(1, 4.5, kP4), (std::vector<std::uint64_t>{1, 1, 1, 1}));
  EXPECT_THROW(dimension_schedule(2, 4.0, two), InvalidArgument);
  for (unsigned k = 2; k <= 4; ++k) EXPECT_TRUE(growth_inequality(4.5, k).holds);
  EXPECT_EQ(parse_k_spec(kP4, "all=8"), (std::vector<std::size_t>{8, 8, 8, 8}));
  EXPECT_EQ(parse_k_spec(kP4, "a=1,b=2,c=3,d=4"), (std::vector<std::size_t>{1, 2, 3, 4}));
  EXPECT_THROW(parse_k_spec(kP4, "a=1,b=2"), InvalidArgument);
}

TEST(RandModel, MatrixFreeNorms) {
  auto layout = std::make_shared<const ChannelLayout>(kP4, 2, std::vector<std::size_t>{3, 3, 3, 3});
  EXPECT_NEAR(operator_norm_mf(MfExpression::identity(layout), true).value, 1.0, 1e-12);
  const auto x = MfExpression::of(std::make_shared<const MatrixFreeOperator>(assemble_Xv(kP4, layout, 1, 5)));
  const double n1 = operator_norm_mf(x, true).value, n2 = operator_norm_mf(x * x, true).value;
  EXPECT_NEAR(n1 * n1, n2, 1e-6 * n2);
  const SimpleGraph one = make_edgeless({"a"});
  const auto single = std::make_shared<const ChannelLayout>(one, 1, std::vector<std::size_t>{400});
  const auto big = MfExpression::of(std::make_shared<const MatrixFreeOperator>(assemble_Xv(one, single, 0, 2)));
  const double n = operator_norm_mf(big, true).value;
  EXPECT_GE(n, 1.8);
  EXPECT_LE(n, 2.3);
}
