#include <gtest/gtest.h>

#include <cmath>
#include <deque>
#include <numbers>
#include <random>
#include <set>

#include "raagsc/fock.hpp"

using namespace raagsc;

namespace {

const SimpleGraph kPath = make_path({"a", "b", "c"});

FockBasisPtr basis(const SimpleGraph& g, unsigned d) { return std::make_shared<const FockBasis>(g, d); }

// Least word reachable by swapping adjacent commuting letters.
Trace brute_canonical(const SimpleGraph& g, const Trace& w) {
  std::set<Trace> seen{w};
  std::deque<Trace> queue{w};
  while (!queue.empty()) {
    const Trace cur = queue.front();
    queue.pop_front();
    for (std::size_t i = 0; i + 1 < cur.size(); ++i) {
      if (cur[i] == cur[i + 1] || !g.adjacent(cur[i], cur[i + 1])) continue;
      Trace next = cur;
      std::swap(next[i], next[i + 1]);
      if (seen.insert(next).second) queue.push_back(next);
    }
  }
  return *seen.begin();
}

std::vector<Trace> all_words(std::size_t n, unsigned k) {
  std::vector<Trace> out{{}};
  for (unsigned i = 0; i < k; ++i) {
    std::vector<Trace> next;
    for (const auto& w : out)
      for (VertexId v = 0; v < n; ++v) {
        Trace x = w;
        x.push_back(v);
        next.push_back(x);
      }
    out = next;
  }
  return out;
}

std::uint64_t dyck_brute(unsigned n) {
  std::uint64_t count = 0;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    int h = 0;
    bool ok = true;
    for (unsigned i = 0; i < n && ok; ++i) ok = (h += (mask >> i) & 1 ? 1 : -1) >= 0;
    count += ok && h == 0;
  }
  return count;
}

CVector unit(const FockBasis& b, const Trace& t) {
  CVector x = CVector::Zero(static_cast<Eigen::Index>(b.dim()));
  x[static_cast<Eigen::Index>(*b.index(t))] = 1.0;
  return x;
}

SparseOp evaluate_monomial(const FockBasisPtr& b, const Monomial& m) {
  SparseOp r = identity_op(b).matrix;
  for (const Symbol& s : m) r = r * (s.star ? annihilation_op(b, s.vertex) : creation_op(b, s.vertex)).matrix;
  return r;
}

}  // namespace

TEST(Fock, CanonicalTraceExamples) {
  EXPECT_EQ(canonical_trace(kPath, parse_vertices(kPath, "b a")), parse_vertices(kPath, "a b"));
  EXPECT_EQ(canonical_trace(kPath, parse_vertices(kPath, "c a")), parse_vertices(kPath, "c a"));
  EXPECT_TRUE(canonical_trace(kPath, Trace{}).empty());
  EXPECT_THROW(parse_vertices(kPath, "a z"), ParseError);
}

TEST(Fock, CanonicalTraceMatchesExhaustiveSwaps) {
  const std::vector<SimpleGraph> graphs{kPath, make_path({"a", "b", "c", "d"}), make_complete({"a", "b", "c"}),
                                        make_edgeless({"a", "b"}),
                                        SimpleGraph({"a", "b", "c", "d"}, {{"a", "c"}, {"b", "d"}, {"a", "d"}})};
  for (const auto& g : graphs)
    for (unsigned k = 0; k <= 5; ++k) {
      std::set<Trace> classes;
      for (const auto& w : all_words(g.size(), k)) {
        const Trace c = canonical_trace(g, w);
        ASSERT_EQ(c, brute_canonical(g, w));
        EXPECT_EQ(canonical_trace(g, c), c);
        classes.insert(c);
      }
      const auto listed = enumerate_traces(g, k);
      EXPECT_EQ(std::vector<Trace>(classes.begin(), classes.end()), listed);
    }
}

TEST(Fock, TraceCounts) {
  EXPECT_EQ(enumerate_traces(kPath, 2).size(), 7u);
  for (std::size_t n = 1; n <= 4; ++n) {
    std::vector<std::string> names;
    for (std::size_t i = 0; i < n; ++i) names.push_back("v" + std::to_string(i));
    for (unsigned k = 0; k <= 5; ++k) {
      std::size_t power = 1, multiset = 1;
      for (unsigned i = 0; i < k; ++i) power *= n;
      for (unsigned i = 1; i <= k; ++i) multiset = multiset * (n + i - 1) / i;
      EXPECT_EQ(enumerate_traces(make_edgeless(names), k).size(), power);
      EXPECT_EQ(enumerate_traces(make_complete(names), k).size(), multiset);
    }
  }
}

TEST(Fock, CreationAndAnnihilation) {
  const auto b = basis(kPath, 3);
  const VertexId a = 0;
  const CVector omega = unit(*b, {});
  EXPECT_EQ(CVector(creation_op(b, a).matrix * omega), unit(*b, {a}));
  EXPECT_EQ(CVector(annihilation_op(b, a).matrix * omega).norm(), 0.0);
  const SparseOp ann = annihilation_op(b, a).matrix;
  EXPECT_EQ(CVector(ann * unit(*b, canonical_trace(kPath, parse_vertices(kPath, "b a")))), unit(*b, {1}));
  EXPECT_EQ(CVector(ann * unit(*b, parse_vertices(kPath, "c a"))).norm(), 0.0);
  // Top degree is mapped to zero by creation; annihilation is the exact adjoint.
  EXPECT_EQ(CVector(creation_op(b, a).matrix * unit(*b, {0, 0, 0})).norm(), 0.0);
  EXPECT_EQ(SparseOp(creation_op(b, 2).adjoint().matrix - annihilation_op(b, 2).matrix).norm(), 0.0);
  EXPECT_THROW(creation_op(b, 7), InvalidArgument);
}

TEST(Fock, SemicircularBasics) {
  const auto b = basis(kPath, 4);
  const auto s = semicircular_op(b, 1);
  EXPECT_EQ(SparseOp(s.matrix - SparseOp(s.matrix.adjoint())).norm(), 0.0);
  EXPECT_EQ(SparseOp(s.matrix - creation_op(b, 1).matrix - annihilation_op(b, 1).matrix).norm(), 0.0);
  const TruncatedFockOperator s2{b, SparseOp(s.matrix * s.matrix)};
  EXPECT_EQ(vacuum_state(s2), cd(1.0));
  EXPECT_EQ(vacuum_state(s), cd(0.0));
  EXPECT_EQ(vacuum_state(identity_op(b)), cd(1.0));
  for (unsigned p = 1; p <= 6; ++p) EXPECT_EQ(dyck_count(2 * p), dyck_brute(2 * p));
  EXPECT_EQ(dyck_count(5), 0u);
}

TEST(Fock, NormalFormMonomialsHaveZeroVacuumState) {
  const auto b = basis(kPath, 4);
  for (unsigned p = 0; p <= 2; ++p)
    for (unsigned q = 0; q <= 2; ++q) {
      if (p + q == 0) continue;
      Monomial m;
      for (unsigned i = 0; i < p; ++i) m.push_back({static_cast<VertexId>(i), false});
      for (unsigned i = 0; i < q; ++i) m.push_back({static_cast<VertexId>(2 - i), true});
      EXPECT_EQ(vacuum_state({b, evaluate_monomial(b, m)}), cd(0.0));
    }
}

TEST(Fock, OperatorNorms) {
  const SimpleGraph one = make_edgeless({"a"});
  EXPECT_NEAR(op_norm(creation_op(one, 0, 5)).value, 1.0, 1e-10);
  EXPECT_NEAR(op_norm(creation_op(kPath, 1, 3)).value, 1.0, 1e-10);
  for (unsigned d : {1u, 5u, 20u}) {
    const double exact = 2.0 * std::cos(std::numbers::pi / (d + 2));
    EXPECT_NEAR(op_norm(semicircular_op(one, 0, d)).value, exact, 1e-10 * exact);
  }
  EXPECT_GE(op_norm(semicircular_op(one, 0, 20)).value, 1.90);
  const auto b = basis(kPath, 2);
  EXPECT_EQ(op_norm({b, SparseOp(static_cast<Eigen::Index>(b->dim()), static_cast<Eigen::Index>(b->dim()))}).value, 0.0);
}

TEST(Fock, ToeplitzNormalFormAgreesWithEvaluation) {
  const SimpleGraph g = make_path({"a", "b", "c", "d"});
  std::mt19937_64 rng(11);
  for (int t = 0; t < 150; ++t) {
    Monomial m(1 + rng() % 5);
    for (auto& s : m) s = {static_cast<VertexId>(rng() % 4), rng() % 2 == 1};
    const unsigned d = static_cast<unsigned>(m.size()) + 2;
    const auto b = basis(g, d);
    const auto low = static_cast<Eigen::Index>(b->dim_upto(d - static_cast<unsigned>(m.size())));
    const SparseOp direct = evaluate_monomial(b, m);
    const auto nf = toeplitz_normal_form(g, m);
    const SparseOp reduced = nf ? evaluate_monomial(b, *nf) : SparseOp(direct.rows(), direct.cols());
    EXPECT_EQ(SparseOp(SparseOp(direct - reduced).leftCols(low)).norm(), 0.0);
    if (nf) {
      bool starred = false, ordered = true;
      for (const Symbol& s : *nf) {
        if (s.star) starred = true;
        else if (starred) ordered = false;
      }
      EXPECT_TRUE(ordered);
    }
  }
}

TEST(Fock, CyclicDensity) {
  for (const SimpleGraph& g : {kPath, make_edgeless({"a", "b"})}) {
    for (unsigned d = 1; d <= 3; ++d) {
      const auto b = basis(g, d);
      std::vector<SparseOp> s;
      for (VertexId v = 0; v < g.size(); ++v) s.push_back(semicircular_op(b, v).matrix);
      std::vector<CVector> vecs{unit(*b, {})};
      for (std::size_t start = 0, level = 0; level < d; ++level) {
        const std::size_t end = vecs.size();
        for (std::size_t i = start; i < end; ++i)
          for (const auto& sv : s) vecs.push_back(sv * vecs[i]);
        start = end;
      }
      CMatrix m(static_cast<Eigen::Index>(b->dim()), static_cast<Eigen::Index>(vecs.size()));
      for (std::size_t i = 0; i < vecs.size(); ++i) m.col(static_cast<Eigen::Index>(i)) = vecs[i];
      EXPECT_EQ(static_cast<std::size_t>(Eigen::FullPivLU<CMatrix>(m).rank()), b->dim());
    }
  }
}

TEST(Fock, PolyNorms) {
  const SimpleGraph f2 = make_edgeless({"a", "b"});
  EXPECT_NEAR(fock_poly_norm(f2, parse_poly(f2, "X_a* * X_a"), 3).value, 1.0, 1e-10);
  EXPECT_NEAR(fock_poly_norm(f2, parse_poly(f2, "1"), 2).value, 1.0, 1e-12);
  const NcPolynomial s = parse_poly(f2, "X_a + X_a* + X_b + X_b*");
  double prev = 0.0;
  for (unsigned d = 1; d <= 8; ++d) {
    const FockNormReport r = fock_poly_norm(f2, s, d);
    EXPECT_GE(r.value, prev - 1e-10);
    EXPECT_LE(r.value, 2.0 * std::sqrt(2.0) + 1e-10);
    EXPECT_EQ(r.depth, d);
    prev = r.value;
  }
  EXPECT_THROW(fock_poly_norm(f2, parse_poly(f2, "X_a*X_b*X_a"), 2), InvalidArgument);
  EXPECT_THROW(FockBasis(f2, 30, 1000), GuardError);
}

TEST(Fock, MomentFactorization) {
  const SimpleGraph edge = make_complete({"a", "b"}), free2 = make_edgeless({"a", "b"});
  const MomentFactor sa{0, {0.0, 1.0}}, sb{1, {0.0, 1.0}};
  const MomentQuery q{sa, sb, sa, sb};
  EXPECT_NEAR(std::abs(moment_factorize(edge, q) - cd(1.0)), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(moment_factorize(free2, q)), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(moment_direct(edge, q) - cd(1.0)), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(moment_direct(free2, q)), 0.0, 1e-14);

  // Centred factors along Gamma-reduced sequences have vanishing moment.
  const SimpleGraph p4 = make_path({"a", "b", "c", "d"});
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> c(-1, 1);
  int tested = 0;
  while (tested < 100) {
    std::vector<VertexId> seq(1 + rng() % 5);
    for (auto& v : seq) v = static_cast<VertexId>(rng() % 4);
    if (!is_gamma_reduced(p4, seq)) continue;
    MomentQuery cq;
    for (VertexId v : seq) {
      MomentFactor f{v, {0.0, cd(c(rng), c(rng)), cd(c(rng), c(rng))}};
      f.coeffs[0] = -single_vertex_moment(f);
      cq.push_back(f);
    }
    EXPECT_NEAR(std::abs(moment_factorize(p4, cq)), 0.0, 1e-14);
    ++tested;
  }
}
