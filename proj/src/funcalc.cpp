#include "raagsc/funcalc.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <numbers>

#include <json.hpp>

#include "raagsc/fock.hpp"

namespace raagsc {

double phi(double t) {
  if (t <= -2.0) return -std::numbers::pi;
  if (t >= 2.0) return std::numbers::pi;
  return 0.5 * t * std::sqrt(4.0 - t * t) + 2.0 * std::asin(0.5 * t);
}

cd psi(double t) { return std::polar(1.0, phi(t)); }

double psi_inverse(cd zeta) {
  if (std::abs(std::abs(zeta) - 1.0) > 1e-9) throw InvalidArgument("psi_inverse needs a point on the unit circle");
  const double theta = std::arg(zeta);  // (-pi, pi]
  if (theta >= std::numbers::pi) return 2.0;
  double lo = -2.0, hi = 2.0;
  for (int i = 0; i < 200 && hi - lo > 0; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (phi(mid) < theta ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

CMatrix unitary_from_hermitian(const CMatrix& h) {
  if (h.rows() != h.cols()) throw InvalidArgument("unitary_from_hermitian needs a square matrix");
  if (h.size() == 0) return h;
  const double scale = std::max(1.0, h.cwiseAbs().maxCoeff());
  if ((h - h.adjoint()).cwiseAbs().maxCoeff() > 1e-10 * scale)
    throw InvalidArgument("unitary_from_hermitian needs a Hermitian matrix");
  Eigen::SelfAdjointEigenSolver<CMatrix> es(h);
  if (es.info() != Eigen::Success) throw CheckFailure("Hermitian eigensolver failed");
  const Eigen::VectorXd& lam = es.eigenvalues();
  Eigen::VectorXcd d(lam.size());
  for (Eigen::Index i = 0; i < lam.size(); ++i) d[i] = psi(lam[i]);
  const CMatrix& u = es.eigenvectors();
  return u * d.asDiagonal() * u.adjoint();
}

// ---- representations ----

UnitaryRep build_unitary_rep(GraphPtr g, std::size_t m, const std::vector<std::size_t>& k, std::uint64_t seed,
                             std::size_t guard) {
  UnitaryRep rep;
  rep.graph = g;
  rep.m = m;
  rep.k = k;
  rep.seed = seed;
  rep.layout = std::make_shared<const ChannelLayout>(*g, m, k, guard);
  for (VertexId v = 0; v < g->size(); ++v) {
    const CMatrix x = sample_Xv_block(*g, v, m, k[v], seed);
    rep.unitaries.push_back(std::make_shared<const MatrixFreeOperator>(
        rep.layout, rep.layout->acting_channels(v), unitary_from_hermitian(x)));
  }
  // Adjacent generators must commute; both act as the identity off their own
  // channels, so checking on those channels alone is equivalent and cheap.
  CounterRng rng(seed, "relation-check");
  for (auto [v, w] : g->edges()) {
    std::vector<std::size_t> chans = rep.layout->acting_channels(v);
    for (std::size_t c : rep.layout->acting_channels(w)) chans.push_back(c);
    std::sort(chans.begin(), chans.end());
    chans.erase(std::unique(chans.begin(), chans.end()), chans.end());
    std::vector<ChannelLayout::Channel> sub;
    for (std::size_t c : chans) sub.push_back(rep.layout->channel(c));
    auto sl = std::make_shared<const ChannelLayout>(sub, guard);
    const auto uv = rep.unitaries[v]->on_layout(sl), uw = rep.unitaries[w]->on_layout(sl);
    CVector x(static_cast<Eigen::Index>(sl->dim())), a, b, t;
    for (Eigen::Index i = 0; i < x.size(); ++i) x[i] = cd(rng.normal(2 * i), rng.normal(2 * i + 1));
    uw.apply(x, t);
    uv.apply(t, a);
    uv.apply(x, t);
    uw.apply(t, b);
    const double defect = (a - b).norm() / x.norm();
    rep.max_relation_defect = std::max(rep.max_relation_defect, defect);
    if (defect > 1e-10)
      throw CheckFailure("unitaries of adjacent vertices " + g->name(v) + ", " + g->name(w) +
                         " fail to commute (defect " + std::to_string(defect) + ")");
  }
  return rep;
}

MfExpression rep_apply_word(const UnitaryRep& rep, std::span<const Letter> word) {
  MfExpression e = MfExpression::identity(rep.layout);
  for (const Letter& l : word) {
    if (l.vertex >= rep.unitaries.size()) throw InvalidArgument("unknown vertex id " + std::to_string(l.vertex));
    const MfExpression u = MfExpression::of(rep.unitaries[l.vertex]);
    e = e * (l.inverse ? u.adjoint() : u);
  }
  return e;
}

MfExpression rep_apply(const UnitaryRep& rep, const GroupAlgebraElement& z) {
  if (!(*z.graph() == *rep.graph)) throw InvalidArgument("group algebra element and representation use different graphs");
  MfExpression e = MfExpression::zero(rep.layout);
  for (const auto& [g, c] : z.terms()) e = e + c * rep_apply_word(rep, g.word());
  return e;
}

// ---- experiment ----

std::vector<SchedulePoint> parse_schedule(const SimpleGraph& g, std::string_view text, std::size_t m) {
  std::vector<SchedulePoint> out;
  bool uniform = false;
  std::string_view rest = text;
  if (rest.substr(0, 2) == "K=") {
    uniform = true;
    rest.remove_prefix(2);
  }
  std::size_t pos = 0;
  while (pos <= rest.size()) {
    std::size_t end = rest.find(';', pos);
    if (end == std::string_view::npos) end = rest.size();
    const std::string item(rest.substr(pos, end - pos));
    if (item.empty()) throw ParseError("empty schedule entry", pos);
    SchedulePoint p;
    p.m = m;
    p.k = parse_k_spec(g, uniform ? "all=" + item : item);
    out.push_back(std::move(p));
    pos = end + 1;
  }
  if (out.empty()) throw InvalidArgument("schedule must be nonempty");
  return out;
}

double fock_estimate(const GroupAlgebraElement& z, unsigned depth, std::size_t max_dim) {
  const SimpleGraph& g = *z.graph();
  auto basis = std::make_shared<const FockBasis>(g, depth, max_dim);
  std::vector<CMatrix> u;
  for (VertexId v = 0; v < g.size(); ++v)
    u.push_back(unitary_from_hermitian(CMatrix(semicircular_op(basis, v).matrix)));
  const auto n = static_cast<Eigen::Index>(basis->dim());
  CMatrix acc = CMatrix::Zero(n, n);
  for (const auto& [x, c] : z.terms()) {
    CMatrix t = CMatrix::Identity(n, n);
    for (const Letter& l : x.word()) t = t * (l.inverse ? CMatrix(u[l.vertex].adjoint()) : u[l.vertex]);
    acc += c * t;
  }
  Eigen::JacobiSVD<CMatrix> svd(acc);
  return n == 0 ? 0.0 : svd.singularValues()[0];
}

ExperimentReport strong_conv_experiment(GraphPtr g, const GroupAlgebraElement& z,
                                        const std::vector<SchedulePoint>& schedule,
                                        const std::vector<std::uint64_t>& seeds, const ExperimentOptions& opts) {
  if (schedule.empty()) throw InvalidArgument("schedule must be nonempty");
  if (seeds.empty()) throw InvalidArgument("at least one seed is required");
  ExperimentReport rep;
  rep.graph_json = graph_to_json(*g);
  rep.z = z.to_string();
  const bool herm = z.is_self_adjoint();

  auto trial = [&](const SchedulePoint& p, std::uint64_t seed) {
    const UnitaryRep r = build_unitary_rep(g, p.m, p.k, seed, opts.guard);
    const auto est = operator_norm_mf(rep_apply(r, z), herm);
    return TrialResult{seed, est.value, est.iterations, est.converged};
  };

  for (const SchedulePoint& p : schedule) {
    PointResult pr;
    pr.point = p;
    pr.trials.resize(seeds.size());
    const unsigned threads = std::max(1u, opts.threads);
    for (std::size_t s0 = 0; s0 < seeds.size(); s0 += threads) {
      std::vector<std::future<TrialResult>> jobs;
      const std::size_t s1 = std::min(seeds.size(), s0 + threads);
      for (std::size_t s = s0; s < s1; ++s)
        jobs.push_back(std::async(threads > 1 ? std::launch::async : std::launch::deferred, trial, std::cref(p), seeds[s]));
      for (std::size_t s = s0; s < s1; ++s) pr.trials[s] = jobs[s - s0].get();
    }
    double sum = 0.0;
    pr.min = INFINITY;
    pr.max = -INFINITY;
    for (const auto& t : pr.trials) {
      sum += t.norm;
      pr.min = std::min(pr.min, t.norm);
      pr.max = std::max(pr.max, t.norm);
    }
    pr.mean = sum / static_cast<double>(pr.trials.size());
    rep.points.push_back(std::move(pr));
  }

  rep.upper = z.l1_norm();
  auto guarded = [](const std::string& name, auto&& f) {
    OracleValue o{name, std::nullopt, ""};
    try {
      o.value = f();
    } catch (const Error& e) {
      o.note = std::string("skipped: ") + e.what();
    }
    return o;
  };
  if (opts.radius > 0)
    rep.oracles.push_back(guarded("ball_compression", [&] {
      return regular_norm_lower(z, opts.radius, opts.support_guard).value;
    }));
  if (opts.moment_k > 0)
    rep.oracles.push_back(guarded("trace_moment", [&] {
      double best = 0.0;
      for (unsigned k = 1; k <= opts.moment_k; ++k) best = std::max(best, moment_norm_lower(z, k, opts.support_guard));
      return best;
    }));
  for (const auto& o : rep.oracles)
    if (o.value) rep.lower = std::max(rep.lower, *o.value);
  if (opts.fock_depth > 0) {
    auto o = guarded("fock_psi_estimate", [&] { return fock_estimate(z, opts.fock_depth); });
    o.note = o.note.empty() ? "uncertified" : o.note;
    rep.oracles.push_back(o);
  }
  return rep;
}

std::string ExperimentReport::to_json() const {
  using nlohmann::json;
  json doc;
  doc["graph"] = json::parse(graph_json);
  doc["z"] = z;
  doc["schedule"] = json::array();
  for (const auto& p : points) {
    json pt{{"m", p.point.m}, {"K", p.point.k}, {"mean", p.mean}, {"min", p.min}, {"max", p.max}};
    pt["seeds"] = json::array();
    for (const auto& t : p.trials)
      pt["seeds"].push_back({{"seed", t.seed}, {"norm", t.norm}, {"iterations", t.iterations}, {"converged", t.converged}});
    doc["schedule"].push_back(pt);
  }
  json ref{{"lower", lower}, {"upper", upper}};
  ref["oracle_names"] = json::array();
  ref["oracles"] = json::array();
  for (const auto& o : oracles) {
    ref["oracle_names"].push_back(o.name);
    ref["oracles"].push_back({{"name", o.name}, {"value", o.value ? json(*o.value) : json(nullptr)}, {"note", o.note}});
  }
  doc["reference"] = ref;
  return doc.dump();
}

}  // namespace raagsc
