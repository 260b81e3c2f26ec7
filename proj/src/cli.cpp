#include "raagsc/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <functional>
#include <iomanip>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "raagsc/fock.hpp"
#include "raagsc/funcalc.hpp"
#include "raagsc/graph.hpp"
#include "raagsc/ncpoly.hpp"
#include "raagsc/raag.hpp"
#include "raagsc/rand_model.hpp"
#include "raagsc/spectral.hpp"
#include "raagsc/toeplitz.hpp"

namespace raagsc::cli {

using nlohmann::json;

namespace {

struct Report {
  std::string command;
  json config = json::object();
  json results = json::array();
  json checks = json::array();
  bool all_pass = true;

  void check(const std::string& name, bool pass, double lhs, double rhs) {
    checks.push_back({{"name", name}, {"pass", pass}, {"lhs", lhs}, {"rhs", rhs}});
    all_pass = all_pass && pass;
  }
};

std::string utc_timestamp() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::ostringstream s;
  s << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return s.str();
}

std::string cell(const json& v) {
  std::string s = v.is_string() ? v.get<std::string>() : v.dump();
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char ch : s) q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
  return q + "\"";
}

void emit(const Report& r, const std::string& format, std::ostream& out) {
  if (format == "csv") {
    out << "# command," << r.command << "\n# version," << kVersion << "\n";
    std::vector<std::string> header;
    for (const auto& row : r.results) {
      std::vector<std::string> keys;
      for (auto it = row.begin(); it != row.end(); ++it) keys.push_back(it.key());
      if (keys != header) {
        header = keys;
        for (std::size_t i = 0; i < keys.size(); ++i) out << (i ? "," : "") << keys[i];
        out << "\n";
      }
      for (std::size_t i = 0; i < keys.size(); ++i) out << (i ? "," : "") << cell(row[keys[i]]);
      out << "\n";
    }
    for (const auto& c : r.checks)
      out << "# check," << c["name"].get<std::string>() << "," << (c["pass"].get<bool>() ? "pass" : "fail") << ","
          << c["lhs"].dump() << "," << c["rhs"].dump() << "\n";
    return;
  }
  json doc{{"command", r.command}, {"version", kVersion}, {"config", r.config},
           {"results", r.results}, {"checks", r.checks},  {"timestamp", utc_timestamp()}};
  out << doc.dump(2) << "\n";
}

GraphPtr load_graph(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open graph file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return std::make_shared<const SimpleGraph>(parse_graph(buf.str()));
}

template <class T>
std::vector<T> parse_list(const std::string& text) {
  std::vector<T> out;
  std::stringstream s(text);
  std::string item;
  while (std::getline(s, item, ',')) {
    std::stringstream is(item);
    T v{};
    if (!(is >> v) || !(is >> std::ws).eof()) throw ParseError("bad list entry '" + item + "'", 0);
    out.push_back(v);
  }
  if (out.empty()) throw ParseError("empty list", 0);
  return out;
}

unsigned default_threads() {
  if (const char* env = std::getenv("RAAGSC_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v > 0) return static_cast<unsigned>(v);
  }
  return 1;
}

std::vector<VertexId> first_non_adjacent_pair(const SimpleGraph& g) {
  for (VertexId v = 0; v < g.size(); ++v)
    for (VertexId w = v + 1; w < g.size(); ++w)
      if (!g.adjacent(v, w)) return {v, w};
  throw InvalidArgument("graph has no pair of non-adjacent vertices");
}

// ---- options shared by every command ----

struct Common {
  std::string out = "json";
  std::size_t guard = std::size_t{1} << 24;
};

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--out", c.out, "Output format")->check(CLI::IsMember({"json", "csv"}))->capture_default_str();
  sub->add_option("--guard-dim", c.guard, "Dimension guard")->capture_default_str();
}

// ---- commands ----

struct MomentsArgs {
  std::string graph, vertex;
  unsigned max_p = 6;
  unsigned queries = 50;
  std::uint64_t seed = 1;
};

Report cmd_moments(const MomentsArgs& a, const Common& c) {
  Report r;
  r.command = "moments";
  r.config = {{"graph", a.graph}, {"vertex", a.vertex}, {"max_p", a.max_p}, {"queries", a.queries}, {"seed", a.seed},
              {"guard_dim", c.guard}};
  const GraphPtr g = load_graph(a.graph);
  const VertexId v = g->id(a.vertex);
  for (unsigned p = 1; p <= a.max_p; ++p) {
    auto basis = std::make_shared<const FockBasis>(*g, 2 * p, c.guard);
    const SparseOp s = semicircular_op(basis, v).matrix;
    CVector x = CVector::Zero(static_cast<Eigen::Index>(basis->dim()));
    x[0] = 1.0;
    cd odd = 0.0;
    for (unsigned i = 0; i < 2 * p; ++i) {
      x = s * x;
      if (i == 2 * p - 2) odd = x[0];  // s^{2p-1}
    }
    const double even = x[0].real();
    const auto catalan = static_cast<double>(dyck_count(2 * p));
    r.results.push_back({{"p", p}, {"depth", 2 * p}, {"even_moment", even}, {"catalan", catalan},
                         {"odd_moment", std::abs(odd)}, {"oracle", "dyck_path_count"}});
    r.check("catalan_p" + std::to_string(p), even == catalan && x[0].imag() == 0.0, even, catalan);
    r.check("odd_p" + std::to_string(p), odd == cd(0.0), std::abs(odd), 0.0);
  }
  // Factorization recursion against direct Fock evaluation on random queries.
  if (a.queries > 0) {
    CounterRng rng(a.seed, "moment-queries");
    std::uint64_t ctr = 0;
    auto basis = std::make_shared<const FockBasis>(*g, 6, c.guard);
    double worst = 0.0;
    for (unsigned q = 0; q < a.queries; ++q) {
      MomentQuery query;
      unsigned total = 0;
      const unsigned len = 1 + static_cast<unsigned>(rng.bits(ctr++) % 4);
      for (unsigned j = 0; j < len && total < 6; ++j) {
        MomentFactor f;
        f.vertex = static_cast<VertexId>(rng.bits(ctr++) % g->size());
        const unsigned deg = std::min<unsigned>(static_cast<unsigned>(rng.bits(ctr++) % 3), 6 - total);
        total += deg;
        for (unsigned i = 0; i <= deg; ++i) f.coeffs.emplace_back(2 * rng.uniform(ctr++) - 1, 2 * rng.uniform(ctr++) - 1);
        query.push_back(std::move(f));
      }
      worst = std::max(worst, std::abs(moment_factorize(*g, query) - moment_direct(basis, query)));
    }
    r.results.push_back({{"factorize_queries", a.queries}, {"max_abs_difference", worst}});
    r.check("factorize_vs_direct", worst <= 1e-12, worst, 1e-12);
  }
  return r;
}

struct FockNormArgs {
  std::string graph, poly;
  unsigned depth = 8;
  unsigned min_depth = 0;
};

Report cmd_fock_norm(const FockNormArgs& a, const Common& c) {
  Report r;
  r.command = "fock-norm";
  const GraphPtr g = load_graph(a.graph);
  const NcPolynomial p = parse_poly(*g, a.poly);
  const unsigned lo = std::max<unsigned>(a.min_depth ? a.min_depth : 1, static_cast<unsigned>(p.degree()));
  r.config = {{"graph", a.graph}, {"poly", a.poly}, {"depth", a.depth}, {"min_depth", lo}, {"guard_dim", c.guard}};
  if (a.depth < p.degree()) throw InvalidArgument("depth is below the polynomial degree");
  const double l1 = l1_norm(p);
  double prev = -1.0;
  bool monotone = true;
  for (unsigned d = lo; d <= a.depth; ++d) {
    int iters = 0;
    const double v = fock_compression_norm(*g, p, d, c.guard, &iters);
    const bool conv = prev >= 0 && std::abs(v - prev) < 1e-6 * std::max(1.0, v);
    r.results.push_back({{"depth", d}, {"value", v}, {"converged", conv}, {"iterations", iters},
                         {"kind", "compression_lower_bound"}, {"upper_l1", l1}});
    if (prev >= 0 && v < prev - 1e-9 * std::max(1.0, v)) monotone = false;
    prev = v;
  }
  r.check("monotone_in_depth", monotone, monotone ? 1 : 0, 1);
  r.check("below_l1", prev <= l1 + 1e-9, prev, l1);
  return r;
}

struct RegNormArgs {
  std::string graph, z;
  unsigned radius = 8;
  unsigned moments = 0;
};

Report cmd_reg_norm(const RegNormArgs& a, const Common& c) {
  Report r;
  r.command = "reg-norm";
  r.config = {{"graph", a.graph}, {"z", a.z}, {"radius", a.radius}, {"moments", a.moments}, {"guard_dim", c.guard}};
  const GraphPtr g = load_graph(a.graph);
  const auto z = parse_group_algebra(g, a.z);
  const double l1 = z.l1_norm();
  double prev = -1.0;
  bool monotone = true;
  const unsigned lo = std::max<unsigned>(1, static_cast<unsigned>(z.max_length()));
  for (unsigned rad = lo; rad <= a.radius; ++rad) {
    const auto est = regular_norm_lower(z, rad, std::min(c.guard, kDefaultSupportGuard));
    r.results.push_back({{"oracle", "ball_compression"}, {"radius", rad}, {"value", est.value},
                         {"converged", est.converged}, {"upper_l1", l1}});
    if (prev >= 0 && est.value < prev - 1e-9 * std::max(1.0, est.value)) monotone = false;
    prev = est.value;
  }
  if (prev >= 0) {
    r.check("ball_monotone", monotone, monotone ? 1 : 0, 1);
    r.check("ball_below_l1", prev <= l1 + 1e-9, prev, l1);
  }
  for (unsigned k = 1; k <= a.moments; ++k)
    r.results.push_back({{"oracle", "trace_moment"}, {"k", k}, {"value", moment_norm_lower(z, k)}, {"upper_l1", l1}});
  return r;
}

struct SampleNormArgs {
  std::string n = "200,500";
  unsigned trials = 20;
  std::uint64_t seed = 1;
};

Report cmd_sample_norm(const SampleNormArgs& a, const Common&) {
  Report r;
  r.command = "sample-norm";
  r.config = {{"n", a.n}, {"trials", a.trials}, {"seed", a.seed}};
  for (std::size_t n : parse_list<std::size_t>(a.n)) {
    unsigned inside = 0;
    for (unsigned t = 0; t < a.trials; ++t) {
      const CMatrix x = sample_sgrm(n, 1.0 / static_cast<double>(n), {a.seed + t, "sgrm"});
      Eigen::SelfAdjointEigenSolver<CMatrix> es(x, Eigen::EigenvaluesOnly);
      const double norm = es.eigenvalues().cwiseAbs().maxCoeff();
      inside += norm >= 1.8 && norm <= 2.3;
      r.results.push_back({{"n", n}, {"seed", a.seed + t}, {"norm", norm}});
    }
    const double frac = a.trials ? static_cast<double>(inside) / a.trials : 0.0;
    r.check("n" + std::to_string(n) + "_fraction_in_[1.8,2.3]", frac >= 0.95, frac, 0.95);
  }
  return r;
}

struct LimitArgs {
  std::string graph, m = "1,2,3,4", v, w;
  unsigned depth = 2;
};

Report cmd_limit_check(const LimitArgs& a, const Common& c) {
  Report r;
  r.command = "limit-check";
  const GraphPtr g = load_graph(a.graph);
  std::vector<VertexId> pair = first_non_adjacent_pair(*g);
  if (!a.v.empty()) pair[0] = g->id(a.v);
  if (!a.w.empty()) pair[1] = g->id(a.w);
  r.config = {{"graph", a.graph}, {"m", a.m}, {"depth", a.depth}, {"v", g->name(pair[0])}, {"w", g->name(pair[1])},
              {"guard_dim", c.guard}};
  double prev = INFINITY;
  bool nonincreasing = true;
  for (std::size_t m : parse_list<std::size_t>(a.m)) {
    const auto est = key_norm(*g, pair[0], pair[1], m, a.depth, c.guard);
    const double bound = 1.0 / std::sqrt(static_cast<double>(m));
    const bool pass = est.value <= bound + 1e-9;
    r.results.push_back({{"m", m}, {"key_norm", est.value}, {"bound", bound}, {"pass", pass},
                         {"converged", est.converged}, {"kind", "compression_lower_bound"}});
    r.check("key_norm_m" + std::to_string(m), pass, est.value, bound + 1e-9);
    if (est.value > prev + 1e-9) nonincreasing = false;
    prev = est.value;

    // Isometry on the sub-sector of v-degree < D, probed with a deterministic vector.
    LimitModel model(*g, m, a.depth, {pair[0], pair[1]}, c.guard);
    CounterRng rng(7, "isometry-probe");
    CVector xi = CVector::Zero(static_cast<Eigen::Index>(model.dim()));
    for (std::size_t i = 0; i < model.dim(); ++i)
      if (model.degree_in(pair[0], i) < a.depth) xi[static_cast<Eigen::Index>(i)] = cd(rng.normal(2 * i), rng.normal(2 * i + 1));
    xi /= xi.norm();
    const CVector lx = model.L(pair[0]) * xi;
    const double defect = std::abs(lx.squaredNorm() - 1.0);
    r.check("isometry_m" + std::to_string(m), defect <= 1e-12, defect, 1e-12);
  }
  r.check("key_norm_nonincreasing", nonincreasing, nonincreasing ? 1 : 0, 1);
  std::vector<VertexId> all(g->size());
  for (VertexId v = 0; v < g->size(); ++v) all[v] = v;
  const auto t3 = t3_witness(*g, all, 1, 1);
  r.check("t3_fixed_vector", t3.fixed, t3.residual, 0.0);
  return r;
}

struct UnitaryArgs {
  std::string graph, k = "all=4", z;
  std::size_t m = 2;
  std::uint64_t seed = 1;
  std::size_t norm_max_dim = std::size_t{1} << 20;
};

Report cmd_unitary_rep(const UnitaryArgs& a, const Common& c) {
  Report r;
  r.command = "unitary-rep";
  r.config = {{"graph", a.graph}, {"m", a.m},   {"K", a.k},
              {"seed", a.seed},   {"z", a.z},   {"norm_max_dim", a.norm_max_dim},
              {"guard_dim", c.guard}};
  const GraphPtr g = load_graph(a.graph);
  const auto k = parse_k_spec(*g, a.k);
  const UnitaryRep rep = build_unitary_rep(g, a.m, k, a.seed, c.guard);
  for (VertexId v = 0; v < g->size(); ++v) {
    const CMatrix& u = rep.unitaries[v]->block();
    const double defect = (u.adjoint() * u - CMatrix::Identity(u.rows(), u.cols())).cwiseAbs().maxCoeff();
    r.results.push_back({{"vertex", g->name(v)}, {"block_dim", u.rows()}, {"unitarity_defect", defect}});
    r.check("unitary_" + g->name(v), defect <= 1e-12, defect, 1e-12);
  }
  r.results.push_back({{"total_dim", rep.layout->dim()}, {"max_relation_defect", rep.max_relation_defect}});
  r.check("edge_relations", rep.max_relation_defect <= 1e-10, rep.max_relation_defect, 1e-10);
  if (!a.z.empty()) {
    const auto z = parse_group_algebra(g, a.z);
    const MfExpression op = rep_apply(rep, z);
    // ||(U(z) - I) x|| for one deterministic unit x is a lower bound on ||U(z) - I||.
    const auto n = static_cast<Eigen::Index>(rep.layout->dim());
    const CVector x = deterministic_start(n, std::nullopt);
    CVector y(n);
    op.apply(x, y);
    r.results.push_back({{"z", z.to_string()}, {"identity_distance_lower", (y - x).norm()},
                         {"kind", "single_vector_lower_bound"}});
    if (rep.layout->dim() <= a.norm_max_dim) {
      const auto est = operator_norm_mf(op, z.is_self_adjoint());
      r.results.push_back({{"z", z.to_string()}, {"norm", est.value}, {"converged", est.converged},
                           {"upper_l1", z.l1_norm()}, {"kind", "lanczos_lower_bound"}});
      r.check("norm_below_l1", est.value <= z.l1_norm() + 1e-9, est.value, z.l1_norm());
    }
  }
  return r;
}

struct ConvergeArgs {
  std::string graph, z, schedule;
  std::size_t m = 1;
  unsigned trials = 5;
  std::uint64_t seed = 1;
  unsigned radius = 0, moment_k = 0, fock_depth = 0;
};

Report cmd_converge(const ConvergeArgs& a, const Common& c) {
  Report r;
  r.command = "converge";
  r.config = {{"graph", a.graph}, {"z", a.z}, {"schedule", a.schedule}, {"m", a.m}, {"trials", a.trials},
              {"seed", a.seed}, {"radius", a.radius}, {"moment_k", a.moment_k}, {"fock_depth", a.fock_depth},
              {"guard_dim", c.guard}};
  const GraphPtr g = load_graph(a.graph);
  const auto z = parse_group_algebra(g, a.z);
  const auto schedule = parse_schedule(*g, a.schedule, a.m);
  std::vector<std::uint64_t> seeds;
  for (unsigned t = 0; t < a.trials; ++t) seeds.push_back(a.seed + t);
  ExperimentOptions o;
  o.radius = a.radius;
  o.moment_k = a.moment_k;
  o.fock_depth = a.fock_depth;
  o.guard = c.guard;
  o.threads = default_threads();
  const auto rep = strong_conv_experiment(g, z, schedule, seeds, o);
  const json doc = json::parse(rep.to_json());
  bool below = true;
  double worst = 0.0;
  for (const auto& pt : doc["schedule"])
    for (const auto& s : pt["seeds"]) {
      r.results.push_back({{"m", pt["m"]}, {"K", pt["K"]}, {"seed", s["seed"]}, {"norm", s["norm"]},
                           {"converged", s["converged"]}});
      worst = std::max(worst, s["norm"].get<double>());
    }
  for (const auto& pt : doc["schedule"])
    r.results.push_back({{"m", pt["m"]}, {"K", pt["K"]}, {"mean", pt["mean"]}, {"min", pt["min"]}, {"max", pt["max"]}});
  r.results.push_back({{"reference", doc["reference"]}});
  below = worst <= rep.upper + 1e-9;
  r.check("norms_below_l1", below, worst, rep.upper);
  return r;
}

struct SpectralArgs {
  double u = 1.0, T = 3.0, eps = 0.02, p = 1.5;
  double eta = 0.0, c = 0.0;
};

Report cmd_spectral(const SpectralArgs& a, const Common&) {
  Report r;
  r.command = "spectral";
  r.config = {{"u", a.u}, {"T", a.T}, {"eps", a.eps}, {"p", a.p}, {"eta", a.eta}, {"c", a.c}};
  const BumpSpec spec{a.T, a.eps};
  const auto pr = pairing_lower(a.u, spec);
  r.results.push_back({{"quantity", "pairing"}, {"u", a.u}, {"T", a.T}, {"eps", a.eps}, {"value", pr.value},
                       {"bound", pr.bound}, {"pass", pr.value >= pr.bound}});
  r.check("pairing_value_ge_bound", pr.value >= pr.bound, pr.value, pr.bound);
  const double lp = lp_norm_bound(spec, a.p), lp_bound = std::pow(2.0 * std::exp(2.0 * a.T), 1.0 / a.p);
  r.results.push_back({{"quantity", "lp_norm"}, {"p", a.p}, {"T", a.T}, {"value", lp}, {"bound", lp_bound},
                       {"pass", lp <= lp_bound}});
  r.check("lp_norm_le_bound", lp <= lp_bound, lp, lp_bound);
  r.results.push_back({{"quantity", "spherical_coeff"}, {"u", a.u}, {"r", a.T}, {"value", spherical_coeff(a.u, a.T)}});
  if (a.eta > 0.0 && a.c > 0.0) {
    const auto th = contradiction_threshold(a.eta, a.p, a.c);
    r.results.push_back({{"quantity", "contradiction_threshold"}, {"eta", a.eta}, {"p", a.p}, {"c", a.c},
                         {"t_star", th.t_star}, {"closed_form", th.closed_form},
                         {"lhs_exponent", th.lhs_exponent}, {"rhs_exponent", th.rhs_exponent}});
    r.check("exponent_order", th.lhs_exponent > th.rhs_exponent, th.lhs_exponent, th.rhs_exponent);
  }
  return r;
}

}  // namespace

int run(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Right-angled Artin group strong convergence toolkit"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  Common common;
  std::function<Report()> action;

  MomentsArgs ma;
  auto* moments = app.add_subcommand("moments", "Vacuum moments of s_v and the factorization cross-check");
  moments->add_option("--graph", ma.graph)->required();
  moments->add_option("--vertex", ma.vertex)->required();
  moments->add_option("--max-p", ma.max_p)->capture_default_str();
  moments->add_option("--queries", ma.queries)->capture_default_str();
  moments->add_option("--seed", ma.seed)->capture_default_str();
  add_common(moments, common);
  moments->callback([&] { action = [&] { return cmd_moments(ma, common); }; });

  FockNormArgs fa;
  auto* fock = app.add_subcommand("fock-norm", "Compression norms of p(l_v, l_v*) on the graph Fock space");
  fock->add_option("--graph", fa.graph)->required();
  fock->add_option("--poly", fa.poly)->required();
  fock->add_option("--depth", fa.depth)->capture_default_str();
  fock->add_option("--min-depth", fa.min_depth);
  add_common(fock, common);
  fock->callback([&] { action = [&] { return cmd_fock_norm(fa, common); }; });

  RegNormArgs ra;
  auto* reg = app.add_subcommand("reg-norm", "Lower bounds on regular-representation norms");
  reg->add_option("--graph", ra.graph)->required();
  reg->add_option("--z", ra.z)->required();
  reg->add_option("--radius", ra.radius)->capture_default_str();
  reg->add_option("--moments", ra.moments)->capture_default_str();
  add_common(reg, common);
  reg->callback([&] { action = [&] { return cmd_reg_norm(ra, common); }; });

  SampleNormArgs sa;
  auto* sample = app.add_subcommand("sample-norm", "Spectral norms of sampled SGRM(n, 1/n) matrices");
  sample->add_option("--n", sa.n)->capture_default_str();
  sample->add_option("--trials", sa.trials)->capture_default_str();
  sample->add_option("--seed", sa.seed)->capture_default_str();
  add_common(sample, common);
  sample->callback([&] { action = [&] { return cmd_sample_norm(sa, common); }; });

  LimitArgs la;
  auto* limit = app.add_subcommand("limit-check", "Isometry, key-norm decay and fixed-vector checks of the limit model");
  limit->add_option("--graph", la.graph)->required();
  limit->add_option("--m", la.m)->capture_default_str();
  limit->add_option("--depth", la.depth)->capture_default_str();
  limit->add_option("--v", la.v);
  limit->add_option("--w", la.w);
  add_common(limit, common);
  limit->callback([&] { action = [&] { return cmd_limit_check(la, common); }; });

  UnitaryArgs ua;
  auto* unitary = app.add_subcommand("unitary-rep", "Build the unitary representation and check its relations");
  unitary->add_option("--graph", ua.graph)->required();
  unitary->add_option("--m", ua.m)->capture_default_str();
  unitary->add_option("--K", ua.k)->capture_default_str();
  unitary->add_option("--seed", ua.seed)->capture_default_str();
  unitary->add_option("--z", ua.z);
  unitary->add_option("--norm-max-dim", ua.norm_max_dim, "Skip the Lanczos norm above this dimension")
      ->capture_default_str();
  add_common(unitary, common);
  unitary->callback([&] { action = [&] { return cmd_unitary_rep(ua, common); }; });

  ConvergeArgs ca;
  auto* conv = app.add_subcommand("converge", "Strong-convergence experiment over a dimension schedule");
  conv->add_option("--graph", ca.graph)->required();
  conv->add_option("--z", ca.z)->required();
  conv->add_option("--schedule", ca.schedule)->required();
  conv->add_option("--m", ca.m)->capture_default_str();
  conv->add_option("--trials", ca.trials)->capture_default_str();
  conv->add_option("--seed", ca.seed)->capture_default_str();
  conv->add_option("--radius", ca.radius)->capture_default_str();
  conv->add_option("--moment-k", ca.moment_k)->capture_default_str();
  conv->add_option("--fock-depth", ca.fock_depth)->capture_default_str();
  add_common(conv, common);
  conv->callback([&] { action = [&] { return cmd_converge(ca, common); }; });

  SpectralArgs pa;
  auto* spec = app.add_subcommand("spectral", "Spherical coefficients, bump norms and the pairing inequality");
  spec->add_option("--u", pa.u)->capture_default_str();
  spec->add_option("--T", pa.T)->capture_default_str();
  spec->add_option("--eps", pa.eps)->capture_default_str();
  spec->add_option("--p", pa.p)->capture_default_str();
  spec->add_option("--eta", pa.eta);
  spec->add_option("--c", pa.c);
  add_common(spec, common);
  spec->callback([&] { action = [&] { return cmd_spectral(pa, common); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kError;
  }

  try {
    const Report r = action();
    emit(r, common.out, out);
    return r.all_pass ? kOk : kCheckFailed;
  } catch (const GuardError& e) {
    err << "guard: " << e.what() << "\n";
    return kGuard;
  } catch (const CheckFailure& e) {
    err << "self-check failed: " << e.what() << "\n";
    return kCheckFailed;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kError;
  }
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<std::string> storage{"raagsc"};
  storage.insert(storage.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& s : storage) argv.push_back(s.data());
  return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace raagsc::cli
