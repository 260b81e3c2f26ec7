#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "raagsc/graph.hpp"
#include "raagsc/linalg.hpp"
#include "raagsc/raag.hpp"
#include "raagsc/rand_model.hpp"

namespace raagsc {

// phi(t) = int_0^t sqrt(4 - s^2) ds on [-2, 2], clamped to -pi / pi outside.
double phi(double t);
// exp(i phi(t)).
cd psi(double t);
// Inverse of psi on (-2, 2]; requires | |zeta| - 1 | <= 1e-9.
double psi_inverse(cd zeta);

// U diag(psi(lambda)) U* from a Hermitian eigendecomposition.
CMatrix unitary_from_hermitian(const CMatrix& h);

struct UnitaryRep {
  GraphPtr graph;
  LayoutPtr layout;
  std::size_t m = 0;
  std::vector<std::size_t> k;
  std::uint64_t seed = 0;
  std::vector<MfOpPtr> unitaries;  // U_v, indexed by vertex
  double max_relation_defect = 0.0;
};

// Relation check is run per edge on the sub-layout of the two vertices' channels.
UnitaryRep build_unitary_rep(GraphPtr g, std::size_t m, const std::vector<std::size_t>& k, std::uint64_t seed,
                             std::size_t guard = std::size_t{1} << 24);

// Sum over the support of coeff(g) U(g), with U(g) the product along the canonical word.
MfExpression rep_apply(const UnitaryRep& rep, const GroupAlgebraElement& z);
// U(w) for an arbitrary (not necessarily reduced) word.
MfExpression rep_apply_word(const UnitaryRep& rep, std::span<const Letter> word);

// ---- strong convergence experiment ----

struct SchedulePoint {
  std::size_t m = 1;
  std::vector<std::size_t> k;
};

// "K=8;16;32;64" (uniform K per point) with fixed m, or "a=8,b=16;a=16,b=32".
std::vector<SchedulePoint> parse_schedule(const SimpleGraph& g, std::string_view text, std::size_t m);

struct ExperimentOptions {
  unsigned radius = 0;           // ball radius of the regular-representation oracle (0: skip)
  unsigned moment_k = 0;         // trace-moment order (0: skip)
  unsigned fock_depth = 0;       // graph Fock estimate depth (0: skip)
  std::size_t guard = std::size_t{1} << 24;
  std::size_t support_guard = kDefaultSupportGuard;
  unsigned threads = 1;
};

struct TrialResult {
  std::uint64_t seed;
  double norm;
  int iterations;
  bool converged;
};

struct PointResult {
  SchedulePoint point;
  std::vector<TrialResult> trials;
  double mean = 0, min = 0, max = 0;
};

struct OracleValue {
  std::string name;
  std::optional<double> value;
  std::string note;
};

struct ExperimentReport {
  std::string graph_json;
  std::string z;
  std::vector<PointResult> points;
  double lower = 0.0;                // best certified lower bound
  double upper = 0.0;                // l1 norm
  std::vector<OracleValue> oracles;  // lower-bound oracles and the uncertified Fock estimate
  std::string to_json() const;       // compact, deterministic
};

ExperimentReport strong_conv_experiment(GraphPtr g, const GroupAlgebraElement& z,
                                        const std::vector<SchedulePoint>& schedule,
                                        const std::vector<std::uint64_t>& seeds, const ExperimentOptions& opts);

// Norm of z with each generator v replaced by psi of the depth-D compression of s_v.
// Dense and uncertified; reported for comparison only.
double fock_estimate(const GroupAlgebraElement& z, unsigned depth, std::size_t max_dim = 4096);

}  // namespace raagsc
