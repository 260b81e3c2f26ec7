#include "raagsc/fock.hpp"

#include <algorithm>
#include <cctype>
#include <cstring>
#include <map>

#include "raagsc/trace_monoid.hpp"

namespace raagsc {

namespace {

void check_vertex(const SimpleGraph& g, VertexId v) {
  if (v >= g.size()) throw InvalidArgument("unknown vertex id " + std::to_string(v));
}

// v.t is canonical iff no minimal letter of t is smaller than v and commutes with it.
bool prepend_is_canonical(const SimpleGraph& g, VertexId v, const Trace& t) {
  for (std::size_t j = 0; j < t.size(); ++j) {
    bool minimal = true;
    for (std::size_t i = 0; i < j && minimal; ++i) minimal = t[i] != t[j] && g.adjacent(t[i], t[j]);
    if (!minimal) continue;
    if (t[j] < v && g.adjacent(v, t[j])) return false;
  }
  return true;
}

}  // namespace

Trace canonical_trace(const SimpleGraph& g, std::span<const VertexId> word) {
  for (VertexId v : word) check_vertex(g, v);
  return lex_normal_form<VertexId>(
      word, [](VertexId a, VertexId b) { return a < b; },
      [&g](VertexId a, VertexId b) { return g.adjacent(a, b); });
}

std::vector<VertexId> parse_vertices(const SimpleGraph& g, std::string_view text) {
  std::vector<VertexId> out;
  std::size_t i = 0;
  while (i < text.size()) {
    if (std::isspace(static_cast<unsigned char>(text[i]))) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < text.size() && !std::isspace(static_cast<unsigned char>(text[j]))) ++j;
    auto v = g.find(text.substr(i, j - i));
    if (!v) throw ParseError("unknown vertex '" + std::string(text.substr(i, j - i)) + "'", i);
    out.push_back(*v);
    i = j;
  }
  return out;
}

std::vector<Trace> enumerate_traces(const SimpleGraph& g, unsigned k) {
  std::vector<Trace> level{Trace{}};
  for (unsigned len = 1; len <= k; ++len) {
    std::vector<Trace> next;
    for (VertexId v = 0; v < g.size(); ++v)
      for (const Trace& t : level)
        if (prepend_is_canonical(g, v, t)) {
          Trace s;
          s.reserve(len);
          s.push_back(v);
          s.insert(s.end(), t.begin(), t.end());
          next.push_back(std::move(s));
        }
    level = std::move(next);
  }
  return level;
}

std::optional<Trace> remove_front(const SimpleGraph& g, VertexId v, const Trace& t) {
  check_vertex(g, v);
  for (std::size_t j = 0; j < t.size(); ++j) {
    if (t[j] == v) {
      Trace out = t;
      out.erase(out.begin() + static_cast<std::ptrdiff_t>(j));
      return out;
    }
    if (!g.adjacent(t[j], v)) return std::nullopt;
  }
  return std::nullopt;
}

FockBasis::FockBasis(const SimpleGraph& g, unsigned depth, std::size_t guard) : graph_(g), depth_(depth) {
  offsets_.push_back(0);
  std::vector<Trace> level{Trace{}};
  for (unsigned len = 0;; ++len) {
    if (traces_.size() + level.size() > guard)
      throw GuardError("Fock basis at depth " + std::to_string(depth) + " exceeds dimension guard " +
                       std::to_string(guard));
    for (auto& t : level) traces_.push_back(t);
    offsets_.push_back(traces_.size());
    if (len == depth) break;
    std::vector<Trace> next;
    for (VertexId v = 0; v < g.size(); ++v)
      for (const Trace& t : level)
        if (prepend_is_canonical(g, v, t)) {
          Trace s{v};
          s.insert(s.end(), t.begin(), t.end());
          next.push_back(std::move(s));
        }
    level = std::move(next);
  }
  index_.reserve(traces_.size());
  for (std::size_t i = 0; i < traces_.size(); ++i) index_.emplace(key(traces_[i]), i);
}

std::string FockBasis::key(const Trace& t) {
  std::string k(t.size() * sizeof(VertexId), '\0');
  std::memcpy(k.data(), t.data(), k.size());
  return k;
}

std::optional<std::size_t> FockBasis::index(const Trace& t) const {
  auto it = index_.find(key(t));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

TruncatedFockOperator identity_op(const FockBasisPtr& basis) {
  const auto n = static_cast<Eigen::Index>(basis->dim());
  SparseOp id(n, n);
  id.setIdentity();
  return {basis, id};
}

TruncatedFockOperator creation_op(const FockBasisPtr& basis, VertexId v) {
  const SimpleGraph& g = basis->graph();
  check_vertex(g, v);
  const std::size_t n = basis->dim(), top = basis->dim_upto(basis->depth() - 1);
  if (basis->depth() == 0) throw InvalidArgument("creation operators need depth >= 1");
  std::vector<Eigen::Triplet<cd>> trip;
  trip.reserve(top);
  Trace w;
  for (std::size_t i = 0; i < top; ++i) {
    const Trace& t = basis->trace(i);
    w.assign(1, v);
    w.insert(w.end(), t.begin(), t.end());
    auto j = basis->index(canonical_trace(g, w));
    if (!j) throw CheckFailure("creation image missing from Fock basis");
    trip.emplace_back(static_cast<int>(*j), static_cast<int>(i), 1.0);
  }
  SparseOp m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  m.setFromTriplets(trip.begin(), trip.end());
  return {basis, m};
}

TruncatedFockOperator annihilation_op(const FockBasisPtr& basis, VertexId v) {
  return creation_op(basis, v).adjoint();
}

TruncatedFockOperator semicircular_op(const FockBasisPtr& basis, VertexId v) {
  auto l = creation_op(basis, v);
  return {basis, SparseOp(l.matrix + SparseOp(l.matrix.adjoint()))};
}

TruncatedFockOperator creation_op(const SimpleGraph& g, VertexId v, unsigned depth) {
  return creation_op(std::make_shared<const FockBasis>(g, depth), v);
}

TruncatedFockOperator semicircular_op(const SimpleGraph& g, VertexId v, unsigned depth) {
  return semicircular_op(std::make_shared<const FockBasis>(g, depth), v);
}

cd vacuum_state(const TruncatedFockOperator& op) { return op.matrix.coeff(0, 0); }

NormEstimate op_norm(const TruncatedFockOperator& op, const NormOptions& opts) {
  const bool herm = SparseOp(op.matrix - SparseOp(op.matrix.adjoint())).squaredNorm() == 0.0;
  NormOptions o = opts;
  o.seed_index = 0;  // Omega
  return top_singular_value(as_linear_map(op.matrix, herm), o);
}

SparseOp evaluate_on_fock(const FockBasisPtr& basis, const NcPolynomial& p) {
  std::map<Symbol, SparseOp> ctx;
  for (VertexId v : p.vertices()) {
    auto l = creation_op(basis, v);
    ctx[{v, false}] = l.matrix;
    ctx[{v, true}] = SparseOp(l.matrix.adjoint());
  }
  return evaluate<SparseOp>(p, ctx, identity_op(basis).matrix);
}

double fock_compression_norm(const SimpleGraph& g, const NcPolynomial& p, unsigned depth, std::size_t guard,
                             int* iterations) {
  if (depth < p.degree())
    throw InvalidArgument("depth " + std::to_string(depth) + " is below the polynomial degree " +
                          std::to_string(p.degree()));
  for (VertexId v : p.vertices()) check_vertex(g, v);
  auto basis = std::make_shared<const FockBasis>(g, depth + static_cast<unsigned>(p.degree()), guard);
  const auto n = static_cast<Eigen::Index>(basis->dim_upto(depth));
  SparseOp full = evaluate_on_fock(basis, p);
  SparseOp block = full.topLeftCorner(n, n);
  NormOptions o;
  o.seed_index = 0;
  auto est = top_singular_value(as_linear_map(block, adjoint(p) == p), o);
  if (iterations) *iterations = est.iterations;
  return est.value;
}

FockNormReport fock_poly_norm(const SimpleGraph& g, const NcPolynomial& p, unsigned depth, std::size_t guard) {
  FockNormReport r;
  r.depth = depth;
  r.value = fock_compression_norm(g, p, depth, guard, &r.iterations);
  if (depth >= 1 && depth - 1 >= p.degree()) {
    r.previous = fock_compression_norm(g, p, depth - 1, guard);
    r.converged = std::abs(r.value - r.previous) < 1e-6 * std::max(1.0, r.value);
  }
  return r;
}

std::optional<Monomial> toeplitz_normal_form(const SimpleGraph& g, const Monomial& word) {
  for (const Symbol& s : word) check_vertex(g, s.vertex);
  Monomial m = word;
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 0; i + 1 < m.size(); ++i) {
      if (!m[i].star || m[i + 1].star) continue;
      const VertexId v = m[i].vertex, w = m[i + 1].vertex;
      if (v == w) {
        m.erase(m.begin() + static_cast<std::ptrdiff_t>(i), m.begin() + static_cast<std::ptrdiff_t>(i) + 2);
      } else if (g.adjacent(v, w)) {
        std::swap(m[i], m[i + 1]);
      } else {
        return std::nullopt;
      }
      changed = true;
      break;
    }
  }
  return m;
}

// ---- moments ----

std::uint64_t dyck_count(unsigned n) {
  // paths[h] = number of prefixes ending at height h that never went below 0
  std::vector<std::uint64_t> paths(n + 2, 0);
  paths[0] = 1;
  for (unsigned step = 0; step < n; ++step) {
    std::vector<std::uint64_t> next(n + 2, 0);
    for (unsigned h = 0; h <= n; ++h) {
      if (!paths[h]) continue;
      next[h + 1] += paths[h];
      if (h > 0) next[h - 1] += paths[h];
    }
    paths.swap(next);
  }
  return paths[0];
}

cd single_vertex_moment(const MomentFactor& a) {
  cd s = 0.0;
  for (std::size_t i = 0; i < a.coeffs.size(); ++i)
    if (a.coeffs[i] != cd(0.0)) s += a.coeffs[i] * static_cast<double>(dyck_count(static_cast<unsigned>(i)));
  return s;
}

namespace {

struct Factor {
  VertexId vertex;
  std::vector<cd> coeffs;
  bool centered;  // tracked symbolically so tau(a) = 0 is exact
};

std::vector<cd> poly_product(const std::vector<cd>& a, const std::vector<cd>& b) {
  if (a.empty() || b.empty()) return {};
  std::vector<cd> c(a.size() + b.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) c[i + j] += a[i] * b[j];
  return c;
}

void trim(std::vector<cd>& c) {
  while (!c.empty() && c.back() == cd(0.0)) c.pop_back();
}

class Factorizer {
 public:
  Factorizer(const SimpleGraph& g, std::size_t max_calls) : g_(g), max_calls_(max_calls) {}

  cd run(std::vector<Factor> seq) {
    if (++calls_ > max_calls_) throw GuardError("moment_factorize recursion guard exceeded");
    cd scalar = 1.0;
    // Scalars out, then merge until Gamma-reduced.
    bool changed = true;
    while (changed) {
      changed = false;
      for (std::size_t k = 0; k < seq.size(); ++k) {
        trim(seq[k].coeffs);
        if (seq[k].coeffs.empty()) return 0.0;
        if (seq[k].coeffs.size() == 1) {
          scalar *= seq[k].centered ? cd(0.0) : seq[k].coeffs[0];
          seq.erase(seq.begin() + static_cast<std::ptrdiff_t>(k));
          changed = true;
          break;
        }
      }
      if (changed) continue;
      for (std::size_t k = 1; k < seq.size() && !changed; ++k)
        for (std::size_t j = k; j-- > 0;) {
          if (seq[j].vertex == seq[k].vertex) {
            // a_k commutes with everything in between; bring it next to a_j.
            seq[j].coeffs = poly_product(seq[j].coeffs, seq[k].coeffs);
            seq[j].centered = false;
            seq.erase(seq.begin() + static_cast<std::ptrdiff_t>(k));
            changed = true;
            break;
          }
          if (!g_.adjacent(seq[j].vertex, seq[k].vertex)) break;
        }
    }
    if (scalar == cd(0.0)) return 0.0;
    if (seq.empty()) return scalar;

    auto it = std::find_if(seq.begin(), seq.end(), [](const Factor& f) { return !f.centered; });
    if (it == seq.end()) return 0.0;  // Gamma-reduced product of centred factors
    const std::size_t j = static_cast<std::size_t>(it - seq.begin());
    const cd mean = single_vertex_moment({seq[j].vertex, seq[j].coeffs});

    std::vector<Factor> centred = seq;
    centred[j].coeffs[0] -= mean;
    centred[j].centered = true;
    cd total = run(std::move(centred));
    if (mean != cd(0.0)) {
      std::vector<Factor> rest = seq;
      rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(j));
      total += mean * run(std::move(rest));
    }
    return scalar * total;
  }

 private:
  const SimpleGraph& g_;
  std::size_t max_calls_;
  std::size_t calls_ = 0;
};

}  // namespace

cd moment_factorize(const SimpleGraph& g, const MomentQuery& q, std::size_t max_calls) {
  std::vector<Factor> seq;
  for (const auto& f : q) {
    check_vertex(g, f.vertex);
    seq.push_back({f.vertex, f.coeffs, false});
  }
  return Factorizer(g, max_calls).run(std::move(seq));
}

cd moment_direct(const FockBasisPtr& basis, const MomentQuery& q) {
  std::size_t total = 0;
  for (const auto& f : q) total += f.coeffs.empty() ? 0 : f.coeffs.size() - 1;
  if (total > basis->depth())
    throw InvalidArgument("Fock depth " + std::to_string(basis->depth()) + " is below the query degree " +
                          std::to_string(total));
  std::map<VertexId, SparseOp> s;
  for (const auto& f : q)
    if (!s.count(f.vertex)) s[f.vertex] = semicircular_op(basis, f.vertex).matrix;
  CVector x = CVector::Zero(static_cast<Eigen::Index>(basis->dim()));
  x[0] = 1.0;
  for (auto it = q.rbegin(); it != q.rend(); ++it) {
    // Horner: y = sum_i c_i s^i x
    CVector y = CVector::Zero(x.size());
    for (std::size_t i = it->coeffs.size(); i-- > 0;) {
      CVector t = s.at(it->vertex) * y;
      y = t + it->coeffs[i] * x;
    }
    x = y;
  }
  return x[0];
}

cd moment_direct(const SimpleGraph& g, const MomentQuery& q) {
  std::size_t total = 0;
  for (const auto& f : q) total += f.coeffs.empty() ? 0 : f.coeffs.size() - 1;
  return moment_direct(std::make_shared<const FockBasis>(g, static_cast<unsigned>(std::max<std::size_t>(total, 1))), q);
}

}  // namespace raagsc
