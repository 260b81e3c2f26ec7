#include "raagsc/toeplitz.hpp"

#include <algorithm>
#include <cmath>

namespace raagsc {

CMatrix runit(std::size_t M, std::size_t I, std::size_t J, bool plus) {
  if (I >= M || J >= M) throw InvalidArgument("r-unit index out of range");
  CMatrix r = CMatrix::Zero(M, M);
  if (plus) {
    r(I, J) += 1.0;
    r(J, I) += 1.0;
  } else {
    r(I, J) += cd(0, 1);
    r(J, I) -= cd(0, 1);
  }
  return r;
}

GaussianIntMatrix runit_int(std::size_t M, std::size_t I, std::size_t J, bool plus) {
  if (I >= M || J >= M) throw InvalidArgument("r-unit index out of range");
  const auto n = static_cast<Eigen::Index>(M);
  GaussianIntMatrix r{decltype(GaussianIntMatrix::re)::Zero(n, n), decltype(GaussianIntMatrix::im)::Zero(n, n)};
  if (plus) {
    r.re(I, J) += 1;
    r.re(J, I) += 1;
  } else {
    r.im(I, J) += 1;
    r.im(J, I) -= 1;
  }
  return r;
}

GaussianIntMatrix runit_completeness(std::size_t M) {
  const auto n = static_cast<Eigen::Index>(M);
  GaussianIntMatrix sum{decltype(GaussianIntMatrix::re)::Zero(n, n), decltype(GaussianIntMatrix::im)::Zero(n, n)};
  for (std::size_t I = 0; I < M; ++I)
    for (std::size_t J = 0; J < M; ++J)
      for (bool plus : {true, false}) {
        const auto r = runit_int(M, I, J, plus);
        // (A + iB)(A + iB) = (AA - BB) + i(AB + BA)
        sum.re += r.re * r.re - r.im * r.im;
        sum.im += r.re * r.im + r.im * r.re;
      }
  return sum;
}

// ---- model ----

LimitModel::LimitModel(const SimpleGraph& g, std::size_t m, unsigned depth, std::vector<VertexId> factors,
                       std::size_t guard)
    : graph_(g), m_(m), depth_(depth), factors_(std::move(factors)) {
  if (m == 0) throw InvalidArgument("m must be >= 1");
  if (depth == 0) throw InvalidArgument("depth must be >= 1");
  std::sort(factors_.begin(), factors_.end());
  factors_.erase(std::unique(factors_.begin(), factors_.end()), factors_.end());
  non_edges_ = channel_index(g).non_edges;
  auto mul = [guard](std::size_t a, std::size_t b) {
    if (a != 0 && b > guard / a) throw GuardError("limit model exceeds dimension guard " + std::to_string(guard));
    return a * b;
  };
  for (std::size_t c = 0; c < non_edges_.size(); ++c) dims_.push_back(m);
  for (VertexId v : factors_) {
    if (v >= g.size()) throw InvalidArgument("unknown vertex id " + std::to_string(v));
    const std::size_t G = generators(v);
    std::vector<std::size_t> off{0};
    std::size_t level = 1;
    for (unsigned k = 0; k <= depth; ++k) {
      off.push_back(off.back() + level);
      if (off.back() > guard) throw GuardError("limit model exceeds dimension guard " + std::to_string(guard));
      if (k < depth) level = mul(level, G);
    }
    level_offsets_.push_back(off);
    dims_.push_back(off.back());
  }
  strides_.assign(dims_.size(), 1);
  for (std::size_t c = dims_.size(); c-- > 0;) {
    strides_[c] = dim_;
    dim_ = mul(dim_, dims_[c]);
  }
  if (dim_ > guard) throw GuardError("limit model exceeds dimension guard " + std::to_string(guard));
  cache_.resize(factors_.size());
}

std::size_t LimitModel::channel_block(VertexId v) const {
  std::size_t M = 1;
  for (auto [a, b] : non_edges_)
    if (a == v || b == v) M *= m_;
  return M;
}

std::size_t LimitModel::fock_dim(VertexId v) const { return level_offsets_[factor_pos(v)].back(); }

std::size_t LimitModel::factor_pos(VertexId v) const {
  auto it = std::find(factors_.begin(), factors_.end(), v);
  if (it == factors_.end()) throw InvalidArgument("vertex is not instantiated in this limit model");
  return static_cast<std::size_t>(it - factors_.begin());
}

unsigned LimitModel::degree_in(VertexId v, std::size_t flat) const {
  const std::size_t p = factor_pos(v), c = non_edges_.size() + p;
  const std::size_t idx = flat / strides_[c] % dims_[c];
  const auto& off = level_offsets_[p];
  unsigned k = 0;
  while (idx >= off[k + 1]) ++k;
  return k;
}

CVector LimitModel::vacuum() const {
  CVector x = CVector::Zero(static_cast<Eigen::Index>(dim_));
  x[0] = 1.0;
  return x;
}

const SparseOp& LimitModel::L(VertexId v) const {
  const std::size_t p = factor_pos(v);
  if (!cache_[p]) cache_[p] = std::make_unique<SparseOp>(build_L(v));
  return *cache_[p];
}

SparseOp LimitModel::build_L(VertexId v) const {
  const std::size_t p = factor_pos(v), fc = non_edges_.size() + p;
  std::vector<std::size_t> fv;  // channels of F(v), most significant first
  for (std::size_t c = 0; c < non_edges_.size(); ++c)
    if (non_edges_[c].first == v || non_edges_[c].second == v) fv.push_back(c);
  const std::size_t M = channel_block(v), G = 2 * M * M;
  const auto& off = level_offsets_[p];
  const double scale = 1.0 / (2.0 * std::sqrt(static_cast<double>(M)));

  // Flat offset contributed by channel multi-index J over F(v).
  std::vector<std::size_t> chan_off(M, 0);
  for (std::size_t J = 0; J < M; ++J) {
    std::size_t rest = J;
    for (std::size_t i = fv.size(); i-- > 0;) {
      chan_off[J] += (rest % m_) * strides_[fv[i]];
      rest /= m_;
    }
  }
  std::vector<std::size_t> gpow{1};
  for (unsigned k = 0; k < depth_; ++k) gpow.push_back(gpow.back() * G);

  std::vector<Eigen::Triplet<cd>> trip;
  const cd I1(0, 1);
  for (std::size_t x = 0; x < dim_; ++x) {
    const std::size_t word = x / strides_[fc] % dims_[fc];
    unsigned k = 0;
    while (word >= off[k + 1]) ++k;
    if (k >= depth_) continue;
    std::size_t c = 0;
    for (std::size_t i = 0; i < fv.size(); ++i) c = c * m_ + x / strides_[fv[i]] % m_;
    const std::size_t base = x - chan_off[c] - word * strides_[fc];
    const std::size_t within = word - off[k];
    auto emit = [&](std::size_t out_chan, std::size_t I, std::size_t J, bool plus, cd coeff) {
      const std::size_t g = (I * M + J) * 2 + (plus ? 0 : 1);
      const std::size_t nw = off[k + 1] + g * gpow[k] + within;
      trip.emplace_back(static_cast<int>(base + chan_off[out_chan] + nw * strides_[fc]), static_cast<int>(x),
                        scale * coeff);
    };
    // r_IJ^+ e_c = [J=c] e_I + [I=c] e_J ; r_IJ^- e_c = i[J=c] e_I - i[I=c] e_J
    for (std::size_t I = 0; I < M; ++I) {
      if (I == c) {
        emit(c, c, c, true, 2.0);
        continue;
      }
      emit(I, I, c, true, 1.0);
      emit(I, I, c, false, I1);
      emit(I, c, I, true, 1.0);
      emit(I, c, I, false, -I1);
    }
  }
  SparseOp L(static_cast<Eigen::Index>(dim_), static_cast<Eigen::Index>(dim_));
  L.setFromTriplets(trip.begin(), trip.end());
  return L;
}

// ---- operations ----

LinearMap limit_poly_map(const LimitModel& model, const NcPolynomial& p) {
  struct Ctx {
    std::vector<std::pair<cd, std::vector<std::pair<const SparseOp*, bool>>>> terms;
  };
  auto build = [&model](const NcPolynomial& q) {
    auto ctx = std::make_shared<Ctx>();
    for (const auto& [mono, c] : q.terms()) {
      std::vector<std::pair<const SparseOp*, bool>> f;
      for (const Symbol& s : mono) f.emplace_back(&model.L(s.vertex), s.star);
      ctx->terms.emplace_back(c, std::move(f));
    }
    return ctx;
  };
  auto run = [](std::shared_ptr<Ctx> ctx) {
    return [ctx](const CVector& in, CVector& out) {
      out = CVector::Zero(in.size());
      CVector cur, tmp;
      for (const auto& [c, factors] : ctx->terms) {
        cur = in;
        for (auto it = factors.rbegin(); it != factors.rend(); ++it) {
          if (it->second) tmp.noalias() = it->first->adjoint() * cur;
          else tmp.noalias() = *it->first * cur;
          cur.swap(tmp);
        }
        out += c * cur;
      }
    };
  };
  LinearMap map;
  map.dim = static_cast<Eigen::Index>(model.dim());
  map.hermitian = adjoint(p) == p;
  map.apply = run(build(p));
  map.apply_adjoint = run(build(adjoint(p)));
  return map;
}

NormEstimate limit_poly_norm(const SimpleGraph& g, const NcPolynomial& q, std::size_t m, unsigned depth,
                             std::size_t guard) {
  if (depth < q.degree())
    throw InvalidArgument("depth " + std::to_string(depth) + " is below the polynomial degree");
  std::vector<VertexId> vs = q.vertices();
  if (vs.empty()) vs.push_back(0);
  LimitModel model(g, m, std::max(depth, 1u), vs, guard);
  NormOptions o;
  o.seed_index = 0;
  return top_singular_value(limit_poly_map(model, q), o);
}

NormEstimate key_norm(const SimpleGraph& g, VertexId v, VertexId w, std::size_t m, unsigned depth,
                      std::size_t guard) {
  if (v >= g.size() || w >= g.size()) throw InvalidArgument("unknown vertex");
  if (v == w || g.adjacent(v, w)) throw InvalidArgument("key_norm needs distinct non-adjacent vertices");
  NcPolynomial q;
  q.add({{v, true}, {w, false}}, 1.0);
  return limit_poly_norm(g, q, m, depth, guard);
}

T3Result t3_witness(const SimpleGraph& g, const std::vector<VertexId>& vertices, std::size_t m, unsigned depth) {
  std::vector<VertexId> fs = vertices;
  if (fs.empty()) fs.push_back(0);
  LimitModel model(g, m, depth, fs);
  T3Result r;
  r.xi = model.vacuum();
  CVector y = r.xi;
  for (auto it = vertices.rbegin(); it != vertices.rend(); ++it) {
    const SparseOp& L = model.L(*it);
    CVector t = L.adjoint() * y;
    y -= L * t;
  }
  r.residual = (y - r.xi).norm();
  r.norm = y.norm();
  r.fixed = r.residual == 0.0;
  return r;
}

}  // namespace raagsc
