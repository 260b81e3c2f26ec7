#include "raagsc/rand_model.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <limits>
#include <numbers>

namespace raagsc {

namespace {

constexpr std::size_t kChunk = 1024;

std::size_t checked_mul(std::size_t a, std::size_t b, std::size_t guard, const char* what) {
  if (a != 0 && b > guard / a) throw GuardError(std::string(what) + " exceeds dimension guard " + std::to_string(guard));
  const std::size_t r = a * b;
  if (r > guard) throw GuardError(std::string(what) + " exceeds dimension guard " + std::to_string(guard));
  return r;
}

std::size_t ipow(std::size_t base, std::size_t e, std::size_t guard) {
  std::size_t r = 1;
  for (std::size_t i = 0; i < e; ++i) r = checked_mul(r, base, guard, "channel block");
  return r;
}

}  // namespace

CMatrix sample_sgrm(std::size_t n, double sigma2, const RngSeed& seed) {
  if (n == 0 || !(sigma2 > 0)) throw InvalidArgument("sample_sgrm needs n >= 1 and sigma2 > 0");
  CounterRng rng(seed.seed, seed.label);
  const double sd = std::sqrt(sigma2), sd_off = std::sqrt(sigma2 / 2.0);
  CMatrix x(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    x(i, i) = sd * rng.normal(2 * (i * n + i));
    for (std::size_t j = i + 1; j < n; ++j) {
      const std::uint64_t idx = 2 * (i * n + j);
      x(i, j) = cd(sd_off * rng.normal(idx), sd_off * rng.normal(idx + 1));
      x(j, i) = std::conj(x(i, j));
    }
  }
  return x;
}

CMatrix sample_grm(std::size_t n, double sigma2, const RngSeed& seed) {
  if (n == 0 || !(sigma2 > 0)) throw InvalidArgument("sample_grm needs n >= 1 and sigma2 > 0");
  CounterRng rng(seed.seed, seed.label);
  const double sd = std::sqrt(sigma2 / 2.0);
  CMatrix y(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const std::uint64_t idx = 2 * (i * n + j);
      y(i, j) = cd(sd * rng.normal(idx), sd * rng.normal(idx + 1));
    }
  return y;
}

std::pair<CMatrix, CMatrix> grm_split(const CMatrix& y) {
  if (y.rows() != y.cols()) throw InvalidArgument("grm_split needs a square matrix");
  const double r = std::numbers::sqrt2 / 2.0;
  CMatrix x1 = r * (y + y.adjoint());
  CMatrix x2 = cd(0, -r) * (y - y.adjoint());
  return {x1, x2};
}

CMatrix sgrm_combine(const CMatrix& x1, const CMatrix& x2) {
  if (x1.rows() != x1.cols() || x1.rows() != x2.rows() || x1.cols() != x2.cols())
    throw InvalidArgument("sgrm_combine needs square matrices of equal shape");
  return (x1 + cd(0, 1) * x2) * (std::numbers::sqrt2 / 2.0);
}

// ---- layout ----

ChannelLayout::ChannelLayout(const SimpleGraph& g, std::size_t m, const std::vector<std::size_t>& k,
                             std::size_t guard)
    : m_(m) {
  if (m == 0) throw InvalidArgument("channel dimension m must be >= 1");
  if (k.size() != g.size()) throw InvalidArgument("need one auxiliary dimension per vertex");
  for (auto [a, b] : channel_index(g).non_edges) channels_.push_back({m, false, a, b});
  for (VertexId v = 0; v < g.size(); ++v) {
    if (k[v] == 0) throw InvalidArgument("auxiliary dimensions must be >= 1");
    channels_.push_back({k[v], true, v, v});
  }
  finish(guard);
}

ChannelLayout::ChannelLayout(std::vector<Channel> channels, std::size_t guard) : channels_(std::move(channels)) {
  for (const auto& c : channels_)
    if (!c.aux) m_ = c.dim;
  finish(guard);
}

void ChannelLayout::finish(std::size_t guard) {
  strides_.assign(channels_.size(), 1);
  total_ = 1;
  for (std::size_t c = channels_.size(); c-- > 0;) {
    strides_[c] = total_;
    total_ = checked_mul(total_, channels_[c].dim, guard, "model dimension");
  }
}

std::size_t ChannelLayout::flatten(const std::vector<std::size_t>& multi) const {
  if (multi.size() != channels_.size()) throw InvalidArgument("multi-index has wrong arity");
  std::size_t f = 0;
  for (std::size_t c = 0; c < multi.size(); ++c) {
    if (multi[c] >= channels_[c].dim) throw InvalidArgument("multi-index digit out of range");
    f += multi[c] * strides_[c];
  }
  return f;
}

std::vector<std::size_t> ChannelLayout::unflatten(std::size_t flat) const {
  if (flat >= total_) throw InvalidArgument("flat index out of range");
  std::vector<std::size_t> multi(channels_.size());
  for (std::size_t c = 0; c < channels_.size(); ++c) {
    multi[c] = flat / strides_[c];
    flat %= strides_[c];
  }
  return multi;
}

std::vector<std::size_t> ChannelLayout::acting_channels(VertexId v) const {
  std::vector<std::size_t> out;
  for (std::size_t c = 0; c < channels_.size(); ++c)
    if (!channels_[c].aux && (channels_[c].a == v || channels_[c].b == v)) out.push_back(c);
  if (auto a = aux_channel(v)) out.push_back(*a);
  return out;
}

std::optional<std::size_t> ChannelLayout::aux_channel(VertexId v) const {
  for (std::size_t c = 0; c < channels_.size(); ++c)
    if (channels_[c].aux && channels_[c].a == v) return c;
  return std::nullopt;
}

// ---- matrix-free operators ----

MatrixFreeOperator::MatrixFreeOperator(LayoutPtr layout, std::vector<std::size_t> acting, CMatrix block)
    : layout_(std::move(layout)), acting_(std::move(acting)), block_(std::move(block)) {
  std::vector<char> is_acting(layout_->channel_count(), 0);
  std::size_t bd = 1;
  for (std::size_t c : acting_) {
    if (c >= layout_->channel_count() || is_acting[c]) throw InvalidArgument("invalid acting channel list");
    is_acting[c] = 1;
    bd *= layout_->channel(c).dim;
  }
  if (block_.rows() != static_cast<Eigen::Index>(bd) || block_.cols() != static_cast<Eigen::Index>(bd))
    throw InvalidArgument("block size does not match the acting channels");

  auto offsets = [&](bool want_acting) {
    std::vector<std::size_t> chans;
    for (std::size_t c = 0; c < layout_->channel_count(); ++c)
      if (static_cast<bool>(is_acting[c]) == want_acting) chans.push_back(c);
    if (want_acting) chans = acting_;
    std::vector<std::size_t> out{0};
    for (std::size_t c : chans) {  // first channel most significant
      std::vector<std::size_t> next;
      next.reserve(out.size() * layout_->channel(c).dim);
      for (std::size_t base : out)
        for (std::size_t d = 0; d < layout_->channel(c).dim; ++d) next.push_back(base + d * layout_->stride(c));
      out.swap(next);
    }
    return out;
  };
  inner_ = offsets(true);
  outer_ = offsets(false);
}

void MatrixFreeOperator::apply_block(const CMatrix& b, const CVector& in, CVector& out) const {
  if (in.size() != static_cast<Eigen::Index>(dim())) throw InvalidArgument("vector dimension mismatch");
  out.resize(in.size());
  const std::size_t bd = inner_.size();
  CMatrix xs(bd, kChunk), ys(bd, kChunk);
  for (std::size_t c0 = 0; c0 < outer_.size(); c0 += kChunk) {
    const std::size_t cs = std::min(kChunk, outer_.size() - c0);
    for (std::size_t c = 0; c < cs; ++c) {
      const std::size_t base = outer_[c0 + c];
      for (std::size_t r = 0; r < bd; ++r) xs(r, c) = in[base + inner_[r]];
    }
    ys.leftCols(cs).noalias() = b * xs.leftCols(cs);
    for (std::size_t c = 0; c < cs; ++c) {
      const std::size_t base = outer_[c0 + c];
      for (std::size_t r = 0; r < bd; ++r) out[base + inner_[r]] = ys(r, c);
    }
  }
}

void MatrixFreeOperator::apply(const CVector& in, CVector& out) const { apply_block(block_, in, out); }

void MatrixFreeOperator::apply_adjoint(const CVector& in, CVector& out) const {
  apply_block(block_.adjoint(), in, out);
}

MatrixFreeOperator MatrixFreeOperator::on_layout(LayoutPtr other) const {
  std::vector<std::size_t> mapped;
  for (std::size_t c : acting_) {
    const auto& ch = layout_->channel(c);
    std::optional<std::size_t> hit;
    for (std::size_t d = 0; d < other->channel_count(); ++d) {
      const auto& oc = other->channel(d);
      if (oc.dim == ch.dim && oc.aux == ch.aux && oc.a == ch.a && oc.b == ch.b) hit = d;
    }
    if (!hit) throw InvalidArgument("target layout lacks an acting channel");
    mapped.push_back(*hit);
  }
  return MatrixFreeOperator(std::move(other), mapped, block_);
}

// ---- expressions ----

MfExpression MfExpression::identity(LayoutPtr layout) {
  MfExpression e(std::move(layout));
  e.terms_.push_back({1.0, {}});
  return e;
}

MfExpression MfExpression::zero(LayoutPtr layout) { return MfExpression(std::move(layout)); }

MfExpression MfExpression::of(MfOpPtr op) {
  MfExpression e(op->layout());
  e.ops_.push_back(std::move(op));
  e.terms_.push_back({1.0, {{0, false}}});
  return e;
}

MfExpression MfExpression::adjoint() const {
  MfExpression e = *this;
  for (Term& t : e.terms_) {
    t.coeff = std::conj(t.coeff);
    std::reverse(t.factors.begin(), t.factors.end());
    for (Factor& f : t.factors) f.adjoint = !f.adjoint;
  }
  return e;
}

std::vector<MfExpression::Term> MfExpression::absorb(const MfExpression& b) {
  if (layout_.get() != b.layout_.get()) throw InvalidArgument("expressions live on different layouts");
  std::vector<std::size_t> remap;
  for (const auto& op : b.ops_) {
    auto it = std::find(ops_.begin(), ops_.end(), op);
    if (it == ops_.end()) {
      remap.push_back(ops_.size());
      ops_.push_back(op);
    } else {
      remap.push_back(static_cast<std::size_t>(it - ops_.begin()));
    }
  }
  std::vector<Term> terms = b.terms_;
  for (Term& t : terms)
    for (Factor& f : t.factors) f.op = remap[f.op];
  return terms;
}

MfExpression operator+(const MfExpression& a, const MfExpression& b) {
  MfExpression e = a;
  for (auto& t : e.absorb(b)) e.terms_.push_back(std::move(t));
  return e;
}

MfExpression operator-(const MfExpression& a, const MfExpression& b) { return a + cd(-1.0) * b; }

MfExpression operator*(const MfExpression& a, const MfExpression& b) {
  MfExpression e = a;
  const auto bt = e.absorb(b);
  e.terms_.clear();
  for (const auto& s : a.terms_)
    for (const auto& t : bt) {
      MfExpression::Term p{s.coeff * t.coeff, s.factors};
      p.factors.insert(p.factors.end(), t.factors.begin(), t.factors.end());
      if (p.coeff != cd(0.0)) e.terms_.push_back(std::move(p));
    }
  return e;
}

MfExpression operator*(cd c, const MfExpression& a) {
  MfExpression e = a;
  for (auto& t : e.terms_) t.coeff *= c;
  return e;
}

void MfExpression::apply(const CVector& in, CVector& out) const {
  if (in.size() != static_cast<Eigen::Index>(dim())) throw InvalidArgument("vector dimension mismatch");
  out = CVector::Zero(in.size());
  CVector cur, tmp;
  for (const Term& t : terms_) {
    if (t.factors.empty()) {
      out += t.coeff * in;
      continue;
    }
    cur = in;
    for (auto it = t.factors.rbegin(); it != t.factors.rend(); ++it) {
      if (it->adjoint) ops_[it->op]->apply_adjoint(cur, tmp);
      else ops_[it->op]->apply(cur, tmp);
      cur.swap(tmp);
    }
    out += t.coeff * cur;
  }
}

LinearMap MfExpression::as_linear_map(bool hermitian) const {
  LinearMap m;
  m.dim = static_cast<Eigen::Index>(dim());
  m.hermitian = hermitian;
  auto self = std::make_shared<MfExpression>(*this);
  auto adj = std::make_shared<MfExpression>(adjoint());
  m.apply = [self](const CVector& in, CVector& out) { self->apply(in, out); };
  m.apply_adjoint = [adj](const CVector& in, CVector& out) { adj->apply(in, out); };
  return m;
}

NormEstimate operator_norm_mf(const MfExpression& e, bool hermitian, const NormOptions& opts) {
  return top_singular_value(e.as_linear_map(hermitian), opts);
}

// ---- the random model ----

std::string vertex_stream(const SimpleGraph& g, VertexId v) { return "X/" + g.name(v); }

BlockForm block_decompose(const SimpleGraph& g, VertexId v, std::size_t m, std::size_t k, std::uint64_t seed) {
  if (v >= g.size()) throw InvalidArgument("unknown vertex id " + std::to_string(v));
  if (m == 0 || k == 0) throw InvalidArgument("m and K must be >= 1");
  const std::size_t guard = std::size_t{1} << 24;
  BlockForm b;
  b.M = ipow(m, channel_index(g).of(v).size(), guard);
  b.K = k;
  checked_mul(b.M * b.M, k * k, std::size_t{1} << 30, "vertex block");
  CounterRng rng(seed, vertex_stream(g, v));
  const double sd = std::sqrt(1.0 / (2.0 * static_cast<double>(k)));  // Q_IJ ~ GRM(K, 1/K)
  for (std::size_t ij = 0; ij < b.M * b.M; ++ij) {
    CMatrix q(k, k);
    for (std::size_t r = 0; r < k; ++r)
      for (std::size_t c = 0; c < k; ++c) {
        const std::uint64_t idx = 2 * ((ij * k + r) * k + c);
        q(r, c) = cd(sd * rng.normal(idx), sd * rng.normal(idx + 1));
      }
    auto [x, y] = grm_split(q);
    b.Q.push_back(std::move(q));
    b.X.push_back(std::move(x));
    b.Y.push_back(std::move(y));
  }
  return b;
}

CMatrix reassemble(const BlockForm& b) {
  const auto n = static_cast<Eigen::Index>(b.M * b.K);
  const auto k = static_cast<Eigen::Index>(b.K);
  CMatrix r(n, n);
  const double scale = 1.0 / std::sqrt(static_cast<double>(b.M));
  for (std::size_t i = 0; i < b.M; ++i)
    for (std::size_t j = 0; j < b.M; ++j)
      r.block(static_cast<Eigen::Index>(i) * k, static_cast<Eigen::Index>(j) * k, k, k) = scale * b.Q[i * b.M + j];
  CMatrix x = (r + r.adjoint()) * (std::numbers::sqrt2 / 2.0);
  // Exact Hermitian symmetry (the two triangles come from the same sums).
  for (Eigen::Index i = 0; i < n; ++i) {
    x(i, i) = x(i, i).real();
    for (Eigen::Index j = i + 1; j < n; ++j) x(j, i) = std::conj(x(i, j));
  }
  return x;
}

CMatrix sample_Xv_block(const SimpleGraph& g, VertexId v, std::size_t m, std::size_t k, std::uint64_t seed) {
  return reassemble(block_decompose(g, v, m, k, seed));
}

MatrixFreeOperator assemble_Xv(const SimpleGraph& g, const LayoutPtr& layout, VertexId v, std::uint64_t seed) {
  auto aux = layout->aux_channel(v);
  if (!aux) throw InvalidArgument("layout has no auxiliary channel for vertex " + g.name(v));
  return MatrixFreeOperator(layout, layout->acting_channels(v),
                            sample_Xv_block(g, v, layout->m(), layout->channel(*aux).dim, seed));
}

MatrixFreeOperator assemble_Xv(const SimpleGraph& g, VertexId v, std::size_t m, const std::vector<std::size_t>& k,
                               std::uint64_t seed, std::size_t guard) {
  return assemble_Xv(g, std::make_shared<const ChannelLayout>(g, m, k, guard), v, seed);
}

std::vector<std::size_t> parse_k_spec(const SimpleGraph& g, std::string_view text) {
  std::vector<std::size_t> k(g.size(), 0);
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find(',', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view item = text.substr(pos, end - pos);
    while (!item.empty() && std::isspace(static_cast<unsigned char>(item.front()))) item.remove_prefix(1);
    while (!item.empty() && std::isspace(static_cast<unsigned char>(item.back()))) item.remove_suffix(1);
    const std::size_t eq = item.find('=');
    if (eq == std::string_view::npos) throw ParseError("expected name=value in K specification", pos);
    std::string_view name = item.substr(0, eq), val = item.substr(eq + 1);
    std::size_t value = 0;
    auto [p, ec] = std::from_chars(val.data(), val.data() + val.size(), value);
    if (ec != std::errc() || p != val.data() + val.size() || value == 0)
      throw ParseError("K values must be positive integers", pos + eq + 1);
    if (name == "all") {
      std::fill(k.begin(), k.end(), value);
    } else {
      auto v = g.find(name);
      if (!v) throw ParseError("unknown vertex '" + std::string(name) + "' in K specification", pos);
      k[*v] = value;
    }
    pos = end + 1;
  }
  for (VertexId v = 0; v < g.size(); ++v)
    if (k[v] == 0) throw InvalidArgument("K specification misses vertex '" + g.name(v) + "'");
  return k;
}

std::vector<std::uint64_t> dimension_schedule(std::uint64_t i, double delta, const SimpleGraph& g) {
  if (!(delta > 4.0)) throw InvalidArgument("dimension_schedule needs delta > 4");
  if (i == 0) throw InvalidArgument("dimension_schedule needs i >= 1");
  std::vector<std::uint64_t> k;
  for (VertexId v = 0; v < g.size(); ++v) {
    if (v == 0) {
      k.push_back(i);
      continue;
    }
    const double next = std::round(std::pow(static_cast<double>(k.back()), delta));
    if (!(next < 0x1.0p63)) throw GuardError("dimension schedule overflows 64-bit integers");
    k.push_back(std::max<std::uint64_t>(1, static_cast<std::uint64_t>(next)));
  }
  return k;
}

GrowthCheck growth_inequality(double delta, unsigned k) {
  if (k < 2) throw InvalidArgument("growth inequality needs k >= 2");
  double rhs = 0.0, p = 1.0;
  for (unsigned j = 0; j + 2 <= k; ++j) {
    rhs += p;
    p *= delta;
  }
  const double lhs = std::pow(delta, k - 1);
  return {lhs, 3.0 * rhs, lhs > 3.0 * rhs};
}

}  // namespace raagsc
