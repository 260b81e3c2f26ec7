#include "raagsc/raag.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <unordered_map>
#include <unordered_set>

#include "raagsc/trace_monoid.hpp"

namespace raagsc {

namespace {

void require_same_graph(const GraphPtr& a, const GraphPtr& b) {
  if (a.get() != b.get() && !(*a == *b)) throw InvalidArgument("group elements belong to different graphs");
}

void check_letters(const SimpleGraph& g, std::span<const Letter> letters) {
  for (const Letter& l : letters)
    if (l.vertex >= g.size()) throw InvalidArgument("unknown vertex id " + std::to_string(l.vertex));
}

}  // namespace

std::vector<Letter> reduce_word(const SimpleGraph& g, std::span<const Letter> letters) {
  check_letters(g, letters);
  // Left-greedy piling: a new letter cancels the nearest stored inverse it can commute back to.
  std::vector<Letter> pile;
  pile.reserve(letters.size());
  for (const Letter& x : letters) {
    bool cancelled = false;
    for (std::size_t j = pile.size(); j-- > 0;) {
      if (pile[j] == x.inv()) {
        pile.erase(pile.begin() + static_cast<std::ptrdiff_t>(j));
        cancelled = true;
        break;
      }
      if (!g.adjacent(pile[j].vertex, x.vertex)) break;
    }
    if (!cancelled) pile.push_back(x);
  }
  return lex_normal_form<Letter>(
      pile, [](Letter a, Letter b) { return a.key() < b.key(); },
      [&g](Letter a, Letter b) { return g.adjacent(a.vertex, b.vertex); });
}

RaagElement::RaagElement(GraphPtr g) : graph_(std::move(g)) {
  if (!graph_) throw InvalidArgument("null graph");
}

RaagElement::RaagElement(GraphPtr g, std::span<const Letter> letters) : RaagElement(std::move(g)) {
  word_ = reduce_word(*graph_, letters);
}

RaagElement::RaagElement(GraphPtr g, std::vector<Letter> canonical, int) : graph_(std::move(g)), word_(std::move(canonical)) {}

RaagElement RaagElement::inverse() const {
  std::vector<Letter> w(word_.rbegin(), word_.rend());
  for (Letter& l : w) l = l.inv();
  return RaagElement(graph_, w);
}

RaagElement operator*(const RaagElement& x, const RaagElement& y) {
  require_same_graph(x.graph_, y.graph_);
  if (y.word_.empty()) return x;
  if (x.word_.empty()) return y;
  std::vector<Letter> w;
  w.reserve(x.word_.size() + y.word_.size());
  w.insert(w.end(), x.word_.begin(), x.word_.end());
  w.insert(w.end(), y.word_.begin(), y.word_.end());
  return RaagElement(x.graph_, w);
}

std::string RaagElement::key() const {
  std::string k;
  k.reserve(2 * word_.size());
  for (const Letter& l : word_) {
    const unsigned v = l.key();
    k.push_back(static_cast<char>(v >> 8));
    k.push_back(static_cast<char>(v & 0xFF));
  }
  return k;
}

std::string RaagElement::to_string() const { return word_to_string(*graph_, word_); }

bool RaagElement::operator<(const RaagElement& o) const {
  if (word_.size() != o.word_.size()) return word_.size() < o.word_.size();
  for (std::size_t i = 0; i < word_.size(); ++i)
    if (word_[i].key() != o.word_[i].key()) return word_[i].key() < o.word_[i].key();
  return false;
}

RaagElement normal_form(GraphPtr g, std::span<const Letter> letters) { return RaagElement(std::move(g), letters); }
RaagElement multiply(const RaagElement& x, const RaagElement& y) { return x * y; }
RaagElement inverse(const RaagElement& x) { return x.inverse(); }
bool is_identity(const RaagElement& x) { return x.is_identity(); }

std::vector<Letter> parse_word(const SimpleGraph& g, std::string_view text) {
  std::vector<Letter> out;
  std::size_t i = 0;
  while (i < text.size()) {
    if (std::isspace(static_cast<unsigned char>(text[i]))) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < text.size() && !std::isspace(static_cast<unsigned char>(text[j]))) ++j;
    std::string_view tok = text.substr(i, j - i);
    bool inv = false;
    if (tok.size() > 1 && tok.back() == '\'') {
      inv = true;
      tok.remove_suffix(1);
    }
    auto v = g.find(tok);
    if (!v) throw ParseError("unknown vertex '" + std::string(tok) + "' in word", i);
    out.push_back({*v, inv});
    i = j;
  }
  return out;
}

std::string word_to_string(const SimpleGraph& g, std::span<const Letter> letters) {
  std::string s;
  for (const Letter& l : letters) {
    if (!s.empty()) s += ' ';
    s += g.name(l.vertex);
    if (l.inverse) s += '\'';
  }
  return s;
}

std::vector<Letter> commutator(std::span<const Letter> x, std::span<const Letter> y) {
  std::vector<Letter> out(x.begin(), x.end());
  out.insert(out.end(), y.begin(), y.end());
  for (auto it = x.rbegin(); it != x.rend(); ++it) out.push_back(it->inv());
  for (auto it = y.rbegin(); it != y.rend(); ++it) out.push_back(it->inv());
  return out;
}

// ---- group algebra ----

GroupAlgebraElement GroupAlgebraElement::basis(const RaagElement& x, cd coeff) {
  GroupAlgebraElement z(x.graph());
  z.add(x, coeff);
  return z;
}

cd GroupAlgebraElement::coefficient(const RaagElement& x) const {
  auto it = terms_.find(x);
  return it == terms_.end() ? cd(0.0) : it->second;
}

void GroupAlgebraElement::add(const RaagElement& x, cd coeff) {
  require_same_graph(graph_, x.graph());
  auto [it, inserted] = terms_.try_emplace(x, coeff);
  if (!inserted) it->second += coeff;
  if (it->second == cd(0.0)) terms_.erase(it);
}

GroupAlgebraElement GroupAlgebraElement::adjoint() const {
  GroupAlgebraElement out(graph_);
  for (const auto& [x, c] : terms_) out.add(x.inverse(), std::conj(c));
  return out;
}

double GroupAlgebraElement::l1_norm() const {
  double s = 0.0;
  for (const auto& [x, c] : terms_) s += std::abs(c);
  return s;
}

std::size_t GroupAlgebraElement::max_length() const {
  std::size_t m = 0;
  for (const auto& [x, c] : terms_) m = std::max(m, x.length());
  return m;
}

GroupAlgebraElement operator+(const GroupAlgebraElement& a, const GroupAlgebraElement& b) {
  GroupAlgebraElement out = a;
  for (const auto& [x, c] : b.terms_) out.add(x, c);
  return out;
}

GroupAlgebraElement operator-(const GroupAlgebraElement& a, const GroupAlgebraElement& b) {
  return a + cd(-1.0) * b;
}

GroupAlgebraElement operator*(const GroupAlgebraElement& a, const GroupAlgebraElement& b) {
  require_same_graph(a.graph_, b.graph_);
  GroupAlgebraElement out(a.graph_);
  for (const auto& [x, c] : a.terms_)
    for (const auto& [y, d] : b.terms_) out.add(x * y, c * d);
  return out;
}

GroupAlgebraElement operator*(cd c, const GroupAlgebraElement& a) {
  GroupAlgebraElement out(a.graph_);
  for (const auto& [x, d] : a.terms_) out.add(x, c * d);
  return out;
}

std::string GroupAlgebraElement::to_string() const {
  if (terms_.empty()) return "0";
  std::string s;
  for (const auto& [x, c] : terms_) {
    if (!s.empty()) s += " + ";
    s += format_complex(c) + "*[" + x.to_string() + "]";
  }
  return s;
}

namespace {

class AlgebraParser {
 public:
  AlgebraParser(GraphPtr g, std::string_view text) : g_(std::move(g)), s_(text) {}

  GroupAlgebraElement parse() {
    GroupAlgebraElement z(g_);
    skip();
    if (pos_ == s_.size()) throw ParseError("empty group algebra expression", pos_);
    bool first = true;
    while (true) {
      skip();
      if (pos_ == s_.size()) break;
      double sign = 1.0;
      if (peek() == '+' || peek() == '-') {
        sign = peek() == '-' ? -1.0 : 1.0;
        ++pos_;
      } else if (!first) {
        throw ParseError("expected '+' or '-' between terms", pos_);
      }
      first = false;
      skip();
      cd coeff = 1.0;
      if (peek() != '[') {
        coeff = coefficient();
        skip();
        if (peek() != '*') throw ParseError("expected '*' after coefficient", pos_);
        ++pos_;
        skip();
      }
      if (peek() != '[') throw ParseError("expected '[' to open a word", pos_);
      const std::size_t open = pos_++;
      const std::size_t close = s_.find(']', pos_);
      if (close == std::string_view::npos) throw ParseError("unterminated '['", open);
      std::vector<Letter> w;
      try {
        w = parse_word(*g_, s_.substr(pos_, close - pos_));
      } catch (const ParseError& e) {
        throw ParseError(e.message(), pos_ + e.position());
      }
      pos_ = close + 1;
      z.add(RaagElement(g_, w), sign * coeff);
    }
    return z;
  }

 private:
  char peek() const { return pos_ < s_.size() ? s_[pos_] : '\0'; }
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool number(double& out) {
    skip();
    const char* b = s_.data() + pos_;
    auto [p, ec] = std::from_chars(b, s_.data() + s_.size(), out);
    if (ec != std::errc() || p == b) return false;
    pos_ += static_cast<std::size_t>(p - b);
    return true;
  }

  // real [ (+|-) real 'i' ] | real 'i' | 'i'
  bool complex_literal(cd& out) {
    const std::size_t start = pos_;
    skip();
    if (peek() == 'i') {
      ++pos_;
      out = cd(0, 1);
      return true;
    }
    double a = 0;
    if (!number(a)) {
      pos_ = start;
      return false;
    }
    if (peek() == 'i') {
      ++pos_;
      out = cd(0, a);
      return true;
    }
    out = a;
    const std::size_t after_real = pos_;
    skip();
    if (peek() == '+' || peek() == '-') {
      const double sign = peek() == '-' ? -1.0 : 1.0;
      ++pos_;
      skip();
      double b = 1.0;
      const bool has_num = number(b);
      if (peek() == 'i') {
        ++pos_;
        // Accept only if a '*' or ')' follows, otherwise the sign starts a new term.
        const std::size_t save = pos_;
        skip();
        if (peek() == '*' || peek() == ')') {
          pos_ = save;
          out = cd(a, sign * b);
          return true;
        }
      }
      (void)has_num;
    }
    pos_ = after_real;
    return true;
  }

  cd coefficient() {
    skip();
    if (peek() == '(') {
      const std::size_t open = pos_++;
      cd c;
      if (!complex_literal(c)) throw ParseError("expected complex literal", pos_);
      skip();
      if (peek() != ')') throw ParseError("unbalanced '('", open);
      ++pos_;
      return c;
    }
    cd c;
    if (!complex_literal(c)) throw ParseError("expected coefficient or '['", pos_);
    return c;
  }

  GraphPtr g_;
  std::string_view s_;
  std::size_t pos_ = 0;
};

}  // namespace

GroupAlgebraElement parse_group_algebra(GraphPtr g, std::string_view text) {
  return AlgebraParser(std::move(g), text).parse();
}

// ---- balls, traces, norm bounds ----

std::vector<RaagElement> ball(GraphPtr g, unsigned radius, std::size_t guard) {
  std::vector<Letter> letters;
  for (VertexId v = 0; v < g->size(); ++v) {
    letters.push_back({v, false});
    letters.push_back({v, true});
  }
  std::vector<RaagElement> out{RaagElement(g)};
  std::size_t level_begin = 0;
  for (unsigned k = 1; k <= radius; ++k) {
    const std::size_t level_end = out.size();
    std::unordered_set<std::string> seen;
    std::vector<RaagElement> next;
    for (std::size_t i = level_begin; i < level_end; ++i) {
      for (const Letter& x : letters) {
        std::vector<Letter> w = out[i].word();
        w.push_back(x);
        RaagElement y(g, w);
        if (y.length() != k) continue;
        if (seen.insert(y.key()).second) {
          next.push_back(std::move(y));
          if (out.size() + next.size() > guard)
            throw GuardError("ball of radius " + std::to_string(radius) + " exceeds support guard " +
                             std::to_string(guard));
        }
      }
    }
    std::sort(next.begin(), next.end());
    level_begin = level_end;
    for (auto& y : next) out.push_back(std::move(y));
  }
  return out;
}

std::vector<std::size_t> sphere_sizes(GraphPtr g, unsigned radius, std::size_t guard) {
  std::vector<std::size_t> sizes(radius + 1, 0);
  for (const auto& x : ball(std::move(g), radius, guard)) ++sizes[x.length()];
  return sizes;
}

cd group_trace(const GroupAlgebraElement& z) { return z.coefficient(RaagElement(z.graph())); }

NormEstimate regular_norm_lower(const GroupAlgebraElement& z, unsigned radius, std::size_t guard,
                                const NormOptions& opts) {
  if (radius < z.max_length())
    throw InvalidArgument("radius " + std::to_string(radius) + " is below the longest support word (" +
                          std::to_string(z.max_length()) + ")");
  const auto elems = ball(z.graph(), radius, guard);
  std::unordered_map<std::string, int> index;
  index.reserve(elems.size());
  for (std::size_t i = 0; i < elems.size(); ++i) index.emplace(elems[i].key(), static_cast<int>(i));

  std::vector<Eigen::Triplet<cd>> trip;
  trip.reserve(elems.size() * z.terms().size());
  for (std::size_t col = 0; col < elems.size(); ++col)
    for (const auto& [h, c] : z.terms()) {
      auto it = index.find((h * elems[col]).key());
      if (it != index.end()) trip.emplace_back(it->second, static_cast<int>(col), c);
    }
  const auto n = static_cast<Eigen::Index>(elems.size());
  SparseOp a(n, n);
  a.setFromTriplets(trip.begin(), trip.end());
  NormOptions o = opts;
  o.seed_index = 0;  // delta_e
  return top_singular_value(as_linear_map(a, z.is_self_adjoint()), o);
}

double moment_norm_lower(const GroupAlgebraElement& z, unsigned k, std::size_t guard) {
  if (k == 0) throw InvalidArgument("moment order k must be positive");
  const GroupAlgebraElement w = z.adjoint() * z;
  const unsigned hi = (k + 1) / 2, lo = k / 2;
  GroupAlgebraElement p_lo(z.graph()), power(z.graph());
  power.add(RaagElement(z.graph()), 1.0);
  for (unsigned j = 1; j <= hi; ++j) {
    power = power * w;
    if (power.terms().size() > guard)
      throw GuardError("moment support exceeds guard " + std::to_string(guard));
    if (j == lo) p_lo = power;
  }
  if (lo == 0) p_lo = GroupAlgebraElement::basis(RaagElement(z.graph()));
  // tau(w^hi w^lo) = sum_g w^hi(g) w^lo(g^-1)
  cd tau = 0.0;
  for (const auto& [g, c] : power.terms()) tau += c * p_lo.coefficient(g.inverse());
  return std::pow(std::max(tau.real(), 0.0), 1.0 / (2.0 * k));
}

}  // namespace raagsc
