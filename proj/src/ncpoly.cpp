#include "raagsc/ncpoly.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <set>

#include <json.hpp>

namespace raagsc {

NcPolynomial NcPolynomial::constant(cd c) {
  NcPolynomial p;
  p.add({}, c);
  return p;
}

NcPolynomial NcPolynomial::variable(Symbol s) {
  NcPolynomial p;
  p.add({s}, 1.0);
  return p;
}

void NcPolynomial::add(const Monomial& m, cd c) {
  if (c == cd(0.0)) return;
  auto [it, inserted] = terms_.try_emplace(m, c);
  if (!inserted) it->second += c;
  if (it->second == cd(0.0)) terms_.erase(it);
}

cd NcPolynomial::coefficient(const Monomial& m) const {
  auto it = terms_.find(m);
  return it == terms_.end() ? cd(0.0) : it->second;
}

std::size_t NcPolynomial::degree() const { return terms_.empty() ? 0 : terms_.rbegin()->first.size(); }

bool NcPolynomial::has_star() const {
  for (const auto& [m, c] : terms_)
    for (const Symbol& s : m)
      if (s.star) return true;
  return false;
}

std::vector<VertexId> NcPolynomial::vertices() const {
  std::set<VertexId> vs;
  for (const auto& [m, c] : terms_)
    for (const Symbol& s : m) vs.insert(s.vertex);
  return {vs.begin(), vs.end()};
}

NcPolynomial operator+(const NcPolynomial& a, const NcPolynomial& b) {
  NcPolynomial out = a;
  for (const auto& [m, c] : b.terms_) out.add(m, c);
  return out;
}

NcPolynomial operator-(const NcPolynomial& a, const NcPolynomial& b) { return a + cd(-1.0) * b; }

NcPolynomial operator*(const NcPolynomial& a, const NcPolynomial& b) {
  NcPolynomial out;
  for (const auto& [m1, c1] : a.terms_)
    for (const auto& [m2, c2] : b.terms_) {
      Monomial m = m1;
      m.insert(m.end(), m2.begin(), m2.end());
      out.add(m, c1 * c2);
    }
  return out;
}

NcPolynomial operator*(cd c, const NcPolynomial& a) {
  NcPolynomial out;
  for (const auto& [m, d] : a.terms_) out.add(m, c * d);
  return out;
}

NcPolynomial adjoint(const NcPolynomial& p) {
  NcPolynomial out;
  for (const auto& [m, c] : p.terms()) {
    Monomial r;
    r.reserve(m.size());
    for (auto it = m.rbegin(); it != m.rend(); ++it) r.push_back(it->adjoint());
    out.add(r, std::conj(c));
  }
  return out;
}

NcPolynomial poly_multiply(const NcPolynomial& p, const NcPolynomial& q) { return p * q; }

double l1_norm(const NcPolynomial& p) {
  double s = 0.0;
  for (const auto& [m, c] : p.terms()) s += std::abs(c);
  return s;
}

NcPolynomial hermitian_substitution(const NcPolynomial& p) {
  if (p.has_star()) throw InvalidArgument("hermitian_substitution expects unstarred symbols only");
  NcPolynomial out;
  for (const auto& [m, c] : p.terms()) {
    const std::size_t d = m.size();
    for (std::size_t mask = 0; mask < (std::size_t{1} << d); ++mask) {
      Monomial q = m;
      for (std::size_t i = 0; i < d; ++i)
        if (mask >> (d - 1 - i) & 1) q[i].star = true;
      out.add(q, c);
    }
  }
  return out;
}

namespace {

bool plain_name(const std::string& s) {
  return std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isalnum(c) || c == '_'; });
}

std::string symbol_text(const SimpleGraph& g, Symbol s) {
  const std::string& n = g.name(s.vertex);
  return (plain_name(n) ? "X_" + n : "X_{" + n + "}") + (s.star ? "*" : "");
}

class PolyParser {
 public:
  PolyParser(const SimpleGraph& g, std::string_view s) : g_(g), s_(s) {}

  NcPolynomial parse() {
    skip();
    if (pos_ == s_.size()) throw ParseError("empty polynomial", pos_);
    NcPolynomial p = expr();
    skip();
    if (pos_ != s_.size()) throw ParseError(std::string("unexpected character '") + s_[pos_] + "'", pos_);
    return p;
  }

 private:
  char peek() const { return pos_ < s_.size() ? s_[pos_] : '\0'; }
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool starts_primary(char c) const {
    return c == 'X' || c == 'x' || c == '(' || c == 'i' || c == '.' || std::isdigit(static_cast<unsigned char>(c));
  }

  NcPolynomial expr() {
    NcPolynomial p = term();
    while (true) {
      skip();
      const char c = peek();
      if (c != '+' && c != '-') return p;
      ++pos_;
      NcPolynomial q = term();
      p = c == '+' ? p + q : p - q;
    }
  }

  NcPolynomial term() {
    NcPolynomial p = unary();
    while (true) {
      skip();
      if (peek() != '*') return p;
      ++pos_;
      p = p * unary();
    }
  }

  NcPolynomial unary() {
    skip();
    if (peek() == '-') {
      ++pos_;
      return cd(-1.0) * unary();
    }
    if (peek() == '+') {
      ++pos_;
      return unary();
    }
    return postfix(primary());
  }

  // A `*` not followed by a factor is an adjoint; a signed right factor needs parentheses.
  NcPolynomial postfix(NcPolynomial p) {
    while (true) {
      const std::size_t save = pos_;
      skip();
      if (peek() != '*') {
        pos_ = save;
        return p;
      }
      std::size_t look = pos_ + 1;
      while (look < s_.size() && std::isspace(static_cast<unsigned char>(s_[look]))) ++look;
      const char next = look < s_.size() ? s_[look] : '\0';
      if (starts_primary(next)) {
        pos_ = save;
        return p;
      }
      ++pos_;
      p = adjoint(p);
    }
  }

  NcPolynomial primary() {
    skip();
    const char c = peek();
    if (c == '(') {
      const std::size_t open = pos_++;
      NcPolynomial p = expr();
      skip();
      if (peek() != ')') throw ParseError("unbalanced '('", open);
      ++pos_;
      return p;
    }
    if (c == 'X' || c == 'x') return variable();
    if (c == 'i') {
      ++pos_;
      return NcPolynomial::constant(cd(0, 1));
    }
    double v = 0;
    const char* b = s_.data() + pos_;
    auto [p, ec] = std::from_chars(b, s_.data() + s_.size(), v);
    if (ec != std::errc() || p == b) throw ParseError("expected a variable, number or '('", pos_);
    pos_ += static_cast<std::size_t>(p - b);
    if (peek() == 'i') {
      ++pos_;
      return NcPolynomial::constant(cd(0, v));
    }
    return NcPolynomial::constant(v);
  }

  NcPolynomial variable() {
    const std::size_t start = pos_;
    ++pos_;
    if (peek() != '_') throw ParseError("expected '_' after variable prefix", pos_);
    ++pos_;
    std::string name;
    if (peek() == '{') {
      const std::size_t close = s_.find('}', pos_);
      if (close == std::string_view::npos) throw ParseError("unterminated '{'", pos_);
      name = std::string(s_.substr(pos_ + 1, close - pos_ - 1));
      pos_ = close + 1;
    } else {
      while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_'))
        name += s_[pos_++];
    }
    auto v = g_.find(name);
    if (!v) throw ParseError("unknown vertex '" + name + "'", start);
    return NcPolynomial::variable({*v, false});
  }

  const SimpleGraph& g_;
  std::string_view s_;
  std::size_t pos_ = 0;
};

Symbol parse_symbol(const SimpleGraph& g, const std::string& text) {
  NcPolynomial p = PolyParser(g, text).parse();
  if (p.terms().size() != 1 || p.terms().begin()->first.size() != 1 || p.terms().begin()->second != cd(1.0))
    throw ParseError("'" + text + "' is not a single symbol", 0);
  return p.terms().begin()->first.front();
}

}  // namespace

NcPolynomial parse_poly(const SimpleGraph& g, std::string_view text) { return PolyParser(g, text).parse(); }

std::string poly_to_string(const SimpleGraph& g, const NcPolynomial& p) {
  if (p.is_zero()) return "0";
  std::string s;
  for (const auto& [m, c] : p.terms()) {
    if (!s.empty()) s += " + ";
    s += format_complex(c);
    for (const Symbol& sym : m) s += " * " + symbol_text(g, sym);
  }
  return s;
}

std::string poly_to_json(const SimpleGraph& g, const NcPolynomial& p) {
  nlohmann::json doc = nlohmann::json::array();
  for (const auto& [m, c] : p.terms()) {
    nlohmann::json mono = nlohmann::json::array();
    for (const Symbol& s : m) mono.push_back(symbol_text(g, s));
    doc.push_back({{"monomial", mono}, {"coeff", {c.real(), c.imag()}}});
  }
  return doc.dump();
}

NcPolynomial poly_from_json(const SimpleGraph& g, std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("malformed polynomial JSON: ") + e.what(), e.byte);
  }
  if (!doc.is_array()) throw ParseError("polynomial JSON must be an array", 0);
  NcPolynomial p;
  for (const auto& t : doc) {
    if (!t.is_object() || !t.contains("monomial") || !t.contains("coeff") || !t["coeff"].is_array() ||
        t["coeff"].size() != 2)
      throw ParseError("polynomial term needs 'monomial' and 'coeff' [re, im]", 0);
    Monomial m;
    for (const auto& s : t["monomial"]) m.push_back(parse_symbol(g, s.get<std::string>()));
    p.add(m, cd(t["coeff"][0].get<double>(), t["coeff"][1].get<double>()));
  }
  return p;
}

}  // namespace raagsc
