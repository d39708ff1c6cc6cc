#include "ktg/laurent.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace ktg {

RingPtr make_ring(std::vector<std::string> vars) {
  auto r = std::make_shared<Ring>();
  r->vars = std::move(vars);
  return r;
}

static int64_t checked_add(int64_t a, int64_t b) {
  int64_t r;
  if (__builtin_add_overflow(a, b, &r)) throw OverflowError("coefficient overflow in +");
  return r;
}

static int64_t checked_mul(int64_t a, int64_t b) {
  int64_t r;
  if (__builtin_mul_overflow(a, b, &r)) throw OverflowError("coefficient overflow in *");
  return r;
}

Laurent Laurent::constant(int64_t c, RingPtr ring) {
  Laurent p(std::move(ring));
  if (c != 0) p.terms_[Exps(p.ring_->vars.size(), 0)] = c;
  return p;
}

Laurent Laurent::monomial(int64_t c, Exps e, RingPtr ring) {
  Laurent p(std::move(ring));
  if (e.size() != p.ring_->vars.size()) throw RingMismatch("exponent arity mismatch");
  if (c != 0) p.terms_[std::move(e)] = c;
  return p;
}

Laurent Laurent::variable(const std::string& name, RingPtr ring, int32_t exp) {
  auto it = std::find(ring->vars.begin(), ring->vars.end(), name);
  if (it == ring->vars.end()) throw RingMismatch("unknown ring variable: " + name);
  Exps e(ring->vars.size(), 0);
  e[static_cast<size_t>(it - ring->vars.begin())] = exp;
  return monomial(1, std::move(e), std::move(ring));
}

bool Laurent::is_one() const {
  if (terms_.size() != 1) return false;
  const auto& [e, c] = *terms_.begin();
  return c == 1 && std::all_of(e.begin(), e.end(), [](int32_t x) { return x == 0; });
}

void Laurent::check_ring(const Laurent& o) const {
  if (!(*ring_ == *o.ring_)) throw RingMismatch("coefficient ring mismatch");
}

void Laurent::set(const Exps& e, int64_t c) {
  if (c == 0)
    terms_.erase(e);
  else
    terms_[e] = c;
}

Laurent Laurent::operator+(const Laurent& o) const {
  check_ring(o);
  Laurent r = *this;
  for (const auto& [e, c] : o.terms_) {
    auto it = r.terms_.find(e);
    int64_t v = (it == r.terms_.end()) ? c : checked_add(it->second, c);
    r.set(e, v);
  }
  return r;
}

Laurent Laurent::operator-() const {
  Laurent r = *this;
  for (auto& [e, c] : r.terms_) c = -c;
  return r;
}

Laurent Laurent::operator-(const Laurent& o) const { return *this + (-o); }

Laurent Laurent::operator*(const Laurent& o) const {
  check_ring(o);
  Laurent r(ring_);
  for (const auto& [ea, ca] : terms_) {
    for (const auto& [eb, cb] : o.terms_) {
      Exps e(ea.size());
      for (size_t i = 0; i < e.size(); ++i) e[i] = ea[i] + eb[i];
      auto it = r.terms_.find(e);
      int64_t v = checked_mul(ca, cb);
      if (it != r.terms_.end()) v = checked_add(it->second, v);
      r.set(e, v);
    }
  }
  return r;
}

bool Laurent::operator==(const Laurent& o) const {
  return *ring_ == *o.ring_ && terms_ == o.terms_;
}

// Exact division. Monomials are Laurent units, so shift both operands to
// plain polynomials (per-variable minimum exponent 0) and run leading-term
// elimination in lex order, which is a well-order on shifted exponents.
bool Laurent::try_divide(const Laurent& o, Laurent& quot) const {
  check_ring(o);
  if (o.is_zero()) return false;
  if (is_zero()) {
    quot = Laurent(ring_);
    return true;
  }
  size_t nv = ring_->vars.size();
  auto min_exps = [nv](const Laurent& p) {
    Exps m(nv, 0);
    bool first = true;
    for (const auto& [e, c] : p.terms_) {
      for (size_t i = 0; i < nv; ++i) m[i] = first ? e[i] : std::min(m[i], e[i]);
      first = false;
    }
    return m;
  };
  auto shifted = [nv](const Laurent& p, const Exps& m) {
    Laurent r(p.ring_);
    for (const auto& [e, c] : p.terms_) {
      Exps s(nv);
      for (size_t i = 0; i < nv; ++i) s[i] = e[i] - m[i];
      r.terms_[s] = c;
    }
    return r;
  };
  Exps pmin = min_exps(*this), omin = min_exps(o);
  Laurent rem = shifted(*this, pmin);
  Laurent div = shifted(o, omin);
  Laurent q(ring_);
  const auto& [de, dc] = *div.terms_.begin();
  while (!rem.is_zero()) {
    const auto& [re, rc] = *rem.terms_.begin();
    if (rc % dc != 0) return false;
    Exps e(nv);
    for (size_t i = 0; i < nv; ++i) {
      e[i] = re[i] - de[i];
      if (e[i] < 0) return false;
    }
    Laurent t = Laurent::monomial(rc / dc, e, ring_);
    q = q + t;
    rem = rem - t * div;
  }
  Exps shift(nv);
  for (size_t i = 0; i < nv; ++i) shift[i] = pmin[i] - omin[i];
  quot = q * Laurent::monomial(1, shift, ring_);
  return true;
}

std::string Laurent::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [e, c] : terms_) {
    int64_t mag = c < 0 ? -c : c;
    if (first) {
      if (c < 0) os << "-";
      first = false;
    } else {
      os << (c < 0 ? " - " : " + ");
    }
    std::string mono;
    for (size_t i = 0; i < e.size(); ++i) {
      if (e[i] == 0) continue;
      if (!mono.empty()) mono += "*";
      mono += ring_->vars[i];
      if (e[i] != 1) mono += "^" + std::to_string(e[i]);
    }
    if (mono.empty())
      os << mag;
    else if (mag == 1)
      os << mono;
    else
      os << mag << "*" << mono;
  }
  return os.str();
}

namespace {

struct Cursor {
  const std::string& s;
  size_t i = 0;
  void skip_ws() {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
  }
  bool eof() {
    skip_ws();
    return i >= s.size();
  }
  char peek() {
    skip_ws();
    return i < s.size() ? s[i] : '\0';
  }
};

int64_t parse_int(Cursor& c) {
  c.skip_ws();
  bool neg = false;
  if (c.i < c.s.size() && (c.s[c.i] == '-' || c.s[c.i] == '+')) {
    neg = c.s[c.i] == '-';
    ++c.i;
  }
  if (c.i >= c.s.size() || !std::isdigit(static_cast<unsigned char>(c.s[c.i])))
    throw ParseError("expected integer in coefficient: " + c.s);
  int64_t v = 0;
  while (c.i < c.s.size() && std::isdigit(static_cast<unsigned char>(c.s[c.i]))) {
    v = checked_mul(v, 10);
    v = checked_add(v, c.s[c.i] - '0');
    ++c.i;
  }
  return neg ? -v : v;
}

}  // namespace

// Grammar: term (('+'|'-') term)*
// term: [sign] [int] ['*']? (var ['^' int])* with '*' or whitespace between factors.
Laurent Laurent::parse(const std::string& text, RingPtr ring) {
  Cursor c{text};
  Laurent result(ring);
  bool first_term = true;
  while (!c.eof()) {
    int sign = 1;
    char p = c.peek();
    if (p == '+' || p == '-') {
      sign = p == '-' ? -1 : 1;
      ++c.i;
    } else if (!first_term) {
      throw ParseError("expected '+' or '-' between terms: " + text);
    }
    first_term = false;
    int64_t coef = 1;
    bool saw_factor = false;
    c.skip_ws();
    if (c.i < c.s.size() && std::isdigit(static_cast<unsigned char>(c.s[c.i]))) {
      coef = parse_int(c);
      saw_factor = true;
    }
    Exps e(ring->vars.size(), 0);
    for (;;) {
      c.skip_ws();
      if (c.i < c.s.size() && c.s[c.i] == '*') {
        ++c.i;
        c.skip_ws();
      }
      if (c.i >= c.s.size() || !std::isalpha(static_cast<unsigned char>(c.s[c.i]))) break;
      size_t start = c.i;
      while (c.i < c.s.size() &&
             (std::isalnum(static_cast<unsigned char>(c.s[c.i])) || c.s[c.i] == '_'))
        ++c.i;
      std::string name = text.substr(start, c.i - start);
      auto it = std::find(ring->vars.begin(), ring->vars.end(), name);
      if (it == ring->vars.end()) throw ParseError("unknown ring variable: " + name);
      int64_t exp = 1;
      if (c.i < c.s.size() && c.s[c.i] == '^') {
        ++c.i;
        exp = parse_int(c);
      }
      e[static_cast<size_t>(it - ring->vars.begin())] += static_cast<int32_t>(exp);
      saw_factor = true;
    }
    if (!saw_factor) throw ParseError("empty term in coefficient: " + text);
    result = result + Laurent::monomial(sign * coef, e, ring);
  }
  if (first_term) throw ParseError("empty coefficient");
  return result;
}

}  // namespace ktg
