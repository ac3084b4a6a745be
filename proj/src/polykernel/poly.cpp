#include "cubic/poly.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <sstream>
#include <unordered_map>

namespace cubic {

Monomial Monomial::from_exponents(std::span<const int> e) {
  if (e.size() > static_cast<size_t>(kMaxVars)) throw UsageError("too many variables");
  Monomial m;
  int deg = 0;
  for (size_t i = 0; i < e.size(); ++i) {
    if (e[i] < 0 || e[i] > kMaxExponent) throw UsageError("exponent out of range");
    m.bits |= static_cast<unsigned __int128>(e[i]) << (8 * (kMaxVars - 1 - i));
    deg += e[i];
  }
  if (deg > kMaxExponent) throw UsageError("total degree out of range");
  m.degree = static_cast<std::uint16_t>(deg);
  return m;
}

Monomial Monomial::with_exponent(int var, int e) const {
  Monomial m = *this;
  int shift = 8 * (kMaxVars - 1 - var);
  int old = exponent(var);
  m.bits &= ~(static_cast<unsigned __int128>(0xff) << shift);
  m.bits |= static_cast<unsigned __int128>(e) << shift;
  int deg = static_cast<int>(degree) - old + e;
  if (e < 0 || e > kMaxExponent || deg > kMaxExponent) throw UsageError("exponent out of range");
  m.degree = static_cast<std::uint16_t>(deg);
  return m;
}

bool Monomial::divides(const Monomial& other, int arity) const {
  if (degree > other.degree) return false;
  for (int i = 0; i < arity; ++i)
    if (exponent(i) > other.exponent(i)) return false;
  return true;
}

Monomial operator*(const Monomial& a, const Monomial& b) {
  int deg = a.degree + b.degree;
  if (deg > kMaxExponent) throw UsageError("total degree out of range");
  Monomial m;
  m.bits = a.bits + b.bits;
  m.degree = static_cast<std::uint16_t>(deg);
  return m;
}

Monomial operator/(const Monomial& a, const Monomial& b) {
  Monomial m;
  m.bits = a.bits - b.bits;
  m.degree = static_cast<std::uint16_t>(a.degree - b.degree);
  return m;
}

VarSet make_vars(VarNames names) {
  if (names.size() > static_cast<size_t>(kMaxVars)) throw UsageError("too many variables");
  return std::make_shared<const VarNames>(std::move(names));
}

const VarSet& xyz_vars() {
  static const VarSet v = make_vars({"x", "y", "z"});
  return v;
}

namespace {

bool same_vars(const VarSet& a, const VarSet& b) { return a == b || *a == *b; }

void sort_and_merge(std::vector<Term>& ts) {
  std::sort(ts.begin(), ts.end(), [](const Term& a, const Term& b) { return b.mono < a.mono; });
  size_t out = 0;
  for (size_t i = 0; i < ts.size();) {
    size_t j = i + 1;
    Rational c = ts[i].coeff;
    while (j < ts.size() && ts[j].mono == ts[i].mono) c += ts[j++].coeff;
    if (c != 0) {
      ts[out].mono = ts[i].mono;
      ts[out].coeff = c;
      ++out;
    }
    i = j;
  }
  ts.resize(out);
}

}  // namespace

MultiPoly::MultiPoly(VarSet vars) : vars_(std::move(vars)) {}
MultiPoly::MultiPoly() : vars_(xyz_vars()) {}

MultiPoly MultiPoly::constant(VarSet vars, const Rational& c) {
  MultiPoly p(std::move(vars));
  if (c != 0) p.terms_.push_back({Monomial{}, c});
  return p;
}

MultiPoly MultiPoly::variable(VarSet vars, int index) {
  if (index < 0 || index >= static_cast<int>(vars->size())) throw UsageError("variable index out of range");
  MultiPoly p(std::move(vars));
  p.terms_.push_back({Monomial{}.with_exponent(index, 1), Rational(1)});
  return p;
}

MultiPoly MultiPoly::variable(VarSet vars, std::string_view name) {
  MultiPoly p(vars);
  return variable(vars, p.var_index(name));
}

MultiPoly MultiPoly::monomial(VarSet vars, std::span<const int> exps, const Rational& c) {
  if (exps.size() != vars->size()) throw UsageError("exponent arity mismatch");
  MultiPoly p(std::move(vars));
  if (c != 0) p.terms_.push_back({Monomial::from_exponents(exps), c});
  return p;
}

MultiPoly MultiPoly::from_terms(VarSet vars, std::vector<Term> terms) {
  MultiPoly p(std::move(vars));
  p.terms_ = std::move(terms);
  sort_and_merge(p.terms_);
  return p;
}

int MultiPoly::var_index(std::string_view name) const {
  for (size_t i = 0; i < vars_->size(); ++i)
    if ((*vars_)[i] == name) return static_cast<int>(i);
  throw UsageError("unknown variable " + std::string(name));
}

bool MultiPoly::is_constant() const { return terms_.empty() || (terms_.size() == 1 && terms_[0].mono.degree == 0); }

int MultiPoly::total_degree() const { return terms_.empty() ? -1 : terms_.front().mono.degree; }

int MultiPoly::degree_in(int var) const {
  int d = terms_.empty() ? -1 : 0;
  for (const auto& t : terms_) d = std::max(d, t.mono.exponent(var));
  return d;
}

bool MultiPoly::is_homogeneous() const {
  for (const auto& t : terms_)
    if (t.mono.degree != terms_.front().mono.degree) return false;
  return true;
}

Rational MultiPoly::coefficient(const Monomial& m) const {
  auto it = std::lower_bound(terms_.begin(), terms_.end(), m,
                             [](const Term& t, const Monomial& k) { return k < t.mono; });
  if (it != terms_.end() && it->mono == m) return it->coeff;
  return 0;
}

Rational MultiPoly::coefficient(std::span<const int> exps) const {
  return coefficient(Monomial::from_exponents(exps));
}

const Term& MultiPoly::leading_term() const {
  if (terms_.empty()) throw InvariantViolation("leading term of zero polynomial");
  return terms_.front();
}

void MultiPoly::require_compatible(const MultiPoly& o) const {
  if (!same_vars(vars_, o.vars_)) throw UsageError("incompatible variable sets");
}

MultiPoly MultiPoly::operator-() const {
  MultiPoly r = *this;
  for (auto& t : r.terms_) t.coeff = -t.coeff;
  return r;
}

MultiPoly& MultiPoly::operator+=(const MultiPoly& o) {
  require_compatible(o);
  std::vector<Term> out;
  out.reserve(terms_.size() + o.terms_.size());
  size_t i = 0, j = 0;
  while (i < terms_.size() || j < o.terms_.size()) {
    if (j == o.terms_.size() || (i < terms_.size() && o.terms_[j].mono < terms_[i].mono)) {
      out.push_back(std::move(terms_[i++]));
    } else if (i == terms_.size() || terms_[i].mono < o.terms_[j].mono) {
      out.push_back(o.terms_[j++]);
    } else {
      Rational c = terms_[i].coeff + o.terms_[j].coeff;
      if (c != 0) out.push_back({terms_[i].mono, c});
      ++i;
      ++j;
    }
  }
  terms_ = std::move(out);
  return *this;
}

MultiPoly& MultiPoly::operator-=(const MultiPoly& o) { return *this += -o; }

MultiPoly operator*(const MultiPoly& a, const MultiPoly& b) {
  a.require_compatible(b);
  MultiPoly r(a.vars_);
  if (a.is_zero() || b.is_zero()) return r;
  if (a.terms_.size() == 1 || b.terms_.size() == 1) {
    const MultiPoly& one = a.terms_.size() == 1 ? a : b;
    const MultiPoly& many = a.terms_.size() == 1 ? b : a;
    const Term& s = one.terms_[0];
    r.terms_.reserve(many.terms_.size());
    for (const auto& t : many.terms_) r.terms_.push_back({t.mono * s.mono, t.coeff * s.coeff});
    return r;
  }
  std::unordered_map<Monomial, Rational, MonomialHash> acc;
  acc.reserve(a.terms_.size() * b.terms_.size() / 2 + 16);
  Rational prod;
  for (const auto& s : a.terms_) {
    for (const auto& t : b.terms_) {
      mpq_mul(prod.get_mpq_t(), s.coeff.get_mpq_t(), t.coeff.get_mpq_t());
      auto [it, fresh] = acc.try_emplace(s.mono * t.mono);
      if (fresh) {
        it->second = prod;
      } else {
        it->second += prod;
      }
    }
  }
  r.terms_.reserve(acc.size());
  for (auto& [m, c] : acc)
    if (c != 0) r.terms_.push_back({m, std::move(c)});
  std::sort(r.terms_.begin(), r.terms_.end(), [](const Term& x, const Term& y) { return y.mono < x.mono; });
  return r;
}

MultiPoly& MultiPoly::operator*=(const MultiPoly& o) {
  *this = *this * o;
  return *this;
}

MultiPoly MultiPoly::scaled(const Rational& c) const {
  MultiPoly r(vars_);
  if (c == 0) return r;
  r.terms_ = terms_;
  for (auto& t : r.terms_) t.coeff *= c;
  return r;
}

MultiPoly MultiPoly::pow(unsigned e) const {
  MultiPoly result = constant(vars_, 1);
  MultiPoly base = *this;
  while (e) {
    if (e & 1) result = result * base;
    e >>= 1;
    if (e) base = base * base;
  }
  return result;
}

MultiPoly MultiPoly::derivative(int var) const {
  MultiPoly r(vars_);
  for (const auto& t : terms_) {
    int e = t.mono.exponent(var);
    if (e == 0) continue;
    r.terms_.push_back({t.mono.with_exponent(var, e - 1), t.coeff * e});
  }
  sort_and_merge(r.terms_);
  return r;
}

Rational MultiPoly::evaluate(std::span<const Rational> point) const {
  if (point.size() != vars_->size()) throw UsageError("evaluation point arity mismatch");
  int n = arity();
  std::vector<std::vector<Rational>> powers(n);
  for (int i = 0; i < n; ++i) {
    int d = degree_in(i);
    powers[i].resize(std::max(d, 0) + 1);
    powers[i][0] = 1;
    for (int k = 1; k <= d; ++k) powers[i][k] = powers[i][k - 1] * point[i];
  }
  Rational sum = 0, t;
  for (const auto& term : terms_) {
    t = term.coeff;
    for (int i = 0; i < n; ++i) {
      int e = term.mono.exponent(i);
      if (e) t *= powers[i][e];
    }
    sum += t;
  }
  return sum;
}

MultiPoly MultiPoly::specialize(int var, const Rational& value) const {
  int d = degree_in(var);
  std::vector<Rational> powv(std::max(d, 0) + 1);
  if (!powv.empty()) powv[0] = 1;
  for (int k = 1; k <= d; ++k) powv[k] = powv[k - 1] * value;
  std::vector<Term> ts;
  ts.reserve(terms_.size());
  for (const auto& t : terms_) {
    int e = t.mono.exponent(var);
    ts.push_back({t.mono.with_exponent(var, 0), t.coeff * powv[e]});
  }
  return from_terms(vars_, std::move(ts));
}

std::vector<MultiPoly> MultiPoly::coefficients_in(int var) const {
  int d = degree_in(var);
  std::vector<std::vector<Term>> buckets(std::max(d, 0) + 1);
  for (const auto& t : terms_) {
    int e = t.mono.exponent(var);
    buckets[e].push_back({t.mono.with_exponent(var, 0), t.coeff});
  }
  std::vector<MultiPoly> out;
  out.reserve(buckets.size());
  for (auto& b : buckets) out.push_back(from_terms(vars_, std::move(b)));
  if (d < 0) out.clear();
  return out;
}

MultiPoly MultiPoly::rebase(const VarSet& target) const {
  std::vector<int> map(arity());
  MultiPoly probe(target);
  for (int i = 0; i < arity(); ++i) {
    bool used = false;
    for (const auto& t : terms_) used = used || t.mono.exponent(i) > 0;
    map[i] = used ? probe.var_index((*vars_)[i]) : -1;
  }
  std::vector<Term> ts;
  ts.reserve(terms_.size());
  for (const auto& t : terms_) {
    Monomial m;
    for (int i = 0; i < arity(); ++i)
      if (int e = t.mono.exponent(i)) m = m.with_exponent(map[i], e);
    ts.push_back({m, t.coeff});
  }
  return from_terms(target, std::move(ts));
}

bool MultiPoly::is_integral() const {
  for (const auto& t : terms_)
    if (t.coeff.get_den() != 1) return false;
  return true;
}

Rational MultiPoly::content() const {
  if (terms_.empty()) return 1;
  Integer g = 0, l = 1;
  for (const auto& t : terms_) {
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), t.coeff.get_num_mpz_t());
    mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), t.coeff.get_den_mpz_t());
  }
  Rational c(g, l);
  c.canonicalize();
  return c;
}

MultiPoly MultiPoly::primitive_part() const {
  if (terms_.empty()) return *this;
  return scaled(1 / content());
}

std::string MultiPoly::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& t : terms_) {
    if (!first) os << " + ";
    first = false;
    os << t.coeff.get_str();
    for (int i = 0; i < arity(); ++i) {
      int e = t.mono.exponent(i);
      if (e == 0) continue;
      os << '*' << (*vars_)[i];
      if (e > 1) os << '^' << e;
    }
  }
  return os.str();
}

MultiPoly MultiPoly::parse(std::string_view text, VarSet vars) {
  MultiPoly probe(vars);
  std::vector<Term> ts;
  size_t pos = 0;
  auto skip_ws = [&] {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  };
  auto fail = [&](const std::string& msg) -> void {
    throw UsageError("polynomial parse error at position " + std::to_string(pos) + ": " + msg);
  };
  skip_ws();
  if (text.substr(pos) == "0") return probe;
  bool negate_next = false;
  while (true) {
    skip_ws();
    Rational coeff = 1;
    std::vector<int> exps(vars->size(), 0);
    bool have_factor = false;
    while (true) {
      skip_ws();
      if (pos >= text.size()) fail("unexpected end");
      char c = text[pos];
      if (std::isdigit(static_cast<unsigned char>(c)) || c == '-') {
        size_t start = pos;
        if (c == '-') ++pos;
        skip_ws();
        if (pos < text.size() && std::isalpha(static_cast<unsigned char>(text[pos]))) {
          coeff = -coeff;
          continue;
        }
        while (pos < text.size() && (std::isdigit(static_cast<unsigned char>(text[pos])) || text[pos] == '/')) ++pos;
        coeff *= parse_rational(text.substr(start, pos - start));
      } else if (std::isalpha(static_cast<unsigned char>(c))) {
        size_t start = pos;
        while (pos < text.size() && (std::isalnum(static_cast<unsigned char>(text[pos])) || text[pos] == '_')) ++pos;
        int idx = -1;
        std::string name(text.substr(start, pos - start));
        for (size_t i = 0; i < vars->size(); ++i)
          if ((*vars)[i] == name) idx = static_cast<int>(i);
        if (idx < 0) {
          pos = start;
          fail("unknown variable '" + name + "'");
        }
        int e = 1;
        skip_ws();
        if (pos < text.size() && text[pos] == '^') {
          ++pos;
          size_t es = pos;
          while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
          if (es == pos) fail("missing exponent");
          e = std::stoi(std::string(text.substr(es, pos - es)));
        }
        exps[idx] += e;
      } else {
        fail(std::string("unexpected character '") + c + "'");
      }
      have_factor = true;
      skip_ws();
      if (pos < text.size() && text[pos] == '*') {
        ++pos;
        continue;
      }
      break;
    }
    if (!have_factor) fail("empty term");
    if (negate_next) coeff = -coeff;
    ts.push_back({Monomial::from_exponents(exps), coeff});
    skip_ws();
    if (pos >= text.size()) break;
    if (text[pos] == '+') {
      negate_next = false;
    } else if (text[pos] == '-') {
      negate_next = true;
    } else {
      fail(std::string("expected '+' but found '") + text[pos] + "'");
    }
    ++pos;
  }
  return from_terms(vars, std::move(ts));
}

bool operator==(const MultiPoly& a, const MultiPoly& b) {
  if (!same_vars(a.vars_, b.vars_)) return false;
  if (a.terms_.size() != b.terms_.size()) return false;
  for (size_t i = 0; i < a.terms_.size(); ++i)
    if (!(a.terms_[i].mono == b.terms_[i].mono) || a.terms_[i].coeff != b.terms_[i].coeff) return false;
  return true;
}

MultiPoly arith(const MultiPoly& p, const MultiPoly& q, ArithOp op) {
  switch (op) {
    case ArithOp::add:
      return p + q;
    case ArithOp::sub:
      return p - q;
    case ArithOp::mul:
      return p * q;
    case ArithOp::scale:
      if (!q.is_constant()) throw UsageError("scale requires a constant");
      return p.scaled(q.is_zero() ? Rational(0) : q.terms()[0].coeff);
  }
  return p;
}

MultiPoly partial_derivative(const MultiPoly& p, std::string_view var) { return p.derivative(p.var_index(var)); }

MultiPoly determinant(const PolyMatrix& m) {
  const size_t n = m.size();
  if (n == 0) throw UsageError("empty matrix");
  for (const auto& row : m)
    if (row.size() != n) throw UsageError("matrix is not square");
  if (n > 20) throw UsageError("matrix too large");
  const VarSet& vars = m[0][0].vars();
  // Laplace expansion along rows, memoized on the set of used columns.
  std::vector<MultiPoly> level{MultiPoly::constant(vars, 1)};
  std::vector<std::uint32_t> masks{0};
  for (size_t row = 0; row < n; ++row) {
    std::map<std::uint32_t, MultiPoly> next;
    for (size_t k = 0; k < masks.size(); ++k) {
      if (level[k].is_zero()) continue;
      for (size_t c = 0; c < n; ++c) {
        std::uint32_t bit = 1u << c;
        if (masks[k] & bit) continue;
        if (m[row][c].is_zero()) continue;
        int inversions = __builtin_popcount(masks[k] >> (c + 1));
        MultiPoly term = level[k] * m[row][c];
        if (inversions & 1) term = -term;
        auto [it, fresh] = next.try_emplace(masks[k] | bit, vars);
        it->second += term;
      }
    }
    level.clear();
    masks.clear();
    for (auto& [mask, poly] : next) {
      masks.push_back(mask);
      level.push_back(std::move(poly));
    }
    if (level.empty()) return MultiPoly(vars);
  }
  return level[0];
}

MultiPoly det3(const PolyMatrix& m) {
  if (m.size() != 3) throw UsageError("det3 needs a 3x3 matrix");
  return determinant(m);
}

Matrix3 identity3() {
  Matrix3 m;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) m[i][j] = i == j ? 1 : 0;
  return m;
}

Matrix3 operator*(const Matrix3& a, const Matrix3& b) {
  Matrix3 r;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      r[i][j] = 0;
      for (int k = 0; k < 3; ++k) r[i][j] += a[i][k] * b[k][j];
    }
  return r;
}

Rational det(const Matrix3& m) {
  return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
         m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
}

Matrix3 inverse(const Matrix3& m) {
  Rational d = det(m);
  if (d == 0) throw UsageError("singular matrix");
  Matrix3 r;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      int i1 = (j + 1) % 3, i2 = (j + 2) % 3, j1 = (i + 1) % 3, j2 = (i + 2) % 3;
      r[i][j] = (m[i1][j1] * m[i2][j2] - m[i1][j2] * m[i2][j1]) / d;
    }
  return r;
}

MultiPoly substitute_linear(const MultiPoly& p, const Matrix3& m) {
  if (p.arity() < 3) throw UsageError("substitute_linear needs variables x, y, z");
  const VarSet& vars = p.vars();
  // variable i maps to sum_k var_k * m[k][i]
  std::array<MultiPoly, 3> images{MultiPoly(vars), MultiPoly(vars), MultiPoly(vars)};
  for (int i = 0; i < 3; ++i)
    for (int k = 0; k < 3; ++k) images[i] += MultiPoly::variable(vars, k).scaled(m[k][i]);
  std::array<std::vector<MultiPoly>, 3> powers;
  for (int i = 0; i < 3; ++i) {
    int d = p.degree_in(i);
    powers[i].push_back(MultiPoly::constant(vars, 1));
    for (int k = 1; k <= d; ++k) powers[i].push_back(powers[i].back() * images[i]);
  }
  MultiPoly out(vars);
  for (const auto& t : p.terms()) {
    Monomial rest = t.mono.with_exponent(0, 0).with_exponent(1, 0).with_exponent(2, 0);
    std::vector<Term> one{{rest, t.coeff}};
    MultiPoly term = MultiPoly::from_terms(vars, std::move(one));
    for (int i = 0; i < 3; ++i) {
      int e = t.mono.exponent(i);
      if (e) term = term * powers[i][e];
    }
    out += term;
  }
  return out;
}

DivisionResult divide(const MultiPoly& p, const MultiPoly& d) {
  if (d.is_zero()) throw UsageError("division by zero polynomial");
  const VarSet& vars = p.vars();
  if (!(*vars == *d.vars())) throw UsageError("incompatible variable sets");
  const Term& lt = d.leading_term();
  const int n = p.arity();
  std::map<Monomial, Rational> work;
  for (const auto& t : p.terms()) work.emplace(t.mono, t.coeff);
  std::vector<Term> quot, rem;
  while (!work.empty()) {
    auto it = std::prev(work.end());
    Monomial m = it->first;
    Rational c = it->second;
    work.erase(it);
    if (lt.mono.divides(m, n)) {
      Monomial qm = m / lt.mono;
      Rational qc = c / lt.coeff;
      quot.push_back({qm, qc});
      for (size_t k = 1; k < d.terms().size(); ++k) {
        const Term& dt = d.terms()[k];
        Monomial pm = qm * dt.mono;
        auto [jt, fresh] = work.try_emplace(pm, 0);
        jt->second -= qc * dt.coeff;
        if (jt->second == 0) work.erase(jt);
      }
    } else {
      rem.push_back({m, c});
    }
  }
  return {MultiPoly::from_terms(vars, std::move(quot)), MultiPoly::from_terms(vars, std::move(rem))};
}

MultiPoly reduce_mod_form(const MultiPoly& p, const MultiPoly& f) {
  if (!f.is_homogeneous()) throw UsageError("reduce_mod_form needs a homogeneous divisor");
  return divide(p, f).remainder;
}

MultiPoly divide_exact(const MultiPoly& p, const MultiPoly& d) {
  DivisionResult r = divide(p, d);
  if (!r.remainder.is_zero()) throw InvariantViolation("inexact polynomial division");
  return r.quotient;
}

MultiPoly resultant_eliminate(const MultiPoly& p, const MultiPoly& q, int var) {
  int m = p.degree_in(var), n = q.degree_in(var);
  if (m <= 0 || n <= 0) throw UsageError("resultant needs positive degree in the eliminated variable");
  std::vector<MultiPoly> pc = p.coefficients_in(var), qc = q.coefficients_in(var);
  const VarSet& vars = p.vars();
  const int size = m + n;
  PolyMatrix s(size, std::vector<MultiPoly>(size, MultiPoly(vars)));
  for (int r = 0; r < n; ++r)
    for (int k = 0; k <= m; ++k) s[r][r + k] = pc[m - k];
  for (int r = 0; r < m; ++r)
    for (int k = 0; k <= n; ++k) s[n + r][r + k] = qc[n - k];
  return determinant(s);
}

MultiPoly resultant_eliminate(const MultiPoly& p, const MultiPoly& q, std::string_view var) {
  return resultant_eliminate(p, q, p.var_index(var));
}

MultiPoly poly_sqrt(const MultiPoly& p) {
  const VarSet& vars = p.vars();
  MultiPoly root(vars);
  if (p.is_zero()) return root;
  auto not_square = [] { return InvariantViolation("polynomial is not a perfect square"); };
  const Term& lt = p.leading_term();
  std::vector<int> half(p.arity());
  for (int i = 0; i < p.arity(); ++i) {
    if (lt.mono.exponent(i) % 2) throw not_square();
    half[i] = lt.mono.exponent(i) / 2;
  }
  if (lt.coeff < 0 || !mpz_perfect_square_p(lt.coeff.get_num_mpz_t()) ||
      !mpz_perfect_square_p(lt.coeff.get_den_mpz_t()))
    throw not_square();
  Integer rn, rd;
  mpz_sqrt(rn.get_mpz_t(), lt.coeff.get_num_mpz_t());
  mpz_sqrt(rd.get_mpz_t(), lt.coeff.get_den_mpz_t());
  const Term lead{Monomial::from_exponents(half), Rational(rn, rd)};
  root = MultiPoly::from_terms(vars, {lead});
  MultiPoly rest = p - root * root;
  while (!rest.is_zero()) {
    const Term& t = rest.leading_term();
    if (!lead.mono.divides(t.mono, p.arity())) throw not_square();
    Monomial m = t.mono / lead.mono;
    if (!(m < lead.mono)) throw not_square();
    if (!root.terms().empty() && !(m < root.terms().back().mono)) throw not_square();
    MultiPoly next = MultiPoly::from_terms(vars, {Term{m, t.coeff / (2 * lead.coeff)}});
    rest -= (root.scaled(2) + next) * next;
    root += next;
  }
  return root;
}

}  // namespace cubic
