#include "cubic/forms.hpp"

#include <algorithm>
#include <sstream>

#include "cubic/compiled.hpp"

namespace cubic {

TernaryCubicForm TernaryCubicForm::from_ints(const IntCoeffs& c) {
  std::array<Rational, 10> q;
  for (int i = 0; i < 10; ++i) q[i] = Rational(static_cast<long>(c[i]));
  return TernaryCubicForm(q);
}

TernaryCubicForm TernaryCubicForm::from_poly(const MultiPoly& p) {
  std::array<Rational, 10> c;
  for (const auto& t : p.terms()) {
    std::array<int, 3> e{t.mono.exponent(0), t.mono.exponent(1), t.mono.exponent(2)};
    if (t.mono.degree != 3 || e[0] + e[1] + e[2] != 3) throw UsageError("not a ternary cubic form");
    c[cubic_index(e[0], e[1], e[2])] = t.coeff;
  }
  return TernaryCubicForm(c);
}

TernaryCubicForm TernaryCubicForm::parse(std::string_view text) {
  std::array<Rational, 10> c;
  size_t pos = 0;
  for (int i = 0; i < 10; ++i) {
    size_t end = text.find(',', pos);
    if (i < 9 && end == std::string_view::npos)
      throw UsageError("form needs 10 comma-separated coefficients, found " + std::to_string(i + 1) +
                       " (position " + std::to_string(text.size()) + ")");
    if (i == 9) {
      if (end != std::string_view::npos)
        throw UsageError("form has more than 10 coefficients (position " + std::to_string(end) + ")");
      end = text.size();
    }
    try {
      c[i] = parse_rational(text.substr(pos, end - pos));
    } catch (const UsageError& e) {
      throw UsageError("coefficient " + std::to_string(i + 1) + " starting at position " + std::to_string(pos) +
                       ": " + e.what());
    }
    pos = end + 1;
  }
  return TernaryCubicForm(c);
}

bool TernaryCubicForm::is_zero() const {
  return std::all_of(c_.begin(), c_.end(), [](const Rational& q) { return q == 0; });
}

bool TernaryCubicForm::is_integral() const {
  return std::all_of(c_.begin(), c_.end(), [](const Rational& q) { return q.get_den() == 1; });
}

std::optional<IntCoeffs> TernaryCubicForm::to_ints() const {
  IntCoeffs r;
  for (int i = 0; i < 10; ++i) {
    if (c_[i].get_den() != 1 || !fits_int64(c_[i].get_num())) return std::nullopt;
    r[i] = c_[i].get_num().get_si();
  }
  return r;
}

MultiPoly TernaryCubicForm::to_poly(const VarSet& vars) const {
  std::vector<Term> ts;
  for (int i = 0; i < 10; ++i) {
    if (c_[i] == 0) continue;
    std::vector<int> e(vars->size(), 0);
    for (int k = 0; k < 3; ++k) e[k] = kCubicExponents[i][k];
    ts.push_back({Monomial::from_exponents(e), c_[i]});
  }
  return MultiPoly::from_terms(vars, std::move(ts));
}

Rational TernaryCubicForm::evaluate(const Rational& x, const Rational& y, const Rational& z) const {
  const Rational x2 = x * x, y2 = y * y, z2 = z * z;
  return c_[0] * x2 * x + c_[1] * x2 * y + c_[2] * x2 * z + c_[3] * x * y2 + c_[4] * x * y * z + c_[5] * x * z2 +
         c_[6] * y2 * y + c_[7] * y2 * z + c_[8] * y * z2 + c_[9] * z2 * z;
}

std::array<Rational, 3> TernaryCubicForm::gradient(const Rational& x, const Rational& y, const Rational& z) const {
  const Rational x2 = x * x, y2 = y * y, z2 = z * z;
  Rational fx = 3 * c_[0] * x2 + 2 * c_[1] * x * y + 2 * c_[2] * x * z + c_[3] * y2 + c_[4] * y * z + c_[5] * z2;
  Rational fy = c_[1] * x2 + 2 * c_[3] * x * y + c_[4] * x * z + 3 * c_[6] * y2 + 2 * c_[7] * y * z + c_[8] * z2;
  Rational fz = c_[2] * x2 + c_[4] * x * y + 2 * c_[5] * x * z + c_[7] * y2 + 2 * c_[8] * y * z + 3 * c_[9] * z2;
  return {fx, fy, fz};
}

TernaryCubicForm TernaryCubicForm::operator-() const { return scaled(-1); }

TernaryCubicForm TernaryCubicForm::scaled(const Rational& s) const {
  std::array<Rational, 10> c;
  for (int i = 0; i < 10; ++i) c[i] = c_[i] * s;
  return TernaryCubicForm(c);
}

TernaryCubicForm TernaryCubicForm::primitive() const {
  if (is_zero()) return *this;
  Integer g = 0, l = 1;
  for (const auto& q : c_) {
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), q.get_num_mpz_t());
    mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), q.get_den_mpz_t());
  }
  Rational s(l, g);
  s.canonicalize();
  return scaled(s);
}

std::string TernaryCubicForm::serialize() const {
  std::string s;
  for (int i = 0; i < 10; ++i) {
    if (i) s += ',';
    s += c_[i].get_str();
  }
  return s;
}

Rational discriminant_of(const Rational& I, const Rational& J) { return (4 * I * I * I - J * J) / 27; }

Rational height_of(const Rational& I, const Rational& J) {
  Rational a = abs(I * I * I), b = J * J / 4;
  return a > b ? a : b;
}

InvariantPair::InvariantPair(Rational i, Rational j)
    : I(std::move(i)), J(std::move(j)), disc(discriminant_of(I, J)), height(height_of(I, J)) {}

ProjectiveMap::ProjectiveMap(const Matrix3& m) : m_(m), det_(cubic::det(m)) {
  if (det_ == 0) throw UsageError("singular matrix");
  bool integral = true;
  for (const auto& row : m_)
    for (const auto& x : row) integral = integral && x.get_den() == 1;
  unimodular_ = integral && abs(det_) == 1;
}

ProjectiveMap ProjectiveMap::identity() { return ProjectiveMap(identity3()); }

ProjectiveMap ProjectiveMap::from_ints(const std::array<std::array<long, 3>, 3>& m) {
  Matrix3 q;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) q[i][j] = m[i][j];
  return ProjectiveMap(q);
}

ProjectiveMap ProjectiveMap::inverse() const { return ProjectiveMap(cubic::inverse(m_)); }

ProjectiveMap operator*(const ProjectiveMap& a, const ProjectiveMap& b) { return ProjectiveMap(a.m_ * b.m_); }

std::string ProjectiveMap::serialize() const {
  std::string s = "[";
  for (int i = 0; i < 3; ++i) {
    s += i ? ",[" : "[";
    for (int j = 0; j < 3; ++j) {
      if (j) s += ',';
      s += '"' + m_[i][j].get_str() + '"';
    }
    s += ']';
  }
  return s + "]";
}

namespace {

// Coefficients of the product of the linear forms for variables i, j, k.
template <class T, class Out, class Lin>
void add_triple_product(Out& out, const T& c, const Lin& lin, int i, int j, int k) {
  for (int u = 0; u < 3; ++u) {
    if (lin[i][u] == 0) continue;
    T cu = c * lin[i][u];
    for (int v = 0; v < 3; ++v) {
      if (lin[j][v] == 0) continue;
      T cv = cu * lin[j][v];
      for (int w = 0; w < 3; ++w) {
        if (lin[k][w] == 0) continue;
        int e[3] = {0, 0, 0};
        ++e[u];
        ++e[v];
        ++e[w];
        out[cubic_index(e[0], e[1], e[2])] += cv * lin[k][w];
      }
    }
  }
}

constexpr std::array<std::array<int, 3>, 10> kVarTriples{{
    {0, 0, 0}, {0, 0, 1}, {0, 0, 2}, {0, 1, 1}, {0, 1, 2}, {0, 2, 2}, {1, 1, 1}, {1, 1, 2}, {1, 2, 2}, {2, 2, 2}}};

}  // namespace

TernaryCubicForm act(const ProjectiveMap& g, const TernaryCubicForm& f, ActionMode mode) {
  // linear form for variable i: sum_k x_k * m[k][i]
  std::array<std::array<Rational, 3>, 3> lin;
  for (int i = 0; i < 3; ++i)
    for (int k = 0; k < 3; ++k) lin[i][k] = g.matrix()[k][i];
  std::array<Rational, 10> out;
  for (int t = 0; t < 10; ++t) {
    if (f[t] == 0) continue;
    const auto& tr = kVarTriples[t];
    add_triple_product<Rational>(out, f[t], lin, tr[0], tr[1], tr[2]);
  }
  TernaryCubicForm r(out);
  if (mode == ActionMode::twisted) r = r.scaled(1 / g.determinant());
  return r;
}

std::optional<IntCoeffs> substitute_int(const IntCoeffs& f, const IntMatrix3& m) {
  for (const auto& row : m)
    for (auto x : row)
      if (x > (1 << 20) || x < -(1 << 20)) return std::nullopt;
  for (auto c : f)
    if (c > (std::int64_t(1) << 60) || c < -(std::int64_t(1) << 60)) return std::nullopt;
  std::array<std::array<__int128, 3>, 3> lin;
  for (int i = 0; i < 3; ++i)
    for (int k = 0; k < 3; ++k) lin[i][k] = m[k][i];
  std::array<__int128, 10> out{};
  for (int t = 0; t < 10; ++t) {
    if (f[t] == 0) continue;
    const auto& tr = kVarTriples[t];
    add_triple_product<__int128>(out, static_cast<__int128>(f[t]), lin, tr[0], tr[1], tr[2]);
  }
  IntCoeffs r;
  for (int i = 0; i < 10; ++i) {
    if (out[i] > INT64_MAX || out[i] < INT64_MIN) return std::nullopt;
    r[i] = static_cast<std::int64_t>(out[i]);
  }
  return r;
}

namespace {

PolyMatrix second_partials(const MultiPoly& p) {
  PolyMatrix m(3, std::vector<MultiPoly>(3, MultiPoly(p.vars())));
  std::array<MultiPoly, 3> d{p.derivative(0), p.derivative(1), p.derivative(2)};
  for (int i = 0; i < 3; ++i)
    for (int j = i; j < 3; ++j) {
      m[i][j] = d[i].derivative(j);
      m[j][i] = m[i][j];
    }
  return m;
}

void require_nonzero(const TernaryCubicForm& f) {
  if (f.is_zero()) throw UsageError("the zero form has no invariants or covariants");
}

}  // namespace

TernaryCubicForm hessian(const TernaryCubicForm& f) {
  require_nonzero(f);
  return TernaryCubicForm::from_poly(det3(second_partials(f.to_poly())));
}

MultiPoly bordered_hessian(const TernaryCubicForm& f) {
  require_nonzero(f);
  MultiPoly p = f.to_poly();
  MultiPoly h = det3(second_partials(p));
  PolyMatrix m = second_partials(p);
  for (int i = 0; i < 3; ++i) m[i].push_back(h.derivative(i));
  m.push_back({h.derivative(0), h.derivative(1), h.derivative(2), MultiPoly(p.vars())});
  MultiPoly g = determinant(m);
  check(g.is_zero() || (g.is_homogeneous() && g.total_degree() == 6), "bordered Hessian must have degree 6");
  return g;
}

MultiPoly jacobian_covariant(const TernaryCubicForm& f, const MultiPoly& h, const MultiPoly& g) {
  require_nonzero(f);
  MultiPoly p = f.to_poly();
  PolyMatrix m(3);
  for (int i = 0; i < 3; ++i) m[i] = {p.derivative(i), h.derivative(i), g.derivative(i)};
  MultiPoly j = det3(m);
  check(j.is_zero() || (j.is_homogeneous() && j.total_degree() == 9), "Jacobian covariant must have degree 9");
  return j;
}

MultiPoly jacobian_covariant(const TernaryCubicForm& f) {
  return jacobian_covariant(f, hessian(f).to_poly(), bordered_hessian(f));
}

TernaryCubicForm weierstrass_form(const Rational& A, const Rational& B) {
  std::array<Rational, 10> c;
  c[cubic_index(3, 0, 0)] = 1;
  c[cubic_index(1, 0, 2)] = A;
  c[cubic_index(0, 0, 3)] = B;
  c[cubic_index(0, 2, 1)] = -1;
  return TernaryCubicForm(c);
}

TernaryCubicForm weierstrass_general(const Rational& a1, const Rational& a2, const Rational& a3, const Rational& a4,
                                     const Rational& a6) {
  std::array<Rational, 10> c;
  c[cubic_index(0, 2, 1)] = 1;
  c[cubic_index(1, 1, 1)] = a1;
  c[cubic_index(0, 1, 2)] = a3;
  c[cubic_index(3, 0, 0)] = -1;
  c[cubic_index(2, 0, 1)] = -a2;
  c[cubic_index(1, 0, 2)] = -a4;
  c[cubic_index(0, 0, 3)] = -a6;
  return TernaryCubicForm(c);
}

const VarSet& coefficient_vars() {
  static const VarSet v = make_vars(VarNames(kCoefficientNames.begin(), kCoefficientNames.end()));
  return v;
}

namespace {

struct CompiledPair {
  CompiledFormula i16, j32;
};

const CompiledPair& compiled_builtin() {
  static const CompiledPair c{CompiledFormula(InvariantFormulas::builtin().i16),
                              CompiledFormula(InvariantFormulas::builtin().j32)};
  return c;
}

}  // namespace

std::optional<std::pair<__int128, __int128>> invariants_int128(const IntCoeffs& f) {
  const auto& c = compiled_builtin();
  auto a = c.i16.evaluate_int128(f);
  if (!a) return std::nullopt;
  auto b = c.j32.evaluate_int128(f);
  if (!b) return std::nullopt;
  return std::make_pair(*a, *b);
}

std::pair<Integer, Integer> invariants_scaled(const IntCoeffs& f) {
  if (auto r = invariants_int128(f)) return {from_int128(r->first), from_int128(r->second)};
  std::array<Integer, 10> a;
  for (int i = 0; i < 10; ++i) a[i] = static_cast<long>(f[i]);
  const auto& c = compiled_builtin();
  return {c.i16.evaluate(a), c.j32.evaluate(a)};
}

InvariantPair invariants(const TernaryCubicForm& f, const InvariantOptions& opts) {
  require_nonzero(f);
  Rational i16, j32;
  bool done = false;
  if (!opts.formulas && opts.allow_fast_path) {
    if (auto ints = f.to_ints()) {
      auto [a, b] = invariants_scaled(*ints);
      i16 = a;
      j32 = b;
      done = true;
    }
  }
  if (!done) {
    const InvariantFormulas& fm = opts.formulas ? *opts.formulas : InvariantFormulas::builtin();
    std::array<Rational, 10> a = f.coeffs();
    std::vector<Rational> pt(a.begin(), a.end());
    i16 = fm.i16.evaluate(pt);
    j32 = fm.j32.evaluate(pt);
  }
  InvariantPair inv(i16 / 16, j32 / 32);
  if (opts.verify_identity && !hessian_identity_holds(f, inv))
    throw InvariantViolation("Hessian identity failed for " + f.serialize());
  return inv;
}

Rational discriminant(const TernaryCubicForm& f) { return invariants(f).disc; }
Rational height(const TernaryCubicForm& f) { return invariants(f).height; }

bool hessian_identity_holds(const TernaryCubicForm& f, const InvariantPair& inv) {
  TernaryCubicForm h = hessian(f);
  TernaryCubicForm hh = h.is_zero() ? TernaryCubicForm() : hessian(h);
  for (int i = 0; i < 10; ++i)
    if (hh[i] != 12288 * inv.I * inv.I * f[i] + 512 * inv.J * h[i]) return false;
  return true;
}

}  // namespace cubic
