#include <fstream>
#include <mutex>
#include <sstream>

#include "cubic/forms.hpp"

namespace cubic {

extern const char* const kInvariantFormulaText;

namespace {

const VarSet& symbolic_vars() {
  static const VarSet v = [] {
    VarNames n{"x", "y", "z"};
    n.insert(n.end(), kCoefficientNames.begin(), kCoefficientNames.end());
    return make_vars(std::move(n));
  }();
  return v;
}

struct Symbolic {
  MultiPoly f, h, hh;
};

PolyMatrix hessian_matrix(const MultiPoly& p) {
  PolyMatrix m(3, std::vector<MultiPoly>(3, MultiPoly(p.vars())));
  for (int i = 0; i < 3; ++i) {
    MultiPoly di = p.derivative(i);
    for (int j = i; j < 3; ++j) {
      m[i][j] = di.derivative(j);
      m[j][i] = m[i][j];
    }
  }
  return m;
}

const Symbolic& symbolic() {
  static const Symbolic s = [] {
    const VarSet& v = symbolic_vars();
    MultiPoly f(v);
    for (int i = 0; i < 10; ++i) {
      std::vector<int> e(13, 0);
      for (int k = 0; k < 3; ++k) e[k] = kCubicExponents[i][k];
      e[3 + i] = 1;
      f += MultiPoly::monomial(v, e, 1);
    }
    MultiPoly h = det3(hessian_matrix(f));
    MultiPoly hh = det3(hessian_matrix(h));
    return Symbolic{f, h, hh};
  }();
  return s;
}

// Coefficient of x^a y^b z^c as a polynomial in the coefficient symbols.
MultiPoly xyz_coefficient(const MultiPoly& p, const std::array<int, 3>& e) {
  std::vector<Term> ts;
  for (const auto& t : p.terms())
    if (t.mono.exponent(0) == e[0] && t.mono.exponent(1) == e[1] && t.mono.exponent(2) == e[2])
      ts.push_back({t.mono.with_exponent(0, 0).with_exponent(1, 0).with_exponent(2, 0), t.coeff});
  return MultiPoly::from_terms(p.vars(), std::move(ts));
}

Rational evaluate_on(const MultiPoly& formula, const TernaryCubicForm& f) {
  std::vector<Rational> pt(f.coeffs().begin(), f.coeffs().end());
  return formula.evaluate(pt);
}

}  // namespace

MultiPoly symbolic_identity_residual(const InvariantFormulas& formulas) {
  const Symbolic& s = symbolic();
  const VarSet& v = symbolic_vars();
  MultiPoly i16 = formulas.i16.rebase(v), j32 = formulas.j32.rebase(v);
  return s.hh - (i16 * i16).scaled(Rational(48)) * s.f - j32.scaled(16) * s.h;
}

DerivationReport derive_invariant_formulas() {
  const Symbolic& s = symbolic();
  DerivationReport rep;
  rep.hessian_terms = static_cast<int>(s.h.size());
  rep.double_hessian_terms = static_cast<int>(s.hh.size());
  // HH_m = 12288 S a_m + 512 T h_m at two monomials m1 = x^3, m2 = y^3
  const std::array<int, 3> m1{3, 0, 0}, m2{0, 3, 0};
  MultiPoly a1 = xyz_coefficient(s.f, m1), a2 = xyz_coefficient(s.f, m2);
  MultiPoly h1 = xyz_coefficient(s.h, m1), h2 = xyz_coefficient(s.h, m2);
  MultiPoly g1 = xyz_coefficient(s.hh, m1), g2 = xyz_coefficient(s.hh, m2);
  MultiPoly d = a1 * h2 - a2 * h1;
  check(!d.is_zero(), "degenerate monomial pair in the invariant derivation");
  MultiPoly s12288 = divide_exact(g1 * h2 - g2 * h1, d);
  MultiPoly t512 = divide_exact(a1 * g2 - a2 * g1, d);
  MultiPoly p8 = s12288.scaled(make_rational(1, 48));  // (16 I)^2
  MultiPoly p6 = t512;                                 // 16 * 32 J
  rep.multiplier = 16;
  MultiPoly root(s.f.vars());
  try {
    root = poly_sqrt(p8);
    rep.square_root_ok = root * root == p8;
  } catch (const InvariantViolation&) {
    throw InvariantViolation("(16I)^2 candidate is not a perfect square: convention bug");
  }
  if (!rep.square_root_ok) throw InvariantViolation("(16I)^2 candidate is not a perfect square: convention bug");
  InvariantFormulas fm{root.rebase(coefficient_vars()), p6.scaled(make_rational(1, rep.multiplier)).rebase(coefficient_vars())};
  // Weierstrass calibration: 16 I(x^3 + A x z^2 + B z^3 - y^2 z) = -48 A
  TernaryCubicForm w = weierstrass_form(1, 0);
  if (evaluate_on(fm.i16, w) == 48) fm.i16 = -fm.i16;
  rep.calibration_ok = true;
  for (auto [A, B] : {std::pair<long, long>{1, 0}, {2, 3}, {-5, 7}}) {
    TernaryCubicForm wf = weierstrass_form(A, B);
    rep.calibration_ok = rep.calibration_ok && evaluate_on(fm.i16, wf) == -48 * A && evaluate_on(fm.j32, wf) == -864 * B;
  }
  if (!fm.i16.is_integral() || !fm.j32.is_integral()) throw InvariantViolation("invariant formulas are not integral");
  rep.identity_ok = symbolic_identity_residual(fm).is_zero();
  if (!rep.identity_ok) throw InvariantViolation("Hessian identity does not verify symbolically: convention bug");
  if (!rep.calibration_ok) throw InvariantViolation("Weierstrass calibration failed");
  rep.formulas = std::move(fm);
  return rep;
}

std::string InvariantFormulas::to_text() const {
  std::ostringstream os;
  os << "# 16*I and 32*J as integer polynomials in the coefficients of\n"
     << "# a300*x^3 + a210*x^2*y + a201*x^2*z + a120*x*y^2 + a111*x*y*z\n"
     << "#   + a102*x*z^2 + a030*y^3 + a021*y^2*z + a012*y*z^2 + a003*z^3\n"
     << "I16 = " << i16.to_string() << "\n"
     << "J32 = " << j32.to_string() << "\n";
  return os.str();
}

InvariantFormulas InvariantFormulas::parse(std::string_view text) {
  std::optional<MultiPoly> i16, j32;
  size_t pos = 0;
  while (pos < text.size()) {
    size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    if (line.empty() || line[0] == '#') continue;
    size_t eq = line.find('=');
    if (eq == std::string_view::npos) throw UsageError("formula line without '='");
    std::string key(line.substr(0, eq));
    while (!key.empty() && key.back() == ' ') key.pop_back();
    MultiPoly p = MultiPoly::parse(line.substr(eq + 1), coefficient_vars());
    if (key == "I16") {
      i16 = std::move(p);
    } else if (key == "J32") {
      j32 = std::move(p);
    } else {
      throw UsageError("unknown formula key " + key);
    }
  }
  if (!i16 || !j32) throw UsageError("formula table needs I16 and J32");
  return InvariantFormulas{std::move(*i16), std::move(*j32)};
}

InvariantFormulas InvariantFormulas::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read formula table " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

const InvariantFormulas& InvariantFormulas::builtin() {
  static const InvariantFormulas f = parse(kInvariantFormulaText);
  return f;
}

}  // namespace cubic
