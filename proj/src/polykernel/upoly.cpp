#include "cubic/upoly.hpp"

#include <algorithm>

namespace cubic {

UPoly::UPoly(std::vector<Rational> coeffs) : c_(std::move(coeffs)) { trim(); }

void UPoly::trim() {
  while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

UPoly UPoly::from_multi(const MultiPoly& p, int var) {
  std::vector<Rational> c(std::max(p.degree_in(var), 0) + 1);
  for (const auto& t : p.terms()) {
    if (t.mono.degree != t.mono.exponent(var)) throw UsageError("polynomial is not univariate");
    c[t.mono.exponent(var)] += t.coeff;
  }
  return UPoly(std::move(c));
}

Rational UPoly::evaluate(const Rational& x) const {
  Rational r = 0;
  for (size_t i = c_.size(); i-- > 0;) r = r * x + c_[i];
  return r;
}

UPoly UPoly::derivative() const {
  std::vector<Rational> d;
  for (size_t i = 1; i < c_.size(); ++i) d.push_back(c_[i] * static_cast<long>(i));
  return UPoly(std::move(d));
}

UPoly UPoly::monic() const {
  if (c_.empty()) return *this;
  std::vector<Rational> d = c_;
  Rational l = c_.back();
  for (auto& x : d) x /= l;
  return UPoly(std::move(d));
}

UPoly operator+(const UPoly& a, const UPoly& b) {
  std::vector<Rational> c(std::max(a.c_.size(), b.c_.size()));
  for (size_t i = 0; i < a.c_.size(); ++i) c[i] += a.c_[i];
  for (size_t i = 0; i < b.c_.size(); ++i) c[i] += b.c_[i];
  return UPoly(std::move(c));
}

UPoly operator-(const UPoly& a, const UPoly& b) {
  std::vector<Rational> c(std::max(a.c_.size(), b.c_.size()));
  for (size_t i = 0; i < a.c_.size(); ++i) c[i] += a.c_[i];
  for (size_t i = 0; i < b.c_.size(); ++i) c[i] -= b.c_[i];
  return UPoly(std::move(c));
}

UPoly operator*(const UPoly& a, const UPoly& b) {
  if (a.is_zero() || b.is_zero()) return UPoly();
  std::vector<Rational> c(a.c_.size() + b.c_.size() - 1);
  for (size_t i = 0; i < a.c_.size(); ++i)
    for (size_t j = 0; j < b.c_.size(); ++j) c[i + j] += a.c_[i] * b.c_[j];
  return UPoly(std::move(c));
}

void UPoly::divmod(const UPoly& a, const UPoly& b, UPoly& q, UPoly& r) {
  if (b.is_zero()) throw InvariantViolation("division by zero polynomial");
  std::vector<Rational> rem = a.c_;
  int db = b.degree();
  std::vector<Rational> quo(std::max(a.degree() - db + 1, 0));
  for (int k = a.degree() - db; k >= 0; --k) {
    Rational f = rem[k + db] / b.lead();
    quo[k] = f;
    if (f == 0) continue;
    for (int j = 0; j <= db; ++j) rem[k + j] -= f * b.c_[j];
  }
  q = UPoly(std::move(quo));
  r = UPoly(std::move(rem));
}

UPoly UPoly::gcd(UPoly a, UPoly b) {
  while (!b.is_zero()) {
    UPoly q, r;
    divmod(a, b, q, r);
    a = std::move(b);
    b = std::move(r);
  }
  return a.monic();
}

std::vector<Integer> UPoly::primitive_integer() const {
  Integer l = 1, g = 0;
  for (const auto& x : c_) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), x.get_den_mpz_t());
  std::vector<Integer> out;
  for (const auto& x : c_) {
    Rational y = x * l;
    out.push_back(y.get_num());
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), y.get_num_mpz_t());
  }
  if (g == 0) return out;
  if (out.back() < 0) g = -g;
  for (auto& x : out) mpz_divexact(x.get_mpz_t(), x.get_mpz_t(), g.get_mpz_t());
  return out;
}

namespace {

// c(p/q) * q^n
Integer eval_scaled(const std::vector<Integer>& c, const Integer& p, const Integer& q) {
  Integer acc = 0, qpow = 1;
  // Horner in p with q powers: sum c_i p^i q^(n-i)
  size_t n = c.size() - 1;
  acc = c[n];
  for (size_t i = n; i-- > 0;) {
    qpow *= q;
    acc = acc * p + c[i] * qpow;
  }
  return acc;
}

// Exact division of c by (q x - p); returns false when not exact.
bool divide_linear(std::vector<Integer>& c, const Integer& p, const Integer& q) {
  size_t n = c.size() - 1;
  std::vector<Integer> out(n);
  Integer carry = c[n];
  for (size_t i = n; i-- > 0;) {
    if (!mpz_divisible_p(carry.get_mpz_t(), q.get_mpz_t())) return false;
    Integer t = carry / q;
    out[i] = t;
    carry = c[i] + t * p;
  }
  if (carry != 0) return false;
  c = std::move(out);
  return true;
}

}  // namespace

std::vector<RationalRoot> rational_roots(const UPoly& poly, const FactorBudget& budget) {
  if (poly.is_zero()) throw UsageError("rational_roots of the zero polynomial");
  std::vector<Integer> c = poly.primitive_integer();
  std::vector<RationalRoot> out;
  size_t k = 0;
  while (c[k] == 0) ++k;
  if (k) {
    out.push_back({Rational(0), static_cast<int>(k)});
    c.erase(c.begin(), c.begin() + k);
  }
  if (c.size() <= 1) return out;
  std::vector<Integer> lead_div = divisors(c.back(), budget);
  std::vector<Integer> trail_div = divisors(c.front(), budget);
  Integer v1 = 0, vm1 = 0;
  for (size_t i = 0; i < c.size(); ++i) {
    v1 += c[i];
    vm1 += (i % 2 ? -c[i] : Integer(c[i]));
  }
  for (const Integer& q : lead_div) {
    for (const Integer& pa : trail_div) {
      Integer g;
      mpz_gcd(g.get_mpz_t(), pa.get_mpz_t(), q.get_mpz_t());
      if (g != 1) continue;
      for (int s : {1, -1}) {
        if (c.size() <= 1) break;
        Integer p = pa * s;
        // cheap filters: (q - p) | c(1)*q^n-ish and (q + p) | c(-1)
        Integer d1 = q - p, d2 = q + p;
        if (d1 != 0 && v1 != 0 && !mpz_divisible_p(v1.get_mpz_t(), d1.get_mpz_t())) continue;
        if (d2 != 0 && vm1 != 0 && !mpz_divisible_p(vm1.get_mpz_t(), d2.get_mpz_t())) continue;
        if (eval_scaled(c, p, q) != 0) continue;
        int mult = 0;
        while (c.size() > 1 && divide_linear(c, p, q)) ++mult;
        check(mult > 0, "root did not divide out");
        Rational r(p, q);
        r.canonicalize();
        out.push_back({r, mult});
        v1 = 0;
        vm1 = 0;
        for (size_t i = 0; i < c.size(); ++i) {
          v1 += c[i];
          vm1 += (i % 2 ? -c[i] : Integer(c[i]));
        }
      }
    }
  }
  std::sort(out.begin(), out.end(), [](const RationalRoot& a, const RationalRoot& b) { return a.value < b.value; });
  for (const auto& r : out) check(poly.evaluate(r.value) == 0, "rational root does not verify");
  return out;
}

std::vector<RationalRoot> rational_roots(const MultiPoly& p, const FactorBudget& budget) {
  if (p.is_zero()) throw UsageError("rational_roots of the zero polynomial");
  int var = -1;
  for (const auto& t : p.terms())
    for (int i = 0; i < p.arity(); ++i)
      if (t.mono.exponent(i) > 0) {
        if (var >= 0 && var != i) throw UsageError("polynomial is not univariate");
        var = i;
      }
  if (var < 0) return {};
  return rational_roots(UPoly::from_multi(p, var), budget);
}

std::vector<ProjectiveRoot> rational_projective_roots(const MultiPoly& p, int u, int v,
                                                      const FactorBudget& budget) {
  if (p.is_zero()) throw UsageError("rational_projective_roots of the zero form");
  if (!p.is_homogeneous()) throw UsageError("binary form must be homogeneous");
  int n = p.total_degree();
  std::vector<Rational> c(n + 1);
  for (const auto& t : p.terms()) {
    if (t.mono.exponent(u) + t.mono.exponent(v) != t.mono.degree) throw UsageError("unexpected variable in binary form");
    c[t.mono.exponent(u)] += t.coeff;
  }
  std::vector<ProjectiveRoot> out;
  // [1:0] is a root of multiplicity = number of vanishing top u-coefficients
  int top = 0;
  while (top <= n && c[n - top] == 0) ++top;
  if (top) out.push_back({Integer(1), Integer(0), top});
  UPoly dehom(std::move(c));
  if (dehom.degree() > 0) {
    for (const auto& r : rational_roots(dehom, budget)) out.push_back({r.value.get_num(), r.value.get_den(), r.multiplicity});
  }
  return out;
}

}  // namespace cubic
