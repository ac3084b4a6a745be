#pragma once

#include <vector>

#include "cubic/arith.hpp"
#include "cubic/numeric.hpp"
#include "cubic/poly.hpp"

namespace cubic {

// Dense univariate polynomial over Q, coefficients from degree 0 upwards.
class UPoly {
 public:
  UPoly() = default;
  explicit UPoly(std::vector<Rational> coeffs);
  // p must involve at most the variable var.
  static UPoly from_multi(const MultiPoly& p, int var);

  const std::vector<Rational>& coeffs() const { return c_; }
  int degree() const { return static_cast<int>(c_.size()) - 1; }  // -1 for zero
  bool is_zero() const { return c_.empty(); }
  const Rational& lead() const { return c_.back(); }

  Rational evaluate(const Rational& x) const;
  UPoly derivative() const;
  UPoly monic() const;

  friend UPoly operator+(const UPoly& a, const UPoly& b);
  friend UPoly operator-(const UPoly& a, const UPoly& b);
  friend UPoly operator*(const UPoly& a, const UPoly& b);
  friend bool operator==(const UPoly& a, const UPoly& b) { return a.c_ == b.c_; }

  // a = q*b + r with deg r < deg b
  static void divmod(const UPoly& a, const UPoly& b, UPoly& q, UPoly& r);
  static UPoly gcd(UPoly a, UPoly b);  // monic, or zero

  // Primitive integer multiple (positive leading coefficient).
  std::vector<Integer> primitive_integer() const;

 private:
  void trim();
  std::vector<Rational> c_;
};

struct RationalRoot {
  Rational value;
  int multiplicity = 0;
};

// Projective root [a:b] of a binary form with gcd(a, b) = 1 and a normalized sign.
struct ProjectiveRoot {
  Integer a, b;
  int multiplicity = 0;
};

// Complete list of rational roots with multiplicities.
std::vector<RationalRoot> rational_roots(const UPoly& p, const FactorBudget& budget = {});
// Univariate MultiPoly: exactly one variable may occur.
std::vector<RationalRoot> rational_roots(const MultiPoly& p, const FactorBudget& budget = {});
// Binary form in variables u, v (homogeneous, no other variables).
std::vector<ProjectiveRoot> rational_projective_roots(const MultiPoly& p, int u, int v,
                                                      const FactorBudget& budget = {});

}  // namespace cubic
