#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cubic/numeric.hpp"
#include "cubic/poly.hpp"

namespace cubic {

// Exponents of (x, y, z) for the ten coefficients, in storage order.
inline constexpr std::array<std::array<int, 3>, 10> kCubicExponents{{
    {3, 0, 0}, {2, 1, 0}, {2, 0, 1}, {1, 2, 0}, {1, 1, 1}, {1, 0, 2}, {0, 3, 0}, {0, 2, 1}, {0, 1, 2}, {0, 0, 3}}};

inline constexpr std::array<const char*, 10> kCoefficientNames{
    "a300", "a210", "a201", "a120", "a111", "a102", "a030", "a021", "a012", "a003"};

constexpr int cubic_index(int a, int b, int c) {
  for (int i = 0; i < 10; ++i)
    if (kCubicExponents[i][0] == a && kCubicExponents[i][1] == b && kCubicExponents[i][2] == c) return i;
  return -1;
}

using IntCoeffs = std::array<std::int64_t, 10>;
using IntMatrix3 = std::array<std::array<std::int64_t, 3>, 3>;

class TernaryCubicForm {
 public:
  TernaryCubicForm() = default;
  explicit TernaryCubicForm(std::array<Rational, 10> c) : c_(std::move(c)) {}
  static TernaryCubicForm from_ints(const IntCoeffs& c);
  // p must be a homogeneous cubic (or zero) in x, y, z.
  static TernaryCubicForm from_poly(const MultiPoly& p);
  // Comma-separated coefficients; errors carry the character position.
  static TernaryCubicForm parse(std::string_view text);

  const Rational& operator[](int i) const { return c_[i]; }
  const std::array<Rational, 10>& coeffs() const { return c_; }
  bool is_zero() const;
  bool is_integral() const;
  std::optional<IntCoeffs> to_ints() const;

  MultiPoly to_poly(const VarSet& vars = xyz_vars()) const;
  Rational evaluate(const Rational& x, const Rational& y, const Rational& z) const;
  std::array<Rational, 3> gradient(const Rational& x, const Rational& y, const Rational& z) const;

  TernaryCubicForm operator-() const;
  TernaryCubicForm scaled(const Rational& c) const;
  // Scales by a positive rational to a primitive integral form.
  TernaryCubicForm primitive() const;

  std::string serialize() const;

  friend bool operator==(const TernaryCubicForm& a, const TernaryCubicForm& b) { return a.c_ == b.c_; }
  friend bool operator!=(const TernaryCubicForm& a, const TernaryCubicForm& b) { return !(a == b); }

 private:
  std::array<Rational, 10> c_{};
};

struct InvariantPair {
  Rational I, J, disc, height;

  InvariantPair() = default;
  InvariantPair(Rational i, Rational j);
  friend bool operator==(const InvariantPair& a, const InvariantPair& b) { return a.I == b.I && a.J == b.J; }
  friend bool operator!=(const InvariantPair& a, const InvariantPair& b) { return !(a == b); }
};

Rational discriminant_of(const Rational& I, const Rational& J);
Rational height_of(const Rational& I, const Rational& J);

class ProjectiveMap {
 public:
  explicit ProjectiveMap(const Matrix3& m);
  static ProjectiveMap identity();
  static ProjectiveMap from_ints(const std::array<std::array<long, 3>, 3>& m);

  const Matrix3& matrix() const { return m_; }
  const Rational& determinant() const { return det_; }
  bool unimodular() const { return unimodular_; }
  ProjectiveMap inverse() const;
  friend ProjectiveMap operator*(const ProjectiveMap& a, const ProjectiveMap& b);
  std::string serialize() const;

 private:
  Matrix3 m_;
  Rational det_;
  bool unimodular_ = false;
};

enum class ActionMode { linear, twisted };

// linear: f((x,y,z) * g); twisted: det(g)^-1 f((x,y,z) * g).
TernaryCubicForm act(const ProjectiveMap& g, const TernaryCubicForm& f, ActionMode mode = ActionMode::twisted);

// Dense integer substitution f((x,y,z) * m); nullopt on overflow of the 64-bit result.
std::optional<IntCoeffs> substitute_int(const IntCoeffs& f, const IntMatrix3& m);

IntMatrix3 int_identity3();
IntMatrix3 int_multiply(const IntMatrix3& a, const IntMatrix3& b);
std::int64_t int_det(const IntMatrix3& m);
// E_ij(+1), E_ij(-1) and the signed permutation matrices; det -1 ones only if requested.
std::vector<IntMatrix3> unimodular_generators(bool with_negative_det = false);
// Distinct products of at most radius generators of determinant +1, identity included.
std::vector<IntMatrix3> generator_ball(int radius);

// Point of P^2(Q) as a primitive integer triple whose first nonzero entry is positive.
struct ProjectivePoint {
  std::array<Integer, 3> c;

  static ProjectivePoint from_rationals(const Rational& x, const Rational& y, const Rational& z);
  std::array<Rational, 3> rationals() const { return {Rational(c[0]), Rational(c[1]), Rational(c[2])}; }
  std::string to_string() const;  // "[x:y:z]"
  friend bool operator==(const ProjectivePoint& a, const ProjectivePoint& b) { return a.c == b.c; }
  friend bool operator<(const ProjectivePoint& a, const ProjectivePoint& b) { return a.c < b.c; }
};

TernaryCubicForm hessian(const TernaryCubicForm& f);
// 4x4 bordered determinant with the Hessian gradient; degree 6 in x, y, z.
MultiPoly bordered_hessian(const TernaryCubicForm& f);
// Jacobian determinant of (f, H, G); degree 9 in x, y, z.
MultiPoly jacobian_covariant(const TernaryCubicForm& f);
MultiPoly jacobian_covariant(const TernaryCubicForm& f, const MultiPoly& hess, const MultiPoly& bordered);

TernaryCubicForm weierstrass_form(const Rational& A, const Rational& B);
// y^2 z + a1 xyz + a3 yz^2 - x^3 - a2 x^2 z - a4 xz^2 - a6 z^3
TernaryCubicForm weierstrass_general(const Rational& a1, const Rational& a2, const Rational& a3, const Rational& a4,
                                     const Rational& a6);

// Polynomials for 16I and 32J in the coefficient symbols a300..a003.
struct InvariantFormulas {
  MultiPoly i16;
  MultiPoly j32;

  static const InvariantFormulas& builtin();
  static InvariantFormulas parse(std::string_view text);
  static InvariantFormulas load(const std::string& path);
  std::string to_text() const;
};

const VarSet& coefficient_vars();

struct InvariantOptions {
  const InvariantFormulas* formulas = nullptr;  // builtin when null
  bool verify_identity = false;                 // re-check the Hessian identity exactly
  bool allow_fast_path = true;
};

InvariantPair invariants(const TernaryCubicForm& f, const InvariantOptions& opts = {});
Rational discriminant(const TernaryCubicForm& f);
Rational height(const TernaryCubicForm& f);

// 16I and 32J of an integral form through the 128-bit path; nullopt if the
// size bound does not guarantee exactness.
std::optional<std::pair<__int128, __int128>> invariants_int128(const IntCoeffs& f);
std::pair<Integer, Integer> invariants_scaled(const IntCoeffs& f);

// Checks H(H(f)) = 12288 I^2 f + 512 J H(f) exactly for the given pair.
bool hessian_identity_holds(const TernaryCubicForm& f, const InvariantPair& inv);

struct DerivationReport {
  InvariantFormulas formulas;
  bool square_root_ok = false;
  bool calibration_ok = false;
  bool identity_ok = false;
  long multiplier = 0;  // the integer k with P6 = k * 32J before normalization
  int hessian_terms = 0;
  int double_hessian_terms = 0;
};

// One-time symbolic derivation of the invariant formulas from the Hessian identity.
DerivationReport derive_invariant_formulas();

// H(H(f)) - 12288 (16I/16)^2 f - 512 (32J/32) H(f) over symbolic coefficients.
MultiPoly symbolic_identity_residual(const InvariantFormulas& formulas);

}  // namespace cubic
