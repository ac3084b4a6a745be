#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cubic/numeric.hpp"

namespace cubic {

constexpr int kMaxVars = 16;
constexpr int kMaxExponent = 255;

// Exponent vector packed 8 bits per variable, variable 0 in the top byte, so
// that comparing (degree, bits) is graded lexicographic order.
struct Monomial {
  unsigned __int128 bits = 0;
  std::uint16_t degree = 0;

  static Monomial from_exponents(std::span<const int> e);
  int exponent(int var) const {
    return static_cast<int>((bits >> (8 * (kMaxVars - 1 - var))) & 0xff);
  }
  Monomial with_exponent(int var, int e) const;
  bool divides(const Monomial& other, int arity) const;

  friend bool operator==(const Monomial& a, const Monomial& b) { return a.bits == b.bits; }
  // graded lexicographic
  friend bool operator<(const Monomial& a, const Monomial& b) {
    return a.degree != b.degree ? a.degree < b.degree : a.bits < b.bits;
  }
  friend Monomial operator*(const Monomial& a, const Monomial& b);
  // a / b, assuming b divides a
  friend Monomial operator/(const Monomial& a, const Monomial& b);
};

struct MonomialHash {
  size_t operator()(const Monomial& m) const {
    std::uint64_t lo = static_cast<std::uint64_t>(m.bits), hi = static_cast<std::uint64_t>(m.bits >> 64);
    std::uint64_t h = lo * 0x9E3779B97F4A7C15ULL ^ (hi + 0x632BE59BD9B4E019ULL + (lo << 6) + (lo >> 2));
    return static_cast<size_t>(h ^ (h >> 29));
  }
};

struct Term {
  Monomial mono;
  Rational coeff;
};

using VarNames = std::vector<std::string>;
using VarSet = std::shared_ptr<const VarNames>;

VarSet make_vars(VarNames names);
// The shared variable set (x, y, z).
const VarSet& xyz_vars();

class MultiPoly {
 public:
  explicit MultiPoly(VarSet vars);
  MultiPoly();  // zero polynomial in x, y, z

  static MultiPoly constant(VarSet vars, const Rational& c);
  static MultiPoly variable(VarSet vars, int index);
  static MultiPoly variable(VarSet vars, std::string_view name);
  static MultiPoly monomial(VarSet vars, std::span<const int> exps, const Rational& c);
  // Terms need not be sorted or distinct.
  static MultiPoly from_terms(VarSet vars, std::vector<Term> terms);

  const VarSet& vars() const { return vars_; }
  int arity() const { return static_cast<int>(vars_->size()); }
  int var_index(std::string_view name) const;
  // Terms in descending graded lexicographic order, all nonzero.
  const std::vector<Term>& terms() const { return terms_; }
  size_t size() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const;
  int total_degree() const;  // -1 for zero
  int degree_in(int var) const;
  bool is_homogeneous() const;
  Rational coefficient(const Monomial& m) const;
  Rational coefficient(std::span<const int> exps) const;
  const Term& leading_term() const;

  MultiPoly operator-() const;
  MultiPoly& operator+=(const MultiPoly& o);
  MultiPoly& operator-=(const MultiPoly& o);
  MultiPoly& operator*=(const MultiPoly& o);
  friend MultiPoly operator+(MultiPoly a, const MultiPoly& b) { return a += b; }
  friend MultiPoly operator-(MultiPoly a, const MultiPoly& b) { return a -= b; }
  friend MultiPoly operator*(const MultiPoly& a, const MultiPoly& b);
  MultiPoly scaled(const Rational& c) const;
  MultiPoly pow(unsigned e) const;
  MultiPoly derivative(int var) const;

  Rational evaluate(std::span<const Rational> point) const;
  // Substitutes a value for one variable; the variable set is kept.
  MultiPoly specialize(int var, const Rational& value) const;
  // Coefficients c_k with p = sum c_k var^k; each c_k is free of var.
  std::vector<MultiPoly> coefficients_in(int var) const;
  // Same polynomial over another variable set containing all used names.
  MultiPoly rebase(const VarSet& target) const;

  bool is_integral() const;
  // Positive rational c with p / c primitive integral.
  Rational content() const;
  MultiPoly primitive_part() const;

  std::string to_string() const;
  static MultiPoly parse(std::string_view text, VarSet vars);

  friend bool operator==(const MultiPoly& a, const MultiPoly& b);
  friend bool operator!=(const MultiPoly& a, const MultiPoly& b) { return !(a == b); }

 private:
  void require_compatible(const MultiPoly& o) const;
  VarSet vars_;
  std::vector<Term> terms_;
};

enum class ArithOp { add, sub, mul, scale };

// scale multiplies p by the constant polynomial q.
MultiPoly arith(const MultiPoly& p, const MultiPoly& q, ArithOp op);
MultiPoly partial_derivative(const MultiPoly& p, std::string_view var);

using PolyMatrix = std::vector<std::vector<MultiPoly>>;
MultiPoly determinant(const PolyMatrix& m);
MultiPoly det3(const PolyMatrix& m);

using Matrix3 = std::array<std::array<Rational, 3>, 3>;
Matrix3 identity3();
Matrix3 operator*(const Matrix3& a, const Matrix3& b);
Rational det(const Matrix3& m);
Matrix3 inverse(const Matrix3& m);

// p evaluated at the row vector (v0, v1, v2) * m, where v0..v2 are variables 0..2.
MultiPoly substitute_linear(const MultiPoly& p, const Matrix3& m);

struct DivisionResult {
  MultiPoly quotient;
  MultiPoly remainder;
};
// Multivariate division by a single polynomial in graded lexicographic order.
DivisionResult divide(const MultiPoly& p, const MultiPoly& d);
MultiPoly reduce_mod_form(const MultiPoly& p, const MultiPoly& f);
// Exact quotient; throws when d does not divide p.
MultiPoly divide_exact(const MultiPoly& p, const MultiPoly& d);

// Sylvester resultant with respect to var.
MultiPoly resultant_eliminate(const MultiPoly& p, const MultiPoly& q, int var);
MultiPoly resultant_eliminate(const MultiPoly& p, const MultiPoly& q, std::string_view var);

// Square root by leading-term matching; throws when p is not a perfect square.
MultiPoly poly_sqrt(const MultiPoly& p);

}  // namespace cubic
