#pragma once

#include <cstdint>
#include <vector>

#include "cubic/arith.hpp"
#include "cubic/forms.hpp"
#include "cubic/upoly.hpp"

namespace cubic {

// Accounting of the eliminant Res_v(f, H(f)) used by the rational flex search.
struct EliminantCertificate {
  int eliminated_var = -1;  // 0, 1, 2 for x, y, z
  MultiPoly eliminant;
  int degree = 0;
  std::vector<ProjectiveRoot> rational_roots;
  int rational_multiplicity = 0;  // total degree of the rational linear factors
  int residual_degree = 0;        // degree of the part without rational roots
  int degenerate_retries = 0;
};

struct FlexReport {
  std::vector<ProjectivePoint> rational_flexes;
  EliminantCertificate certificate;
  bool scheme_dimension_ok = false;
  bool certified = false;
};

// All rational points of {f = H(f) = 0}. Requires a nonzero discriminant.
FlexReport rational_flexes(const TernaryCubicForm& f, const FactorBudget& budget = {});
bool is_strongly_irreducible(const TernaryCubicForm& f, const FactorBudget& budget = {});
// Rational flex other than [0:1:0] on y^2 z = x^3 - (I/3) x z^2 - (J/27) z^3.
bool jacobian_has_rational_3_torsion(const Rational& I, const Rational& J, const FactorBudget& budget = {});
bool is_totally_irreducible(const TernaryCubicForm& f, const FactorBudget& budget = {});

using PointModP = std::array<std::int64_t, 3>;

struct FlexesModP {
  std::int64_t count = 0;
  std::vector<PointModP> points;  // normalized: first nonzero coordinate is 1
};

// Coefficients reduced into [0, p); UsageError if p divides a denominator.
IntCoeffs reduce_form_mod(const TernaryCubicForm& f, std::int64_t p);
std::int64_t evaluate_mod(const IntCoeffs& f, const PointModP& v, std::int64_t p);
// Normalized representatives of P^2(F_p) in a fixed order.
std::vector<PointModP> projective_points_mod(std::int64_t p);

FlexesModP flexes_mod_p(const TernaryCubicForm& f, std::int64_t p);
// Points of f = 0 in P^2(F_p).
std::int64_t points_mod_p(const TernaryCubicForm& f, std::int64_t p);
bool discriminant_nonzero_mod(const TernaryCubicForm& f, std::int64_t p);

// Size of {g in PGL3(F_p) : det(g)^-1 f(v g) = f(v)} for p in {5, 7, 11, 13}.
// workers = 0 uses the hardware concurrency.
std::int64_t stabilizer_mod_p(const TernaryCubicForm& f, std::int64_t p, unsigned workers = 0);
// Flex count over F_p of the Weierstrass model of (I(f), J(f)).
std::int64_t jacobian_flexes_mod_p(const TernaryCubicForm& f, std::int64_t p);

// Nonidentity elements of the radius-r generator ball of SL3(Z) fixing the integral form f.
std::vector<IntMatrix3> small_stabilizer(const TernaryCubicForm& f, int radius);

}  // namespace cubic
