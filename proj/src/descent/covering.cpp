#include "cubic/descent.hpp"

namespace cubic {

CoveringData covering_map(const TernaryCubicForm& f) {
  if (f.is_zero()) throw UsageError("zero form");
  CoveringData c;
  c.source = f;
  c.hessian = hessian(f).to_poly();
  MultiPoly g = bordered_hessian(f);
  c.jac_covariant = jacobian_covariant(f, c.hessian, g).scaled(make_rational(1, 72));
  c.bordered = g.scaled(make_rational(1, 36));
  c.target = invariants(f);
  check(c.hessian.is_zero() || c.hessian.total_degree() == 3, "Hessian degree");
  check(c.bordered.is_zero() || c.bordered.total_degree() == 6, "bordered Hessian degree");
  check(c.jac_covariant.is_zero() || c.jac_covariant.total_degree() == 9, "Jacobian covariant degree");
  return c;
}

JacobianPoint evaluate_covering(const CoveringData& c, const ProjectivePoint& P) {
  auto q = P.rationals();
  if (c.source.evaluate(q[0], q[1], q[2]) != 0) throw UsageError("point " + P.to_string() + " is not on the curve");
  std::span<const Rational> pt(q.data(), 3);
  Rational h = c.hessian.evaluate(pt);
  JacobianPoint r;
  if (h == 0) {
    r.infinity = true;
    return r;
  }
  r.X = c.bordered.evaluate(pt) / (h * h);
  r.Y = c.jac_covariant.evaluate(pt) / (9 * h * h * h);
  const Rational& I = c.target.I;
  const Rational& J = c.target.J;
  check(r.Y * r.Y == r.X * r.X * r.X - I / 3 * r.X - J / 27, "covering image is not on the Jacobian");
  return r;
}

MultiPoly covering_syzygy(const CoveringData& c) {
  const MultiPoly& H = c.hessian;
  const MultiPoly& G = c.bordered;
  const MultiPoly& J6 = c.jac_covariant;
  MultiPoly h4 = H.pow(4);
  return J6 * J6 - G.pow(3).scaled(81) + (G * h4).scaled(27 * c.target.I) + (h4 * H * H).scaled(3 * c.target.J);
}

bool verify_covering_identity(const TernaryCubicForm& f) {
  CoveringData c = covering_map(f);
  return reduce_mod_form(covering_syzygy(c), f.to_poly()).is_zero();
}

}  // namespace cubic
