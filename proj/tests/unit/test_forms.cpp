#include <fstream>
#include <sstream>

#include "cubic/forms.hpp"
#include "doctest.h"
#include "gen.hpp"

using namespace cubic;
using cubic::testing::random_form;
using cubic::testing::random_matrix;
using cubic::testing::random_unimodular;
using cubic::testing::uniform;

namespace {

MultiPoly P(const char* s) { return MultiPoly::parse(s, xyz_vars()); }

TernaryCubicForm F(const char* s) { return TernaryCubicForm::from_poly(P(s)); }

}  // namespace

TEST_CASE("form serialization") {
  TernaryCubicForm f = TernaryCubicForm::parse("1,0,0,0,0,1,0,-1,0,1");
  CHECK(f == weierstrass_form(1, 1));
  CHECK(f.serialize() == "1,0,0,0,0,1,0,-1,0,1");
  CHECK(TernaryCubicForm::parse(" 1/2, 0,0,0,0,0,0,0,0,-3/4 ")[0] == make_rational(1, 2));
  CHECK_THROWS_WITH_AS(TernaryCubicForm::parse("1,0,0"), doctest::Contains("found 3"), UsageError);
  CHECK_THROWS_WITH_AS(TernaryCubicForm::parse("1,0,0,x,0,0,0,0,0,0"), doctest::Contains("position 6"), UsageError);
  CHECK_THROWS_AS(TernaryCubicForm::parse("1,0,0,0,0,0,0,0,0,0,0"), UsageError);
}

TEST_CASE("hessian examples") {
  CHECK(hessian(F("x^3 + y^3 + z^3")) == F("216*x*y*z"));
  std::mt19937_64 rng(21);
  for (int it = 0; it < 20; ++it) {
    long A = uniform(rng, -20, 20), B = uniform(rng, -20, 20);
    TernaryCubicForm expect = TernaryCubicForm::from_poly(
        P("-24*x^2*z - 24*x*y^2").scaled(1) + P("x^2*z").scaled(-24 * (A - 1)) + P("x*z^2").scaled(-72 * B) +
        P("z^3").scaled(8 * A * A));
    CHECK(hessian(weierstrass_form(A, B)) == expect);
  }
  TernaryCubicForm f = random_form(rng, 9);
  CHECK(hessian(f.scaled(3)) == hessian(f).scaled(27));
  CHECK_THROWS_AS(hessian(TernaryCubicForm()), UsageError);
}

TEST_CASE("invariant examples") {
  InvariantPair w = invariants(weierstrass_form(1, 1));
  CHECK(w.I == -3);
  CHECK(w.J == -27);
  CHECK(w.disc == -31);
  CHECK(w.height == make_rational(729, 4));
  InvariantPair fe = invariants(F("x^3 + y^3 + z^3"));
  CHECK(fe.I == 0);
  CHECK(fe.J == make_rational(729, 4));
  CHECK(fe.disc == make_rational(-19683, 16));
  CHECK_THROWS_AS(invariants(TernaryCubicForm()), UsageError);
}

TEST_CASE("Fermat invariants from a direct linear solve of the Hessian identity") {
  // H = 216xyz, H(H) = 2*216^3 xyz; matching x^3 and xyz gives I^2 = 0 and J.
  TernaryCubicForm f = F("x^3 + y^3 + z^3");
  TernaryCubicForm h = hessian(f), hh = hessian(h);
  int xyz = cubic_index(1, 1, 1), x3 = cubic_index(3, 0, 0);
  Rational i2 = hh[x3] / (12288 * f[x3]);
  Rational j = (hh[xyz] - 12288 * i2 * f[xyz]) / (512 * h[xyz]);
  CHECK(i2 == 0);
  CHECK(invariants(f).J == j);
}

TEST_CASE("derived table matches the checked-in golden file") {
  DerivationReport rep = derive_invariant_formulas();
  CHECK(rep.square_root_ok);
  CHECK(rep.calibration_ok);
  CHECK(rep.identity_ok);
  CHECK(rep.formulas.i16.total_degree() == 4);
  CHECK(rep.formulas.j32.total_degree() == 6);
  CHECK(rep.formulas.i16 == InvariantFormulas::builtin().i16);
  CHECK(rep.formulas.j32 == InvariantFormulas::builtin().j32);
  std::ifstream in(CUBIC_SOURCE_DIR "/data/invariant_formulas.txt");
  std::stringstream ss;
  ss << in.rdbuf();
  CHECK(ss.str() == rep.formulas.to_text());
  CHECK(symbolic_identity_residual(InvariantFormulas::builtin()).is_zero());
  InvariantFormulas bad = InvariantFormulas::builtin();
  bad.j32 += MultiPoly::parse("1*a300^2*a030^2*a003^2", coefficient_vars());
  CHECK_FALSE(symbolic_identity_residual(bad).is_zero());
}

TEST_CASE("Hessian identity in debug mode on random forms") {
  std::mt19937_64 rng(22);
  InvariantOptions opts;
  opts.verify_identity = true;
  for (int it = 0; it < 200; ++it) CHECK_NOTHROW(invariants(random_form(rng, 50), opts));
  InvariantFormulas bad = InvariantFormulas::builtin();
  bad.i16 = bad.i16.scaled(-1) + MultiPoly::parse("1*a111^4", coefficient_vars());
  opts.formulas = &bad;
  CHECK_THROWS_AS(invariants(random_form(rng, 50), opts), InvariantViolation);
}

TEST_CASE("Weierstrass calibration") {
  std::mt19937_64 rng(23);
  for (int it = 0; it < 100; ++it) {
    long A = uniform(rng, -1000, 1000), B = uniform(rng, -1000, 1000);
    InvariantPair inv = invariants(weierstrass_form(A, B));
    CHECK(inv.I == -3 * A);
    CHECK(inv.J == -27 * B);
  }
  CHECK(invariants(weierstrass_form(make_rational(1, 2), make_rational(-1, 3))).I == make_rational(-3, 2));
}

TEST_CASE("general Weierstrass models have invariants c4/16 and c6/32") {
  std::mt19937_64 rng(24);
  for (int it = 0; it < 100; ++it) {
    Integer a1 = uniform(rng, -9, 9), a2 = uniform(rng, -9, 9), a3 = uniform(rng, -9, 9), a4 = uniform(rng, -99, 99),
            a6 = uniform(rng, -99, 99);
    Integer b2 = a1 * a1 + 4 * a2, b4 = 2 * a4 + a1 * a3, b6 = a3 * a3 + 4 * a6;
    Integer c4 = b2 * b2 - 24 * b4, c6 = -b2 * b2 * b2 + 36 * b2 * b4 - 216 * b6;
    InvariantPair inv = invariants(weierstrass_general(a1, a2, a3, a4, a6));
    CHECK(inv.I == Rational(c4) / 16);
    CHECK(inv.J == Rational(c6) / 32);
  }
  CHECK(weierstrass_form(0, 1) == F("x^3 + z^3 - y^2*z"));
}

TEST_CASE("SL3(Z) invariance and Hessian covariance") {
  std::mt19937_64 rng(25);
  for (int it = 0; it < 1000; ++it) {
    TernaryCubicForm f = random_form(rng, 5);
    ProjectiveMap g = random_unimodular(rng, 6);
    TernaryCubicForm gf = act(g, f, ActionMode::twisted);
    CHECK(invariants(gf) == invariants(f));
    if (g.determinant() == 1) CHECK(hessian(gf) == act(g, hessian(f), ActionMode::linear));
  }
}

TEST_CASE("relative invariance exponents") {
  std::mt19937_64 rng(26);
  for (int it = 0; it < 100; ++it) {
    TernaryCubicForm f = random_form(rng, 20);
    Matrix3 d = identity3();
    d[0][0] = uniform(rng, 2, 5);
    d[1][1] = make_rational(1, uniform(rng, 1, 3));
    d[2][2] = -1;
    ProjectiveMap g(d);
    Rational dt = g.determinant();
    InvariantPair a = invariants(f), b = invariants(act(g, f, ActionMode::linear));
    CHECK(b.I == a.I * dt * dt * dt * dt);
    CHECK(b.J == a.J * dt * dt * dt * dt * dt * dt);
    Rational d12 = 1;
    for (int k = 0; k < 12; ++k) d12 *= dt;
    CHECK(b.disc == a.disc * d12);
    ProjectiveMap r(random_matrix(rng));
    CHECK(invariants(act(r, f, ActionMode::twisted)) == a);
  }
  Matrix3 two = identity3();
  two[0][0] = 2;
  TernaryCubicForm f = random_form(rng, 20);
  CHECK(invariants(act(ProjectiveMap(two), f, ActionMode::linear)).I == 16 * invariants(f).I);
  Matrix3 lam = identity3();
  for (int i = 0; i < 3; ++i) lam[i][i] = 7;
  CHECK(invariants(act(ProjectiveMap(lam), f, ActionMode::twisted)) == invariants(f));
  CHECK(act(ProjectiveMap::identity(), f) == f);
  Matrix3 sing{};
  CHECK_THROWS_AS(ProjectiveMap{sing}, UsageError);
}

TEST_CASE("act agrees with polynomial substitution") {
  std::mt19937_64 rng(27);
  for (int it = 0; it < 100; ++it) {
    TernaryCubicForm f = random_form(rng, 9);
    Matrix3 m = random_matrix(rng);
    CHECK(act(ProjectiveMap(m), f, ActionMode::linear).to_poly() == substitute_linear(f.to_poly(), m));
    std::array<std::array<std::int64_t, 3>, 3> mi;
    Matrix3 mq;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        mi[i][j] = uniform(rng, -3, 3);
        mq[i][j] = static_cast<long>(mi[i][j]);
      }
    if (det(mq) == 0) continue;
    auto fi = substitute_int(*f.to_ints(), mi);
    REQUIRE(fi);
    CHECK(TernaryCubicForm::from_ints(*fi) == act(ProjectiveMap(mq), f, ActionMode::linear));
  }
}

TEST_CASE("integrality and the 128-bit path match the exact path") {
  std::mt19937_64 rng(28);
  for (int it = 0; it < 2000; ++it) {
    long bound = it % 3 == 0 ? 1000000000L : (it % 3 == 1 ? 1000 : 5);
    TernaryCubicForm f = random_form(rng, bound);
    InvariantPair fast = invariants(f);
    InvariantOptions slow;
    slow.allow_fast_path = false;
    InvariantPair exact = invariants(f, slow);
    CHECK(fast == exact);
    CHECK(is_integral(exact.I * 16));
    CHECK(is_integral(exact.J * 32));
  }
  IntCoeffs huge;
  huge.fill(std::int64_t(1) << 40);
  CHECK_FALSE(invariants_int128(huge).has_value());
  auto [a, b] = invariants_scaled(huge);
  InvariantOptions slow;
  slow.allow_fast_path = false;
  InvariantPair exact = invariants(TernaryCubicForm::from_ints(huge), slow);
  CHECK(Rational(a) == exact.I * 16);
  CHECK(Rational(b) == exact.J * 32);
}

TEST_CASE("bordered Hessian and Jacobian covariant") {
  std::mt19937_64 rng(29);
  for (int it = 0; it < 100; ++it) {
    TernaryCubicForm f = random_form(rng, 9);
    MultiPoly g = bordered_hessian(f);
    MultiPoly j = jacobian_covariant(f);
    CHECK(g.total_degree() == 6);
    CHECK(j.total_degree() == 9);
    CHECK(g.is_homogeneous());
    CHECK(j.is_homogeneous());
  }
  for (int it = 0; it < 20; ++it) {
    TernaryCubicForm f = random_form(rng, 4);
    ProjectiveMap g = random_unimodular(rng, 4);
    if (g.determinant() != 1) continue;
    CHECK(bordered_hessian(act(g, f, ActionMode::linear)) == substitute_linear(bordered_hessian(f), g.matrix()));
    CHECK(jacobian_covariant(act(g, f, ActionMode::linear)) ==
          substitute_linear(jacobian_covariant(f), g.matrix()));
  }
  TernaryCubicForm sing = F("x^3 + x^2*y");
  CHECK(invariants(sing).disc == 0);
  CHECK_NOTHROW(jacobian_covariant(sing));
}

TEST_CASE("Weierstrass forms pass through the flex at infinity") {
  TernaryCubicForm w = weierstrass_form(3, -7);
  CHECK(w.evaluate(0, 1, 0) == 0);
  CHECK(hessian(w).evaluate(0, 1, 0) == 0);
}
