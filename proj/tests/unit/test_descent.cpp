#include <cmath>

#include "cubic/descent.hpp"
#include "doctest.h"
#include "gen.hpp"

using namespace cubic;
using cubic::testing::random_form;
using cubic::testing::random_unimodular;
using cubic::testing::uniform;

namespace {

TernaryCubicForm F(const char* s) { return TernaryCubicForm::from_poly(MultiPoly::parse(s, xyz_vars())); }

TernaryCubicForm random_smooth(std::mt19937_64& rng, long bound) {
  for (;;) {
    TernaryCubicForm f = random_form(rng, bound);
    if (discriminant(f) != 0) return f;
  }
}

// Affine group law on y^2 = x^3 + A x + B; nullopt is the identity.
using Pt = std::optional<std::pair<Rational, Rational>>;

Pt add(const Pt& P, const Pt& Q, const Rational& A) {
  if (!P) return Q;
  if (!Q) return P;
  auto [x1, y1] = *P;
  auto [x2, y2] = *Q;
  Rational l;
  if (x1 == x2) {
    if (y1 + y2 == 0) return std::nullopt;
    l = (3 * x1 * x1 + A) / (2 * y1);
  } else {
    l = (y2 - y1) / (x2 - x1);
  }
  Rational x3 = l * l - x1 - x2;
  return std::pair{x3, l * (x1 - x3) - y1};
}

// Hensel criterion stated on f itself: v(f(P)) > 2 min v(df(P)).
bool lifts(const TernaryCubicForm& f, const std::array<Integer, 3>& P, long p) {
  TernaryCubicForm g = f.primitive();
  Rational x(P[0]), y(P[1]), z(P[2]);
  Rational v = g.evaluate(x, y, z);
  if (gcd(gcd(P[0], P[1]), P[2]) % p == 0) return false;
  if (v == 0) return true;
  long m = std::numeric_limits<long>::max();
  for (const auto& d : g.gradient(x, y, z))
    if (d != 0) m = std::min(m, valuation(d, p));
  return valuation(v, p) > 2 * m;
}

}  // namespace

TEST_CASE("covering data degrees and target") {
  std::mt19937_64 rng(41);
  for (int it = 0; it < 20; ++it) {
    TernaryCubicForm f = random_smooth(rng, 7);
    CoveringData c = covering_map(f);
    CHECK(c.hessian.total_degree() == 3);
    CHECK(c.bordered.total_degree() == 6);
    CHECK(c.jac_covariant.total_degree() == 9);
    CHECK(c.target == invariants(f));
  }
}

TEST_CASE("covering identity holds modulo f") {
  std::mt19937_64 rng(42);
  for (int it = 0; it < 25; ++it) CHECK(verify_covering_identity(random_smooth(rng, 9)));
  for (long A = -2; A <= 2; ++A)
    for (long B = -2; B <= 2; ++B)
      if (4 * A * A * A + 27 * B * B != 0) CHECK(verify_covering_identity(weierstrass_form(A, B)));
  TernaryCubicForm f = random_smooth(rng, 9);
  CHECK(verify_covering_identity(f.scaled(make_rational(-5, 3))));
  // wrong target invariants or unnormalized covariants break the identity
  CoveringData c = covering_map(f);
  c.target = InvariantPair(c.target.I + 1, c.target.J);
  CHECK_FALSE(reduce_mod_form(covering_syzygy(c), f.to_poly()).is_zero());
  CoveringData raw = covering_map(f);
  raw.bordered = bordered_hessian(f);
  raw.jac_covariant = jacobian_covariant(f);
  CHECK_FALSE(reduce_mod_form(covering_syzygy(raw), f.to_poly()).is_zero());
}

TEST_CASE("covering map on Weierstrass forms is multiplication by 3 up to sign") {
  CoveringData c1 = covering_map(weierstrass_form(0, 1));
  CHECK(evaluate_covering(c1, ProjectivePoint::from_rationals(0, 1, 1)).infinity);  // (0, 1) has order 3
  CHECK(evaluate_covering(c1, ProjectivePoint::from_rationals(0, 1, 0)).infinity);
  int checked = 0;
  for (long A = -6; A <= 6; ++A)
    for (long B = -6; B <= 6; ++B) {
      if (4 * A * A * A + 27 * B * B == 0) continue;
      CoveringData c = covering_map(weierstrass_form(A, B));
      CHECK(c.target.I == -3 * A);
      CHECK(c.target.J == -27 * B);
      for (long x = -6; x <= 12; ++x) {
        Integer r = x * x * x + A * x + B;
        if (r < 0) continue;
        Integer s = isqrt(r);
        if (s * s != r) continue;
        Pt P = std::pair{Rational(x), Rational(s)};
        Pt P3 = add(add(P, P, A), P, A);
        JacobianPoint img = evaluate_covering(c, ProjectivePoint::from_rationals(x, Rational(s), 1));
        if (!P3) {
          CHECK(img.infinity);
          continue;
        }
        REQUIRE_FALSE(img.infinity);
        CHECK(img.X == P3->first);
        CHECK((img.Y == P3->second || img.Y == -P3->second));
        // rescaling the point projectively does not move the image
        JacobianPoint img2 = evaluate_covering(c, ProjectivePoint::from_rationals(x, Rational(s), 1));
        CHECK(img2.X == img.X);
        ++checked;
      }
    }
  CHECK(checked > 20);
  CHECK_THROWS_AS(evaluate_covering(c1, ProjectivePoint::from_rationals(1, 1, 1)), UsageError);
}

TEST_CASE("covering images agree up to sign under unimodular transport") {
  std::mt19937_64 rng(43);
  int checked = 0;
  for (long A = -4; A <= 4; ++A)
    for (long B = 1; B <= 4; ++B) {
      if (4 * A * A * A + 27 * B * B == 0) continue;
      TernaryCubicForm w = weierstrass_form(A, B);
      ProjectiveMap g = random_unimodular(rng, 4);
      TernaryCubicForm gw = act(g, w, ActionMode::twisted);
      Matrix3 gi = inverse(g.matrix());
      CoveringData c = covering_map(w), gc = covering_map(gw);
      for (long x = -4; x <= 8; ++x) {
        Integer r = x * x * x + A * x + B, s = r >= 0 ? isqrt(r) : Integer(-1);
        if (r < 0 || s * s != r) continue;
        std::array<Rational, 3> P{Rational(x), Rational(s), Rational(1)}, Q;
        for (int j = 0; j < 3; ++j) Q[j] = P[0] * gi[0][j] + P[1] * gi[1][j] + P[2] * gi[2][j];
        JacobianPoint a = evaluate_covering(c, ProjectivePoint::from_rationals(P[0], P[1], P[2]));
        JacobianPoint b = evaluate_covering(gc, ProjectivePoint::from_rationals(Q[0], Q[1], Q[2]));
        REQUIRE(a.infinity == b.infinity);
        if (a.infinity) continue;
        CHECK(a.X == b.X);
        CHECK((a.Y == b.Y || a.Y == -b.Y));
        ++checked;
      }
    }
  CHECK(checked > 10);
}

TEST_CASE("real solubility witnesses") {
  RealWitness fe = real_witness(F("x^3 + y^3 + z^3"));
  CHECK(fe.lo == fe.hi);
  CHECK(fe.approximation.c[0] + fe.approximation.c[1] + fe.approximation.c[2] == 0);
  CHECK(real_witness(weierstrass_form(2, 3)).approximation == ProjectivePoint::from_rationals(0, 1, 0));
  std::mt19937_64 rng(44);
  std::vector<TernaryCubicForm> fs{F("3*x^3 + 4*y^3 + 5*z^3")};
  for (int it = 0; it < 50; ++it) fs.push_back(random_smooth(rng, 50));
  for (const auto& f : fs) {
    RealWitness w = real_witness(f);
    SolubilityVerdict v = is_real_soluble(f);
    CHECK(v.status == SolubilityStatus::soluble);
    if (w.lo == w.hi) continue;
    auto at = [&](const Rational& t) {
      return f.evaluate(w.base.c[0] + t * w.direction.c[0], w.base.c[1] + t * w.direction.c[1],
                        w.base.c[2] + t * w.direction.c[2]);
    };
    CHECK(sign(at(w.lo)) * sign(at(w.hi)) < 0);
    CHECK(w.hi - w.lo < Rational(1, 1000000));
  }
}

TEST_CASE("p-adic solubility examples") {
  TernaryCubicForm obstructed = F("x^3 + 3*y^3 + 9*z^3");
  SolubilityVerdict v3 = is_Qp_soluble(obstructed, 3);
  CHECK(v3.status == SolubilityStatus::insoluble);
  CHECK(v3.precision <= 4);
  for (long p : {2L, 5L, 7L, 13L}) CHECK(is_Qp_soluble(obstructed, p).status == SolubilityStatus::soluble);
  for (long p : {2L, 5L, 7L, 11L}) {
    IntCoeffs c{};
    c[cubic_index(3, 0, 0)] = 1;
    c[cubic_index(0, 3, 0)] = p;
    c[cubic_index(0, 0, 3)] = p * p;
    TernaryCubicForm f = TernaryCubicForm::from_ints(c);
    CHECK(is_Qp_soluble(f, p).status == SolubilityStatus::insoluble);
  }
  TernaryCubicForm sel = F("3*x^3 + 4*y^3 + 5*z^3");
  for (std::uint32_t p : small_primes(97)) {
    if (p > 97) break;
    SolubilityVerdict v = is_Qp_soluble(sel, p);
    CHECK(v.status == SolubilityStatus::soluble);
    REQUIRE(v.witness);
    CHECK(lifts(sel, *v.witness, p));
  }
  for (long A = -3; A <= 3; ++A)
    for (long B = -3; B <= 3; ++B) {
      if (4 * A * A * A + 27 * B * B == 0) continue;
      for (long p : {2L, 3L, 5L, 7L}) {
        SolubilityVerdict v = is_Qp_soluble(weierstrass_form(A, B), p);
        CHECK(v.status == SolubilityStatus::soluble);
        CHECK(*v.witness == ProjectivePoint::from_rationals(0, 1, 0).c);
      }
    }
  CHECK_THROWS_AS(is_Qp_soluble(F("x^3 + x^2*y"), 3), UsageError);
  CHECK_THROWS_AS(is_Qp_soluble(sel, 4), UsageError);
}

TEST_CASE("p-adic witnesses lift and verdicts are unimodular invariants") {
  std::mt19937_64 rng(45);
  for (int it = 0; it < 40; ++it) {
    TernaryCubicForm f = random_smooth(rng, 8);
    TernaryCubicForm g = act(random_unimodular(rng, 5), f, ActionMode::twisted);
    for (long p : {2L, 3L, 5L, 7L}) {
      SolubilityVerdict a = is_Qp_soluble(f, p), b = is_Qp_soluble(g, p);
      CHECK(a.status == b.status);
      if (a.status == SolubilityStatus::soluble) CHECK(lifts(f, *a.witness, p));
      if (b.status == SolubilityStatus::soluble) CHECK(lifts(g, *b.witness, p));
    }
  }
}

TEST_CASE("local solubility aggregation") {
  LocalSolubility sel = is_locally_soluble(F("3*x^3 + 4*y^3 + 5*z^3"));
  CHECK(sel.status == SolubilityStatus::soluble);
  CHECK(sel.real.status == SolubilityStatus::soluble);
  LocalSolubility bad = is_locally_soluble(F("x^3 + 3*y^3 + 9*z^3"));
  CHECK(bad.status == SolubilityStatus::insoluble);
  CHECK(bad.primes.back().prime == 3);
  for (long A = -3; A <= 3; ++A)
    for (long B = -3; B <= 3; ++B)
      if (4 * A * A * A + 27 * B * B != 0)
        CHECK(is_locally_soluble(weierstrass_form(A, B)).status == SolubilityStatus::soluble);
}

TEST_CASE("local masses and the Selmer average assembly") {
  CHECK(local_mass_factor(5) == 1);
  CHECK(local_mass_factor(3) == 3);
  CHECK(local_mass_factor(2) == 1);
  CHECK_THROWS_AS(local_mass_factor(9), UsageError);
  SelmerAverage s = selmer_average_bound(100);
  CHECK(s.limit.zeta2 == 0);
  CHECK(s.limit.zeta3 == 0);
  CHECK(s.limit.coefficient == 3);
  CHECK(s.average_bound == 4);
  CHECK(s.mass_product == 3);
  CHECK(s.consistent);
  long double direct = 1;
  for (long p : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97})
    direct *= (1 - 1.0L / (p * p)) * (1 - 1.0L / (p * p * p));
  CHECK(std::fabs(static_cast<double>(s.euler_truncation.get_d() - direct)) < 1e-15);
  CHECK(s.truncated_value > 3);
  CHECK(s.truncated_value < 3 * (1 + s.tail_epsilon));
  SelmerAverage no3 = selmer_average_bound(100, false);
  CHECK(no3.limit.coefficient == 1);
  CHECK(no3.average_bound == 2);
  for (long P : {2L, 10L, 1000L, 100000L}) {
    SelmerAverage t = selmer_average_bound(P);
    CHECK(t.consistent);
    CHECK(t.mass_product == (P >= 3 ? 3 : 1));
    CHECK(t.limit.coefficient == 3);
  }
}

TEST_CASE("selmer search") {
  // y^2 = x^3 + x + 1 has rank 1 and no 3-torsion; y^2 = x^3 + 1 has the 3-torsion point (0, 1)
  for (auto [A, B] : {std::pair<long, long>{1, 1}, {0, 1}}) {
    CurveModel E = CurveModel::from_weierstrass(A, B);
    SelmerSearch s = selmer_search(E, 1);
    CHECK(s.forms_scanned == 59049);
    REQUIRE_FALSE(s.classes.empty());
    CHECK(s.classes.front().representative == weierstrass_form(A, B));
    CHECK(s.classes.front().trivial);
    CHECK(s.lower_bound == 3);
    CHECK(s.distinct_signatures == 1);
    for (const auto& c : s.classes) {
      CHECK(verify_covering_identity(c.representative));
      CHECK(invariants(c.representative) == InvariantPair(E.I, E.J));
      CHECK(c.solubility.status == SolubilityStatus::soluble);
      for (const auto& m : c.members) CHECK(invariants(m) == invariants(c.representative));
      if (!c.trivial) {
        REQUIRE(c.negation);
        CHECK(c.negation->status != EquivalenceStatus::yes);
      }
      for (const auto& st : c.statuses) {
        CHECK(st.result.status != EquivalenceStatus::yes);
        CHECK(verify_equivalence_result(s.classes[st.other].representative, c.representative, st.result));
      }
    }
    CHECK(s.locally_soluble == static_cast<long>(s.forms_matching + 1 - s.insoluble - s.solubility_undetermined));
  }
  SelmerSearch w = selmer_search(CurveModel::from_weierstrass(1, 1), 0);
  CHECK(w.classes.size() == 1);
  CHECK(w.lower_bound == 1);
  CHECK_THROWS_AS(selmer_search(CurveModel{Integer(1), Integer(1)}, 1), UsageError);
  CHECK_THROWS_AS(selmer_search(CurveModel::from_weierstrass(1, 1), 3), UsageError);
}

TEST_CASE("selmer search sees locally insoluble forms") {
  SelmerSearch s = selmer_search(CurveModel::from_weierstrass(9, -18), 1);
  CHECK(s.insoluble > 0);
  CHECK(s.lower_bound >= 1);
  for (const auto& c : s.classes) CHECK(c.solubility.status == SolubilityStatus::soluble);
}
