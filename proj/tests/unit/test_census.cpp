#include <cmath>
#include <map>
#include <set>

#include "cubic/census.hpp"
#include "cubic/flex.hpp"
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

struct AInv {
  long a1, a2, a3, a4, a6;
};

// c4, c6 from b2, b4, b6 of a general Weierstrass model.
std::pair<Integer, Integer> c4c6(const AInv& a) {
  Integer b2 = a.a1 * a.a1 + 4 * a.a2, b4 = 2 * a.a4 + a.a1 * a.a3, b6 = a.a3 * a.a3 + 4 * a.a6;
  return {b2 * b2 - 24 * b4, -b2 * b2 * b2 + 36 * b2 * b4 - 216 * b6};
}

// Points of y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6 over F_p, with the point at infinity.
long count_points(const AInv& a, long p) {
  long n = 1;
  for (long x = 0; x < p; ++x)
    for (long y = 0; y < p; ++y) {
      long lhs = (y * y + a.a1 * x * y + a.a3 * y) % p;
      long rhs = (((x * x % p) * x) + a.a2 * x * x + a.a4 * x + a.a6) % p;
      if (((lhs - rhs) % p + p) % p == 0) ++n;
    }
  return n;
}

// Curve model scaled by u = 2 so that (16I, 32J) = (2^4 c4, 2^6 c6).
CurveModel scaled_model(const AInv& a) {
  auto [c4, c6] = c4c6(a);
  return {c4, 2 * c6};
}

long pmod(long a, long m) { return ((a % m) + m) % m; }

ProjectiveMap to_map(const IntMatrix3& m) {
  std::array<std::array<long, 3>, 3> a;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) a[i][j] = m[i][j];
  return ProjectiveMap::from_ints(a);
}

}  // namespace

TEST_CASE("eligibility labels") {
  EligibilityClass a = eligible(-3, -27);
  CHECK(a.eligible);
  CHECK(a.residue_64 == 'a');
  CHECK(a.residue_27 == 'a');
  EligibilityClass f = eligible(0, make_rational(729, 4));
  CHECK(f.eligible);
  CHECK(f.residue_64 == 'b');
  CHECK(f.residue_27 == 'a');
  EligibilityClass n = eligible(2, 1);
  CHECK_FALSE(n.eligible);
  // 16I = 32 and 32J = 32 meet mod 64 row (a); I = 2 meets no mod 27 row
  CHECK(n.residue_64 == 'a');
  CHECK(n.residue_27 == 0);
  EligibilityClass q = eligible(make_rational(1, 32), 0);
  CHECK_FALSE(q.eligible);
  CHECK(q.reason.find("integral") != std::string::npos);
  // the Fermat cubic realizes (0, 729/4)
  InvariantPair fi = invariants(F("x^3 + y^3 + z^3"));
  CHECK(fi.I == 0);
  CHECK(fi.J == make_rational(729, 4));
}

TEST_CASE("Kraus conditions") {
  CHECK(eligible_kraus(-48, -864));
  CHECK_FALSE(eligible_kraus(-48 + 1728, 9));
  CHECK_FALSE(eligible_kraus(0, 9));
  CHECK_FALSE(eligible_kraus(144, 1728));  // 144^3 = 1728^2
  // c4, c6 of random integral Weierstrass models satisfy the conditions
  std::mt19937_64 rng(11);
  for (int k = 0; k < 3000; ++k) {
    AInv a{uniform(rng, -3, 3), uniform(rng, -9, 9), uniform(rng, -9, 9), uniform(rng, -50, 50),
           uniform(rng, -50, 50)};
    auto [c4, c6] = c4c6(a);
    if (c4 * c4 * c4 == c6 * c6) continue;
    CHECK(eligible_kraus(c4, c6));
    CHECK(eligible(Rational(c4, 16), Rational(c6, 32)).eligible);
  }
}

TEST_CASE("residue equivalence over (Z/1728)^2") {
  ResidueCheck r = residue_equivalence_report();
  CHECK(r.pairs == 1728L * 1728L);
  CHECK(r.ok());
  CHECK(r.kraus_set == r.table_set);
  CHECK(r.kraus_set > 0);
  CHECK(residue_equivalence_check());
  CHECK(kraus_residue(0, 0));
  CHECK(residue_64_label(0, 0));
  CHECK(residue_27_label(0, 0));
  for (long c4 = 0; c4 < 1728; c4 += 7) {
    CHECK_FALSE(kraus_residue(c4, 9));
    CHECK_FALSE((residue_64_label(c4, 9) && residue_27_label(c4, 9)));
  }
}

TEST_CASE("necessity of eligibility on random forms") {
  std::mt19937_64 rng(21);
  for (int k = 0; k < 5000; ++k) {
    TernaryCubicForm f = random_form(rng, k < 2500 ? 5 : 1000);
    InvariantPair p = invariants(f);
    REQUIRE(Rational(16 * p.I).get_den() == 1);
    REQUIRE(Rational(32 * p.J).get_den() == 1);
    CHECK(eligible(p.I, p.J).eligible);
  }
}

TEST_CASE("eligible pair counts against a direct scan") {
  for (long X : {1000L, 5000L}) {
    for (DiscSign s : {DiscSign::positive, DiscSign::negative}) {
      long direct = 0;
      long bound = 4096 * X;
      for (long c4 = -300; c4 <= 300; ++c4) {
        if (std::abs(c4 * c4 * c4) >= bound) continue;
        for (long c6 = -5000; c6 <= 5000; ++c6) {
          if (c6 * c6 >= bound) continue;
          long d = c4 * c4 * c4 - c6 * c6;
          if (d == 0 || (d > 0) != (s == DiscSign::positive)) continue;
          if (eligible_kraus(c4, c6)) ++direct;
        }
      }
      CHECK(count_eligible_pairs(X, s).count == direct);
    }
  }
}

TEST_CASE("eligible pair counts near the leading terms") {
  EligibleCount p = count_eligible_pairs(Integer(1000000), DiscSign::positive);
  EligibleCount n = count_eligible_pairs(Integer(1000000), DiscSign::negative);
  CHECK(std::fabs(static_cast<double>(p.predicted) - 23703.7) < 0.1);
  CHECK(std::fabs(static_cast<double>(p.ratio) - 1) < 0.1);
  CHECK(std::fabs(static_cast<double>(n.ratio) - 1) < 0.1);
  double q = n.count.get_d() / p.count.get_d();
  CHECK(q > 3.6);
  CHECK(q < 4.4);
  CHECK_THROWS_AS(count_eligible_pairs(Integer(0), DiscSign::positive), UsageError);
}

TEST_CASE("form enumeration") {
  EnumerateOptions o;
  o.annotate_irreducibility = false;
  long singular = 0;
  IntCoeffs first{};
  bool have_first = false;
  long n = enumerate_forms(
      1,
      [&](const FormRecord& r) {
        if (!have_first) {
          first = r.coeffs;
          have_first = true;
        }
        if (r.singular) {
          ++singular;
          return;
        }
        CHECK(eligible(Rational(r.i16, 16), Rational(r.j32, 32)).eligible);
      },
      o);
  CHECK(n == 59048);
  CHECK(singular > 0);
  CHECK(first == IntCoeffs{-1, -1, -1, -1, -1, -1, -1, -1, -1, -1});
  CHECK_THROWS_AS(enumerate_forms(4, [](const FormRecord&) {}, o), UsageError);

  // the scaled invariants agree with the exact path
  std::set<IntCoeffs> seen;
  long k = 0;
  enumerate_forms(
      1,
      [&](const FormRecord& r) {
        if (k++ % 197) return;
        seen.insert(r.coeffs);
        InvariantPair p = invariants(TernaryCubicForm::from_ints(r.coeffs), {nullptr, false, false});
        CHECK(16 * p.I == Rational(r.i16));
        CHECK(32 * p.J == Rational(r.j32));
      },
      o);
  CHECK(seen.size() > 200);
}

TEST_CASE("strongly irreducible streamed forms are eligible") {
  std::mt19937_64 rng(5);
  int checked = 0;
  for (int k = 0; k < 300; ++k) {
    TernaryCubicForm f = random_smooth(rng, 1);
    if (!is_strongly_irreducible(f)) continue;
    ++checked;
    InvariantPair p = invariants(f);
    CHECK(eligible(p.I, p.J).eligible);
  }
  CHECK(checked > 50);
}

TEST_CASE("reduce_form") {
  std::mt19937_64 rng(8);
  for (int k = 0; k < 100; ++k) {
    TernaryCubicForm f = random_smooth(rng, 4);
    ProjectiveMap g = random_unimodular(rng, 4);
    if (g.determinant() != 1) continue;
    TernaryCubicForm h = act(g, f, ActionMode::linear);
    auto hi = h.to_ints();
    REQUIRE(hi);
    ReducedForm r = reduce_form(h);
    CHECK_FALSE(reduction_less(*hi, r.form));
    CHECK(int_det(r.gamma) == 1);
    auto back = substitute_int(*hi, r.gamma);
    REQUIRE(back);
    CHECK(*back == r.form);
    CHECK(reduce_form(h).form == r.form);
  }
  CHECK_THROWS_AS(reduce_form(F("x^3")), UsageError);
}

TEST_CASE("int_inverse_unimodular") {
  for (const auto& g : generator_ball(2)) {
    IntMatrix3 inv = int_inverse_unimodular(g);
    CHECK(int_multiply(g, inv) == int_identity3());
    CHECK(int_multiply(inv, g) == int_identity3());
  }
}

TEST_CASE("are_equivalent on constructed pairs") {
  std::mt19937_64 rng(31);
  int yes = 0, total = 0;
  for (int k = 0; k < 300; ++k) {
    TernaryCubicForm f = random_smooth(rng, 3);
    ProjectiveMap g = random_unimodular(rng, 3);
    if (g.determinant() != 1) g = g * ProjectiveMap::from_ints({{{-1, 0, 0}, {0, 1, 0}, {0, 0, 1}}});
    TernaryCubicForm h = act(g, f, ActionMode::linear);
    if (!h.to_ints()) continue;
    ++total;
    EquivalenceResult r = are_equivalent(f, h);
    CHECK(r.status != EquivalenceStatus::no);
    CHECK(verify_equivalence_result(f, h, r));
    if (r.status == EquivalenceStatus::yes) {
      ++yes;
      CHECK(int_det(*r.witness) == 1);
      CHECK(act(to_map(*r.witness), f, ActionMode::linear) == h);
    }
  }
  CHECK(total > 250);
  CHECK(yes * 10 >= total * 9);
}

TEST_CASE("are_equivalent certificates") {
  TernaryCubicForm w = F("x^3 + x*z^2 - y^2*z + z^3");
  TernaryCubicForm fermat = F("x^3 + y^3 + z^3");
  EquivalenceResult r = are_equivalent(w, fermat);
  REQUIRE(r.status == EquivalenceStatus::no);
  CHECK(r.certificate->kind == CertificateKind::invariants);
  CHECK(r.certificate->value_f == "-3,-27");
  CHECK(r.certificate->value_g == "0,729/4");
  CHECK(verify_equivalence_result(w, fermat, r));
  EquivalenceResult bad = r;
  bad.certificate->value_g = "-3,-27";
  CHECK_FALSE(verify_equivalence_result(w, fermat, bad));
  EquivalenceResult fake;
  fake.status = EquivalenceStatus::yes;
  fake.witness = int_identity3();
  CHECK_FALSE(verify_equivalence_result(w, fermat, fake));

  // random negative pairs with distinct invariants
  std::mt19937_64 rng(41);
  for (int k = 0; k < 200; ++k) {
    TernaryCubicForm f = random_smooth(rng, 3), g = random_smooth(rng, 3);
    if (invariants(f) == invariants(g)) continue;
    EquivalenceResult e = are_equivalent(f, g);
    CHECK(e.status == EquivalenceStatus::no);
    CHECK(verify_equivalence_result(f, g, e));
  }
}

TEST_CASE("a form and its negative") {
  // -W = W(-x, y, -z) for a Weierstrass form, which has the rational flex [0:1:0]
  TernaryCubicForm w = weierstrass_form(1, 1);
  EquivalenceResult r = are_equivalent(w, -w);
  CHECK(r.status == EquivalenceStatus::yes);
  CHECK(verify_equivalence_result(w, -w, r));
  std::mt19937_64 rng(51);
  int strong = 0;
  for (int k = 0; k < 120; ++k) {
    TernaryCubicForm f = random_smooth(rng, 2);
    if (!is_strongly_irreducible(f)) continue;
    ++strong;
    EquivalenceResult e = are_equivalent(f, -f);
    CHECK(e.status != EquivalenceStatus::yes);
    CHECK(verify_equivalence_result(f, -f, e));
  }
  CHECK(strong > 20);
}

TEST_CASE("class count lower bound") {
  ClassCount h0 = class_count_lower_bound(-3, -27, 0);
  ClassCount h1 = class_count_lower_bound(-3, -27, 1);
  CHECK(h0.h_low == 0);
  CHECK(h1.h_low >= 1);
  CHECK(h1.h_low >= h0.h_low);
  for (const auto& c : h1.classes) {
    TernaryCubicForm f = TernaryCubicForm::from_ints(c.members.front());
    CHECK(is_strongly_irreducible(f));
    CHECK(invariants(f) == InvariantPair(-3, -27));
    CHECK(eligible(c.invariants.I, c.invariants.J).eligible);
    for (const auto& m : c.members) CHECK(invariants(TernaryCubicForm::from_ints(m)) == invariants(f));
    for (const auto& s : c.statuses) {
      CHECK(s.result.status == EquivalenceStatus::no);
      CHECK(verify_equivalence_result(TernaryCubicForm::from_ints(h1.classes[s.other].members.front()), f,
                                      s.result));
    }
  }
  CHECK_THROWS_AS(class_count_lower_bound(2, 1, 1), UsageError);
}

TEST_CASE("curve models") {
  CurveModel E = CurveModel::from_weierstrass(1, 1);
  CHECK(E.I == -3);
  CHECK(E.J == -27);
  CHECK(E.A() == 1);
  CHECK(E.B() == 1);
  CHECK(E.is_minimal());
  CHECK(E.discriminant() == -31);
  CHECK(E.height() == make_rational(729, 4));
  CHECK_FALSE(CurveModel::from_weierstrass(16, 64).is_minimal());
  CHECK(CurveModel::from_weierstrass(16, 32).is_minimal());
  CurveModel T = E.twist_minus_one();
  CHECK(T.I == E.I);
  CHECK(T.J == -E.J);
  CHECK(T.height() == E.height());
  CHECK_FALSE(CurveModel{Integer(1), Integer(1)}.has_integral_ab());
  CHECK_THROWS_AS(CurveModel({Integer(1), Integer(1)}).is_minimal(), UsageError);
}

TEST_CASE("reduction types against point counts") {
  std::mt19937_64 rng(61);
  int seen_split = 0, seen_nonsplit = 0, seen_additive = 0;
  for (int k = 0; k < 400; ++k) {
    long A = uniform(rng, -40, 40), B = uniform(rng, -40, 40);
    long d = 4 * A * A * A + 27 * B * B;
    if (d == 0) continue;
    CurveModel E = CurveModel::from_weierstrass(A, B);
    if (!E.is_minimal()) continue;
    for (long p : {5L, 7L, 11L, 13L, 17L, 19L, 23L}) {
      long ap = p + 1 - count_points({0, 0, 0, pmod(A, p), pmod(B, p)}, p);
      ReductionType t = reduction_type(E, p);
      if (d % p) {
        CHECK(t == ReductionType::good);
        continue;
      }
      // y^2 = x^3 + A x + B is minimal at p >= 5 here
      if (ap == 1) {
        CHECK(t == ReductionType::split_multiplicative);
        ++seen_split;
      } else if (ap == -1) {
        CHECK(t == ReductionType::nonsplit_multiplicative);
        ++seen_nonsplit;
      } else {
        CHECK(ap == 0);
        CHECK(t == ReductionType::additive);
        ++seen_additive;
      }
    }
  }
  CHECK(seen_split > 5);
  CHECK(seen_nonsplit > 5);
  CHECK(seen_additive > 0);
  CHECK_THROWS_AS(reduction_type(CurveModel{Integer(2), Integer(1)}, 5), UsageError);
}

TEST_CASE("root numbers of prime conductor curves") {
  // a-invariants and analytic ranks of curves of prime conductor N
  struct Known {
    AInv a;
    long N;
    int rank;
  };
  const Known known[] = {{{0, -1, 1, -10, -20}, 11, 0}, {{0, 0, 1, -1, 0}, 37, 1},  {{0, 1, 1, 0, 0}, 43, 1},
                         {{0, 1, 1, -2, 0}, 389, 2},    {{0, 0, 1, -7, 6}, 5077, 3}, {{1, -1, 1, 0, 0}, 53, 1}};
  for (const auto& k : known) {
    CurveModel E = scaled_model(k.a);
    Integer dmin = minimal_discriminant(E);
    CHECK(factor(dmin).factors.size() == 1);
    CHECK(factor(dmin).factors[0].prime == k.N);
    int w = root_number(E);
    CHECK(w == (k.rank % 2 ? -1 : 1));
    // w = a_N for split (+1) or nonsplit (-1) reduction at N
    long aN = k.N + 1 - count_points(k.a, k.N);
    CHECK(w == aN);
    CHECK(reduction_type(E, 2) == ReductionType::good);
  }
  CHECK_THROWS_AS(root_number(CurveModel::from_weierstrass(1, 1)), Unsupported);
}

TEST_CASE("twist family predicate") {
  // direct recomputation of the predicate with trial division
  auto direct = [](long I, long J) {
    long n = 4 * I * I * I - J * J;
    if (n % 27) return false;
    long d = n / 27;
    if (d == 0 || d % 2 == 0 || d % 9) return false;
    long e = std::labs(d / 9);
    if (e % 3 == 0) return false;
    if (std::gcd(std::labs(I), std::labs(d)) != 1) return false;
    for (long p = 2; p * p <= e; ++p)
      if (e % (p * p) == 0) return false;
    return true;
  };
  std::vector<CurveModel> members = twist_family_members(Integer(100000));
  std::set<std::pair<long, long>> got;
  for (const auto& E : members) got.insert({E.I.get_si(), E.J.get_si()});
  std::set<std::pair<long, long>> want;
  for (long I = -46; I <= 46; ++I)
    for (long J = -632; J <= 632; ++J)
      if (std::labs(I * I * I) < 100000 && J * J < 400000 && direct(I, J)) want.insert({I, J});
  CHECK(got == want);
  CHECK_FALSE(members.empty());
  for (const auto& E : members) {
    FamilyVerdict v = in_twist_family(E.twist_minus_one());
    REQUIRE(v.member);
    CHECK(*v.member);
    CHECK(E.J != 0);
  }
}

TEST_CASE("split test under the twist by -1") {
  std::mt19937_64 rng(71);
  for (int k = 0; k < 500; ++k) {
    long J = uniform(rng, -5000, 5000);
    if (J == 0) continue;
    for (long p : {3L, 5L, 7L, 11L, 13L, 17L, 19L, 23L, 29L}) {
      if (J % p == 0) continue;
      bool same = kronecker(Integer(-2 * J), Integer(p)) == kronecker(Integer(2 * J), Integer(p));
      CHECK(same == (p % 4 == 1));
    }
  }
}

TEST_CASE("curve counts") {
  auto direct = [](long X) {
    long n = 0;
    for (long A = -200; A <= 200; ++A)
      for (long B = -800; B <= 800; ++B) {
        if (27 * std::labs(A * A * A) >= X || 729 * B * B >= 4 * X) continue;
        if (4 * A * A * A + 27 * B * B == 0) continue;
        bool minimal = true;
        for (long p = 2; p <= 20; ++p)
          if (A % (p * p * p * p) == 0 && B % (p * p * p * p * p * p) == 0) minimal = false;
        n += minimal;
      }
    return n;
  };
  for (long X : {1000L, 100000L, 10000000L}) CHECK(count_curves(Family::all, X).count == direct(X));
  long double s = curve_count_slope(Integer(1000000), Integer(100000000));
  CHECK(std::fabs(static_cast<double>(s) - 5.0 / 6.0) < 0.03);
  CurveCensus tf = count_curves(Family::twist_family, Integer(100000));
  CHECK(tf.count > 0);
  CHECK(tf.undetermined == 0);
  CurveCensus ss = count_curves(Family::semistable, Integer(100000));
  CHECK(ss.count <= ss.all_count);
  CHECK(parse_family("twist-family") == Family::twist_family);
  CHECK_THROWS_AS(parse_family("odd"), UsageError);
}

TEST_CASE("twist pairing bookkeeping") {
  TwistPairing t = twist_pairing_report(Integer(1000000));
  CHECK(t.decided > 0);
  CHECK(t.undetermined == 0);
  CHECK(t.fixed_point_free());
  CHECK(t.flips + t.non_flips == t.decided);
  CHECK(t.non_flips_positive_disc + t.non_flips_negative_disc == t.non_flips);
  // every positive discriminant pair flips: the number of primes = 3 mod 4 dividing Delta is even
  CHECK(t.non_flips_positive_disc == 0);
}
