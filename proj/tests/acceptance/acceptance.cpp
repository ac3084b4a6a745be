// One PASS/FAIL line per acceptance criterion. Exit status is 0 exactly when the
// failing set equals the --expect-fail set.
#include <chrono>
#include <functional>
#include <iomanip>
#include <iostream>
#include <set>
#include <sstream>

#include "../unit/gen.hpp"
#include "CLI11.hpp"
#include "cubic/census.hpp"
#include "cubic/descent.hpp"
#include "cubic/equivalence.hpp"
#include "cubic/flex.hpp"

using namespace cubic;
using namespace cubic::testing;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

TernaryCubicForm random_smooth(std::mt19937_64& rng, long bound) {
  for (;;) {
    TernaryCubicForm f = random_form(rng, bound);
    if (discriminant(f) != 0) return f;
  }
}

ProjectiveMap to_map(const IntMatrix3& m) {
  std::array<std::array<long, 3>, 3> a;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) a[i][j] = m[i][j];
  return ProjectiveMap::from_ints(a);
}

std::string frac(long a, long b) { return std::to_string(a) + "/" + std::to_string(b); }

Outcome hessian_identity(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  InvariantOptions opts;
  opts.allow_fast_path = false;
  long ok = 0;
  const long n = 1000;
  for (long k = 0; k < n; ++k) {
    TernaryCubicForm f = random_form(rng, 50);
    ok += hessian_identity_holds(f, invariants(f, opts));
  }
  return {ok == n, frac(ok, n) + " forms satisfy H(H(f)) = 12288 I^2 f + 512 J H(f) exactly"};
}

Outcome calibration(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  InvariantOptions opts;
  opts.allow_fast_path = false;
  long ok = 0, n = 0;
  while (n < 100) {
    long A = uniform(rng, -1000000, 1000000), B = uniform(rng, -1000000, 1000000);
    ++n;
    ok += invariants(weierstrass_form(A, B), opts) == InvariantPair(Rational(-3 * A), Rational(-27 * B));
  }
  return {ok == n, frac(ok, n) + " models give (I, J) = (-3A, -27B)"};
}

Outcome covering(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  long ok = 0, n = 0;
  for (int k = 0; k < 200; ++k, ++n) ok += verify_covering_identity(random_smooth(rng, 5));
  for (long A = -5; A <= 5; ++A)
    for (long B = -5; B <= 5; ++B) {
      if (4 * A * A * A + 27 * B * B == 0) continue;
      ++n;
      ok += verify_covering_identity(weierstrass_form(A, B));
    }
  return {ok == n, frac(ok, n) + " forms (200 random, " + std::to_string(n - 200) +
                       " Weierstrass) reduce to zero modulo f"};
}

Outcome residues() {
  ResidueCheck r = residue_equivalence_report();
  std::ostringstream os;
  os << r.pairs << " pairs, " << r.kraus_set << " Kraus, " << r.table_set << " table, " << r.mismatches
     << " mismatches";
  return {r.ok() && residue_equivalence_check(), os.str()};
}

Outcome pair_census() {
  bool ok = true;
  std::ostringstream os;
  for (DiscSign s : {DiscSign::positive, DiscSign::negative}) {
    EligibleCount c = count_eligible_pairs(Integer(1000000), s);
    bool within = c.ratio >= 0.9L && c.ratio <= 1.1L;
    ok &= within;
    os << to_string(s) << ": " << c.count << " vs " << static_cast<double>(c.predicted) << " (ratio "
       << static_cast<double>(c.ratio) << ") ";
  }
  return {ok, os.str() + "tolerance 10%"};
}

Outcome stabilizers(std::uint64_t seed, unsigned workers) {
  std::mt19937_64 rng(seed);
  bool ok = true;
  std::ostringstream os;
  for (long p : {5L, 7L}) {
    long agree = 0, n = 0;
    std::map<long, long> sizes;
    while (n < 50) {
      IntCoeffs c;
      for (auto& x : c) x = uniform(rng, 0, p - 1);
      TernaryCubicForm f = TernaryCubicForm::from_ints(c);
      if (!discriminant_nonzero_mod(f, p)) continue;
      ++n;
      std::int64_t s = stabilizer_mod_p(f, p, workers);
      std::int64_t e = jacobian_flexes_mod_p(f, p);
      ++sizes[s];
      agree += s == e && (s == 1 || s == 3 || s == 9);
    }
    ok &= agree == n;
    os << "p=" << p << ": " << agree << "/" << n << " (sizes";
    for (auto [s, k] : sizes) os << " " << s << "x" << k;
    os << ") ";
  }
  return {ok, os.str()};
}

Outcome local_solubility() {
  std::ostringstream os;
  bool ok = true;
  TernaryCubicForm f = TernaryCubicForm::from_ints({1, 0, 0, 0, 0, 0, 3, 0, 0, 9});
  SolubilityVerdict v3 = is_Qp_soluble(f, 3);
  bool insol = v3.status == SolubilityStatus::insoluble && !v3.certificate.empty();
  ok &= insol;
  os << "x^3+3y^3+9z^3 at 3: " << to_string(v3.status) << "; ";

  TernaryCubicForm s = TernaryCubicForm::from_ints({3, 0, 0, 0, 0, 0, 4, 0, 0, 5});
  long soluble = 0, primes = 0;
  for (unsigned long p = 2; p <= 97; ++p) {
    if (!is_prime(p)) continue;
    ++primes;
    soluble += is_Qp_soluble(s, static_cast<long>(p)).status == SolubilityStatus::soluble;
  }
  bool real = is_real_soluble(s).status == SolubilityStatus::soluble;
  ok &= soluble == primes && real;
  os << "3x^3+4y^3+5z^3: " << soluble << "/" << primes << " primes, real " << (real ? "soluble" : "not soluble")
     << "; ";

  long w_ok = 0, w = 0;
  for (long A = -5; A <= 5; ++A)
    for (long B = -5; B <= 5; ++B) {
      if (4 * A * A * A + 27 * B * B == 0) continue;
      ++w;
      w_ok += is_locally_soluble(weierstrass_form(A, B)).status == SolubilityStatus::soluble;
    }
  ok &= w_ok == w;
  os << "Weierstrass |A|,|B| <= 5: " << w_ok << "/" << w << " locally soluble";
  return {ok, os.str()};
}

Outcome masses() {
  SelmerAverage a = selmer_average_bound(100);
  bool cancelled = a.limit.zeta2 == 0 && a.limit.zeta3 == 0;
  bool ok = cancelled && a.limit.coefficient == 3 && a.average_bound == 4 && a.consistent;
  std::ostringstream os;
  os << "limit " << to_string(a.limit.coefficient) << " * zeta(2)^" << a.limit.zeta2 << " zeta(3)^"
     << a.limit.zeta3 << ", bound " << to_string(a.average_bound) << ", P=100 truncation "
     << static_cast<double>(a.truncated_value) << " in [" << a.mass_product.get_d() << ", "
     << a.mass_product.get_d() * (1 + static_cast<double>(a.tail_epsilon)) << "]";
  return {ok, os.str()};
}

Outcome pairing(unsigned workers) {
  TwistPairing t = twist_pairing_report(Integer(1000000), {}, workers);
  std::ostringstream os;
  os << t.decided << " decided, " << t.undetermined << " undetermined, " << t.fixed_points << " fixed points, "
     << t.partner_missing << " missing partners, " << t.flips << " flips, " << t.non_flips << " non-flips ("
     << t.non_flips_positive_disc << " with Delta > 0, " << t.non_flips_negative_disc << " with Delta < 0), "
     << t.plus << "/" << t.decided << " with root number +1";
  return {t.decided > 0 && t.fixed_point_free() && t.always_flips() && t.exact_half(), os.str()};
}

Outcome substitutes(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  long unsound = 0, unknown = 0, yes = 0, positives = 0, negatives = 0;
  while (positives < 10000) {
    TernaryCubicForm f = random_smooth(rng, 3);
    ProjectiveMap g = random_unimodular(rng, 3);
    ActionMode mode = uniform(rng, 0, 1) ? ActionMode::linear : ActionMode::twisted;
    // f(v g) with det g = -1 is a transform of -f, not of f
    if (mode == ActionMode::linear && g.determinant() != 1)
      g = g * ProjectiveMap::from_ints({{{-1, 0, 0}, {0, 1, 0}, {0, 0, 1}}});
    TernaryCubicForm h = act(g, f, mode);
    if (!h.to_ints()) continue;
    ++positives;
    EquivalenceResult r = are_equivalent(f, h);
    if (r.status == EquivalenceStatus::no) ++unsound;
    if (r.status == EquivalenceStatus::unknown) ++unknown;
    if (r.status == EquivalenceStatus::yes) {
      ++yes;
      if (!r.witness || int_det(*r.witness) != 1 || act(to_map(*r.witness), f, ActionMode::linear) != h) ++unsound;
    }
  }
  while (negatives < 10000) {
    TernaryCubicForm f = random_smooth(rng, 3), g = random_smooth(rng, 3);
    if (invariants(f) == invariants(g)) continue;
    ++negatives;
    EquivalenceResult r = are_equivalent(f, g);
    if (r.status == EquivalenceStatus::yes || !verify_equivalence_result(f, g, r)) ++unsound;
  }

  long ineligible = 0;
  const long samples = 1000000;
  for (long k = 0; k < samples; ++k) {
    IntCoeffs c;
    for (auto& x : c) x = uniform(rng, -1000, 1000);
    auto [i16, j32] = invariants_scaled(c);
    if (!eligible(Rational(i16, 16), Rational(j32, 32)).eligible) ++ineligible;
  }

  ClassCount h0 = class_count_lower_bound(-3, -27, 0);
  ClassCount h1 = class_count_lower_bound(-3, -27, 1);
  ClassCount h2 = class_count_lower_bound(-3, -27, 2);
  bool monotone = h0.h_low <= h1.h_low && h1.h_low <= h2.h_low && h0.forms_found <= h1.forms_found &&
                  h1.forms_found <= h2.forms_found;

  std::ostringstream os;
  os << unsound << " unsound verdicts over " << positives << " positive and " << negatives << " negative pairs ("
     << yes << " yes, " << unknown << " unknown on positives); " << ineligible << "/" << samples
     << " random forms ineligible; h_low(-3,-27) at bounds 0,1,2: " << h0.h_low << "," << h1.h_low << ","
     << h2.h_low;
  return {unsound == 0 && ineligible == 0 && monotone, os.str()};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app("acceptance criteria");
  std::vector<int> expect_fail, only;
  std::uint64_t seed = 20261014;
  unsigned workers = 0;
  app.add_option("--expect-fail", expect_fail, "criteria expected to fail")->delimiter(',');
  app.add_option("--only", only, "run only these criteria")->delimiter(',');
  app.add_option("--seed", seed, "seed for the random samples");
  app.add_option("--workers", workers, "worker threads (0 = hardware concurrency)");
  CLI11_PARSE(app, argc, argv);

  std::vector<std::pair<int, std::function<Outcome()>>> criteria{
      {1, [&] { return hessian_identity(seed); }},
      {2, [&] { return calibration(seed + 1); }},
      {3, [&] { return covering(seed + 2); }},
      {4, [] { return residues(); }},
      {5, [] { return pair_census(); }},
      {6, [&] { return stabilizers(seed + 3, workers); }},
      {7, [] { return local_solubility(); }},
      {8, [] { return masses(); }},
      {9, [&] { return pairing(workers); }},
      {10, [&] { return substitutes(seed + 4); }},
  };
  std::set<int> failed, expected(expect_fail.begin(), expect_fail.end()), selected(only.begin(), only.end());
  for (auto& [id, run] : criteria) {
    if (!selected.empty() && !selected.count(id)) continue;
    auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (!o.pass) failed.insert(id);
    std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << id << ": " << o.detail << " [" << std::fixed
              << std::setprecision(1) << secs << "s]" << std::defaultfloat << std::endl;
  }
  if (!selected.empty())
    std::erase_if(expected, [&](int id) { return !selected.count(id); });
  if (failed != expected) {
    std::cout << "failing set differs from the expected set" << std::endl;
    return 1;
  }
  if (!expected.empty()) std::cout << "failures match the expected set" << std::endl;
  return 0;
}
