#include <algorithm>
#include <atomic>
#include <thread>

#include "cubic/census.hpp"
#include "cubic/flex.hpp"

namespace cubic {

unsigned resolve_workers(unsigned workers) {
  if (workers) return workers;
  unsigned h = std::thread::hardware_concurrency();
  return h ? h : 1;
}

namespace {

std::int64_t max_abs(const IntCoeffs& a) {
  std::int64_t m = 0;
  for (auto x : a) m = std::max(m, x < 0 ? -x : x);
  return m;
}

bool shell_less(const IntCoeffs& a, const IntCoeffs& b) {
  std::int64_t ma = max_abs(a), mb = max_abs(b);
  if (ma != mb) return ma < mb;
  return a < b;
}

// Lexicographic walk over [-b, b]^10 with a fixed leading coefficient.
template <class F>
void walk_box(int b, std::int64_t lead, F&& fn) {
  IntCoeffs c;
  c.fill(-b);
  c[0] = lead;
  while (true) {
    fn(c);
    int i = 9;
    while (i > 0 && c[i] == b) c[i--] = -b;
    if (i == 0) return;
    ++c[i];
  }
}

}  // namespace

long enumerate_forms(int bound, const std::function<void(const FormRecord&)>& sink, const EnumerateOptions& opts) {
  if (bound < 0) throw UsageError("coefficient bound must be nonnegative");
  if (bound > opts.cap) throw UsageError("coefficient bound " + std::to_string(bound) + " exceeds the cap " +
                                         std::to_string(opts.cap));
  long n = 0;
  for (int b = 1; b <= bound; ++b)
    for (std::int64_t lead = -b; lead <= b; ++lead)
      walk_box(b, lead, [&](const IntCoeffs& c) {
        if (max_abs(c) != b) return;
        FormRecord r;
        r.coeffs = c;
        std::tie(r.i16, r.j32) = invariants_scaled(c);
        r.singular = r.i16 * r.i16 * r.i16 == r.j32 * r.j32;
        if (opts.annotate_irreducibility && !r.singular) {
          TernaryCubicForm f = TernaryCubicForm::from_ints(c);
          bool strong = is_strongly_irreducible(f, opts.budget);
          r.strongly_irreducible = strong;
          r.totally_irreducible =
              strong && !jacobian_has_rational_3_torsion(Rational(r.i16, 16), Rational(r.j32, 32), opts.budget);
        }
        ++n;
        sink(r);
      });
  return n;
}

std::vector<IntCoeffs> forms_with_invariants(const Integer& i16, const Integer& j32, int bound, unsigned workers) {
  if (bound < 1) return {};
  workers = resolve_workers(workers);
  std::vector<std::vector<IntCoeffs>> found(workers);
  std::atomic<std::int64_t> next{-bound};
  auto work = [&](unsigned w) {
    for (std::int64_t lead; (lead = next.fetch_add(1)) <= bound;)
      walk_box(bound, lead, [&](const IntCoeffs& c) {
        auto r = invariants_int128(c);
        if (r) {
          if (from_int128(r->first) != i16 || from_int128(r->second) != j32) return;
        } else {
          auto s = invariants_scaled(c);
          if (s.first != i16 || s.second != j32) return;
        }
        found[w].push_back(c);
      });
  };
  std::vector<std::thread> pool;
  for (unsigned w = 1; w < workers; ++w) pool.emplace_back(work, w);
  work(0);
  for (auto& t : pool) t.join();
  std::vector<IntCoeffs> out;
  for (auto& v : found) out.insert(out.end(), v.begin(), v.end());
  std::sort(out.begin(), out.end(), shell_less);
  return out;
}

ClassCount class_count_lower_bound(const Rational& I, const Rational& J, int coeff_bound, const SearchBudget& budget,
                                   unsigned workers) {
  if (!eligible(I, J).eligible) throw UsageError("invariant pair is not eligible");
  if (discriminant_of(I, J) == 0) throw UsageError("discriminant is zero");
  ClassCount out;
  Rational c4 = 16 * I, c6 = 32 * J;
  std::vector<IntCoeffs> forms = forms_with_invariants(c4.get_num(), c6.get_num(), coeff_bound, workers);
  out.forms_found = static_cast<long>(forms.size());
  InvariantPair inv(I, J);
  for (const auto& c : forms) {
    TernaryCubicForm f = TernaryCubicForm::from_ints(c);
    if (!is_strongly_irreducible(f)) continue;
    ++out.strongly_irreducible;
    std::vector<PairStatus> statuses;
    bool separated = true;
    std::optional<std::size_t> home;
    for (std::size_t k = 0; k < out.classes.size(); ++k) {
      EquivalenceResult r = are_equivalent(TernaryCubicForm::from_ints(out.classes[k].members.front()), f, budget);
      if (r.status == EquivalenceStatus::yes) {
        home = k;
        break;
      }
      if (r.status == EquivalenceStatus::unknown) separated = false;
      statuses.push_back({k, std::move(r)});
    }
    if (home) {
      out.classes[*home].members.push_back(c);
    } else if (separated) {
      ClassRecord rec;
      rec.invariants = inv;
      rec.members.push_back(c);
      rec.representative = reduce_form(c, budget).form;
      rec.statuses = std::move(statuses);
      out.classes.push_back(std::move(rec));
    } else {
      ++out.undecided;
    }
  }
  out.h_low = static_cast<long>(out.classes.size());
  return out;
}

}  // namespace cubic
