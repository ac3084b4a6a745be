#include <set>

#include "cubic/descent.hpp"

namespace cubic {

SelmerSearch selmer_search(const CurveModel& E, int coeff_bound, const SelmerBudget& budget) {
  if (!E.has_integral_ab()) throw UsageError("selmer_search needs integral A and B");
  if (E.discriminant() == 0) throw UsageError("curve is singular");
  if (coeff_bound < 0 || coeff_bound > budget.coeff_cap)
    throw UsageError("coefficient bound must lie in [0, " + std::to_string(budget.coeff_cap) + "]");
  SelmerSearch out;
  out.curve = E;
  out.coeff_bound = coeff_bound;
  Integer side = 2 * coeff_bound + 1, total;
  mpz_pow_ui(total.get_mpz_t(), side.get_mpz_t(), 10);
  out.forms_scanned = total.get_si();

  std::vector<TernaryCubicForm> candidates{weierstrass_form(E.A(), E.B())};
  for (const auto& c : forms_with_invariants(E.c4(), E.c6(), coeff_bound, budget.workers)) {
    TernaryCubicForm f = TernaryCubicForm::from_ints(c);
    if (f != candidates.front()) candidates.push_back(f);
  }
  out.forms_matching = static_cast<long>(candidates.size()) - 1;

  for (const auto& f : candidates) {
    if (!verify_covering_identity(f)) throw InvariantViolation("covering identity fails for " + f.serialize());
    LocalSolubility ls = is_locally_soluble(f, budget.factor, budget.padic);
    if (ls.status == SolubilityStatus::insoluble) {
      ++out.insoluble;
      continue;
    }
    if (ls.status == SolubilityStatus::undetermined) {
      ++out.solubility_undetermined;
      continue;
    }
    ++out.locally_soluble;
    std::vector<PairStatus> statuses;
    std::optional<std::size_t> home;
    bool unknown = false;
    for (std::size_t k = 0; k < out.classes.size(); ++k) {
      EquivalenceResult r = are_equivalent(out.classes[k].representative, f, budget.equivalence);
      if (r.status == EquivalenceStatus::yes) {
        home = k;
        break;
      }
      unknown |= r.status == EquivalenceStatus::unknown;
      statuses.push_back({k, std::move(r)});
    }
    if (home) {
      out.classes[*home].members.push_back(f);
      continue;
    }
    if (unknown) ++out.grouping_unknown;
    SelmerClass cls;
    cls.representative = f;
    cls.members.push_back(f);
    cls.trivial = !rational_flexes(f, budget.factor).rational_flexes.empty();
    cls.flex_signature = flex_signature(f);
    cls.solubility = std::move(ls);
    cls.statuses = std::move(statuses);
    if (!cls.trivial) cls.negation = are_equivalent(f, -f, budget.equivalence);
    out.classes.push_back(std::move(cls));
  }

  // Flex counts mod a good p are 0 or #E[3](F_p) and depend only on the local class,
  // so distinct signatures separate classes up to inverse.
  std::set<std::vector<std::pair<long, long>>> signatures;
  for (const auto& c : out.classes)
    if (!c.trivial) signatures.insert(c.flex_signature);
  out.distinct_signatures = static_cast<long>(signatures.size());
  long needed = 1 + 2 * out.distinct_signatures;
  while (out.lower_bound < needed) out.lower_bound *= 3;

  if (out.solubility_undetermined)
    out.phase_notes.push_back("local solubility: " + std::to_string(out.solubility_undetermined) +
                              " forms undetermined within budget");
  if (out.grouping_unknown)
    out.phase_notes.push_back("equivalence: " + std::to_string(out.grouping_unknown) +
                              " classes not separated from an earlier class");
  return out;
}

}  // namespace cubic
