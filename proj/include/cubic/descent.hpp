#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cubic/arith.hpp"
#include "cubic/census.hpp"
#include "cubic/flex.hpp"
#include "cubic/forms.hpp"

namespace cubic {

// Covariants realizing the covering map to Y^2 = X^3 - (I/3) X - J/27.
// bordered = G/36 and jac_covariant = J/72 for the raw determinants G, J.
struct CoveringData {
  TernaryCubicForm source;
  MultiPoly hessian;
  MultiPoly bordered;
  MultiPoly jac_covariant;
  InvariantPair target;
};

struct JacobianPoint {
  bool infinity = false;
  Rational X, Y;
};

CoveringData covering_map(const TernaryCubicForm& f);
JacobianPoint evaluate_covering(const CoveringData& c, const ProjectivePoint& P);
// J^2 - 81 G^3 + 27 I G H^4 + 3 J H^6, before reduction modulo f.
MultiPoly covering_syzygy(const CoveringData& c);
bool verify_covering_identity(const TernaryCubicForm& f);

enum class SolubilityStatus { soluble, insoluble, undetermined };
const char* to_string(SolubilityStatus s);

struct SolubilityVerdict {
  SolubilityStatus status = SolubilityStatus::undetermined;
  long prime = 0;  // 0 for the real place
  int precision = 0;
  std::optional<std::array<Integer, 3>> witness;
  std::string certificate;
  long nodes = 0;
};

struct RealWitness {
  ProjectivePoint base, direction;  // the line base + t * direction
  Rational lo, hi;                  // f changes sign on [lo, hi], or lo = hi is an exact root
  ProjectivePoint approximation;
};

RealWitness real_witness(const TernaryCubicForm& f);
SolubilityVerdict is_real_soluble(const TernaryCubicForm& f);

struct PadicOptions {
  int max_k = 0;  // 0 selects 2 v_p(N) + 3 for the discriminant numerator N
  long node_budget = 2000000;
};

SolubilityVerdict is_Qp_soluble(const TernaryCubicForm& f, long p, const PadicOptions& opts = {});

struct LocalSolubility {
  SolubilityStatus status = SolubilityStatus::undetermined;
  SolubilityVerdict real;
  std::vector<SolubilityVerdict> primes;  // every prime that needed a search
  std::string reason;
};

LocalSolubility is_locally_soluble(const TernaryCubicForm& f, const FactorBudget& budget = {},
                                   const PadicOptions& opts = {});

Rational local_mass_factor(long p);

// zeta(2)^zeta2 * zeta(3)^zeta3 * coefficient
struct EulerMonomial {
  int zeta2 = 0, zeta3 = 0;
  Rational coefficient = 1;
};

struct SelmerAverage {
  long truncation = 0;
  Rational euler_truncation;     // prod_{p <= P} (1 - p^-2)(1 - p^-3)
  Rational mass_product;         // prod_{p <= P} local_mass_factor(p)
  long double truncated_value;  // zeta(2) zeta(3) * euler_truncation * mass_product
  long double tail_epsilon;     // prod_{p > P} ((1 - p^-2)(1 - p^-3))^-1 <= 1 + tail_epsilon
  EulerMonomial limit;          // exact, after the Euler product cancels zeta(2) zeta(3)
  Rational average_bound;       // 1 + limit
  bool consistent = false;       // m <= truncated_value <= m * (1 + tail_epsilon) for m = mass_product
};

SelmerAverage selmer_average_bound(long truncation, bool include_p3 = true);

struct SelmerBudget {
  SearchBudget equivalence{};
  FactorBudget factor{};
  PadicOptions padic{};
  int coeff_cap = 2;
  unsigned workers = 0;
};

// One proper-equivalence class of locally soluble forms found by the search.
struct SelmerClass {
  TernaryCubicForm representative;
  std::vector<TernaryCubicForm> members;
  bool trivial = false;  // a rational flex exists
  std::vector<std::pair<long, long>> flex_signature;
  LocalSolubility solubility;
  std::vector<PairStatus> statuses;           // against earlier classes
  std::optional<EquivalenceResult> negation;  // representative against its negative
};

struct SelmerSearch {
  CurveModel curve;
  int coeff_bound = 0;
  long forms_scanned = 0;
  long forms_matching = 0;
  long locally_soluble = 0;
  long insoluble = 0;
  long solubility_undetermined = 0;
  long grouping_unknown = 0;  // forms left unplaced by the equivalence search
  std::vector<SelmerClass> classes;
  long distinct_signatures = 0;  // among nontrivial classes
  long lower_bound = 1;          // on #S_3(E); never an upper bound
  std::vector<std::string> phase_notes;
};

// Integral forms with |a_i| <= coeff_bound and invariants (-3A, -27B) that are locally soluble, grouped into classes.
SelmerSearch selmer_search(const CurveModel& E, int coeff_bound, const SelmerBudget& budget = {});

}  // namespace cubic
