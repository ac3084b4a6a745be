#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "cubic/arith.hpp"
#include "cubic/equivalence.hpp"
#include "cubic/forms.hpp"

namespace cubic {

class Unsupported : public UsageError {
 public:
  using UsageError::UsageError;
};

// Labels 'a'..'j' (mod 64 table on (16I, 32J)) and 'a'..'d' (mod 27 table on (I, J)); 0 when no row matches.
struct EligibilityClass {
  char residue_64 = 0;
  char residue_27 = 0;
  bool eligible = false;
  std::string reason;
};

EligibilityClass eligible(const Rational& I, const Rational& J);
// Table rows only, on c4 = 16I and c6 = 32J; the nonvanishing of the discriminant is not part of it.
char residue_64_label(long c4, long c6);
char residue_27_label(long c4, long c6);
bool eligible_kraus(const Integer& c4, const Integer& c6);
// Congruence clauses of eligible_kraus on residues mod 1728.
bool kraus_residue(long c4, long c6);

struct ResidueCheck {
  long pairs = 0;
  long kraus_set = 0;
  long table_set = 0;
  long mismatches = 0;
  std::optional<std::pair<long, long>> first_mismatch;
  bool ok() const { return mismatches == 0; }
};

ResidueCheck residue_equivalence_report();
bool residue_equivalence_check();

enum class DiscSign { positive, negative };
const char* to_string(DiscSign s);

struct EligibleCount {
  Integer X;
  DiscSign sign = DiscSign::positive;
  Integer count;
  long double predicted = 0;  // 32/135 X^(5/6) or 128/135 X^(5/6)
  long double ratio = 0;
};

// Eligible (I, J) in (1/16)Z x (1/32)Z with H(I, J) < X and the requested sign of 4I^3 - J^2.
EligibleCount count_eligible_pairs(const Integer& X, DiscSign sign);

struct FormRecord {
  IntCoeffs coeffs{};
  Integer i16, j32;
  bool singular = false;
  std::optional<bool> strongly_irreducible;
  std::optional<bool> totally_irreducible;
};

struct EnumerateOptions {
  int cap = 3;
  bool annotate_irreducibility = true;
  FactorBudget budget{};
};

// All integral forms with max |a_i| <= bound in shells of increasing max |a_i|; f and -f are both streamed.
long enumerate_forms(int bound, const std::function<void(const FormRecord&)>& sink, const EnumerateOptions& opts = {});

// Forms of the box with (16I, 32J) = (i16, j32), in enumeration order; the scan runs on workers threads.
std::vector<IntCoeffs> forms_with_invariants(const Integer& i16, const Integer& j32, int bound, unsigned workers = 0);

struct PairStatus {
  std::size_t other = 0;  // index of the other class
  EquivalenceResult result;
};

struct ClassRecord {
  InvariantPair invariants;
  IntCoeffs representative{};
  std::vector<IntCoeffs> members;
  std::vector<PairStatus> statuses;
};

struct ClassCount {
  long h_low = 0;
  long forms_found = 0;
  long strongly_irreducible = 0;
  long undecided = 0;  // forms neither matched to a class nor separated from every class
  std::vector<ClassRecord> classes;
};

ClassCount class_count_lower_bound(const Rational& I, const Rational& J, int coeff_bound,
                                   const SearchBudget& budget = {}, unsigned workers = 0);

// Elliptic curve with integral invariants (I, J): y^2 = x^3 - (I/3) x - J/27.
struct CurveModel {
  Integer I, J;

  static CurveModel from_weierstrass(const Integer& A, const Integer& B);
  Rational A() const;
  Rational B() const;
  bool has_integral_ab() const;
  // Not (p^4 | A and p^6 | B) for any p; integral (A, B) only.
  bool is_minimal() const;
  Integer c4() const { return 16 * I; }
  Integer c6() const { return 32 * J; }
  Rational discriminant() const;  // (4 I^3 - J^2) / 27
  Rational height() const;
  CurveModel twist_minus_one() const { return {I, -J}; }
  std::string to_string() const;
};

enum class ReductionType { good, split_multiplicative, nonsplit_multiplicative, additive };
const char* to_string(ReductionType t);

// Local reduction of the curve with invariants c4 = 16I, c6 = 32J after minimization at p.
ReductionType reduction_type(const CurveModel& E, long p);
// Minimal discriminant (c4^3 - c6^2)/1728 after local minimization at every prime of the factorization.
Integer minimal_discriminant(const CurveModel& E, const FactorBudget& budget = {});
// -prod_p w_p over split multiplicative primes; semistable curves with good reduction at 2.
int root_number(const CurveModel& E, const FactorBudget& budget = {});

struct FamilyVerdict {
  std::optional<bool> member;  // nullopt when the factorization budget ran out
  std::string reason;
};

// Delta odd, Delta/9 squarefree and prime to 3, gcd(I, Delta) = 1, with Delta = (4I^3 - J^2)/27.
FamilyVerdict in_twist_family(const CurveModel& E, const FactorBudget& budget = {});
// -prod over p | Delta of w_p, with w_p = -1 exactly when (-2J/p) = 1.
int twist_family_root_number(const CurveModel& E, const FactorBudget& budget = {});

enum class Family { all, semistable, twist_family };
const char* to_string(Family f);
Family parse_family(const std::string& s);

struct CurveCensus {
  Integer X;
  Family family = Family::all;
  long count = 0;
  long undetermined = 0;
  long all_count = 0;  // minimal integral (A, B) with height < X
  long double density = 0;
};

// all, semistable: minimal integral (A, B) with max(27|A|^3, 729B^2/4) < X;
// twist_family: integral (I, J) with max(|I|^3, J^2/4) < X.
CurveCensus count_curves(Family family, const Integer& X, const FactorBudget& budget = {}, unsigned workers = 0);
// Members in increasing (I, J) order.
std::vector<CurveModel> twist_family_members(const Integer& X, long* undetermined = nullptr,
                                             const FactorBudget& budget = {}, unsigned workers = 0);
// Log-log slope of N(all; X) between X1 and X2.
long double curve_count_slope(const Integer& X1, const Integer& X2, unsigned workers = 0);

struct TwistPairing {
  long decided = 0;
  long undetermined = 0;
  long plus = 0;
  long fixed_points = 0;
  long partner_missing = 0;
  long flips = 0;
  long non_flips = 0;
  long non_flips_positive_disc = 0;
  long non_flips_negative_disc = 0;
  bool fixed_point_free() const { return fixed_points == 0 && partner_missing == 0; }
  bool always_flips() const { return non_flips == 0; }
  bool exact_half() const { return 2 * plus == decided; }
};

TwistPairing twist_pairing_report(const Integer& X, const FactorBudget& budget = {}, unsigned workers = 0);

unsigned resolve_workers(unsigned workers);

}  // namespace cubic
