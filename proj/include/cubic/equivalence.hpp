#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cubic/forms.hpp"

namespace cubic {

struct SearchBudget {
  long nodes = 400;  // expansions per side of the best-first search
};

struct ReducedForm {
  IntCoeffs form{};
  IntMatrix3 gamma{};  // form = f((x,y,z) * gamma), det gamma = 1
  long nodes = 0;
  bool exhausted = false;  // the reachable set was smaller than the budget
};

// (max |a_i|, then the coefficient tuple) orders candidates.
bool reduction_less(const IntCoeffs& a, const IntCoeffs& b);

// Best-first descent over E_ij(+-1) and signed permutations of determinant 1.
ReducedForm reduce_form(const IntCoeffs& f, const SearchBudget& budget = {});
ReducedForm reduce_form(const TernaryCubicForm& f, const SearchBudget& budget = {});

enum class CertificateKind { invariants, flex_count, point_count, zero_mod_p };
const char* to_string(CertificateKind k);

struct InequivalenceCertificate {
  CertificateKind kind = CertificateKind::invariants;
  long prime = 0;
  std::string value_f, value_g;
};

enum class EquivalenceStatus { yes, no, unknown };
const char* to_string(EquivalenceStatus s);

struct EquivalenceResult {
  EquivalenceStatus status = EquivalenceStatus::unknown;
  std::optional<IntMatrix3> witness;  // g = f((x,y,z) * witness), det 1
  std::optional<InequivalenceCertificate> certificate;
  long nodes = 0;
};

inline constexpr std::array<long, 4> kCertificatePrimes{5, 7, 11, 13};

// Integral forms with nonzero discriminant; proper (determinant 1) equivalence.
EquivalenceResult are_equivalent(const TernaryCubicForm& f, const TernaryCubicForm& g,
                                 const SearchBudget& budget = {});

// Recomputes a verdict from scratch: witnesses by exact substitution, certificates by recounting.
bool verify_equivalence_result(const TernaryCubicForm& f, const TernaryCubicForm& g, const EquivalenceResult& r);

IntMatrix3 int_inverse_unimodular(const IntMatrix3& m);
std::string serialize_matrix(const IntMatrix3& m);

// Per good prime p in kCertificatePrimes: (p, flex count of f mod p); primes dividing 3 disc are skipped.
std::vector<std::pair<long, long>> flex_signature(const TernaryCubicForm& f);

}  // namespace cubic
