#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace cubic {

using Integer = mpz_class;
using Rational = mpq_class;

// User-facing error (bad input, unsupported request).
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A computation could not be decided within its budget.
class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An internal consistency check failed.
class InvariantViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

inline void check(bool ok, const char* what) {
  if (!ok) throw InvariantViolation(what);
}

// "num/den", or "num" when the denominator is 1.
std::string to_string(const Rational& q);
std::string to_string(const Integer& z);

// Accepts "n", "-n", "n/d". Throws UsageError with the offending position.
Rational parse_rational(std::string_view text);

Rational make_rational(long num, long den = 1);

bool is_integral(const Rational& q);
Integer floor_div(const Integer& a, const Integer& b);
int sign(const Rational& q);
int sign(const Integer& z);

// Exact conversion when it fits, otherwise throws.
std::int64_t to_int64(const Integer& z);
bool fits_int64(const Integer& z);
Integer from_int128(__int128 v);

// p-adic valuation of a nonzero integer or rational (p prime).
long valuation(const Integer& z, unsigned long p);
long valuation(const Rational& q, unsigned long p);

// Reduce a p-integral rational mod p. Throws UsageError when p divides the denominator.
unsigned long reduce_mod(const Rational& q, unsigned long p);

}  // namespace cubic
