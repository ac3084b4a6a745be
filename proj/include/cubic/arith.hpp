#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "cubic/numeric.hpp"

namespace cubic {

struct PrimePower {
  Integer prime;
  int exponent = 0;
};

struct Factorization {
  std::vector<PrimePower> factors;  // ascending primes
  bool complete = true;             // false when the budget ran out
  Integer unfactored = 1;           // composite cofactor left over when incomplete
};

struct FactorBudget {
  unsigned long trial_bound = 1000000;
  unsigned long rho_iterations = 2000000;
};

// Primes up to n, sieved once per bound.
const std::vector<std::uint32_t>& small_primes(std::uint32_t n = 1000000);

bool is_prime(const Integer& n);
bool is_prime(unsigned long n);

// Factorization of |n| (n != 0); trial division, then Brent-Pollard rho.
Factorization factor(const Integer& n, const FactorBudget& budget = {});

// All positive divisors of |n| (n != 0). Requires a complete factorization.
std::vector<Integer> divisors(const Integer& n, const FactorBudget& budget = {});

bool is_squarefree(const Factorization& f);

// Kronecker symbol (a/n).
int kronecker(const Integer& a, const Integer& n);

Integer isqrt(const Integer& n);   // floor sqrt, n >= 0
Integer icbrt(const Integer& n);   // floor cube root, n >= 0

// Modular inverse; throws when not invertible.
std::int64_t inverse_mod(std::int64_t a, std::int64_t m);

}  // namespace cubic
