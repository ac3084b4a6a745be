#include "cubic/arith.hpp"

#include <algorithm>
#include <map>
#include <mutex>

namespace cubic {

const std::vector<std::uint32_t>& small_primes(std::uint32_t n) {
  static std::mutex mu;
  static std::map<std::uint32_t, std::vector<std::uint32_t>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  std::vector<bool> composite(n + 1, false);
  std::vector<std::uint32_t> out;
  for (std::uint64_t i = 2; i <= n; ++i) {
    if (composite[i]) continue;
    out.push_back(static_cast<std::uint32_t>(i));
    for (std::uint64_t j = i * i; j <= n; j += i) composite[j] = true;
  }
  return cache.emplace(n, std::move(out)).first->second;
}

bool is_prime(const Integer& n) {
  if (n < 2) return false;
  return mpz_probab_prime_p(n.get_mpz_t(), 30) != 0;
}

bool is_prime(unsigned long n) { return is_prime(Integer(n)); }

namespace {

// Brent's variant of Pollard rho. Returns a nontrivial factor or 0.
Integer rho_split(const Integer& n, unsigned long c, unsigned long& budget) {
  if (mpz_even_p(n.get_mpz_t())) return 2;
  Integer y = 2, x, q = 1, g = 1, ys, t;
  const unsigned long m = 128;
  unsigned long r = 1, used = 0;
  auto f = [&](Integer& v) {
    v = v * v + c;
    mpz_mod(v.get_mpz_t(), v.get_mpz_t(), n.get_mpz_t());
  };
  while (g == 1) {
    x = y;
    for (unsigned long i = 0; i < r; ++i) f(y);
    unsigned long k = 0;
    while (k < r && g == 1) {
      ys = y;
      unsigned long lim = std::min(m, r - k);
      for (unsigned long i = 0; i < lim; ++i) {
        f(y);
        t = x - y;
        q = q * abs(t);
        mpz_mod(q.get_mpz_t(), q.get_mpz_t(), n.get_mpz_t());
      }
      mpz_gcd(g.get_mpz_t(), q.get_mpz_t(), n.get_mpz_t());
      k += lim;
      used += lim;
      if (used > budget) {
        budget = 0;
        return 0;
      }
    }
    r *= 2;
  }
  if (g == n) {
    do {
      f(ys);
      t = x - ys;
      mpz_gcd(g.get_mpz_t(), t.get_mpz_t(), n.get_mpz_t());
    } while (g == 1);
  }
  budget -= used;
  if (g == n) return 1;
  return g;
}

// Appends prime factors of n to out; returns false when the budget runs out.
bool split_all(const Integer& n, unsigned long& budget, std::vector<Integer>& out, Integer& leftover) {
  if (n == 1) return true;
  if (is_prime(n)) {
    out.push_back(n);
    return true;
  }
  Integer sq;
  if (mpz_perfect_square_p(n.get_mpz_t())) {
    mpz_sqrt(sq.get_mpz_t(), n.get_mpz_t());
    Integer before = leftover;
    std::vector<Integer> half;
    if (!split_all(sq, budget, half, leftover)) {
      leftover = before * n;
      return false;
    }
    for (auto& p : half) {
      out.push_back(p);
      out.push_back(p);
    }
    return true;
  }
  for (unsigned long c = 1; c < 20; ++c) {
    Integer d = rho_split(n, c, budget);
    if (d != 0 && d != 1) {
      Integer e = n / d;
      bool ok1 = split_all(d, budget, out, leftover);
      bool ok2 = split_all(e, budget, out, leftover);
      return ok1 && ok2;
    }
    if (d == 0) break;
  }
  leftover *= n;
  return false;
}

}  // namespace

Factorization factor(const Integer& n_in, const FactorBudget& budget) {
  if (n_in == 0) throw InvariantViolation("factor of zero");
  Factorization res;
  Integer n = abs(n_in);
  std::map<Integer, int> found;
  const auto& primes = small_primes(static_cast<std::uint32_t>(std::min<unsigned long>(budget.trial_bound, 1u << 31)));
  bool prime_rest = n == 1 || is_prime(n);
  for (std::uint32_t p : primes) {
    if (prime_rest || n == 1) break;
    if (Integer(p) * p > n) break;
    if (mpz_divisible_ui_p(n.get_mpz_t(), p)) {
      int e = 0;
      while (mpz_divisible_ui_p(n.get_mpz_t(), p)) {
        mpz_divexact_ui(n.get_mpz_t(), n.get_mpz_t(), p);
        ++e;
      }
      found[Integer(p)] += e;
      prime_rest = n == 1 || is_prime(n);
    }
  }
  if (n != 1) {
    if (prime_rest || (primes.size() && Integer(primes.back()) * primes.back() >= n)) {
      found[n] += 1;
    } else {
      unsigned long rb = budget.rho_iterations;
      std::vector<Integer> ps;
      Integer leftover = 1;
      bool ok = split_all(n, rb, ps, leftover);
      for (auto& p : ps) found[p] += 1;
      if (!ok) {
        res.complete = false;
        res.unfactored = leftover;
      }
    }
  }
  for (auto& [p, e] : found) res.factors.push_back({p, e});
  return res;
}

std::vector<Integer> divisors(const Integer& n, const FactorBudget& budget) {
  Factorization f = factor(n, budget);
  if (!f.complete) throw BudgetExceeded("factorization budget exceeded for " + n.get_str());
  std::vector<Integer> out{1};
  for (const auto& pp : f.factors) {
    size_t base = out.size();
    Integer pk = 1;
    for (int e = 1; e <= pp.exponent; ++e) {
      pk *= pp.prime;
      for (size_t i = 0; i < base; ++i) out.push_back(out[i] * pk);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

bool is_squarefree(const Factorization& f) {
  if (!f.complete) return false;
  for (const auto& pp : f.factors)
    if (pp.exponent > 1) return false;
  return true;
}

int kronecker(const Integer& a, const Integer& n) { return mpz_kronecker(a.get_mpz_t(), n.get_mpz_t()); }

Integer isqrt(const Integer& n) {
  if (n < 0) throw InvariantViolation("isqrt of negative");
  Integer r;
  mpz_sqrt(r.get_mpz_t(), n.get_mpz_t());
  return r;
}

Integer icbrt(const Integer& n) {
  if (n < 0) throw InvariantViolation("icbrt of negative");
  Integer r;
  mpz_root(r.get_mpz_t(), n.get_mpz_t(), 3);
  return r;
}

std::int64_t inverse_mod(std::int64_t a, std::int64_t m) {
  std::int64_t g = m, x = 0, x1 = 1, a1 = ((a % m) + m) % m;
  while (a1) {
    std::int64_t q = g / a1;
    std::tie(g, a1) = std::make_pair(a1, g - q * a1);
    std::tie(x, x1) = std::make_pair(x1, x - q * x1);
  }
  if (g != 1) throw InvariantViolation("not invertible");
  return ((x % m) + m) % m;
}

}  // namespace cubic
