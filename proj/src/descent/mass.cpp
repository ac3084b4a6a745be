#include <cmath>

#include "cubic/descent.hpp"

namespace cubic {

namespace {

Integer product_tree(std::vector<Integer> v) {
  if (v.empty()) return 1;
  while (v.size() > 1) {
    std::vector<Integer> next;
    for (size_t i = 0; i + 1 < v.size(); i += 2) next.push_back(v[i] * v[i + 1]);
    if (v.size() % 2) next.push_back(v.back());
    v = std::move(next);
  }
  return v[0];
}

}  // namespace

Rational local_mass_factor(long p) {
  if (p < 2 || !is_prime(static_cast<unsigned long>(p))) throw UsageError("local_mass_factor needs a prime");
  // #(E(Q_p)/3E(Q_p)) / #E[3](Q_p) = |1/3|_p
  return p == 3 ? 3 : 1;
}

SelmerAverage selmer_average_bound(long truncation, bool include_p3) {
  if (truncation < 2) throw UsageError("truncation must be at least 2");
  SelmerAverage r;
  r.truncation = truncation;
  r.mass_product = 1;
  std::vector<Integer> num, den;
  for (std::uint32_t p : small_primes(static_cast<std::uint32_t>(truncation))) {
    if (p > static_cast<std::uint32_t>(truncation)) break;
    Integer q = p;
    num.push_back((q * q - 1) * (q * q * q - 1));
    den.push_back(q * q * q * q * q);
    if (p != 3 || include_p3) r.mass_product *= local_mass_factor(p);
  }
  r.euler_truncation = Rational(product_tree(num), product_tree(den));
  r.euler_truncation.canonicalize();
  // zeta(2) zeta(3) times the full Euler product prod_p (1 - p^-2)(1 - p^-3) is 1; the masses
  // differ from 1 only at p = 3
  EulerMonomial m{1, 1, Rational(1)};
  m.zeta2 -= 1;
  m.zeta3 -= 1;
  if (include_p3) m.coefficient *= local_mass_factor(3);
  check(m.zeta2 == 0 && m.zeta3 == 0, "zeta factors did not cancel");
  r.limit = m;
  r.average_bound = 1 + m.coefficient;

  const long double pi = 3.141592653589793238462643383279502884L;
  const long double zeta3 = 1.202056903159594285399738161511449990765L;
  const long double zeta2 = pi * pi / 6;
  r.truncated_value = zeta2 * zeta3 * static_cast<long double>(r.euler_truncation.get_d()) *
                      static_cast<long double>(r.mass_product.get_d());
  long double P = static_cast<long double>(truncation);
  long double s = (1 / P + 1 / (2 * P * P)) / (1 - 1 / (P * P));
  r.tail_epsilon = std::expm1(s) * (1 + 1e-12L);
  long double lim = static_cast<long double>(r.mass_product.get_d());
  r.consistent = r.truncated_value >= lim * (1 - 1e-15L) && r.truncated_value <= lim * (1 + r.tail_epsilon);
  return r;
}

}  // namespace cubic
