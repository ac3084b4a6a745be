#include "cubic/compiled.hpp"

#include <cmath>

namespace cubic {

CompiledFormula::CompiledFormula(const MultiPoly& p) {
  if (p.arity() != 10) throw UsageError("compiled formulas take ten symbols");
  Integer abs_sum = 0;
  degree_ = std::max(p.total_degree(), 0);
  for (const auto& t : p.terms()) {
    if (t.coeff.get_den() != 1) throw UsageError("compiled formulas need integer coefficients");
    Entry en;
    for (int i = 0; i < 10; ++i) en.e[i] = static_cast<std::uint8_t>(t.mono.exponent(i));
    en.big = t.coeff.get_num();
    en.fits = fits_int64(en.big);
    en.small = en.fits ? en.big.get_si() : 0;
    all_fit_ = all_fit_ && en.fits;
    abs_sum += abs(en.big);
    entries_.push_back(std::move(en));
  }
  log2_abs_sum_ = abs_sum == 0 ? 0.0 : static_cast<double>(mpz_sizeinbase(abs_sum.get_mpz_t(), 2));
}

Rational CompiledFormula::evaluate(const std::array<Rational, 10>& a) const {
  Rational sum = 0, t;
  for (const auto& en : entries_) {
    t = en.big;
    for (int i = 0; i < 10; ++i)
      for (int k = 0; k < en.e[i]; ++k) t *= a[i];
    sum += t;
  }
  return sum;
}

Integer CompiledFormula::evaluate(const std::array<Integer, 10>& a) const {
  Integer sum = 0, t;
  for (const auto& en : entries_) {
    t = en.big;
    for (int i = 0; i < 10; ++i)
      for (int k = 0; k < en.e[i]; ++k) t *= a[i];
    sum += t;
  }
  return sum;
}

std::optional<__int128> CompiledFormula::evaluate_int128(const std::array<std::int64_t, 10>& a) const {
  if (!all_fit_) return std::nullopt;
  std::uint64_t mx = 0;
  for (auto v : a) {
    std::uint64_t u = v < 0 ? static_cast<std::uint64_t>(-(v + 1)) + 1 : static_cast<std::uint64_t>(v);
    mx = std::max(mx, u);
  }
  if (mx > 0) {
    double bits = log2_abs_sum_ + degree_ * (std::log2(static_cast<double>(mx)) + 1e-9);
    if (bits >= 125.0) return std::nullopt;
  }
  __int128 sum = 0;
  for (const auto& en : entries_) {
    __int128 t = en.small;
    for (int i = 0; i < 10; ++i)
      for (int k = 0; k < en.e[i]; ++k) t *= a[i];
    sum += t;
  }
  return sum;
}

std::int64_t CompiledFormula::evaluate_mod(const std::array<std::int64_t, 10>& a, std::int64_t p) const {
  std::array<std::int64_t, 10> r;
  for (int i = 0; i < 10; ++i) r[i] = ((a[i] % p) + p) % p;
  __int128 sum = 0;
  for (const auto& en : entries_) {
    __int128 t = en.fits ? ((en.small % p) + p) % p : mpz_fdiv_ui(en.big.get_mpz_t(), p);
    for (int i = 0; i < 10; ++i)
      for (int k = 0; k < en.e[i]; ++k) t = (t * r[i]) % p;
    sum = (sum + t) % p;
  }
  return static_cast<std::int64_t>(sum);
}

}  // namespace cubic
