#include <array>
#include <cmath>

#include "cubic/census.hpp"

namespace cubic {

namespace {

constexpr long kPeriod = 1728;

long mod(long a, long m) {
  long r = a % m;
  return r < 0 ? r + m : r;
}

long mod_integer(const Integer& a, long m) {
  Integer r;
  mpz_fdiv_r_ui(r.get_mpz_t(), a.get_mpz_t(), static_cast<unsigned long>(m));
  return r.get_si();
}

constexpr std::array<long, 8> kRow64I{1, 9, 17, 25, 33, 41, 49, 57};
constexpr std::array<long, 8> kRow64J{31, 27, 7, 3, 15, 11, 23, 19};

// allowed[c4 mod 1728] = residues of c6 mod 1728 matching both tables
const std::vector<std::vector<long>>& allowed_residues() {
  static const std::vector<std::vector<long>> table = [] {
    std::vector<std::vector<long>> t(kPeriod);
    for (long c4 = 0; c4 < kPeriod; ++c4)
      for (long c6 = 0; c6 < kPeriod; ++c6)
        if (residue_64_label(c4, c6) && residue_27_label(c4, c6)) t[c4].push_back(c6);
    return t;
  }();
  return table;
}

// #{c6 in [lo, hi] : c6 = r mod 1728}
Integer count_in_class(const Integer& lo, const Integer& hi, long r) {
  if (hi < lo) return 0;
  Integer a = hi - r, b = lo - 1 - r, qa, qb;
  mpz_fdiv_q_ui(qa.get_mpz_t(), a.get_mpz_t(), kPeriod);
  mpz_fdiv_q_ui(qb.get_mpz_t(), b.get_mpz_t(), kPeriod);
  return qa - qb;
}

}  // namespace

char residue_64_label(long c4, long c6) {
  long i64 = mod(c4, 64), j32 = mod(c6, 32);
  if (i64 % 16 == 0 && j32 == 0) return 'a';
  if (i64 % 16 == 0 && j32 == 8) return 'b';
  for (int r = 0; r < 8; ++r)
    if (i64 == kRow64I[r] && j32 == kRow64J[r]) return static_cast<char>('c' + r);
  return 0;
}

char residue_27_label(long c4, long c6) {
  // I = c4 / 16 and J = c6 / 32 in Z_3; 16^-1 = 22 and 32^-1 = 11 mod 27
  long I = mod(mod(c4, 27) * 22, 27), J = mod(mod(c6, 27) * 11, 27);
  auto pm = [J](long v) { return J == v || J == 27 - v; };
  if (I % 3 == 0 && J == 0) return 'a';
  if (I % 9 == 1 && pm(2)) return 'b';
  if (I % 9 == 4 && pm(16)) return 'c';
  if (I % 9 == 7 && pm(7)) return 'd';
  return 0;
}

EligibilityClass eligible(const Rational& I, const Rational& J) {
  EligibilityClass e;
  Rational c4 = 16 * I, c6 = 32 * J;
  if (c4.get_den() != 1 || c6.get_den() != 1) {
    e.reason = "(16I, 32J) is not integral";
    return e;
  }
  long a = mod_integer(c4.get_num(), kPeriod), b = mod_integer(c6.get_num(), kPeriod);
  e.residue_64 = residue_64_label(a, b);
  e.residue_27 = residue_27_label(a, b);
  e.eligible = e.residue_64 && e.residue_27;
  if (!e.residue_64) e.reason = "no mod 64 row matches";
  else if (!e.residue_27) e.reason = "no mod 27 row matches";
  return e;
}

bool kraus_residue(long c4, long c6) {
  c4 = mod(c4, kPeriod);
  c6 = mod(c6, kPeriod);
  if (mod(c4 * c4 % kPeriod * c4 - c6 * c6, kPeriod) != 0) return false;
  long r27 = c6 % 27;
  if (r27 == 9 || r27 == 18) return false;
  return c6 % 4 == 3 || (c4 % 16 == 0 && (c6 % 32 == 0 || c6 % 32 == 8));
}

bool eligible_kraus(const Integer& c4, const Integer& c6) {
  Integer d = c4 * c4 * c4 - c6 * c6;
  if (d == 0) return false;
  return kraus_residue(mod_integer(c4, kPeriod), mod_integer(c6, kPeriod));
}

ResidueCheck residue_equivalence_report() {
  ResidueCheck r;
  for (long c4 = 0; c4 < kPeriod; ++c4)
    for (long c6 = 0; c6 < kPeriod; ++c6) {
      ++r.pairs;
      bool k = kraus_residue(c4, c6);
      bool t = residue_64_label(c4, c6) && residue_27_label(c4, c6);
      r.kraus_set += k;
      r.table_set += t;
      if (k != t) {
        ++r.mismatches;
        if (!r.first_mismatch) r.first_mismatch = std::make_pair(c4, c6);
      }
    }
  return r;
}

bool residue_equivalence_check() { return residue_equivalence_report().ok(); }

const char* to_string(DiscSign s) { return s == DiscSign::positive ? "+" : "-"; }

EligibleCount count_eligible_pairs(const Integer& X, DiscSign sign) {
  if (X < 1) throw UsageError("height bound must be at least 1");
  EligibleCount out;
  out.X = X;
  out.sign = sign;
  out.count = 0;
  // H < X  <=>  |c4|^3 < 4096 X and c6^2 < 4096 X
  Integer bound = 4096 * X - 1;
  Integer T = isqrt(bound);
  long c4max = icbrt(bound).get_si();
  const auto& allowed = allowed_residues();
  for (long c4 = -c4max; c4 <= c4max; ++c4) {
    const auto& res = allowed[mod(c4, kPeriod)];
    if (res.empty()) continue;
    Integer cube = Integer(c4) * c4 * c4;
    for (long r : res) {
      if (sign == DiscSign::positive) {
        // c6^2 < c4^3
        if (c4 <= 0) break;
        Integer m = isqrt(cube - 1);
        if (m > T) m = T;
        out.count += count_in_class(-m, m, r);
      } else if (c4 < 0) {
        out.count += count_in_class(-T, T, r);
      } else {
        // c6^2 > c4^3, i.e. |c6| >= isqrt(c4^3) + 1 (c6 != 0 when c4 = 0)
        Integer s = c4 == 0 ? Integer(1) : isqrt(cube) + 1;
        out.count += count_in_class(s, T, r) + count_in_class(-T, -s, r);
      }
    }
  }
  long double x56 = std::pow(static_cast<long double>(X.get_d()), 5.0L / 6.0L);
  out.predicted = (sign == DiscSign::positive ? 32.0L : 128.0L) / 135.0L * x56;
  out.ratio = static_cast<long double>(out.count.get_d()) / out.predicted;
  return out;
}

}  // namespace cubic
