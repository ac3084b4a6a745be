#include "cubic/numeric.hpp"

#include <cctype>

namespace cubic {

std::string to_string(const Rational& q) { return q.get_str(); }

std::string to_string(const Integer& z) { return z.get_str(); }

Rational parse_rational(std::string_view text) {
  size_t b = 0, e = text.size();
  while (b < e && std::isspace(static_cast<unsigned char>(text[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(text[e - 1]))) --e;
  if (b == e) throw UsageError("empty number at position " + std::to_string(b));
  size_t slash = std::string_view::npos;
  for (size_t i = b; i < e; ++i) {
    char c = text[i];
    if (c == '/') {
      if (slash != std::string_view::npos) throw UsageError("second '/' at position " + std::to_string(i));
      slash = i;
      continue;
    }
    bool sign_ok = (c == '-' || c == '+') && (i == b || i == slash + 1);
    if (!std::isdigit(static_cast<unsigned char>(c)) && !sign_ok) {
      throw UsageError(std::string("unexpected character '") + c + "' at position " + std::to_string(i));
    }
  }
  auto parse_int = [&](size_t from, size_t to) {
    std::string s(text.substr(from, to - from));
    if (!s.empty() && s[0] == '+') s.erase(0, 1);
    if (s.empty() || s == "-") throw UsageError("missing digits at position " + std::to_string(from));
    return Integer(s, 10);
  };
  if (slash == std::string_view::npos) return Rational(parse_int(b, e));
  Integer num = parse_int(b, slash);
  Integer den = parse_int(slash + 1, e);
  if (den == 0) throw UsageError("zero denominator at position " + std::to_string(slash + 1));
  Rational q(num, den);
  q.canonicalize();
  return q;
}

Rational make_rational(long num, long den) {
  Rational q(num, den);
  q.canonicalize();
  return q;
}

bool is_integral(const Rational& q) { return q.get_den() == 1; }

Integer floor_div(const Integer& a, const Integer& b) {
  Integer r;
  mpz_fdiv_q(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return r;
}

int sign(const Rational& q) { return sgn(q); }
int sign(const Integer& z) { return sgn(z); }

bool fits_int64(const Integer& z) { return mpz_fits_slong_p(z.get_mpz_t()) != 0; }

std::int64_t to_int64(const Integer& z) {
  if (!fits_int64(z)) throw InvariantViolation("integer does not fit in 64 bits");
  return z.get_si();
}

Integer from_int128(__int128 v) {
  bool neg = v < 0;
  unsigned __int128 u = neg ? -static_cast<unsigned __int128>(v) : static_cast<unsigned __int128>(v);
  Integer hi = static_cast<unsigned long>(u >> 64);
  Integer lo = static_cast<unsigned long>(u & 0xffffffffffffffffULL);
  Integer r = (hi << 64) + lo;
  return neg ? Integer(-r) : r;
}

long valuation(const Integer& z, unsigned long p) {
  if (z == 0) throw InvariantViolation("valuation of zero");
  Integer t = z;
  long v = 0;
  while (mpz_divisible_ui_p(t.get_mpz_t(), p)) {
    mpz_divexact_ui(t.get_mpz_t(), t.get_mpz_t(), p);
    ++v;
  }
  return v;
}

long valuation(const Rational& q, unsigned long p) {
  return valuation(q.get_num(), p) - valuation(q.get_den(), p);
}

unsigned long reduce_mod(const Rational& q, unsigned long p) {
  Integer den = q.get_den();
  if (mpz_divisible_ui_p(den.get_mpz_t(), p)) {
    throw UsageError("denominator divisible by " + std::to_string(p));
  }
  Integer m = p;
  Integer inv;
  mpz_invert(inv.get_mpz_t(), den.get_mpz_t(), m.get_mpz_t());
  Integer r = q.get_num() * inv;
  mpz_fdiv_r(r.get_mpz_t(), r.get_mpz_t(), m.get_mpz_t());
  return r.get_ui();
}

}  // namespace cubic
