#include <algorithm>
#include <atomic>
#include <cmath>
#include <map>
#include <set>
#include <thread>

#include "cubic/census.hpp"

namespace cubic {

namespace {

bool divisible(const Integer& a, const Integer& d) { return mpz_divisible_p(a.get_mpz_t(), d.get_mpz_t()) != 0; }

long mod_ui(const Integer& a, unsigned long m) {
  Integer r;
  mpz_fdiv_r_ui(r.get_mpz_t(), a.get_mpz_t(), m);
  return r.get_si();
}

// Local Kraus conditions: (c4, c6) come from a model integral at p.
bool kraus_local(const Integer& c4, const Integer& c6, long p) {
  Integer d = c4 * c4 * c4 - c6 * c6;
  if (p == 2) {
    if (!divisible(d, 64)) return false;
    long r4 = mod_ui(c6, 4), r32 = mod_ui(c6, 32);
    return r4 == 3 || (mod_ui(c4, 16) == 0 && (r32 == 0 || r32 == 8));
  }
  if (p == 3) {
    if (!divisible(d, 27)) return false;
    long r = mod_ui(c6, 27);
    return r != 9 && r != 18;
  }
  return true;
}

struct LocalModel {
  Integer c4, c6;
};

LocalModel minimize_at(Integer c4, Integer c6, long p) {
  Integer p4, p6;
  mpz_ui_pow_ui(p4.get_mpz_t(), p, 4);
  mpz_ui_pow_ui(p6.get_mpz_t(), p, 6);
  while (divisible(c4, p4) && divisible(c6, p6)) {
    Integer a = c4 / p4, b = c6 / p6;
    if (!kraus_local(a, b, p)) break;
    c4 = a;
    c6 = b;
  }
  return {c4, c6};
}

void require_model(const CurveModel& E) {
  if (!eligible_kraus(E.c4(), E.c6()))
    throw UsageError("(16I, 32J) = (" + cubic::to_string(E.c4()) + ", " + cubic::to_string(E.c6()) +
                     ") is not the (c4, c6) of an integral Weierstrass model");
}

ReductionType local_type(const LocalModel& m, long p) {
  Integer d = (m.c4 * m.c4 * m.c4 - m.c6 * m.c6) / 1728;
  if (mod_ui(d, static_cast<unsigned long>(p)) != 0) return ReductionType::good;
  if (mod_ui(m.c4, static_cast<unsigned long>(p)) == 0) return ReductionType::additive;
  if (p == 2) throw Unsupported("split test at p = 2 is not supported");
  return kronecker(-m.c6, Integer(p)) == 1 ? ReductionType::split_multiplicative
                                            : ReductionType::nonsplit_multiplicative;
}

Integer delta_numerator(const CurveModel& E) { return 4 * E.I * E.I * E.I - E.J * E.J; }

}  // namespace

CurveModel CurveModel::from_weierstrass(const Integer& A, const Integer& B) { return {-3 * A, -27 * B}; }

Rational CurveModel::A() const { return Rational(-I) / 3; }
Rational CurveModel::B() const { return Rational(-J) / 27; }

bool CurveModel::has_integral_ab() const { return divisible(I, 3) && divisible(J, 27); }

bool CurveModel::is_minimal() const {
  if (!has_integral_ab()) throw UsageError("minimality is defined for integral (A, B)");
  Integer a = abs(Integer(-I / 3)), b = abs(Integer(-J / 27));
  if (a == 0 && b == 0) return true;
  for (std::uint32_t p : small_primes(1000000)) {
    Integer p4 = Integer(p) * p * p * p, p6 = p4 * p * p;
    if ((a != 0 && p4 > a) || (b != 0 && p6 > b)) break;
    if (divisible(a, p4) && divisible(b, p6)) return false;
  }
  return true;
}

Rational CurveModel::discriminant() const { return discriminant_of(Rational(I), Rational(J)); }
Rational CurveModel::height() const { return height_of(Rational(I), Rational(J)); }
std::string CurveModel::to_string() const { return cubic::to_string(I) + "," + cubic::to_string(J); }

const char* to_string(ReductionType t) {
  switch (t) {
    case ReductionType::good:
      return "good";
    case ReductionType::split_multiplicative:
      return "multiplicative-split";
    case ReductionType::nonsplit_multiplicative:
      return "multiplicative-nonsplit";
    default:
      return "additive";
  }
}

ReductionType reduction_type(const CurveModel& E, long p) {
  if (p < 2 || !is_prime(static_cast<unsigned long>(p))) throw UsageError("reduction_type needs a prime");
  require_model(E);
  return local_type(minimize_at(E.c4(), E.c6(), p), p);
}

Integer minimal_discriminant(const CurveModel& E, const FactorBudget& budget) {
  require_model(E);
  Integer c4 = E.c4(), c6 = E.c6();
  Integer d = (c4 * c4 * c4 - c6 * c6) / 1728;
  Factorization fac = factor(d, budget);
  if (!fac.complete) throw BudgetExceeded("discriminant not fully factored within budget");
  for (const auto& pp : fac.factors) {
    if (pp.exponent < 12) continue;
    LocalModel m = minimize_at(c4, c6, pp.prime.get_si());
    c4 = m.c4;
    c6 = m.c6;
  }
  return (c4 * c4 * c4 - c6 * c6) / 1728;
}

int root_number(const CurveModel& E, const FactorBudget& budget) {
  Integer d = minimal_discriminant(E, budget);
  Factorization fac = factor(d, budget);
  if (!fac.complete) throw BudgetExceeded("discriminant not fully factored within budget");
  int prod = 1;
  for (const auto& pp : fac.factors) {
    long p = pp.prime.get_si();
    if (p == 2) throw Unsupported("bad reduction at 2");
    ReductionType t = local_type(minimize_at(E.c4(), E.c6(), p), p);
    if (t == ReductionType::additive) throw Unsupported("additive reduction at " + std::to_string(p));
    if (t == ReductionType::split_multiplicative) prod = -prod;
  }
  return -prod;
}

FamilyVerdict in_twist_family(const CurveModel& E, const FactorBudget& budget) {
  FamilyVerdict v;
  Integer n = delta_numerator(E);
  auto no = [&](const char* why) {
    v.member = false;
    v.reason = why;
    return v;
  };
  if (!divisible(n, 27)) return no("discriminant is not integral");
  Integer delta = n / 27;
  if (delta == 0) return no("singular");
  if (divisible(delta, 2)) return no("even discriminant");
  if (!divisible(delta, 9)) return no("9 does not divide the discriminant");
  Integer d9 = delta / 9;
  if (divisible(d9, 3)) return no("discriminant/9 is divisible by 3");
  Integer g = gcd(E.I, delta);
  if (abs(g) != 1) return no("a prime divides both I and the discriminant");
  Factorization fac = factor(d9, budget);
  if (!fac.complete) {
    v.reason = "discriminant not fully factored within budget";
    return v;
  }
  if (!is_squarefree(fac)) return no("discriminant/9 is not squarefree");
  v.member = true;
  return v;
}

int twist_family_root_number(const CurveModel& E, const FactorBudget& budget) {
  Integer n = delta_numerator(E);
  if (!divisible(n, 27) || n == 0) throw UsageError("discriminant is not a nonzero integer");
  Factorization fac = factor(n / 27, budget);
  if (!fac.complete) throw BudgetExceeded("discriminant not fully factored within budget");
  int prod = 1;
  for (const auto& pp : fac.factors)
    if (kronecker(-2 * E.J, pp.prime) == 1) prod = -prod;
  return -prod;
}

const char* to_string(Family f) {
  switch (f) {
    case Family::all:
      return "all";
    case Family::semistable:
      return "semistable";
    default:
      return "twist-family";
  }
}

Family parse_family(const std::string& s) {
  if (s == "all") return Family::all;
  if (s == "semistable") return Family::semistable;
  if (s == "twist-family") return Family::twist_family;
  throw UsageError("unknown family '" + s + "' (all, semistable, twist-family)");
}

namespace {

struct Ranges {
  long amax, bmax, imax, jmax;
};

Ranges ranges(const Integer& X) {
  if (X < 1) throw UsageError("height bound must be at least 1");
  Ranges r;
  Integer xm = X - 1;
  r.amax = icbrt(xm / 27).get_si();
  r.bmax = isqrt((4 * X - 1) / 729).get_si();
  r.imax = icbrt(xm).get_si();
  r.jmax = isqrt(4 * X - 1).get_si();
  return r;
}

template <class F>
void parallel_over(long lo, long hi, unsigned workers, F&& fn) {
  workers = resolve_workers(workers);
  std::atomic<long> next{lo};
  auto work = [&](unsigned w) {
    for (long v; (v = next.fetch_add(1)) <= hi;) fn(w, v);
  };
  std::vector<std::thread> pool;
  for (unsigned w = 1; w < workers; ++w) pool.emplace_back(work, w);
  work(0);
  for (auto& t : pool) t.join();
}

bool semistable(const CurveModel& E, const FactorBudget& budget) {
  Integer d = minimal_discriminant(E, budget);
  Factorization fac = factor(d, budget);
  if (!fac.complete) throw BudgetExceeded("discriminant not fully factored within budget");
  for (const auto& pp : fac.factors) {
    LocalModel m = minimize_at(E.c4(), E.c6(), pp.prime.get_si());
    if (mod_ui(m.c4, pp.prime.get_ui()) == 0) return false;
  }
  return true;
}

}  // namespace

CurveCensus count_curves(Family family, const Integer& X, const FactorBudget& budget, unsigned workers) {
  Ranges r = ranges(X);
  CurveCensus out;
  out.X = X;
  out.family = family;
  unsigned nw = resolve_workers(workers);
  std::vector<long> all(nw, 0), count(nw, 0), undet(nw, 0);
  parallel_over(-r.amax, r.amax, nw, [&](unsigned w, long A) {
    for (long B = -r.bmax; B <= r.bmax; ++B) {
      if (4 * A * A * A + 27 * B * B == 0) continue;
      CurveModel E = CurveModel::from_weierstrass(A, B);
      if (!E.is_minimal()) continue;
      ++all[w];
      if (family == Family::all) {
        ++count[w];
      } else if (family == Family::semistable) {
        try {
          if (semistable(E, budget)) ++count[w];
        } catch (const BudgetExceeded&) {
          ++undet[w];
        }
      }
    }
  });
  if (family == Family::twist_family) {
    long undetermined = 0;
    out.count = static_cast<long>(twist_family_members(X, &undetermined, budget, nw).size());
    out.undetermined = undetermined;
  }
  for (unsigned w = 0; w < nw; ++w) {
    out.all_count += all[w];
    if (family != Family::twist_family) {
      out.count += count[w];
      out.undetermined += undet[w];
    }
  }
  out.density = out.all_count ? static_cast<long double>(out.count) / out.all_count : 0.0L;
  return out;
}

std::vector<CurveModel> twist_family_members(const Integer& X, long* undetermined, const FactorBudget& budget,
                                             unsigned workers) {
  Ranges r = ranges(X);
  unsigned nw = resolve_workers(workers);
  std::vector<std::vector<CurveModel>> found(nw);
  std::vector<long> undet(nw, 0);
  parallel_over(-r.imax, r.imax, nw, [&](unsigned w, long I) {
    for (long J = -r.jmax; J <= r.jmax; ++J) {
      // cheap filters before the factorization
      if (I % 3 == 0 || J % 2 == 0) continue;
      FamilyVerdict v = in_twist_family({Integer(I), Integer(J)}, budget);
      if (!v.member) {
        if (v.reason.empty()) ++undet[w];
        continue;
      }
      if (*v.member) found[w].push_back({Integer(I), Integer(J)});
    }
  });
  std::vector<CurveModel> out;
  for (auto& v : found) out.insert(out.end(), v.begin(), v.end());
  std::sort(out.begin(), out.end(), [](const CurveModel& a, const CurveModel& b) {
    return a.I != b.I ? a.I < b.I : a.J < b.J;
  });
  if (undetermined) {
    *undetermined = 0;
    for (long u : undet) *undetermined += u;
  }
  return out;
}

long double curve_count_slope(const Integer& X1, const Integer& X2, unsigned workers) {
  if (!(X1 < X2)) throw UsageError("slope needs X1 < X2");
  long double n1 = count_curves(Family::all, X1, {}, workers).count;
  long double n2 = count_curves(Family::all, X2, {}, workers).count;
  return std::log(n2 / n1) / std::log(static_cast<long double>(X2.get_d()) / static_cast<long double>(X1.get_d()));
}

TwistPairing twist_pairing_report(const Integer& X, const FactorBudget& budget, unsigned workers) {
  TwistPairing out;
  std::vector<CurveModel> members = twist_family_members(X, &out.undetermined, budget, workers);
  std::map<std::pair<Integer, Integer>, int> omega;
  for (const auto& E : members) omega[{E.I, E.J}] = twist_family_root_number(E, budget);
  out.decided = static_cast<long>(members.size());
  for (const auto& E : members) {
    int w = omega.at({E.I, E.J});
    if (w == 1) ++out.plus;
    if (E.J == 0) {
      ++out.fixed_points;
      continue;
    }
    auto it = omega.find({E.I, -E.J});
    if (it == omega.end()) {
      ++out.partner_missing;
      continue;
    }
    if (it->second == -w) {
      ++out.flips;
    } else {
      ++out.non_flips;
      (E.discriminant() > 0 ? out.non_flips_positive_disc : out.non_flips_negative_disc) += 1;
    }
  }
  return out;
}

}  // namespace cubic
