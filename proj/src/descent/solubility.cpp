#include <algorithm>
#include <deque>
#include <limits>
#include <set>
#include <sstream>

#include "cubic/descent.hpp"

namespace cubic {

const char* to_string(SolubilityStatus s) {
  switch (s) {
    case SolubilityStatus::soluble:
      return "soluble";
    case SolubilityStatus::insoluble:
      return "insoluble";
    default:
      return "undetermined";
  }
}

namespace {

// Coordinate points first, then the other points with entries in {-1, 0, 1}.
std::vector<ProjectivePoint> small_points() {
  std::vector<ProjectivePoint> out{ProjectivePoint::from_rationals(0, 1, 0), ProjectivePoint::from_rationals(1, 0, 0),
                                   ProjectivePoint::from_rationals(0, 0, 1)};
  std::set<ProjectivePoint> s;
  for (long x = -1; x <= 1; ++x)
    for (long y = -1; y <= 1; ++y)
      for (long z = -1; z <= 1; ++z)
        if (x || y || z) s.insert(ProjectivePoint::from_rationals(x, y, z));
  for (const auto& p : s)
    if (std::find(out.begin(), out.end(), p) == out.end()) out.push_back(p);
  return out;
}

Rational eval_at(const TernaryCubicForm& f, const ProjectivePoint& b, const ProjectivePoint& d, const Rational& t) {
  return f.evaluate(b.c[0] + t * d.c[0], b.c[1] + t * d.c[1], b.c[2] + t * d.c[2]);
}

}  // namespace

RealWitness real_witness(const TernaryCubicForm& f) {
  if (f.is_zero()) throw UsageError("zero form");
  std::vector<ProjectivePoint> pts = small_points();
  RealWitness w;
  for (const auto& p : pts) {
    auto q = p.rationals();
    if (f.evaluate(q[0], q[1], q[2]) == 0) {
      w.base = w.direction = w.approximation = p;
      w.lo = w.hi = 0;
      return w;
    }
  }
  // no small point vanishes, so every small point is a direction with f(d) != 0
  w.direction = pts.front();
  w.base = pts.back();
  // g(t) = f(base + t * direction) has leading coefficient f(direction); interpolate at t = 0..3
  std::vector<Rational> vals;
  for (long t = 0; t < 4; ++t) vals.push_back(eval_at(f, w.base, w.direction, t));
  UPoly g;
  for (long i = 0; i < 4; ++i) {
    UPoly term({vals[i]});
    for (long j = 0; j < 4; ++j)
      if (j != i) term = term * UPoly({Rational(-j) / (i - j), Rational(1) / (i - j)});
    g = g + term;
  }
  check(g.degree() == 3, "line restriction lost its cubic term");
  Rational bound = 0;
  for (int i = 0; i < 3; ++i) bound = std::max(bound, Rational(abs(g.coeffs()[i] / g.lead())));
  Rational lo = -(bound + 1), hi = bound + 1;
  int slo = sign(g.evaluate(lo));
  check(slo != 0 && slo == -sign(g.evaluate(hi)), "Cauchy bound sign change");
  for (int it = 0; it < 64; ++it) {
    Rational mid = (lo + hi) / 2;
    int s = sign(g.evaluate(mid));
    if (s == 0) {
      lo = hi = mid;
      break;
    }
    (s == slo ? lo : hi) = mid;
  }
  w.lo = lo;
  w.hi = hi;
  Rational t = (lo + hi) / 2;
  w.approximation = ProjectivePoint::from_rationals(w.base.c[0] + t * w.direction.c[0],
                                                    w.base.c[1] + t * w.direction.c[1],
                                                    w.base.c[2] + t * w.direction.c[2]);
  return w;
}

SolubilityVerdict is_real_soluble(const TernaryCubicForm& f) {
  RealWitness w = real_witness(f);
  SolubilityVerdict v;
  v.status = SolubilityStatus::soluble;
  v.prime = 0;
  v.witness = w.approximation.c;
  std::ostringstream os;
  if (w.lo == w.hi) {
    os << "exact zero at " << w.approximation.to_string();
  } else {
    os << "sign change of f(" << w.base.to_string() << " + t" << w.direction.to_string() << ") on ["
       << cubic::to_string(w.lo) << ", " << cubic::to_string(w.hi) << "]";
  }
  v.certificate = os.str();
  return v;
}

namespace {

// Dense affine cubic g(u, v) = sum c[i][j] u^i v^j on one chart of the primitive points.
struct Chart {
  Integer c[4][4];
  int index;  // 0: (1, u, v); 1: (p u, 1, v); 2: (p u, p v, 1)
};

Chart make_chart(const std::array<Integer, 10>& a, long p, int index) {
  Chart ch;
  ch.index = index;
  for (auto& row : ch.c)
    for (auto& x : row) x = 0;
  Integer pp;
  for (int i = 0; i < 10; ++i) {
    auto [ex, ey, ez] = kCubicExponents[i];
    if (index == 0) {
      ch.c[ey][ez] += a[i];
    } else if (index == 1) {
      mpz_ui_pow_ui(pp.get_mpz_t(), p, ex);
      ch.c[ex][ez] += a[i] * pp;
    } else {
      mpz_ui_pow_ui(pp.get_mpz_t(), p, ex + ey);
      ch.c[ex][ey] += a[i] * pp;
    }
  }
  return ch;
}

struct ChartValue {
  Integer g, gu, gv;
};

ChartValue chart_eval(const Chart& ch, const Integer& u, const Integer& v) {
  Integer up[4], vp[4];
  up[0] = vp[0] = 1;
  for (int k = 1; k < 4; ++k) {
    up[k] = up[k - 1] * u;
    vp[k] = vp[k - 1] * v;
  }
  ChartValue r{0, 0, 0};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; i + j < 4; ++j) {
      if (ch.c[i][j] == 0) continue;
      r.g += ch.c[i][j] * up[i] * vp[j];
      if (i > 0) r.gu += ch.c[i][j] * i * up[i - 1] * vp[j];
      if (j > 0) r.gv += ch.c[i][j] * j * up[i] * vp[j - 1];
    }
  return r;
}

long val_or_inf(const Integer& z, long p) { return z == 0 ? std::numeric_limits<long>::max() : valuation(z, p); }

std::array<Integer, 3> chart_point(int index, long p, const Integer& u, const Integer& v) {
  if (index == 0) return {Integer(1), u, v};
  if (index == 1) return {p * u, Integer(1), v};
  return {p * u, p * v, Integer(1)};
}

}  // namespace

SolubilityVerdict is_Qp_soluble(const TernaryCubicForm& f, long p, const PadicOptions& opts) {
  if (p < 2 || !is_prime(static_cast<unsigned long>(p))) throw UsageError("is_Qp_soluble needs a prime");
  if (f.is_zero()) throw UsageError("zero form");
  Rational disc = discriminant(f);
  if (disc == 0) throw UsageError("discriminant is zero");
  TernaryCubicForm g = f.primitive();
  std::array<Integer, 10> a;
  for (int i = 0; i < 10; ++i) a[i] = g[i].get_num();
  Rational gdisc = discriminant(g);
  long vN = valuation(Integer(gdisc.get_num()), p);
  SolubilityVerdict out;
  out.prime = p;

  for (const auto& s : small_points()) {
    auto q = s.rationals();
    if (g.evaluate(q[0], q[1], q[2]) == 0) {
      out.status = SolubilityStatus::soluble;
      out.witness = s.c;
      out.precision = 0;
      out.certificate = "rational point " + s.to_string();
      return out;
    }
  }
  if (p >= 5 && vN == 0) {
    IntCoeffs fp = reduce_form_mod(g, p);
    for (const auto& v : projective_points_mod(p)) {
      if (evaluate_mod(fp, v, p) != 0) continue;
      out.status = SolubilityStatus::soluble;
      out.witness = std::array<Integer, 3>{Integer(static_cast<long>(v[0])), Integer(static_cast<long>(v[1])),
                                           Integer(static_cast<long>(v[2]))};
      out.precision = 1;
      out.certificate = "good reduction: smooth point mod p lifts";
      return out;
    }
    check(false, "smooth cubic over F_p without points");
  }

  const int max_k = opts.max_k > 0 ? opts.max_k : static_cast<int>(2 * vN + 3);
  out.precision = max_k;
  bool open_branches = false;
  int deepest = 0;
  for (int index = 0; index < 3; ++index) {
    Chart ch = make_chart(a, p, index);
    struct Node {
      Integer u, v;
      int k;
    };
    std::deque<Node> queue;
    queue.push_back({Integer(0), Integer(0), 0});
    Integer pk;
    while (!queue.empty()) {
      Node n = std::move(queue.front());
      queue.pop_front();
      if (++out.nodes > opts.node_budget) {
        out.status = SolubilityStatus::undetermined;
        out.certificate = "node budget exhausted";
        return out;
      }
      deepest = std::max(deepest, n.k);
      ChartValue cv = chart_eval(ch, n.u, n.v);
      if (n.k > 0) {
        long vg = val_or_inf(cv.g, p);
        long m = std::min(val_or_inf(cv.gu, p), val_or_inf(cv.gv, p));
        if (cv.g == 0 || (m != std::numeric_limits<long>::max() && vg > 2 * m)) {
          out.status = SolubilityStatus::soluble;
          out.witness = chart_point(index, p, n.u, n.v);
          out.precision = n.k;
          std::ostringstream os;
          os << "Hensel: v(g) = " << (cv.g == 0 ? std::string("inf") : std::to_string(vg)) << " > 2 * " << m
             << " on chart " << index;
          out.certificate = os.str();
          return out;
        }
      }
      if (n.k >= max_k) {
        open_branches = true;
        continue;
      }
      mpz_ui_pow_ui(pk.get_mpz_t(), p, n.k);
      Integer pk1 = pk * p;
      for (long s = 0; s < p; ++s)
        for (long t = 0; t < p; ++t) {
          Integer u = n.u + pk * s, v = n.v + pk * t;
          Integer val = chart_eval(ch, u, v).g;
          if (mpz_divisible_p(val.get_mpz_t(), pk1.get_mpz_t())) queue.push_back({u, v, n.k + 1});
        }
    }
  }
  if (open_branches) {
    out.status = SolubilityStatus::undetermined;
    out.certificate = "residue classes survive to the precision limit";
  } else {
    out.status = SolubilityStatus::insoluble;
    out.precision = deepest + 1;
    std::ostringstream os;
    os << "no primitive residue class of f = 0 survives mod p^" << deepest + 1 << " on any chart";
    out.certificate = os.str();
  }
  return out;
}

LocalSolubility is_locally_soluble(const TernaryCubicForm& f, const FactorBudget& budget, const PadicOptions& opts) {
  if (f.is_zero()) throw UsageError("zero form");
  if (discriminant(f) == 0) throw UsageError("discriminant is zero");
  LocalSolubility r;
  r.real = is_real_soluble(f);
  TernaryCubicForm g = f.primitive();
  Integer N = abs(Integer(discriminant(g).get_num()));
  Factorization fac = factor(N, budget);
  std::set<long> primes{2, 3};
  for (const auto& pp : fac.factors) {
    check(fits_int64(pp.prime), "prime factor too large for the p-adic search");
    primes.insert(static_cast<long>(pp.prime.get_si()));
  }
  bool undetermined = !fac.complete;
  if (!fac.complete) r.reason = "discriminant not fully factored within budget";
  for (long p : primes) {
    SolubilityVerdict v = is_Qp_soluble(g, p, opts);
    if (v.status == SolubilityStatus::insoluble) {
      r.status = SolubilityStatus::insoluble;
      r.reason = "insoluble at " + std::to_string(p);
      r.primes.push_back(std::move(v));
      return r;
    }
    if (v.status == SolubilityStatus::undetermined) {
      undetermined = true;
      if (r.reason.empty()) r.reason = "undetermined at " + std::to_string(p);
    }
    r.primes.push_back(std::move(v));
  }
  r.status = undetermined ? SolubilityStatus::undetermined : SolubilityStatus::soluble;
  return r;
}

}  // namespace cubic
