#include "cubic/flex.hpp"

#include <algorithm>
#include <atomic>
#include <set>
#include <thread>

namespace cubic {

namespace {

void add_root_points(const MultiPoly& F, const MultiPoly& H, int v, int u, int w, const ProjectiveRoot& r,
                     const FactorBudget& budget, std::set<ProjectivePoint>& out) {
  MultiPoly fs = F.specialize(u, Rational(r.a)).specialize(w, Rational(r.b));
  MultiPoly hs = H.specialize(u, Rational(r.a)).specialize(w, Rational(r.b));
  check(!(fs.is_zero() && hs.is_zero()), "flex scheme contains a line");
  UPoly g = UPoly::gcd(UPoly::from_multi(fs, v), UPoly::from_multi(hs, v));
  if (g.degree() < 1) return;
  for (const auto& root : rational_roots(g, budget)) {
    std::array<Rational, 3> c;
    c[u] = r.a;
    c[w] = r.b;
    c[v] = root.value;
    out.insert(ProjectivePoint::from_rationals(c[0], c[1], c[2]));
  }
}

}  // namespace

FlexReport rational_flexes(const TernaryCubicForm& f, const FactorBudget& budget) {
  if (f.is_zero()) throw UsageError("zero form");
  if (discriminant(f) == 0) throw UsageError("flex scheme may be positive-dimensional");
  TernaryCubicForm hf = hessian(f);
  MultiPoly F = f.to_poly().primitive_part(), H = hf.to_poly().primitive_part();
  FlexReport rep;
  std::set<ProjectivePoint> found;
  bool done = false;
  for (int v : {2, 1, 0}) {
    if (F.degree_in(v) <= 0 || H.degree_in(v) <= 0) {
      ++rep.certificate.degenerate_retries;
      continue;
    }
    MultiPoly R = resultant_eliminate(F, H, v);
    if (R.is_zero()) {
      ++rep.certificate.degenerate_retries;
      continue;
    }
    int u = v == 0 ? 1 : 0, w = v == 2 ? 1 : 2;
    EliminantCertificate& cert = rep.certificate;
    cert.eliminated_var = v;
    cert.degree = R.total_degree();
    cert.rational_roots = rational_projective_roots(R.primitive_part(), u, w, budget);
    for (const auto& r : cert.rational_roots) {
      cert.rational_multiplicity += r.multiplicity;
      add_root_points(F, H, v, u, w, r, budget, found);
    }
    cert.residual_degree = cert.degree - cert.rational_multiplicity;
    cert.eliminant = std::move(R);
    // the centre of projection has no image in P^1
    std::array<Rational, 3> e{0, 0, 0};
    e[v] = 1;
    if (f.evaluate(e[0], e[1], e[2]) == 0 && hf.evaluate(e[0], e[1], e[2]) == 0)
      found.insert(ProjectivePoint::from_rationals(e[0], e[1], e[2]));
    done = true;
    break;
  }
  if (!done) throw UsageError("flex eliminant is degenerate in every variable");
  // the line z = 0 by direct specialization
  MultiPoly f0 = F.specialize(2, 0), h0 = H.specialize(2, 0);
  if (!f0.is_zero()) {
    for (const auto& r : rational_projective_roots(f0.primitive_part(), 0, 1, budget))
      if (hf.evaluate(Rational(r.a), Rational(r.b), 0) == 0)
        found.insert(ProjectivePoint::from_rationals(Rational(r.a), Rational(r.b), 0));
  } else if (!h0.is_zero()) {
    for (const auto& r : rational_projective_roots(h0.primitive_part(), 0, 1, budget))
      found.insert(ProjectivePoint::from_rationals(Rational(r.a), Rational(r.b), 0));
  }
  for (const auto& p : found) {
    auto q = p.rationals();
    check(f.evaluate(q[0], q[1], q[2]) == 0 && hf.evaluate(q[0], q[1], q[2]) == 0,
          "reported flex does not lie on f and H(f)");
  }
  check(found.size() <= 9, "more than nine flexes on a smooth cubic");
  rep.rational_flexes.assign(found.begin(), found.end());
  rep.scheme_dimension_ok = true;
  rep.certified = true;
  return rep;
}

bool is_strongly_irreducible(const TernaryCubicForm& f, const FactorBudget& budget) {
  return rational_flexes(f, budget).rational_flexes.empty();
}

bool jacobian_has_rational_3_torsion(const Rational& I, const Rational& J, const FactorBudget& budget) {
  if (4 * I * I * I == J * J) throw UsageError("singular Jacobian: 4I^3 = J^2");
  FlexReport r = rational_flexes(weierstrass_form(-I / 3, -J / 27), budget);
  ProjectivePoint origin = ProjectivePoint::from_rationals(0, 1, 0);
  return std::any_of(r.rational_flexes.begin(), r.rational_flexes.end(),
                     [&](const ProjectivePoint& p) { return !(p == origin); });
}

bool is_totally_irreducible(const TernaryCubicForm& f, const FactorBudget& budget) {
  if (!is_strongly_irreducible(f, budget)) return false;
  InvariantPair inv = invariants(f);
  return !jacobian_has_rational_3_torsion(inv.I, inv.J, budget);
}

IntCoeffs reduce_form_mod(const TernaryCubicForm& f, std::int64_t p) {
  IntCoeffs r;
  for (int i = 0; i < 10; ++i) {
    if (f[i].get_den() % p == 0) throw UsageError("prime divides a coefficient denominator");
    r[i] = static_cast<std::int64_t>(reduce_mod(f[i], static_cast<unsigned long>(p)));
  }
  return r;
}

std::int64_t evaluate_mod(const IntCoeffs& f, const PointModP& v, std::int64_t p) {
  std::int64_t pw[3][4];
  for (int k = 0; k < 3; ++k) {
    pw[k][0] = 1;
    for (int e = 1; e < 4; ++e) pw[k][e] = pw[k][e - 1] * v[k] % p;
  }
  std::int64_t s = 0;
  for (int i = 0; i < 10; ++i) {
    const auto& e = kCubicExponents[i];
    s = (s + f[i] * (pw[0][e[0]] * pw[1][e[1]] % p * pw[2][e[2]] % p)) % p;
  }
  return s;
}

std::vector<PointModP> projective_points_mod(std::int64_t p) {
  std::vector<PointModP> pts;
  pts.reserve(static_cast<size_t>(p * p + p + 1));
  for (std::int64_t y = 0; y < p; ++y)
    for (std::int64_t z = 0; z < p; ++z) pts.push_back({1, y, z});
  for (std::int64_t z = 0; z < p; ++z) pts.push_back({0, 1, z});
  pts.push_back({0, 0, 1});
  return pts;
}

FlexesModP flexes_mod_p(const TernaryCubicForm& f, std::int64_t p) {
  if (p < 3 || !is_prime(static_cast<unsigned long>(p))) throw UsageError("flexes_mod_p needs an odd prime");
  IntCoeffs fp = reduce_form_mod(f, p);
  if (std::all_of(fp.begin(), fp.end(), [](std::int64_t c) { return c == 0; }))
    throw UsageError("form vanishes mod p");
  IntCoeffs hp = reduce_form_mod(hessian(f), p);
  FlexesModP r;
  for (const auto& v : projective_points_mod(p))
    if (evaluate_mod(fp, v, p) == 0 && evaluate_mod(hp, v, p) == 0) r.points.push_back(v);
  r.count = static_cast<std::int64_t>(r.points.size());
  return r;
}

std::int64_t points_mod_p(const TernaryCubicForm& f, std::int64_t p) {
  IntCoeffs fp = reduce_form_mod(f, p);
  std::int64_t n = 0;
  for (const auto& v : projective_points_mod(p)) n += evaluate_mod(fp, v, p) == 0;
  return n;
}

bool discriminant_nonzero_mod(const TernaryCubicForm& f, std::int64_t p) {
  Rational d = discriminant(f);
  if (d == 0) return false;
  if (d.get_den() % p == 0) throw UsageError("prime divides the discriminant denominator");
  return reduce_mod(d, static_cast<unsigned long>(p)) != 0;
}

std::int64_t stabilizer_mod_p(const TernaryCubicForm& f, std::int64_t p, unsigned workers) {
  if (p != 5 && p != 7 && p != 11 && p != 13) throw UsageError("stabilizer_mod_p supports p in {5, 7, 11, 13}");
  if (!discriminant_nonzero_mod(f, p)) throw UsageError("discriminant vanishes mod p");
  const IntCoeffs fp = reduce_form_mod(f, p);
  const std::int64_t p2 = p * p, p3 = p2 * p;
  std::vector<std::int64_t> table(static_cast<size_t>(p3));
  std::vector<PointModP> all(static_cast<size_t>(p3));
  for (std::int64_t i = 0; i < p3; ++i) {
    all[i] = {i / p2, (i / p) % p, i % p};
    table[i] = evaluate_mod(fp, all[i], p);
  }
  auto idx = [&](const PointModP& v) { return v[0] * p2 + v[1] * p + v[2]; };
  const std::int64_t te0 = table[p2], te1 = table[p], te2 = table[1];
  std::vector<std::int64_t> inv(static_cast<size_t>(p), 0);
  for (std::int64_t a = 1; a < p; ++a) inv[a] = inverse_mod(a, p);
  const std::vector<PointModP> first_rows = projective_points_mod(p);

  // Candidate matrices with rows r0, r1, r2; r0 normalized picks one representative per scalar class.
  auto scan = [&](const PointModP& r0) -> std::int64_t {
    std::int64_t count = 0;
    std::int64_t t0 = table[idx(r0)];
    if ((te0 == 0) != (t0 == 0)) return 0;
    std::int64_t d0 = te0 != 0 ? t0 * inv[te0] % p : -1;
    for (std::int64_t i1 = 0; i1 < p3; ++i1) {
      const PointModP& r1 = all[i1];
      std::int64_t t1 = table[i1];
      std::int64_t d1 = d0;
      if (te1 != 0) {
        if (t1 == 0) continue;
        std::int64_t d = t1 * inv[te1] % p;
        if (d1 >= 0 && d1 != d) continue;
        d1 = d;
      } else if (t1 != 0) {
        continue;
      }
      PointModP cr{(r0[1] * r1[2] - r0[2] * r1[1]) % p, (r0[2] * r1[0] - r0[0] * r1[2]) % p,
                   (r0[0] * r1[1] - r0[1] * r1[0]) % p};
      if (cr[0] == 0 && cr[1] == 0 && cr[2] == 0) continue;
      for (std::int64_t i2 = 0; i2 < p3; ++i2) {
        const PointModP& r2 = all[i2];
        std::int64_t d = ((r2[0] * cr[0] + r2[1] * cr[1] + r2[2] * cr[2]) % p + p) % p;
        if (d == 0 || (d1 >= 0 && d != d1)) continue;
        if (table[i2] != d * te2 % p || t0 != d * te0 % p || t1 != d * te1 % p) continue;
        bool ok = true;
        for (std::int64_t k = 0; k < p3 && ok; ++k) {
          const PointModP& v = all[k];
          PointModP w{(v[0] * r0[0] + v[1] * r1[0] + v[2] * r2[0]) % p,
                      (v[0] * r0[1] + v[1] * r1[1] + v[2] * r2[1]) % p,
                      (v[0] * r0[2] + v[1] * r1[2] + v[2] * r2[2]) % p};
          ok = table[idx(w)] == d * table[k] % p;
        }
        count += ok;
      }
    }
    return count;
  };

  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  std::atomic<size_t> next{0};
  std::atomic<std::int64_t> total{0};
  auto work = [&] {
    for (size_t i; (i = next.fetch_add(1)) < first_rows.size();) total += scan(first_rows[i]);
  };
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < workers; ++t) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  return total.load();
}

std::int64_t jacobian_flexes_mod_p(const TernaryCubicForm& f, std::int64_t p) {
  InvariantPair inv = invariants(f);
  return flexes_mod_p(weierstrass_form(-inv.I / 3, -inv.J / 27), p).count;
}

std::vector<IntMatrix3> small_stabilizer(const TernaryCubicForm& f, int radius) {
  auto fi = f.to_ints();
  if (!fi) throw UsageError("small_stabilizer needs an integral form");
  std::vector<IntMatrix3> out;
  for (const auto& m : generator_ball(radius)) {
    if (m == int_identity3()) continue;
    auto g = substitute_int(*fi, m);
    if (g && *g == *fi) out.push_back(m);
  }
  return out;
}

}  // namespace cubic
