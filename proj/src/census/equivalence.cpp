#include "cubic/equivalence.hpp"

#include <algorithm>
#include <queue>
#include <sstream>
#include <unordered_map>

#include "cubic/flex.hpp"

namespace cubic {

namespace {

struct CoeffHash {
  std::size_t operator()(const IntCoeffs& a) const {
    std::uint64_t h = 1469598103934665603ull;
    for (auto x : a) {
      h ^= static_cast<std::uint64_t>(x) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
      h *= 1099511628211ull;
    }
    return static_cast<std::size_t>(h);
  }
};

std::int64_t max_abs(const IntCoeffs& a) {
  std::int64_t m = 0;
  for (auto x : a) m = std::max(m, x < 0 ? -x : x);
  return m;
}

const std::vector<IntMatrix3>& search_generators() {
  static const std::vector<IntMatrix3> g = unimodular_generators(false);
  return g;
}

using Visited = std::unordered_map<IntCoeffs, IntMatrix3, CoeffHash>;

struct Exploration {
  Visited seen;
  IntCoeffs best{};
  long nodes = 0;
  bool exhausted = false;
};

// Every form generated within the budget, with gamma such that form = f(v * gamma).
Exploration explore(const IntCoeffs& f, const SearchBudget& budget) {
  Exploration ex;
  auto cmp = [](const IntCoeffs& a, const IntCoeffs& b) { return reduction_less(b, a); };
  std::priority_queue<IntCoeffs, std::vector<IntCoeffs>, decltype(cmp)> open(cmp);
  ex.seen.emplace(f, int_identity3());
  ex.best = f;
  open.push(f);
  while (!open.empty() && ex.nodes < budget.nodes) {
    IntCoeffs cur = open.top();
    open.pop();
    ++ex.nodes;
    const IntMatrix3 m = ex.seen.at(cur);
    for (const auto& gen : search_generators()) {
      auto child = substitute_int(cur, gen);
      if (!child || ex.seen.count(*child)) continue;
      ex.seen.emplace(*child, int_multiply(gen, m));
      if (reduction_less(*child, ex.best)) ex.best = *child;
      open.push(*child);
    }
  }
  ex.exhausted = open.empty();
  return ex;
}

IntCoeffs require_ints(const TernaryCubicForm& f) {
  auto c = f.to_ints();
  if (!c) throw UsageError("equivalence search needs an integral form with 64-bit coefficients");
  return *c;
}

std::string pair_text(const InvariantPair& p) { return to_string(p.I) + "," + to_string(p.J); }

bool reduces_to_zero(const TernaryCubicForm& f, long p) {
  IntCoeffs r = reduce_form_mod(f, p);
  return std::all_of(r.begin(), r.end(), [](std::int64_t x) { return x == 0; });
}

std::string certificate_value(const TernaryCubicForm& f, CertificateKind kind, long p) {
  switch (kind) {
    case CertificateKind::invariants:
      return pair_text(invariants(f));
    case CertificateKind::zero_mod_p:
      return reduces_to_zero(f, p) ? "zero" : "nonzero";
    case CertificateKind::point_count:
      return std::to_string(points_mod_p(f, p));
    case CertificateKind::flex_count:
      return std::to_string(flexes_mod_p(f, p).count);
  }
  return {};
}

ProjectiveMap to_map(const IntMatrix3& m) {
  std::array<std::array<long, 3>, 3> a;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) a[i][j] = m[i][j];
  return ProjectiveMap::from_ints(a);
}

}  // namespace

bool reduction_less(const IntCoeffs& a, const IntCoeffs& b) {
  std::int64_t ma = max_abs(a), mb = max_abs(b);
  if (ma != mb) return ma < mb;
  return a < b;
}

ReducedForm reduce_form(const IntCoeffs& f, const SearchBudget& budget) {
  Exploration ex = explore(f, budget);
  ReducedForm r;
  r.form = ex.best;
  r.gamma = ex.seen.at(ex.best);
  r.nodes = ex.nodes;
  r.exhausted = ex.exhausted;
  return r;
}

ReducedForm reduce_form(const TernaryCubicForm& f, const SearchBudget& budget) {
  if (discriminant(f) == 0) throw UsageError("discriminant is zero");
  return reduce_form(require_ints(f), budget);
}

const char* to_string(CertificateKind k) {
  switch (k) {
    case CertificateKind::invariants:
      return "invariants";
    case CertificateKind::flex_count:
      return "flex_count";
    case CertificateKind::point_count:
      return "point_count";
    default:
      return "zero_mod_p";
  }
}

const char* to_string(EquivalenceStatus s) {
  switch (s) {
    case EquivalenceStatus::yes:
      return "yes";
    case EquivalenceStatus::no:
      return "no";
    default:
      return "unknown";
  }
}

IntMatrix3 int_inverse_unimodular(const IntMatrix3& m) {
  std::int64_t d = int_det(m);
  if (d != 1 && d != -1) throw UsageError("matrix is not unimodular");
  IntMatrix3 r;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      int i1 = (j + 1) % 3, i2 = (j + 2) % 3, j1 = (i + 1) % 3, j2 = (i + 2) % 3;
      r[i][j] = d * (m[i1][j1] * m[i2][j2] - m[i1][j2] * m[i2][j1]);
    }
  return r;
}

std::string serialize_matrix(const IntMatrix3& m) {
  std::ostringstream os;
  os << "[";
  for (int i = 0; i < 3; ++i) {
    os << (i ? ",[" : "[");
    for (int j = 0; j < 3; ++j) os << (j ? "," : "") << m[i][j];
    os << "]";
  }
  os << "]";
  return os.str();
}

EquivalenceResult are_equivalent(const TernaryCubicForm& f, const TernaryCubicForm& g, const SearchBudget& budget) {
  IntCoeffs fi = require_ints(f), gi = require_ints(g);
  if (discriminant(f) == 0 || discriminant(g) == 0) throw UsageError("discriminant is zero");
  EquivalenceResult r;
  auto refute = [&](CertificateKind kind, long p, std::string vf, std::string vg) {
    r.status = EquivalenceStatus::no;
    r.certificate = InequivalenceCertificate{kind, p, std::move(vf), std::move(vg)};
    return r;
  };
  InvariantPair a = invariants(f), b = invariants(g);
  if (a != b) return refute(CertificateKind::invariants, 0, pair_text(a), pair_text(b));
  if (fi == gi) {
    r.status = EquivalenceStatus::yes;
    r.witness = int_identity3();
    return r;
  }
  for (long p : kCertificatePrimes) {
    bool zf = reduces_to_zero(f, p), zg = reduces_to_zero(g, p);
    if (zf != zg) return refute(CertificateKind::zero_mod_p, p, zf ? "zero" : "nonzero", zg ? "zero" : "nonzero");
    if (zf) continue;
    for (CertificateKind kind : {CertificateKind::point_count, CertificateKind::flex_count}) {
      std::string vf = certificate_value(f, kind, p), vg = certificate_value(g, kind, p);
      if (vf != vg) return refute(kind, p, vf, vg);
    }
  }
  Exploration ef = explore(fi, budget), eg = explore(gi, budget);
  r.nodes = ef.nodes + eg.nodes;
  const Visited& small = ef.seen.size() <= eg.seen.size() ? ef.seen : eg.seen;
  const Visited& large = &small == &ef.seen ? eg.seen : ef.seen;
  const IntCoeffs* meet = nullptr;
  for (const auto& [h, m] : small) {
    auto it = large.find(h);
    if (it == large.end()) continue;
    if (!meet || reduction_less(h, *meet)) meet = &it->first;
  }
  if (meet) {
    // h = f(v M1) = g(v M2), so g(w) = f(w M2^-1 M1)
    IntMatrix3 gamma = int_multiply(int_inverse_unimodular(eg.seen.at(*meet)), ef.seen.at(*meet));
    check(act(to_map(gamma), f, ActionMode::linear) == g, "equivalence witness does not verify");
    r.status = EquivalenceStatus::yes;
    r.witness = gamma;
  }
  return r;
}

bool verify_equivalence_result(const TernaryCubicForm& f, const TernaryCubicForm& g, const EquivalenceResult& r) {
  switch (r.status) {
    case EquivalenceStatus::yes:
      return r.witness && int_det(*r.witness) == 1 && act(to_map(*r.witness), f, ActionMode::linear) == g;
    case EquivalenceStatus::no: {
      if (!r.certificate) return false;
      const auto& c = *r.certificate;
      std::string vf = certificate_value(f, c.kind, c.prime), vg = certificate_value(g, c.kind, c.prime);
      return vf == c.value_f && vg == c.value_g && vf != vg;
    }
    default:
      return !r.witness && !r.certificate;
  }
}

std::vector<std::pair<long, long>> flex_signature(const TernaryCubicForm& f) {
  std::vector<std::pair<long, long>> out;
  for (long p : kCertificatePrimes) {
    if (!discriminant_nonzero_mod(f, p)) continue;
    out.emplace_back(p, flexes_mod_p(f, p).count);
  }
  return out;
}

}  // namespace cubic
