#include <algorithm>
#include <numeric>
#include <set>
#include <sstream>

#include "cubic/forms.hpp"

namespace cubic {

IntMatrix3 int_identity3() {
  IntMatrix3 m{};
  for (int i = 0; i < 3; ++i) m[i][i] = 1;
  return m;
}

IntMatrix3 int_multiply(const IntMatrix3& a, const IntMatrix3& b) {
  IntMatrix3 r{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k) r[i][j] += a[i][k] * b[k][j];
  return r;
}

std::int64_t int_det(const IntMatrix3& m) {
  return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
         m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
}

std::vector<IntMatrix3> unimodular_generators(bool with_negative_det) {
  std::vector<IntMatrix3> gens;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      if (i == j) continue;
      for (int s : {1, -1}) {
        IntMatrix3 e = int_identity3();
        e[i][j] = s;
        gens.push_back(e);
      }
    }
  std::array<int, 3> perm{0, 1, 2};
  do {
    for (int signs = 0; signs < 8; ++signs) {
      IntMatrix3 m{};
      for (int i = 0; i < 3; ++i) m[i][perm[i]] = (signs >> i) & 1 ? -1 : 1;
      if (m == int_identity3()) continue;
      if (int_det(m) == 1 || with_negative_det) gens.push_back(m);
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return gens;
}

std::vector<IntMatrix3> generator_ball(int radius) {
  std::vector<IntMatrix3> gens = unimodular_generators(false);
  std::set<IntMatrix3> seen{int_identity3()};
  std::vector<IntMatrix3> frontier{int_identity3()};
  for (int r = 0; r < radius; ++r) {
    std::vector<IntMatrix3> next;
    for (const auto& m : frontier)
      for (const auto& g : gens) {
        IntMatrix3 p = int_multiply(m, g);
        if (seen.insert(p).second) next.push_back(p);
      }
    frontier = std::move(next);
  }
  return {seen.begin(), seen.end()};
}

ProjectivePoint ProjectivePoint::from_rationals(const Rational& x, const Rational& y, const Rational& z) {
  if (x == 0 && y == 0 && z == 0) throw UsageError("zero vector is not a projective point");
  Integer l = 1;
  for (const Rational* q : {&x, &y, &z}) l = lcm(l, Integer(q->get_den()));
  ProjectivePoint p;
  std::array<const Rational*, 3> in{&x, &y, &z};
  Integer g = 0;
  for (int i = 0; i < 3; ++i) {
    Rational s = *in[i] * l;
    p.c[i] = s.get_num();
    g = gcd(g, p.c[i]);
  }
  int first = p.c[0] != 0 ? 0 : (p.c[1] != 0 ? 1 : 2);
  if (p.c[first] < 0) g = -g;
  for (auto& v : p.c) v /= g;
  return p;
}

std::string ProjectivePoint::to_string() const {
  std::ostringstream os;
  os << "[" << c[0] << ":" << c[1] << ":" << c[2] << "]";
  return os.str();
}

}  // namespace cubic
