#pragma once

#include <array>
#include <optional>
#include <vector>

#include "cubic/numeric.hpp"
#include "cubic/poly.hpp"

namespace cubic {

// Integer polynomial in ten symbols prepared for repeated evaluation.
class CompiledFormula {
 public:
  CompiledFormula() = default;
  explicit CompiledFormula(const MultiPoly& p);

  int degree() const { return degree_; }
  Rational evaluate(const std::array<Rational, 10>& a) const;
  Integer evaluate(const std::array<Integer, 10>& a) const;
  // Exact whenever the bound sum |c| * max|a|^deg stays below 2^125.
  std::optional<__int128> evaluate_int128(const std::array<std::int64_t, 10>& a) const;
  std::int64_t evaluate_mod(const std::array<std::int64_t, 10>& a, std::int64_t p) const;

 private:
  struct Entry {
    std::array<std::uint8_t, 10> e;
    std::int64_t small;  // valid when fits
    Integer big;
    bool fits;
  };
  std::vector<Entry> entries_;
  int degree_ = 0;
  double log2_abs_sum_ = 0;
  bool all_fit_ = true;
};

}  // namespace cubic
