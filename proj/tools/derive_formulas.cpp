// Regenerates the invariant formula table from the Hessian identity.
#include <chrono>
#include <fstream>
#include <iostream>

#include "cubic/forms.hpp"

int main(int argc, char** argv) {
  auto t0 = std::chrono::steady_clock::now();
  cubic::DerivationReport rep;
  try {
    rep = cubic::derive_invariant_formulas();
  } catch (const std::exception& e) {
    std::cerr << "derivation failed: " << e.what() << "\n";
    return 3;
  }
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::cerr << "H terms " << rep.hessian_terms << ", H(H) terms " << rep.double_hessian_terms << ", 16I terms "
            << rep.formulas.i16.size() << ", 32J terms " << rep.formulas.j32.size() << ", multiplier "
            << rep.multiplier << ", " << secs << " s\n";
  std::string text = rep.formulas.to_text();
  if (argc > 1) {
    std::ofstream out(argv[1]);
    out << text;
  } else {
    std::cout << text;
  }
  return 0;
}
