#pragma once

#include <string>
#include <vector>

#include "hypercone/characteristic.hpp"
#include "hypercone/phase_poly.hpp"

namespace hypercone {

/// A symbol together with defining functions of its characteristic manifold.
struct SymbolCase {
  std::string id;
  std::string description;
  PhasePolynomial p;
  std::vector<PhasePolynomial> b;  // b_0 = xi_0 first
  PhasePoint rho;
  int m = 0;

  CharManifold manifold() const { return CharManifold(b, rho); }
};

/// rho = (0; e_n).
PhasePoint base_point(int n);

/// prod_j (xi_0^2 - c_j ((x_0 - x_1)^2 xi_n^2 + xi_1^2)), b = (xi_0, (x_0 - x_1) xi_n, xi_1); n >= 2.
SymbolCase tilted_pair(const std::vector<Rational>& c, int n = 2);
/// prod_j (xi_0^2 - c_j (x_0^2 xi_n^2 + xi_1^2)), b = (xi_0, x_0 xi_n, xi_1); n >= 2.
SymbolCase straight_pair(const std::vector<Rational>& c, int n = 2);
/// xi_0^3 - 3a((x_0^2 + x_1^2) xi_n^2 + xi_1^2) xi_0 - 2b x_0 x_1 xi_1 xi_n^2,
/// b = (xi_0, x_0 xi_n, x_1 xi_n, xi_1); n >= 2.
SymbolCase cubic_cone(const Rational& a, const Rational& b, int n = 2);
/// prod_j (xi_0 - alpha_j x_0 xi_1), b = (xi_0, x_0 xi_1); n = 1.
SymbolCase linear_product(const std::vector<Rational>& alpha);

/// Default instances listed by the CLI.
std::vector<SymbolCase> bundled_cases();

}  // namespace hypercone
