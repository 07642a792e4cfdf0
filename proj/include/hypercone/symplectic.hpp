#pragma once

#include <complex>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "hypercone/exact_linalg.hpp"
#include "hypercone/phase_poly.hpp"

namespace hypercone {

// Sign conventions, used everywhere in the library:
//   {f, g} = sum_mu f_{xi_mu} g_{x_mu} - f_{x_mu} g_{xi_mu}
//   H_p    = (grad_xi p, -grad_x p)
//   sigma(X, Y) = <X.dxi, Y.dx> - <X.dx, Y.dxi>
// so that sigma((e0 + e1, 0), (y, eta)) = -eta0 - eta1 and sigma(Y, H_p) = dp(Y).

PhasePolynomial poisson_bracket(const PhasePolynomial& f, const PhasePolynomial& g);

PhaseVector hamilton_field(const PhasePolynomial& p, const PhasePoint& point);
RationalVector hamilton_field_exact(const PhasePolynomial& p, std::span<const Rational> point);

double symplectic_form(const PhaseVector& X, const PhaseVector& Y);
double symplectic_form(std::span<const double> X, std::span<const double> Y);
Rational symplectic_form_exact(std::span<const Rational> X, std::span<const Rational> Y);

/// Linearization of H_p at a stationary point rho. Hamiltonian with respect to sigma.
struct HamiltonMap {
  PhasePoint rho;
  RationalMatrix exact;  // assembled from exact second derivatives
  Eigen::MatrixXd F;
};

/// Throws PreconditionError unless rho is a characteristic of order >= 2.
HamiltonMap hamilton_map(const PhasePolynomial& p, const PhasePoint& rho);

struct SpectrumReport {
  std::vector<std::complex<double>> eigenvalues;
  bool has_nonzero_real = false;
  int real_pair_count = 0;  // distinct nonzero real pairs +-lambda
  int dim_W = 0;            // dim(Ker F^2 ∩ Im F^2)
  bool ambiguous = false;
  bool quadruple_symmetric = true;
  double tol = 1e-9;
  double norm_F = 0;
  std::string method;  // "exact" (characteristic polynomial + Sturm) or "floating"
};

/// Exact classification: realness by Sturm counting on the characteristic
/// polynomial, dim_W by rational rank. Eigenvalues are reported in floating point.
SpectrumReport classify_spectrum(const HamiltonMap& F, double tol = 1e-9);
/// Floating-point classification of a bare matrix with relative threshold tol * ||F||.
SpectrumReport classify_spectrum(const Eigen::MatrixXd& F, double tol = 1e-9);

/// Coefficients of det(lambda I - A), constant term first (Faddeev-LeVerrier over Q).
RationalVector characteristic_polynomial(const RationalMatrix& A);

}  // namespace hypercone
