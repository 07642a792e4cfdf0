#pragma once

#include <string>
#include <vector>

#include "hypercone/characteristic.hpp"

namespace hypercone {

/// Exponents delta = (1 - eps*)/m, rho = (m - 1 + eps*)/m, kappa = rho - delta, and the
/// coefficients alpha_j of phi = sum_j alpha_j b_j <xi>^-1 (one per b_1..b_k).
struct WeightConfig {
  int m = 0;
  Rational eps_star;
  double gamma = 1;
  std::vector<double> alpha;
  CharManifold sigma;

  /// Throws PreconditionError unless 0 < eps* < 1, m >= 1, gamma >= 1 and alpha has k entries.
  WeightConfig(int m, Rational eps_star, double gamma, std::vector<double> alpha, CharManifold sigma);

  Rational delta() const { return (1 - eps_star) / m; }
  Rational rho_exp() const { return (m - 1 + eps_star) / m; }
  Rational kappa() const { return rho_exp() - delta(); }
  WeightConfig with_gamma(double g) const;
};

struct WeightValues {
  double bracket = 0;  // <xi>_gamma = (gamma^2 + |xi|^2)^(1/2)
  double w = 0, phi = 0, omega = 0, psi = 0;
  double phi_plus_omega = 0;
};

WeightValues weights(const WeightConfig& cfg, const PhasePoint& z);

struct HValues {
  std::vector<double> h;        // h_0 = 1, ..., h_m
  std::vector<double> lambdas;  // real roots xi_0 = lambda_j(x, xi')
  double tau = 0;               // eps omega^-1 <xi>^kappa, the imaginary shift along theta = e_0
  WeightValues weight;
};

/// Elementary symmetric sums of |q_j|^2 at xi - i tau theta, |q_j|^2 = (xi_0 - lambda_j)^2 + tau^2.
HValues h_functions(const PhasePolynomial& p, const WeightConfig& cfg, const PhasePoint& z, double eps);
/// Same, with the roots already known.
HValues h_functions(const std::vector<double>& lambdas, const WeightConfig& cfg, const PhasePoint& z, double eps);
/// e_0..e_m of the given values.
std::vector<double> elementary_symmetric(const std::vector<double>& v);

/// Points xi = L rho.xi displaced along the complement of span(T Sigma, N): x-parts by
/// s L^-delta, xi-parts by s L^(1-delta), and xi_0 = t L^(1-delta), with L = scale * gamma.
/// In these units the root-product ratios do not drift with gamma.
struct WeightGrid {
  std::vector<double> scales{2, 10, 100, 1000};
  std::vector<double> offsets{0, 0.25, 0.5, 1, 2, 4};
  std::vector<double> xi0_offsets{-2, -0.5, 0, 0.5, 2};
  std::size_t directions = 8;  // unit vectors in the complement per offset
  std::uint64_t seed = 0;

  double min_spacing() const;
};

std::vector<PhasePoint> weight_grid_points(const WeightConfig& cfg, const WeightGrid& grid);

struct WeightBounds {
  double C_upper = 0;  // max (phi + omega)
  double C_lower = 0;  // max <xi>^-2delta / (phi + omega)
  std::size_t omega_below_phi = 0;
  std::size_t points = 0;
};
WeightBounds weight_bounds(const WeightConfig& cfg, const std::vector<PhasePoint>& points);

struct RootProductRow {
  double eps = 0, gamma = 0;
  int k = 0, j = 0;
  double infimum = 0;
  PhasePoint argmin;
};

struct RootProductStability {
  double eps = 0;
  int k = 0, j = 0;
  double spread = 0;  // (max - min) / min of the grid infima over the gamma ladder
  bool stable = false;
};

struct RootProductReport {
  std::vector<RootProductRow> rows;
  std::vector<RootProductStability> stability;
  std::size_t points_per_gamma = 0;
  bool all_positive = false;
  bool all_stable = false;
  double max_spread = 0;
};

/// Grid infima of h_{m-k} / ((eps omega)^{2(j-k)} <xi>^{2(j-k)} h_{m-j}) for 1 <= k <= j <= m.
RootProductReport root_product_probe(const PhasePolynomial& p, const WeightConfig& cfg, const std::vector<double>& eps,
                            const std::vector<double>& gammas, const WeightGrid& grid = {},
                            double stability_tol = 0.2);

enum class Envelope { w, omega, psi, p_vs_h };
std::string to_string(Envelope e);
Envelope envelope_from_string(const std::string& s);

struct EnvelopeRow {
  double gamma = 0;
  double max_ratio = 0;  // the empirical constant C at this gamma
  PhasePoint argmax;
  std::size_t points = 0;
};

struct EnvelopeReport {
  Envelope which = Envelope::w;
  std::vector<EnvelopeRow> rows;
  double C = 0;  // max over rows
  bool divergent = false;  // ratio grows with gamma
  std::string note;
};

/// First-order central differences with steps fd_step <xi>^-delta in x and fd_step <xi>^rho in xi
/// (unit steps of the metric), compared against
///   w, omega: f <xi>^{-rho|a| + delta|b|};  psi: omega^-1 <xi>^{kappa - |a|};  p: <xi>^{1-|a|} h,
/// with a the xi-derivative and b the x-derivative order. Throws PreconditionError when fd_step
/// is outside (0, 0.1] or not below half the grid spacing.
EnvelopeReport derivative_bound_probe(const PhasePolynomial& p, const WeightConfig& cfg, Envelope which,
                                      const std::vector<double>& gammas, const WeightGrid& grid,
                                      double fd_step = 1e-3, double eps = 0.1);

std::string root_product_csv(const RootProductReport& r);
std::string envelope_csv(const EnvelopeReport& r);

}  // namespace hypercone
