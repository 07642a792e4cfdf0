#pragma once

#include <optional>
#include <string>
#include <vector>

#include "hypercone/exact_linalg.hpp"
#include "hypercone/phase_poly.hpp"

namespace hypercone {

/// Characteristic manifold Sigma = {b_0 = ... = b_k = 0} near a base point rho.
/// b_0 is expected to be xi_0 after normalization, though this is not enforced.
struct CharManifold {
  std::vector<PhasePolynomial> defining;
  PhasePoint rho;

  /// Validates b_j(rho) = 0 exactly and linear independence of the db_j at rho.
  CharManifold(std::vector<PhasePolynomial> b, PhasePoint base);

  int n() const { return rho.n(); }
  int k() const { return static_cast<int>(defining.size()) - 1; }
  int codimension() const { return static_cast<int>(defining.size()); }
  /// Rows db_j(rho), exact.
  RationalMatrix jacobian() const;
};

/// Unchecked construction, for tests that need to exercise the validation path downstream.
CharManifold make_unchecked_manifold(std::vector<PhasePolynomial> b, PhasePoint base);

struct Localization {
  PhasePoint rho;
  int order = 0;
  PhasePolynomial p_loc;  // homogeneous of degree `order` in the displacement X
  PhaseVector direction;  // N = (0, theta), theta = e_0

  RationalVector direction_exact() const { return direction.exact(); }
  /// p_loc(N) != 0
  bool direction_noncharacteristic() const;
  /// Exact test that p_loc(X + Y) = p_loc(X) for every Y in span(basis).
  bool invariant_along(const std::vector<RationalVector>& basis) const;
};

enum class Decision { yes, no, undecided };
std::string to_string(Decision d);

struct SamplingOptions {
  std::size_t samples = 512;
  std::uint64_t seed = 0;
  bool include_coordinate_directions = true;
};

struct HyperbolicityVerdict {
  Decision status = Decision::undecided;
  std::optional<PhaseVector> witness;
  std::size_t samples_checked = 0;
  std::string method;  // "exact-sturm" or "floating"
  std::string note;
};

/// Largest r with every derivative of order < r vanishing at rho; 0 if p(rho) != 0.
/// Throws PreconditionError for the zero polynomial.
int characteristic_order(const PhasePolynomial& p, const PhasePoint& rho);

/// Throws PreconditionError when p(rho) != 0.
Localization localize(const PhasePolynomial& p, const PhasePoint& rho);

/// Sampled test that t -> p_hom(X + tN) has only real roots. A `no` carries an
/// exactly verified witness; `yes` is a semi-decision over the samples drawn.
/// Throws PreconditionError when p_hom(N) == 0.
HyperbolicityVerdict is_hyperbolic(const PhasePolynomial& p_hom, const PhaseVector& N,
                                   const SamplingOptions& opts = {}, double tol = 1e-8);

/// Strict hyperbolicity of the localization on R^{2(n+1)} / T_rho Sigma.
HyperbolicityVerdict is_strictly_hyperbolic_on_quotient(const Localization& L,
                                                        const CharManifold& sigma,
                                                        const SamplingOptions& opts = {},
                                                        double tol = 1e-8);

struct RootRow {
  PhasePoint point;
  std::vector<double> lambdas;  // ascending
  double b_prime_norm = 0;
};

struct RootTable {
  std::vector<RootRow> rows;
  double C_fit = 0;  // max |lambda_j| / |b'|
  double c_fit = 0;  // min_{i != j} |lambda_i - lambda_j| / |b'|
  std::size_t ratio_points = 0;
  double max_root_sum = 0;  // max |sum_j lambda_j|
  std::vector<PhasePoint> violations;  // nonreal roots beyond tolerance
  int m = 0;
};

/// Real roots xi_0 = lambda_j(x, xi') of a symbol monic in xi_0, with fitted
/// bounds |lambda_j| <= C|b'| and |lambda_i - lambda_j| >= c|b'| over the grid.
/// Grid points with |b'| below 1e-12 are kept but excluded from the ratios.
RootTable factor_roots(const PhasePolynomial& p, const CharManifold& sigma,
                       const std::vector<PhasePoint>& grid, double tol = 1e-8);

std::string root_table_csv(const RootTable& t);

/// Kernel basis of the exact Jacobian; throws on rank deficiency.
std::vector<RationalVector> tangent_space(const CharManifold& sigma);

}  // namespace hypercone
