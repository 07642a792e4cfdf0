#pragma once

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "hypercone/characteristic.hpp"
#include "hypercone/classifier.hpp"
#include "hypercone/cones.hpp"

namespace hypercone {

struct FlowSample {
  double t = 0;
  PhasePoint point;
};

struct IntegratorOptions {
  double rtol = 1e-10;
  double atol = 1e-14;
  double h0 = 0;  // 0 picks an initial step automatically
  std::size_t max_steps = 200000;
  int direction = 1;  // -1 integrates the reversed field dX/dt = -H_p
  /// Stop after the first accepted step where this returns true.
  std::function<bool(const PhasePoint&)> stop;
  /// Symbol scale below which p-drift is reported in absolute terms.
  double drift_scale = 1.0;
};

/// Dormand-Prince 5(4) solution of dX/dt = direction * H_p(X). Samples are the accepted
/// steps, so time is strictly increasing; `at` evaluates the 4th-order dense output.
struct Trajectory {
  std::vector<FlowSample> samples;
  std::vector<std::array<std::vector<double>, 5>> dense;  // per step, Hairer's continuous extension
  int direction = 1;
  double rtol = 0, atol = 0;
  std::size_t steps = 0, rejected = 0;
  double p_drift = 0;  // max |p| over samples
  bool truncated = false;
  bool stopped = false;
  std::string note;

  PhasePoint at(double t) const;
  const PhasePoint& back() const { return samples.back().point; }
};

/// Field components (grad_xi p, -grad_x p) as polynomials, for repeated evaluation.
class HamiltonField {
 public:
  explicit HamiltonField(const PhasePolynomial& p);
  void operator()(const std::vector<double>& y, std::vector<double>& dy) const;
  const PhasePolynomial& symbol() const { return p_; }

 private:
  PhasePolynomial p_;
  std::vector<PhasePolynomial> comps_;
};

Trajectory integrate(const PhasePolynomial& p, const PhasePoint& start, double t_end,
                     const IntegratorOptions& opts = {});
Trajectory integrate(const HamiltonField& field, const PhasePoint& start, double t_end,
                     const IntegratorOptions& opts = {});

/// Cone {|v| < slope |u|, sign(u) = u_sign} in two phase coordinates, centered at rho.
struct PlanarCone {
  PhasePoint rho;
  std::size_t u_var = 0;
  std::size_t v_var = 0;
  double slope = 1;
  int u_sign = -1;

  bool contains(const PhasePoint& q) const;
};

struct ArrivalRecord {
  PhasePoint start;
  bool arrived = false;
  bool cone_maintained = true;
  double final_radius_ratio = 1;
  double t_final = 0;
  int direction = 1;
  std::size_t steps = 0;
  double p_drift = 0;
};

struct ArrivalStats {
  std::vector<ArrivalRecord> records;
  std::size_t arrived = 0;
  double fraction = 0;
  double max_p_drift = 0;
  double threshold = 1e-6;
};

/// Integrates each start in the time direction along which the distance to rho initially
/// decreases, until that distance falls below threshold * initial distance or t_max elapses.
/// Throws PreconditionError when a start (other than rho itself) lies outside the cone.
ArrivalStats cone_arrival_probe(const PhasePolynomial& p, const PlanarCone& cone,
                                const std::vector<PhasePoint>& starts, double t_max,
                                double threshold = 1e-6, IntegratorOptions opts = {});

struct LimitDirection {
  PhaseVector X;            // gamma H_p / |H_p| at the closest approach, snapped to a 2^-16 grid
  double spread = 0;        // change of the normalized direction over the last decade of approach
  double final_distance = 0;
  ConeStatus cone_check = ConeStatus::undecided;
  bool inconsistent = false;  // certified non-member of C_rho
  bool skipped = false;
  std::string note;
};

/// Estimates lim gamma_j H_p(rho_j) along trajectories approaching Sigma, with
/// gamma_j = sign(d p / d xi_0 (rho_j)), and cross-checks each limit against C_rho.
std::vector<LimitDirection> limit_direction_probe(const PhasePolynomial& p, const Localization& L,
                                                  const CharManifold& sigma,
                                                  const std::vector<Trajectory>& trajectories,
                                                  double approach_ratio = 1e-3,
                                                  const ConeSearchOptions& cone_opts = {});

/// Distance-like measure to Sigma: sqrt(sum_j b_j^2).
double sigma_distance(const CharManifold& sigma, const PhasePoint& q);

struct GeometryProbe {
  BicharGeometry geometry;
  std::vector<Trajectory> trajectories;
  std::vector<LimitDirection> directions;
  std::size_t transversal_lines = 0;  // distinct limit directions up to sign, outside T_rho Sigma
  std::size_t tangent_lines = 0;
  std::string note;
};

/// Launches bicharacteristics from rho + eps v along real eigenvectors of the Hamilton map
/// and classifies how those reaching Sigma meet it. Without real eigenvalues the probe has no
/// candidates and reports `unknown`.
GeometryProbe bichar_geometry_probe(const PhasePolynomial& p, const CharManifold& sigma,
                                    double eps = 1e-2, double t_max = 50);

std::string trajectory_csv(const PhasePolynomial& p, const Trajectory& tr);
/// (u, v) phase portrait of several trajectories.
std::string phase_portrait_svg(const std::vector<Trajectory>& trs, std::size_t u_var, std::size_t v_var,
                               const std::string& title);

}  // namespace hypercone
