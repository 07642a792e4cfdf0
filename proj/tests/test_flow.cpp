#include <gtest/gtest.h>

#include <cmath>

#include "generators.hpp"
#include "hypercone/catalog.hpp"
#include "hypercone/flow.hpp"
#include "hypercone/sampling.hpp"

using namespace hypercone;

namespace {

// (xi0^2 + x0^2) / 2 rotates (x0, xi0) clockwise at unit speed.
PhasePolynomial rotation() {
  return Rational(1, 2) * (PhasePolynomial::xi(0, 0).pow(2) + PhasePolynomial::x(0, 0).pow(2));
}

}  // namespace

TEST(Flow, RotationClosedForm) {
  gen::Gen g(51);
  for (int it = 0; it < 20; ++it) {
    const double a = g.real(-2, 2), b = g.real(-2, 2), T = g.real(0.5, 10);
    const auto tr = integrate(rotation(), PhasePoint({a}, {b}), T);
    ASSERT_FALSE(tr.truncated);
    EXPECT_DOUBLE_EQ(tr.samples.back().t, T);
    EXPECT_NEAR(tr.back().x[0], a * std::cos(T) + b * std::sin(T), 1e-8);
    EXPECT_NEAR(tr.back().xi[0], b * std::cos(T) - a * std::sin(T), 1e-8);
    for (double t : {0.1 * T, 0.37 * T, 0.9 * T}) {
      const auto q = tr.at(t);
      EXPECT_NEAR(q.x[0], a * std::cos(t) + b * std::sin(t), 1e-7);
    }
  }
}

TEST(Flow, TimeReversalReturnsToStart) {
  gen::Gen g(52);
  auto s = straight_pair({1, 2});
  for (int it = 0; it < 10; ++it) {
    PhasePoint z({g.real(-0.5, 0.5), g.real(-0.5, 0.5), 0}, {g.real(-0.5, 0.5), g.real(-0.5, 0.5), 1});
    IntegratorOptions fwd;
    const auto a = integrate(s.p, z, 0.5, fwd);
    IntegratorOptions bwd;
    bwd.direction = -1;
    const auto b = integrate(s.p, a.back(), 0.5, bwd);
    for (std::size_t k = 0; k < 3; ++k) {
      EXPECT_NEAR(b.back().x[k], z.x[k], 1e-7);
      EXPECT_NEAR(b.back().xi[k], z.xi[k], 1e-7);
    }
  }
}

TEST(Flow, SymbolIsConserved) {
  gen::Gen g(53);
  auto s = cubic_cone(1, Rational(-1, 2));
  for (int it = 0; it < 10; ++it) {
    PhasePoint z({g.real(-0.3, 0.3), g.real(-0.3, 0.3), 0}, {g.real(-0.3, 0.3), g.real(-0.3, 0.3), 1});
    const double p0 = evaluate(s.p, z);
    const auto tr = integrate(s.p, z, 1.0);
    for (const auto& smp : tr.samples) ASSERT_NEAR(evaluate(s.p, smp.point), p0, 1e-8 * (1 + std::abs(p0)));
  }
}

TEST(Flow, ConeArrivalForCubicExample) {
  // a = 16, b = -32: 2b/(3a) = -4/3 < -1 and b = -a^{3/2}/2.
  auto s = cubic_cone(16, -32);
  PlanarCone cone;
  cone.rho = s.rho;
  cone.u_var = 0;                     // x0
  cone.v_var = xi_var(2, 1);          // xi1
  cone.slope = std::sqrt(1.0 / 3.0);  // |1 + 2b/(3a)|^{1/2}
  cone.u_sign = -1;
  std::vector<PhasePoint> starts;
  for (std::size_t i = 0; i < 64; ++i) {
    auto f = s.rho.flat();
    const double u = 0.1 * (0.25 + 0.75 * halton(i + 1, 2));
    f[0] = -u;
    f[cone.v_var] = 0.9 * cone.slope * u * (2 * halton(i + 1, 3) - 1);
    starts.push_back(PhasePoint::from_flat(f));
  }
  const auto st = cone_arrival_probe(s.p, cone, starts, 1e7, 1e-6);
  EXPECT_EQ(st.fraction, 1.0);
  EXPECT_LE(st.max_p_drift, 1e-7);
  for (const auto& r : st.records) {
    EXPECT_TRUE(r.cone_maintained);
    EXPECT_LT(r.final_radius_ratio, 1e-6);
  }
}

TEST(Flow, ConeStartsAreChecked) {
  auto s = cubic_cone(16, -32);
  PlanarCone cone;
  cone.rho = s.rho;
  cone.v_var = xi_var(2, 1);
  cone.slope = 0.5;
  PhasePoint outside({0.1, 0, 0}, {0, 0, 1});
  EXPECT_THROW(cone_arrival_probe(s.p, cone, {outside}, 1), PreconditionError);
}

TEST(Flow, EffectivelyHyperbolicGeometryIsTransversal) {
  auto s = tilted_pair({Rational(1, 2)});
  const auto probe = bichar_geometry_probe(s.p, s.manifold());
  EXPECT_EQ(probe.geometry.source, GeometrySource::numeric_probe);
  EXPECT_EQ(probe.geometry.mode, BicharMode::transversal_bichar_exists) << probe.note;
}

TEST(Flow, CsvHasHeaderAndRows) {
  const auto tr = integrate(rotation(), PhasePoint({1}, {0}), 1.0);
  const auto csv = trajectory_csv(rotation(), tr);
  EXPECT_EQ(csv.substr(0, 2), "t,");
  EXPECT_EQ(static_cast<std::size_t>(std::count(csv.begin(), csv.end(), '\n')), tr.samples.size() + 1);
}

TEST(Flow, FreeFlowIsLinear) {
  auto p = PhasePolynomial::xi(1, 0).pow(2);
  const auto tr = integrate(p, PhasePoint({0.5, 1}, {0.25, 3}), 2.0);
  EXPECT_NEAR(tr.back().x[0], 0.5 + 2 * 0.25 * 2.0, 1e-12);
  EXPECT_EQ(tr.back().xi[0], 0.25);
  EXPECT_EQ(tr.back().xi[1], 3);
}

TEST(Flow, CubicFieldReducesToPlanarSystem) {
  // On xi_n = 1, x1 = xi0 = 0: x0' = -3a(x0^2 + xi1^2), xi1' = 2b x0 xi1.
  const double a = 16, b = -32;
  auto s = cubic_cone(16, -32);
  gen::Gen g(54);
  for (int it = 0; it < 50; ++it) {
    const double x0 = g.real(-1, 1), xi1 = g.real(-1, 1);
    const auto H = hamilton_field(s.p, PhasePoint({x0, 0, g.real(-1, 1)}, {0, xi1, 1}));
    EXPECT_NEAR(H.dx[0], -3 * a * (x0 * x0 + xi1 * xi1), 1e-12);
    EXPECT_NEAR(H.dxi[1], 2 * b * x0 * xi1, 1e-12);
    EXPECT_NEAR(H.dx[1], 0, 1e-12);
    EXPECT_NEAR(H.dxi[0], 0, 1e-12);
  }
}

TEST(Flow, StartAtBaseHasArrived) {
  auto s = cubic_cone(16, -32);
  PlanarCone cone;
  cone.rho = s.rho;
  cone.v_var = xi_var(2, 1);
  const auto st = cone_arrival_probe(s.p, cone, {s.rho}, 1);
  EXPECT_EQ(st.fraction, 1.0);
}

TEST(Flow, LimitDirectionsLieInPropagationCone) {
  auto s = cubic_cone(16, -32);
  const auto L = localize(s.p, s.rho);
  std::vector<Trajectory> trs;
  for (double u : {0.05, 0.08}) {
    IntegratorOptions o;
    o.direction = -1;
    trs.push_back(integrate(s.p, PhasePoint({-u, 0, 0}, {0, 0.2 * u, 1}), 1e7, o));
  }
  const auto dirs = limit_direction_probe(s.p, L, s.manifold(), trs);
  ASSERT_EQ(dirs.size(), trs.size());
  for (const auto& d : dirs) {
    EXPECT_FALSE(d.inconsistent) << d.note;
    EXPECT_FALSE(d.skipped) << d.note;
  }
}

TEST(Flow, SaddleModelHasTwoTransversalBicharacteristics) {
  // xi0^2 - x0^2 xi1^2 with Sigma = {xi0 = x0 = 0}.
  const int n = 1;
  auto p = PhasePolynomial::xi(n, 0).pow(2) - (PhasePolynomial::x(n, 0) * PhasePolynomial::xi(n, 1)).pow(2);
  CharManifold sigma({PhasePolynomial::xi(n, 0), PhasePolynomial::x(n, 0) * PhasePolynomial::xi(n, 1)}, base_point(n));
  const auto probe = bichar_geometry_probe(p, sigma);
  EXPECT_EQ(probe.transversal_lines, 2u) << probe.note;
  EXPECT_EQ(probe.geometry.mode, BicharMode::transversal_bichar_exists);
}
