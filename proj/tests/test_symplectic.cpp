#include <gtest/gtest.h>

#include "generators.hpp"
#include "hypercone/catalog.hpp"
#include "hypercone/symplectic.hpp"

using namespace hypercone;

namespace {

PhasePolynomial drop_low_degrees(const PhasePolynomial& q) {
  PhasePolynomial p = q;
  p -= homogeneous_part(q, 0);
  p -= homogeneous_part(q, 1);
  return p;
}

}  // namespace

TEST(PoissonBracket, JacobiAndAntisymmetry) {
  gen::Gen g(21);
  for (int it = 0; it < 1000; ++it) {
    const int n = g.integer(0, 1);
    auto f = g.polynomial(n, 3, 3), h = g.polynomial(n, 3, 3), k = g.polynomial(n, 3, 3);
    ASSERT_TRUE((poisson_bracket(f, h) + poisson_bracket(h, f)).is_zero());
    auto jac = poisson_bracket(f, poisson_bracket(h, k)) + poisson_bracket(h, poisson_bracket(k, f)) +
               poisson_bracket(k, poisson_bracket(f, h));
    ASSERT_TRUE(jac.is_zero());
  }
}

TEST(PoissonBracket, LeibnizRule) {
  gen::Gen g(22);
  for (int it = 0; it < 1000; ++it) {
    const int n = g.integer(0, 1);
    auto f = g.polynomial(n, 3, 3), h = g.polynomial(n, 3, 3), k = g.polynomial(n, 3, 3);
    ASSERT_EQ(poisson_bracket(f, h * k), poisson_bracket(f, h) * k + h * poisson_bracket(f, k));
  }
}

TEST(PoissonBracket, CanonicalPairs) {
  const int n = 1;
  auto xi0 = PhasePolynomial::xi(n, 0), x0 = PhasePolynomial::x(n, 0), xi1 = PhasePolynomial::xi(n, 1);
  EXPECT_EQ(poisson_bracket(xi0, x0), PhasePolynomial::constant(n, 1));
  EXPECT_EQ(poisson_bracket(xi0, x0 * xi1), xi1);
}

TEST(SymplecticForm, SignPinnedByExample) {
  // sigma((e0 + e1, 0), (y, eta)) = -eta0 - eta1
  gen::Gen g(23);
  for (int it = 0; it < 100; ++it) {
    RationalVector X{1, 1, 0, 0, 0, 0};
    auto Y = g.rational_vector(6);
    EXPECT_EQ(symplectic_form_exact(X, Y), -Y[3] - Y[4]);
  }
}

TEST(SymplecticForm, HamiltonFieldPairsWithDifferential) {
  // sigma(Y, H_p) = dp(Y)
  gen::Gen g(24);
  for (int it = 0; it < 300; ++it) {
    auto p = g.polynomial(1, 3, 4);
    auto z = g.rational_vector(4), Y = g.rational_vector(4);
    auto H = hamilton_field_exact(p, z);
    auto dp = gradient_exact(p, z);
    Rational dpY = 0;
    for (std::size_t i = 0; i < 4; ++i) dpY += dp[i] * Y[i];
    ASSERT_EQ(symplectic_form_exact(Y, H), dpY);
  }
}

TEST(HamiltonMap, MatchesFiniteDifferenceOfField) {
  gen::Gen g(25);
  for (int it = 0; it < 200; ++it) {
    const int n = g.integer(0, 1);
    const std::size_t N = static_cast<std::size_t>(2 * (n + 1));
    auto q = drop_low_degrees(g.polynomial(n, 3, 6));
    if (q.is_zero()) continue;
    std::vector<double> rho(N);
    RationalVector shift(N);
    for (std::size_t i = 0; i < N; ++i) {
      shift[i] = -Rational(g.integer(-4, 4), 4);
      rho[i] = -shift[i].get_d();
    }
    const auto p = q.shifted(shift);  // vanishes to second order at rho
    const HamiltonMap F = hamilton_map(p, PhasePoint::from_flat(rho));
    const auto v = g.unit_vector(N);
    const double h = 1e-5;
    std::vector<double> a = rho, b = rho;
    for (std::size_t i = 0; i < N; ++i) a[i] += h * v[i], b[i] -= h * v[i];
    const auto Ha = hamilton_field(p, PhasePoint::from_flat(a)).flat();
    const auto Hb = hamilton_field(p, PhasePoint::from_flat(b)).flat();
    for (std::size_t i = 0; i < N; ++i) {
      double Fv = 0;
      for (std::size_t j = 0; j < N; ++j) Fv += F.F(static_cast<long>(i), static_cast<long>(j)) * v[j];
      ASSERT_NEAR((Ha[i] - Hb[i]) / (2 * h), Fv, 1e-6 * (1 + std::abs(Fv)));
    }
  }
}

TEST(HamiltonMap, IsHamiltonian) {
  // F^T J + J F = 0 with the form matrix J.
  gen::Gen g(26);
  for (int it = 0; it < 100; ++it) {
    auto p = drop_low_degrees(g.polynomial(1, 3, 6));
    if (p.is_zero()) continue;
    const HamiltonMap F = hamilton_map(p, PhasePoint({0, 0}, {0, 0}));
    for (std::size_t i = 0; i < 4; ++i)
      for (std::size_t j = 0; j < 4; ++j) {
        RationalVector ei(4), ej(4);
        ei[i] = 1;
        ej[j] = 1;
        RationalVector Fi(4), Fj(4);
        for (std::size_t r = 0; r < 4; ++r) Fi[r] = F.exact(r, i), Fj[r] = F.exact(r, j);
        ASSERT_EQ(symplectic_form_exact(Fi, ej) + symplectic_form_exact(ei, Fj), 0);
      }
  }
}

TEST(Spectrum, SaddleHasRealPair) {
  const int n = 0;
  auto p = PhasePolynomial::xi(n, 0).pow(2) - PhasePolynomial::x(n, 0).pow(2);
  const auto s = classify_spectrum(hamilton_map(p, PhasePoint({0}, {0})));
  EXPECT_TRUE(s.has_nonzero_real);
  EXPECT_EQ(s.real_pair_count, 1);
  std::vector<double> re;
  for (auto z : s.eigenvalues) {
    EXPECT_NEAR(z.imag(), 0, 1e-9);
    re.push_back(z.real());
  }
  std::sort(re.begin(), re.end());
  EXPECT_NEAR(re[0], -2, 2e-9);
  EXPECT_NEAR(re[1], 2, 2e-9);
}

TEST(Spectrum, CenterHasImaginaryPair) {
  const int n = 0;
  auto p = PhasePolynomial::xi(n, 0).pow(2) + PhasePolynomial::x(n, 0).pow(2);
  const auto s = classify_spectrum(hamilton_map(p, PhasePoint({0}, {0})));
  EXPECT_FALSE(s.has_nonzero_real);
  std::vector<double> im;
  for (auto z : s.eigenvalues) {
    EXPECT_NEAR(z.real(), 0, 1e-9);
    im.push_back(z.imag());
  }
  std::sort(im.begin(), im.end());
  EXPECT_NEAR(im[0], -2, 2e-9);
  EXPECT_NEAR(im[1], 2, 2e-9);
}

TEST(Spectrum, OrderThreeCharacteristicGivesZeroMap) {
  auto c = cubic_cone(Rational(1), Rational(-1, 2));
  const auto F = hamilton_map(c.p, c.rho);
  for (std::size_t i = 0; i < F.exact.rows(); ++i)
    for (std::size_t j = 0; j < F.exact.cols(); ++j) EXPECT_EQ(F.exact(i, j), 0);
  const auto s = classify_spectrum(F);
  EXPECT_FALSE(s.has_nonzero_real);
  EXPECT_EQ(s.norm_F, 0);
}

TEST(Spectrum, TiltedPairIsEffectivelyHyperbolic) {
  auto s = tilted_pair({Rational(1, 2)});
  const auto r = classify_spectrum(hamilton_map(s.p, s.rho));
  EXPECT_TRUE(r.has_nonzero_real);
  EXPECT_EQ(r.method, "exact");
}

TEST(Spectrum, CharacteristicPolynomialOfCompanion) {
  // [[0,1],[-2,-3]] has det(l I - A) = l^2 + 3 l + 2.
  RationalMatrix A(2, 2);
  A(0, 1) = 1;
  A(1, 0) = -2;
  A(1, 1) = -3;
  EXPECT_EQ(characteristic_polynomial(A), (RationalVector{2, 3, 1}));
}

TEST(HamiltonMap, RejectsSimpleCharacteristic) {
  const int n = 0;
  auto p = PhasePolynomial::xi(n, 0);
  EXPECT_THROW(hamilton_map(p, PhasePoint({0}, {0})), PreconditionError);
}

TEST(PoissonBracket, DisjointPairsCommute) {
  const int n = 2;
  EXPECT_TRUE(poisson_bracket(PhasePolynomial::x(n, 0) * PhasePolynomial::xi(n, 2), PhasePolynomial::xi(n, 1)).is_zero());
  auto f = PhasePolynomial::x(n, 0) * PhasePolynomial::xi(n, 2);
  EXPECT_TRUE(poisson_bracket(f, f).is_zero());
}

TEST(HamiltonField, Examples) {
  const int n = 1;
  auto xi0 = PhasePolynomial::xi(n, 0);
  auto H = hamilton_field(xi0.pow(2), PhasePoint({0, 0}, {1, 0}));
  EXPECT_EQ(H.dx, (std::vector<double>{2, 0}));
  EXPECT_EQ(H.dxi, (std::vector<double>{0, 0}));
  // p = xi0^2 - x0^2 xi1^2 at x = (1, 0), xi = (0, 1).
  auto p = xi0.pow(2) - (PhasePolynomial::x(n, 0) * PhasePolynomial::xi(n, 1)).pow(2);
  H = hamilton_field(p, PhasePoint({1, 0}, {0, 1}));
  EXPECT_EQ(H.dx, (std::vector<double>{0, -2}));
  EXPECT_EQ(H.dxi, (std::vector<double>{2, 0}));
}

TEST(HamiltonMap, SaddleMatrixAndW) {
  auto p = PhasePolynomial::xi(0, 0).pow(2) - PhasePolynomial::x(0, 0).pow(2);
  const auto F = hamilton_map(p, PhasePoint({0}, {0}));
  EXPECT_EQ(F.exact(0, 0), 0);
  EXPECT_EQ(F.exact(0, 1), 2);
  EXPECT_EQ(F.exact(1, 0), 2);
  EXPECT_EQ(classify_spectrum(F).dim_W, 0);
  Eigen::MatrixXd R(2, 2);
  R << 0, 2, -2, 0;
  const auto r = classify_spectrum(R);
  EXPECT_FALSE(r.has_nonzero_real);
  EXPECT_EQ(r.dim_W, 0);
  const auto z = classify_spectrum(Eigen::MatrixXd::Zero(2, 2));
  EXPECT_FALSE(z.has_nonzero_real);
  EXPECT_EQ(z.dim_W, 0);
}

TEST(SymplecticForm, Antisymmetry) {
  gen::Gen g(27);
  for (int it = 0; it < 200; ++it) {
    auto X = g.rational_vector(6), Y = g.rational_vector(6);
    EXPECT_EQ(symplectic_form_exact(X, X), 0);
    EXPECT_EQ(symplectic_form_exact(X, Y), -symplectic_form_exact(Y, X));
  }
}
