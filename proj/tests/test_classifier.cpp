#include <gtest/gtest.h>

#include <numeric>

#include "generators.hpp"
#include "hypercone/catalog.hpp"
#include "hypercone/classifier.hpp"

using namespace hypercone;

namespace {

Rational frac(int a, int b) {
  Rational q(a, b);
  q.canonicalize();
  return q;
}

const DoubleCharFlags kFlags{true, true, true};

SpectrumReport spectrum(bool real, int dim_W) {
  SpectrumReport s;
  s.has_nonzero_real = real;
  s.real_pair_count = real ? 1 : 0;
  s.dim_W = dim_W;
  s.method = "exact";
  return s;
}

GevreyVerdict table(bool real, int dim_W, BicharMode mode) {
  return classify_double(spectrum(real, dim_W), {mode, GeometrySource::user_supplied}, 3, kFlags);
}

const BicharMode kModes[] = {BicharMode::no_bichar_meets_sigma, BicharMode::tangent_bichar_exists,
                             BicharMode::transversal_bichar_exists, BicharMode::unknown};

}  // namespace

TEST(DoubleTable, EffectivelyHyperbolicIsInfinite) {
  for (auto mode : kModes) EXPECT_EQ(table(true, 0, mode).kind, GevreyVerdict::Kind::infinity);
}

TEST(DoubleTable, Rows) {
  EXPECT_EQ(table(false, 2, BicharMode::no_bichar_meets_sigma).to_string(), "4");
  EXPECT_EQ(table(false, 2, BicharMode::tangent_bichar_exists).to_string(), "3");
  EXPECT_EQ(table(false, 0, BicharMode::no_bichar_meets_sigma).to_string(), "2");
}

TEST(DoubleTable, GapsAndFallbacks) {
  EXPECT_FALSE(table(true, 2, BicharMode::unknown).has_value());
  EXPECT_FALSE(table(false, 0, BicharMode::tangent_bichar_exists).has_value());
  const auto v = table(false, 2, BicharMode::unknown);
  ASSERT_EQ(v.kind, GevreyVerdict::Kind::interval);
  EXPECT_EQ(v.lo, 2);
  EXPECT_EQ(v.hi, 4);
  EXPECT_EQ(table(false, 0, BicharMode::transversal_bichar_exists).kind, GevreyVerdict::Kind::interval);
}

TEST(DoubleTable, RequiresAssertedAssumptions) {
  EXPECT_THROW(classify_double(spectrum(true, 0), {}, 3, DoubleCharFlags{}), PreconditionError);
  EXPECT_THROW(classify_double(spectrum(true, 0), {}, 2, kFlags), PreconditionError);
}

TEST(DoubleTable, EffectivelyHyperbolicExample) {
  auto s = tilted_pair({Rational(1, 2)});
  const auto spec = classify_spectrum(hamilton_map(s.p, s.rho));
  const auto v = classify_double(spec, {}, s.manifold().codimension(), kFlags);
  EXPECT_EQ(v.to_string(), "inf");
}

TEST(OrderM, SufficientConditions) {
  EXPECT_EQ(classify_order_m(Decision::yes, Transversality::transversal, 3).to_string(), "3");
  EXPECT_EQ(classify_order_m(Decision::yes, Transversality::transversal, 4).to_string(), "2");
  const auto v = classify_order_m(Decision::yes, Transversality::non_transversal, 4);
  ASSERT_EQ(v.kind, GevreyVerdict::Kind::interval);
  EXPECT_EQ(v.lo, Rational(4, 3));
  EXPECT_EQ(v.hi, 2);
  EXPECT_FALSE(v.note.empty());
  EXPECT_EQ(classify_order_m(Decision::undecided, Transversality::transversal, 3).kind,
            GevreyVerdict::Kind::interval);
  EXPECT_THROW(classify_order_m(Decision::yes, Transversality::transversal, 2), PreconditionError);
}

TEST(OrderM, FloorAndCeilingHoldForAllInputs) {
  const Decision ds[] = {Decision::yes, Decision::no, Decision::undecided};
  const Transversality ts[] = {Transversality::transversal, Transversality::non_transversal,
                               Transversality::undecided};
  for (int m = 3; m <= 8; ++m)
    for (auto d : ds)
      for (auto t : ts) {
        const auto v = classify_order_m(d, t, m);
        const Rational floor = frac(m, m - 1), ceil = frac(m, m - 2);
        if (v.kind == GevreyVerdict::Kind::rational) {
          EXPECT_EQ(v.value, ceil);
        } else {
          ASSERT_EQ(v.kind, GevreyVerdict::Kind::interval);
          EXPECT_EQ(v.lo, floor);
          EXPECT_EQ(v.hi, ceil);
        }
        // Strengthening undecided inputs never drops below the floor.
        const auto strong = classify_order_m(Decision::yes, Transversality::transversal, m);
        EXPECT_GE(strong.value, v.kind == GevreyVerdict::Kind::interval ? v.lo : v.value);
        EXPECT_FALSE(v.provenance.empty());
      }
}

TEST(Involutive, NormalForm) {
  const int n = 1;
  CharManifold sigma({PhasePolynomial::xi(n, 0)}, base_point(n));
  for (unsigned m = 2; m <= 6; ++m) {
    const auto v = classify_involutive(sigma, PhasePolynomial::xi(n, 0).pow(m), static_cast<int>(m));
    EXPECT_EQ(v.value, frac(static_cast<int>(m), static_cast<int>(m) - 1));
  }
  EXPECT_EQ(classify_involutive(sigma, PhasePolynomial::xi(n, 0).pow(3), 3).to_string(), "3/2");
  // xi0^3 + x0 xi0 xi1^... breaks the normal form: bounds only.
  auto off = PhasePolynomial::xi(n, 0).pow(3) + PhasePolynomial::xi(n, 0).pow(2) * PhasePolynomial::xi(n, 1);
  EXPECT_EQ(classify_involutive(sigma, off, 3).kind, GevreyVerdict::Kind::interval);
  auto ex = linear_product({1, 0, -1});
  EXPECT_THROW(classify_involutive(ex.manifold(), ex.p, 3), PreconditionError);
}

TEST(LeviFilter, Examples) {
  const int n = 1;
  const auto rho = base_point(n);
  EXPECT_TRUE(ivrii_levi_filter(PhasePolynomial(n), rho, 3, 3).empty());
  // m = 3, kappa = 3: bound 0, P2(rho) != 0 is the only violation.
  auto P2 = PhasePolynomial::xi(n, 1).pow(2) + PhasePolynomial::x(n, 0) * PhasePolynomial::xi(n, 1);
  auto v = ivrii_levi_filter(P2, rho, 3, 3);
  ASSERT_EQ(v.size(), 1u);
  EXPECT_EQ(v[0].value, 1);
  // m = 4, kappa = 2: bound 0.
  auto P3 = PhasePolynomial::xi(n, 1).pow(3) * Rational(5);
  v = ivrii_levi_filter(P3, rho, 4, 2);
  ASSERT_EQ(v.size(), 1u);
  EXPECT_EQ(v[0].value, 5);
  // m = 4, kappa = 4: bound 4 - 8/3 = 4/3 admits first derivatives: d/dx0 (x0 xi1) = 1.
  v = ivrii_levi_filter(PhasePolynomial::x(n, 0) * PhasePolynomial::xi(n, 1).pow(2), rho, 4, 4);
  ASSERT_EQ(v.size(), 1u);
  EXPECT_EQ(std::accumulate(v[0].order.begin(), v[0].order.end(), 0), 1);
  EXPECT_THROW(ivrii_levi_filter(P2, rho, 3, 1), PreconditionError);
}

TEST(Verdict, Formatting) {
  EXPECT_EQ(GevreyVerdict::exact(Rational(6, 4)).to_string(), "3/2");
  EXPECT_EQ(GevreyVerdict::range(Rational(4, 3), Rational(4, 2)).to_string(), "[4/3, 2]");
  EXPECT_EQ(GevreyVerdict::infinite().to_string(), "inf");
  EXPECT_THROW(GevreyVerdict::range(3, 2), PreconditionError);
}
