#include <gtest/gtest.h>

#include <cmath>

#include "generators.hpp"
#include "hypercone/growth.hpp"
#include "hypercone/report.hpp"

using namespace hypercone;

namespace {

ModelOperator op(const std::string& s) { return model_from_symbol(parse_expression(s, 1)); }

TXiPoly txi(int re, int im, int t, int xi) { return TXiPoly::monomial(GaussianRational(re, im), t, xi); }

}  // namespace

TEST(ModelOperator, CompositionCommutatorTerm) {
  // (D - t xi)(D + t xi) = D^2 - i xi - t^2 xi^2
  const auto M = product_model({1, -1});
  ASSERT_EQ(M.order(), 2);
  EXPECT_EQ(M.a[2], TXiPoly::constant(1));
  EXPECT_TRUE(M.a[1].is_zero());
  EXPECT_EQ(M.a[0], txi(0, -1, 0, 1) + txi(-1, 0, 2, 2));
}

TEST(ModelOperator, DerivativeThroughCoefficient) {
  // D o t = t D - i
  auto D = ModelOperator::first_order(TXiPoly());
  ModelOperator t;
  t.a = {txi(1, 0, 1, 0)};
  const auto M = D.compose(t);
  ASSERT_EQ(M.order(), 1);
  EXPECT_EQ(M.a[1], txi(1, 0, 1, 0));
  EXPECT_EQ(M.a[0], txi(0, -1, 0, 0));
}

TEST(ModelOperator, CompositionIsAssociative) {
  gen::Gen g(61);
  for (int it = 0; it < 50; ++it) {
    auto f = [&] {
      return ModelOperator::first_order(txi(g.integer(-2, 2), g.integer(-1, 1), g.integer(0, 2), g.integer(0, 1)));
    };
    auto A = f(), B = f(), C = f();
    EXPECT_EQ(A.compose(B).compose(C).a, A.compose(B.compose(C)).a);
  }
}

TEST(ModelOperator, FromSymbol) {
  const auto M = op("xi0^2 + xi1");
  EXPECT_EQ(M.order(), 2);
  EXPECT_EQ(M.a[0], txi(1, 0, 0, 1));
  EXPECT_THROW(model_from_symbol(parse_expression("xi0 + x1", 1)), PreconditionError);
  EXPECT_THROW(model_from_symbol(parse_expression("2*xi0^2", 1)), PreconditionError);
  EXPECT_THROW(model_from_symbol(parse_expression("xi0", 2) + parse_expression("xi2", 2)), PreconditionError);
}

TEST(ModelOperator, LowerOrderBound) {
  const auto P = product_model({1, 0, -1});
  const auto Q = model_from_symbol(parse_expression("xi1", 1), false).a;
  const auto M = with_lower_order(P, Q, 1);
  EXPECT_EQ(M.lower_order_bound, 1);
  EXPECT_EQ(M.a[0], P.a[0] + txi(1, 0, 0, 1));
  EXPECT_THROW(with_lower_order(P, model_from_symbol(parse_expression("xi1^2", 1), false).a, 1),
               PreconditionError);
  EXPECT_THROW(with_lower_order(P, Q, 3), PreconditionError);
}

TEST(ReduceToOde, Examples) {
  // -u'' + xi u = 0: u'' = xi u.
  auto S = reduce_to_ode(op("xi0^2 + xi1"), 7);
  ASSERT_EQ(S.m, 2);
  EXPECT_EQ(S.c[0], TXiPoly::constant(7));
  EXPECT_TRUE(S.c[1].is_zero());
  // i u''' + xi^2 u = 0: u''' = i xi^2 u.
  S = reduce_to_ode(op("xi0^3 + xi1^2"), 3);
  EXPECT_EQ(S.c[0], TXiPoly::constant(GaussianRational(0, 9)));
  // -i u' - t xi u = 0: u' = i t xi u.
  S = reduce_to_ode(ModelOperator::first_order(txi(1, 0, 1, 1)), 2);
  EXPECT_EQ(S.c[0], txi(0, 2, 1, 0));
}

TEST(Growth, SecondOrderMatchesClosedForm) {
  // u = exp(+-sqrt(xi) t); the scaled energy adds at most a power of xi.
  const auto M = op("xi0^2 + xi1");
  for (double xi : {100.0, 1000.0, 10000.0}) {
    const auto g = growth_at(M, xi);
    ASSERT_TRUE(g.ok) << g.note;
    EXPECT_NEAR(g.log_G, std::sqrt(xi), 0.5 * std::log(xi) + 1) << xi;
  }
}

TEST(Growth, StrictlyHyperbolicStaysBounded) {
  const auto M = op("xi0^2 - xi1^2");
  for (double xi : {10.0, 1000.0}) EXPECT_LT(growth_at(M, xi).log_G, 1.0);
}

TEST(Growth, SweepIsDeterministic) {
  const auto M = op("xi0^3 + xi1^2");
  const auto grid = frequency_grid(1, 3, 6);
  EXPECT_EQ(sweep_csv(sweep(M, grid)), sweep_csv(sweep(M, grid)));
  EXPECT_NEAR(grid.front(), 10, 1e-12);
  EXPECT_NEAR(grid.back(), 1000, 1e-9);
}

TEST(FitExponent, RecoversStretchedExponential) {
  const auto xi = frequency_grid(1, 4.5, 15);
  std::vector<double> lg;
  for (double x : xi) lg.push_back(3 * std::sqrt(x));
  const auto f = fit_exponent(xi, lg);
  EXPECT_FALSE(f.polynomial_growth);
  EXPECT_NEAR(f.kappa, 0.5, 1e-3);
  EXPECT_NEAR(f.C, 3, 1e-2);
}

TEST(FitExponent, InverseProblemAcrossExponents) {
  gen::Gen g(62);
  const auto xi = frequency_grid(1, 4.5, 15);
  for (int it = 0; it < 50; ++it) {
    const double k = g.real(0.2, 0.9), C = g.real(1, 5);
    std::vector<double> lg;
    for (double x : xi) lg.push_back(C * std::pow(x, k) * (1 + g.real(-1e-3, 1e-3)));
    const auto f = fit_exponent(xi, lg);
    EXPECT_NEAR(f.kappa, k, 5e-3) << C;
    EXPECT_LE(std::abs(f.kappa - k), f.band + 5e-3);
  }
}

TEST(FitExponent, FlagsPolynomialGrowth) {
  const auto xi = frequency_grid(1, 4.5, 15);
  std::vector<double> lg;
  for (double x : xi) lg.push_back(2 * std::log(x));
  const auto f = fit_exponent(xi, lg);
  EXPECT_TRUE(f.polynomial_growth);
  EXPECT_EQ(f.kappa, 0);
  EXPECT_NEAR(f.poly_degree, 2, 1e-6);
  std::vector<double> flat(xi.size(), 0.1);
  EXPECT_TRUE(fit_exponent(xi, flat).polynomial_growth);
}

TEST(FitExponent, TooFewGrowingPoints) {
  const auto xi = frequency_grid(1, 4.5, 15);
  std::vector<double> lg(xi.size(), 0.0);
  for (std::size_t i = 10; i < xi.size(); ++i) lg[i] = std::sqrt(xi[i]);
  EXPECT_THROW(fit_exponent(xi, lg), PreconditionError);
}

TEST(ReduceToOde, FirstOrderFreeModel) {
  const auto M = ModelOperator::first_order(TXiPoly());
  const auto S = reduce_to_ode(M, 5);
  EXPECT_EQ(S.m, 1);
  EXPECT_TRUE(S.c[0].is_zero());
  EXPECT_NEAR(growth_at(M, 1000).log_G, 0, 1e-12);
}

TEST(ReduceToOde, ProductModelExpansion) {
  // (D - a1 t xi)(D - a2 t xi) = D^2 - (a1 + a2) t xi D + i a2 xi + a1 a2 t^2 xi^2
  const auto M = product_model({2, -1});
  EXPECT_EQ(M.a[1], txi(-1, 0, 1, 1));
  EXPECT_EQ(M.a[0], txi(0, -1, 0, 1) + txi(-2, 0, 2, 2));
  // u'' = -sum_j i^{2-j} a_j u^(j): c1 = -i a1, c0 = a0.
  const auto S = reduce_to_ode(M, 3);
  EXPECT_EQ(S.c[1], txi(0, 3, 1, 0));
  EXPECT_EQ(S.c[0], txi(0, -3, 0, 0) + txi(-18, 0, 2, 0));
}
