#include <gtest/gtest.h>

#include "generators.hpp"
#include "hypercone/report.hpp"

using namespace hypercone;

TEST(PhasePolynomial, RingIdentities) {
  gen::Gen g(11);
  for (int it = 0; it < 200; ++it) {
    const int n = g.integer(0, 2);
    auto p = g.polynomial(n, 3, 4), q = g.polynomial(n, 3, 4), r = g.polynomial(n, 2, 3);
    EXPECT_EQ((p + q) * r, p * r + q * r);
    EXPECT_EQ(p * q, q * p);
    EXPECT_TRUE((p - p).is_zero());
    EXPECT_EQ(p.pow(2), p * p);
  }
}

TEST(PhasePolynomial, LeibnizRule) {
  gen::Gen g(12);
  for (int it = 0; it < 1000; ++it) {
    const int n = g.integer(0, 2);
    auto p = g.polynomial(n, 3, 4), q = g.polynomial(n, 3, 4);
    const auto v = static_cast<std::size_t>(g.integer(0, 2 * n + 1));
    ASSERT_EQ(partial(p * q, v), partial(p, v) * q + p * partial(q, v));
  }
}

TEST(PhasePolynomial, TaylorExpansionIsExact) {
  gen::Gen g(13);
  for (int it = 0; it < 100; ++it) {
    auto p = g.polynomial(1, 4, 5);
    const auto rho = g.rational_vector(4);
    const auto X = g.rational_vector(4);
    RationalVector sum(4);
    for (std::size_t i = 0; i < 4; ++i) sum[i] = rho[i] + X[i];
    PhasePolynomial series(1);
    for (int d = 0; d <= p.total_degree(); ++d) series += taylor_at(p, rho, d);
    EXPECT_EQ(series.evaluate_exact(X), p.evaluate_exact(sum));
    EXPECT_EQ(series, p.shifted(rho));
  }
}

TEST(PhasePolynomial, HomogeneousParts) {
  const int n = 1;
  auto p = PhasePolynomial::xi(n, 0).pow(2) + PhasePolynomial::x(n, 0) * PhasePolynomial::xi(n, 1) +
           PhasePolynomial::constant(n, 3);
  EXPECT_EQ(homogeneous_part(p, 0), PhasePolynomial::constant(n, 3));
  EXPECT_EQ(homogeneous_part(p, 2).total_degree(), 2);
  EXPECT_TRUE(is_homogeneous(homogeneous_part(p, 2), all_variables(n), 2));
}

TEST(Rationals, ParseAndFormat) {
  EXPECT_EQ(parse_rational("3/6"), Rational(1, 2));
  EXPECT_EQ(parse_rational("-0.25"), Rational(-1, 4));
  EXPECT_EQ(parse_rational("1e-3"), Rational(1, 1000));
  EXPECT_EQ(format_rational(Rational(-3, 4)), "-3/4");
  EXPECT_EQ(format_rational(Rational(2)), "2");
  EXPECT_ANY_THROW(parse_rational("1/0"));
  EXPECT_ANY_THROW(parse_rational("abc"));
}

TEST(Expressions, ExpandsProductsOfFactors) {
  const int n = 2;
  auto x0 = PhasePolynomial::x(n, 0), x1 = PhasePolynomial::x(n, 1);
  auto xi0 = PhasePolynomial::xi(n, 0), xi1 = PhasePolynomial::xi(n, 1), xi2 = PhasePolynomial::xi(n, 2);
  auto d = x0 - x1;
  auto expect = xi0 * xi0 - Rational(1, 2) * (d * d * xi2 * xi2 + xi1 * xi1);
  EXPECT_EQ(parse_expression("xi0^2 - 1/2*((x0 - x1)^2*xi2^2 + xi1^2)", n), expect);
  EXPECT_EQ(parse_expression("-(xi0)/2 + 0.5*xi0", n), PhasePolynomial(n));
}

TEST(Expressions, RoundTripsThroughToString) {
  gen::Gen g(14);
  for (int it = 0; it < 200; ++it) {
    auto p = g.polynomial(2, 4, 5);
    EXPECT_EQ(parse_expression(p.to_string(), 2), p) << p.to_string();
  }
}

TEST(Expressions, Errors) {
  EXPECT_THROW(parse_expression("xi0 + 1/0", 1), RequestError);
  EXPECT_THROW(parse_expression("xi0 / x0", 1), RequestError);
  EXPECT_THROW(parse_expression("xi2", 1), RequestError);
  EXPECT_THROW(parse_expression("xi0^x0", 1), RequestError);
  EXPECT_THROW(parse_expression("(xi0", 1), RequestError);
  try {
    parse_expression("xi0 + y1", 1);
    FAIL();
  } catch (const RequestError& e) {
    EXPECT_NE(std::string(e.what()).find("column 7"), std::string::npos) << e.what();
  }
}

TEST(Rationals, LeadingZerosAreDecimal) {
  EXPECT_EQ(parse_rational("010"), Rational(10));
  EXPECT_EQ(parse_rational("08/09"), Rational(8, 9));
  EXPECT_EQ(parse_rational("0.075"), Rational(3, 40));
}

TEST(PhasePolynomial, DocumentedExamples) {
  const int n = 2;
  auto p = parse_expression("xi0^2 - x0^2*xi1^2", n);
  EXPECT_EQ(evaluate(p, PhasePoint({0, 0, 0}, {1, 1, 0})), 1);
  EXPECT_EQ(evaluate(p, PhasePoint({2, 0, 0}, {1, 1, 0})), -3);
  EXPECT_EQ(evaluate(PhasePolynomial(n), PhasePoint({2, 0, 0}, {1, 1, 0})), 0);
  EXPECT_EQ(partial(p, x_var(n, 0)), parse_expression("-2*x0*xi1^2", n));
  EXPECT_EQ(partial(p, xi_var(n, 0)), parse_expression("2*xi0", n));
  EXPECT_TRUE(partial(p, x_var(n, 1)).is_zero());
  const PhasePoint rho({0, 0, 0}, {0, 1, 0});
  EXPECT_EQ(taylor_at(p, rho, 2), parse_expression("xi0^2 - x0^2", n));
  EXPECT_TRUE(taylor_at(p, rho, 5).is_zero());
  const PhasePoint off({1, 0, 0}, {0, 1, 0});
  EXPECT_EQ(taylor_at(p, off, 0), PhasePolynomial::constant(n, -1));
}

TEST(PhasePolynomial, NoZeroTermsStored) {
  gen::Gen g(15);
  for (int it = 0; it < 200; ++it) {
    auto p = g.polynomial(1, 3, 5);
    auto q = p * g.polynomial(1, 2, 3) - p;
    for (const auto* r : {&p, &q})
      for (const auto& [e, c] : r->terms()) {
        EXPECT_NE(c, 0);
        EXPECT_EQ(e.size(), 4u);
      }
  }
}
