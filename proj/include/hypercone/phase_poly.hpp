#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "hypercone/errors.hpp"

namespace hypercone {

using Rational = mpq_class;
using RationalVector = std::vector<Rational>;

/// Point (x, xi) of phase space R^{n+1} x R^{n+1}.
struct PhasePoint {
  std::vector<double> x;
  std::vector<double> xi;

  PhasePoint() = default;
  PhasePoint(std::vector<double> x_, std::vector<double> xi_);

  int n() const { return static_cast<int>(x.size()) - 1; }
  std::vector<double> flat() const;
  static PhasePoint from_flat(std::span<const double> v);
  /// Every double is a dyadic rational, so this conversion is exact.
  RationalVector exact() const;
  double xi_norm() const;
};

/// Tangent displacement (dx, dxi) at a phase-space point.
struct PhaseVector {
  std::vector<double> dx;
  std::vector<double> dxi;

  PhaseVector() = default;
  PhaseVector(std::vector<double> dx_, std::vector<double> dxi_);

  int n() const { return static_cast<int>(dx.size()) - 1; }
  std::vector<double> flat() const;
  static PhaseVector from_flat(std::span<const double> v);
  static PhaseVector from_exact(std::span<const Rational> v);
  RationalVector exact() const;
  double norm() const;
};

// Variables are indexed x_0..x_n as 0..n and xi_0..xi_n as n+1..2n+1.
inline std::size_t x_var(int n, int j) { (void)n; return static_cast<std::size_t>(j); }
inline std::size_t xi_var(int n, int j) { return static_cast<std::size_t>(n + 1 + j); }
std::string variable_name(int n, std::size_t var);

using Exponent = std::vector<std::uint16_t>;

/// Graded-lex: total degree first, then lexicographic with x_0 most significant.
struct GrlexLess {
  bool operator()(const Exponent& a, const Exponent& b) const;
};

/// Sparse polynomial in the 2(n+1) phase-space variables with exact rational
/// coefficients. Zero coefficients are never stored.
class PhasePolynomial {
 public:
  using TermMap = std::map<Exponent, Rational, GrlexLess>;

  PhasePolynomial() = default;
  explicit PhasePolynomial(int n);

  static PhasePolynomial constant(int n, const Rational& c);
  static PhasePolynomial variable(int n, std::size_t var);
  static PhasePolynomial x(int n, int j) { return variable(n, x_var(n, j)); }
  static PhasePolynomial xi(int n, int j) { return variable(n, xi_var(n, j)); }

  int n() const { return n_; }
  std::size_t num_vars() const { return static_cast<std::size_t>(2 * (n_ + 1)); }
  const TermMap& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  /// -1 for the zero polynomial.
  int total_degree() const;
  int degree_in(std::span<const std::size_t> vars) const;
  Rational coefficient(const Exponent& e) const;

  void add_term(const Exponent& e, const Rational& c);

  PhasePolynomial& operator+=(const PhasePolynomial& o);
  PhasePolynomial& operator-=(const PhasePolynomial& o);
  PhasePolynomial& operator*=(const PhasePolynomial& o);
  PhasePolynomial& operator*=(const Rational& c);

  friend PhasePolynomial operator+(PhasePolynomial a, const PhasePolynomial& b) { return a += b; }
  friend PhasePolynomial operator-(PhasePolynomial a, const PhasePolynomial& b) { return a -= b; }
  friend PhasePolynomial operator*(PhasePolynomial a, const PhasePolynomial& b) { return a *= b; }
  friend PhasePolynomial operator*(PhasePolynomial a, const Rational& c) { return a *= c; }
  friend PhasePolynomial operator*(const Rational& c, PhasePolynomial a) { return a *= c; }
  PhasePolynomial operator-() const;
  bool operator==(const PhasePolynomial& o) const { return n_ == o.n_ && terms_ == o.terms_; }

  PhasePolynomial pow(unsigned k) const;

  /// Substitutes var -> (shift + var) for every variable; used by Taylor expansion.
  PhasePolynomial shifted(std::span<const Rational> shift) const;

  Rational evaluate_exact(std::span<const Rational> point) const;
  double evaluate_flat(std::span<const double> point) const;

  std::string to_string() const;

 private:
  void check_same_dim(const PhasePolynomial& o) const;

  int n_ = 0;
  TermMap terms_;
};

double evaluate(const PhasePolynomial& p, const PhasePoint& point);
Rational evaluate_exact(const PhasePolynomial& p, const PhasePoint& point);
PhasePolynomial partial(const PhasePolynomial& p, std::size_t var);
/// Homogeneous degree-d Taylor component of p at rho, as a polynomial in the
/// displacement X (same variable layout as p).
PhasePolynomial taylor_at(const PhasePolynomial& p, const PhasePoint& rho, int degree);
PhasePolynomial taylor_at(const PhasePolynomial& p, std::span<const Rational> rho, int degree);
/// Keep only terms of total degree d.
PhasePolynomial homogeneous_part(const PhasePolynomial& p, int degree);
bool is_homogeneous(const PhasePolynomial& p, std::span<const std::size_t> vars, int degree);

std::vector<std::size_t> x_variables(int n);
std::vector<std::size_t> xi_variables(int n);
std::vector<std::size_t> all_variables(int n);

/// Exact gradient at a rational point, flat (x..., xi...) layout.
RationalVector gradient_exact(const PhasePolynomial& p, std::span<const Rational> point);

/// Parses "num/den", "num", or a decimal literal such as "-0.25" into an exact rational.
Rational parse_rational(const std::string& text);
/// Always "num/den".
std::string format_rational(const Rational& q);

}  // namespace hypercone
