#pragma once

#include <complex>
#include <optional>
#include <span>
#include <vector>

#include "hypercone/phase_poly.hpp"

namespace hypercone {

/// Dense univariate polynomial, coefficients from the constant term upward.
template <class T>
struct Univariate {
  std::vector<T> c;

  int degree() const {
    for (int i = static_cast<int>(c.size()) - 1; i >= 0; --i)
      if (c[static_cast<std::size_t>(i)] != T(0)) return i;
    return -1;
  }
  void trim() {
    while (!c.empty() && c.back() == T(0)) c.pop_back();
  }
};

using RationalUnivariate = Univariate<Rational>;
using RealUnivariate = Univariate<double>;

/// t -> p(X + t N), computed in the scalar type of the inputs.
RationalUnivariate restrict_to_line(const PhasePolynomial& p, std::span<const Rational> base,
                                    std::span<const Rational> dir);
RealUnivariate restrict_to_line(const PhasePolynomial& p, std::span<const double> base,
                                std::span<const double> dir);

Rational eval(const RationalUnivariate& f, const Rational& t);
double eval(const RealUnivariate& f, double t);
RationalUnivariate derivative(const RationalUnivariate& f);
RationalUnivariate gcd(RationalUnivariate a, RationalUnivariate b);
/// f / gcd(f, f'), monic.
RationalUnivariate squarefree_part(const RationalUnivariate& f);

/// Sturm chain of a squarefree polynomial.
class SturmSequence {
 public:
  explicit SturmSequence(const RationalUnivariate& squarefree);
  /// Number of distinct real roots in the half-open interval (a, b].
  int count_in(const Rational& a, const Rational& b) const;
  int count_real() const;
  int count_above(const Rational& a) const;  // roots in (a, +inf)
  int count_below(const Rational& b) const;  // roots in (-inf, b]

 private:
  int variations_at(const Rational& t) const;
  int variations_at_infinity(int sign) const;
  std::vector<RationalUnivariate> chain_;
};

struct RealRootReport {
  int degree = 0;
  int distinct_roots = 0;       // degree of the squarefree part
  int distinct_real_roots = 0;  // by Sturm count
  bool all_real() const { return distinct_roots == distinct_real_roots; }
  bool squarefree() const { return distinct_roots == degree; }
};

/// Exact real-rootedness decision for a rational univariate polynomial.
RealRootReport real_root_report(const RationalUnivariate& f);

/// Complex roots via the companion matrix, polished by Newton steps on f.
std::vector<std::complex<double>> complex_roots(const RealUnivariate& f);
/// Real parts sorted ascending when every imaginary part is below tol * (1 + |root|);
/// nullopt otherwise.
std::optional<std::vector<double>> real_roots_if_real(const RealUnivariate& f, double tol);

}  // namespace hypercone
