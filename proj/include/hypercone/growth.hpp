#pragma once

#include <complex>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "hypercone/phase_poly.hpp"

namespace hypercone {

struct GaussianRational {
  Rational re, im;

  GaussianRational() = default;
  GaussianRational(Rational r, Rational i = 0) : re(std::move(r)), im(std::move(i)) {}
  GaussianRational(int r) : re(r), im(0) {}
  static GaussianRational i() { return {0, 1}; }

  bool is_zero() const { return re == 0 && im == 0; }
  GaussianRational operator+(const GaussianRational& o) const { return {re + o.re, im + o.im}; }
  GaussianRational operator-() const { return {-re, -im}; }
  GaussianRational operator*(const GaussianRational& o) const {
    return {re * o.re - im * o.im, re * o.im + im * o.re};
  }
  bool operator==(const GaussianRational& o) const { return re == o.re && im == o.im; }
  std::string to_string() const;
};

/// Polynomial in (t, xi) with Gaussian-rational coefficients; keys are (t power, xi power).
class TXiPoly {
 public:
  using Key = std::pair<int, int>;

  TXiPoly() = default;
  static TXiPoly constant(const GaussianRational& c);
  static TXiPoly monomial(const GaussianRational& c, int t_pow, int xi_pow);

  const std::map<Key, GaussianRational>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  int xi_degree() const;
  int t_degree() const;

  TXiPoly& operator+=(const TXiPoly& o);
  TXiPoly operator+(const TXiPoly& o) const { TXiPoly r = *this; return r += o; }
  TXiPoly operator*(const TXiPoly& o) const;
  TXiPoly operator*(const GaussianRational& c) const;
  /// d/dt
  TXiPoly dt() const;
  bool operator==(const TXiPoly& o) const { return terms_ == o.terms_; }

  template <class T>
  std::complex<T> eval(T t, T xi) const;
  std::string to_string() const;

 private:
  void add(const Key& k, const GaussianRational& c);
  std::map<Key, GaussianRational> terms_;
};

/// Differential operator sum_j a_j(t, xi) D_t^j in normal order (coefficients to the left),
/// with D = -i d/dt and D_1 already replaced by the frequency xi.
struct ModelOperator {
  std::vector<TXiPoly> a;  // a[j] multiplies D_t^j
  std::string description;
  int lower_order_bound = -1;  // order bound enforced on the lower-order part; -1 if none

  int order() const { return static_cast<int>(a.size()) - 1; }

  static ModelOperator identity();
  /// D_t - c(t, xi)
  static ModelOperator first_order(const TXiPoly& c);
  ModelOperator compose(const ModelOperator& o) const;  // (*this) o
  ModelOperator operator+(const ModelOperator& o) const;
  bool monic() const;
  std::string to_string() const;
};

/// prod_j (D_t - alpha_j t xi), composed left to right.
ModelOperator product_model(const std::vector<Rational>& alpha);
/// Adds Q = sum_j q[j] D_t^j. Every term t^a xi^b D_t^j must satisfy j + b <= order_bound,
/// and order_bound <= m - 1.
ModelOperator with_lower_order(ModelOperator principal, const std::vector<TXiPoly>& q, int order_bound);

/// Reads a normal-ordered symbol in (x_0, x_1, xi_0, xi_1): x_0 -> t, xi_0 -> D_t, xi_1 -> xi.
/// Throws PreconditionError if x_1 occurs, or if require_monic and the symbol is not monic in xi_0.
ModelOperator model_from_symbol(const PhasePolynomial& P, bool require_monic = true);

/// u^(m) = sum_j c_j(t) u^(j), c_j = -i^(m-j) a_j(t, xi). Coefficients are exact for rational xi.
struct CompanionSystem {
  int m = 0;
  std::vector<TXiPoly> c;  // c[j] for j < m, with xi already substituted (t-only terms)
};
CompanionSystem reduce_to_ode(const ModelOperator& M, const Rational& xi);

enum class Precision { double_precision, extended };
std::string to_string(Precision p);

struct GrowthPoint {
  double xi = 0;
  double log_G = 0;        // log sup_t sqrt(E(t) / E(0)), worst canonical initial condition
  double log_E_final = 0;  // log E(T) for that initial condition
  Precision precision = Precision::double_precision;
  std::size_t steps = 0;
  bool ok = true;
  std::string note;
};

struct SweepOptions {
  double T = 1.0;
  double rtol = 1e-9;
  double atol = 1e-12;
  std::size_t max_steps = 5000000;
  double extended_threshold = 1e12;  // predicted G above which extended precision is used
};

struct GrowthSweep {
  std::vector<GrowthPoint> points;
  double T = 1.0;
  std::size_t gaps = 0;
};

/// Geometric grid of `count` frequencies from 10^lo to 10^hi.
std::vector<double> frequency_grid(double log10_lo, double log10_hi, std::size_t count);
GrowthPoint growth_at(const ModelOperator& M, double xi, const SweepOptions& opts = {},
                      Precision precision = Precision::double_precision);
GrowthSweep sweep(const ModelOperator& M, const std::vector<double>& grid, const SweepOptions& opts = {});

struct ExponentFit {
  double kappa = 0;      // 0 when polynomial_growth is set
  double slope = 0;      // raw log log G vs log xi slope
  double C = 0;          // log G ~ C xi^kappa
  double residual = 0;   // rms of log log G residuals
  double band = 0;       // two standard errors of the slope
  double loo_max_dev = 0;
  std::size_t points_used = 0;
  bool polynomial_growth = false;
  double poly_degree = 0;  // k in log G ~ a + k log xi
  std::string note;
};

/// Least-squares slope of log log G against log xi over points with G > 2. Sets the
/// polynomial-growth flag when every G <= 2 or when log G ~ a + k log xi fits at least as well.
/// Throws PreconditionError when fewer than 8 (but more than zero) points have G > 2.
ExponentFit fit_exponent(const std::vector<double>& xi, const std::vector<double>& log_G);
ExponentFit fit_exponent(const GrowthSweep& S);

/// Sweep at T and T/2 with a fit for each; the exponent should not depend on T.
struct GrowthReport {
  GrowthSweep sweep, half;
  ExponentFit fit, fit_half;
  double seconds = 0;
};
GrowthReport growth_report(const ModelOperator& M, const std::vector<double>& grid, const SweepOptions& opts = {});

std::string sweep_csv(const GrowthSweep& S);
std::string sweep_svg(const GrowthSweep& S, const std::string& title);

}  // namespace hypercone
