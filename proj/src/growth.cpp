#include "hypercone/growth.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <limits>
#include <sstream>
#include <thread>

#include "dopri_tableau.hpp"

namespace hypercone {

std::string GaussianRational::to_string() const {
  if (im == 0) return format_rational(re);
  if (re == 0) return format_rational(im) + "i";
  return "(" + format_rational(re) + (im < 0 ? " - " : " + ") + format_rational(abs(im)) + "i)";
}

// ---------------------------------------------------------------------------
// TXiPoly

TXiPoly TXiPoly::constant(const GaussianRational& c) { return monomial(c, 0, 0); }

TXiPoly TXiPoly::monomial(const GaussianRational& c, int t_pow, int xi_pow) {
  if (t_pow < 0 || xi_pow < 0) throw PreconditionError("TXiPoly: negative exponent");
  TXiPoly p;
  p.add({t_pow, xi_pow}, c);
  return p;
}

void TXiPoly::add(const Key& k, const GaussianRational& c) {
  if (c.is_zero()) return;
  auto it = terms_.find(k);
  if (it == terms_.end()) {
    terms_.emplace(k, c);
    return;
  }
  it->second = it->second + c;
  if (it->second.is_zero()) terms_.erase(it);
}

int TXiPoly::xi_degree() const {
  int d = -1;
  for (const auto& [k, c] : terms_) d = std::max(d, k.second);
  return d;
}

int TXiPoly::t_degree() const {
  int d = -1;
  for (const auto& [k, c] : terms_) d = std::max(d, k.first);
  return d;
}

TXiPoly& TXiPoly::operator+=(const TXiPoly& o) {
  for (const auto& [k, c] : o.terms_) add(k, c);
  return *this;
}

TXiPoly TXiPoly::operator*(const TXiPoly& o) const {
  TXiPoly r;
  for (const auto& [k1, c1] : terms_)
    for (const auto& [k2, c2] : o.terms_) r.add({k1.first + k2.first, k1.second + k2.second}, c1 * c2);
  return r;
}

TXiPoly TXiPoly::operator*(const GaussianRational& c) const {
  TXiPoly r;
  for (const auto& [k, v] : terms_) r.add(k, v * c);
  return r;
}

TXiPoly TXiPoly::dt() const {
  TXiPoly r;
  for (const auto& [k, c] : terms_)
    if (k.first > 0) r.add({k.first - 1, k.second}, c * GaussianRational(k.first));
  return r;
}

namespace {

// Rational -> extended float without going through a single double rounding.
template <class T>
T to_real(const Rational& q) {
  const double hi = q.get_d();
  if constexpr (std::is_same_v<T, double>) {
    return hi;
  } else {
    if (!std::isfinite(hi)) return static_cast<T>(hi);
    const Rational rest = q - Rational(hi);
    return static_cast<T>(hi) + static_cast<T>(rest.get_d());
  }
}

template <class T>
std::complex<T> to_complex(const GaussianRational& g) {
  return {to_real<T>(g.re), to_real<T>(g.im)};
}

}  // namespace

template <class T>
std::complex<T> TXiPoly::eval(T t, T xi) const {
  std::complex<T> s = 0;
  for (const auto& [k, c] : terms_) s += to_complex<T>(c) * std::pow(t, k.first) * std::pow(xi, k.second);
  return s;
}

template std::complex<double> TXiPoly::eval<double>(double, double) const;
template std::complex<long double> TXiPoly::eval<long double>(long double, long double) const;

std::string TXiPoly::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [k, c] : terms_) {
    if (!first) os << " + ";
    first = false;
    os << c.to_string();
    if (k.first > 0) os << "*t" << (k.first > 1 ? "^" + std::to_string(k.first) : "");
    if (k.second > 0) os << "*xi" << (k.second > 1 ? "^" + std::to_string(k.second) : "");
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// ModelOperator

ModelOperator ModelOperator::identity() {
  ModelOperator M;
  M.a = {TXiPoly::constant(1)};
  M.description = "1";
  return M;
}

ModelOperator ModelOperator::first_order(const TXiPoly& c) {
  ModelOperator M;
  M.a = {c * GaussianRational(-1), TXiPoly::constant(1)};
  M.description = "(D_t - (" + c.to_string() + "))";
  return M;
}

namespace {

Rational binom(int n, int k) {
  mpz_class r;
  mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
  return Rational(r);
}

// (-i)^l
GaussianRational minus_i_pow(int l) {
  switch (((l % 4) + 4) % 4) {
    case 0: return {1, 0};
    case 1: return {0, -1};
    case 2: return {-1, 0};
    default: return {0, 1};
  }
}

GaussianRational i_pow(int l) { return minus_i_pow(-l); }

void trim(std::vector<TXiPoly>& a) {
  while (a.size() > 1 && a.back().is_zero()) a.pop_back();
}

}  // namespace

ModelOperator ModelOperator::compose(const ModelOperator& o) const {
  // (a D^j)(b D^k) = a sum_l C(j,l) (D^l b) D^(j-l+k), with D^l b = (-i)^l d^l b / dt^l.
  ModelOperator r;
  r.a.assign(a.size() + o.a.size() - 1, TXiPoly{});
  for (std::size_t j = 0; j < a.size(); ++j) {
    if (a[j].is_zero()) continue;
    for (std::size_t k = 0; k < o.a.size(); ++k) {
      TXiPoly db = o.a[k];
      for (std::size_t l = 0; l <= j && !db.is_zero(); ++l) {
        const GaussianRational f = minus_i_pow(static_cast<int>(l)) * GaussianRational(binom(static_cast<int>(j), static_cast<int>(l)));
        r.a[j - l + k] += a[j] * db * f;
        db = db.dt();
      }
    }
  }
  trim(r.a);
  r.description = description + " " + o.description;
  return r;
}

ModelOperator ModelOperator::operator+(const ModelOperator& o) const {
  ModelOperator r;
  r.a.assign(std::max(a.size(), o.a.size()), TXiPoly{});
  for (std::size_t j = 0; j < a.size(); ++j) r.a[j] += a[j];
  for (std::size_t j = 0; j < o.a.size(); ++j) r.a[j] += o.a[j];
  trim(r.a);
  r.description = description + " + " + o.description;
  r.lower_order_bound = std::max(lower_order_bound, o.lower_order_bound);
  return r;
}

bool ModelOperator::monic() const { return !a.empty() && a.back() == TXiPoly::constant(1); }

std::string ModelOperator::to_string() const {
  std::ostringstream os;
  bool first = true;
  for (std::size_t j = a.size(); j-- > 0;) {
    if (a[j].is_zero()) continue;
    if (!first) os << " + ";
    first = false;
    os << "[" << a[j].to_string() << "]";
    if (j > 0) os << "*D" << (j > 1 ? "^" + std::to_string(j) : "");
  }
  return first ? "0" : os.str();
}

ModelOperator product_model(const std::vector<Rational>& alpha) {
  if (alpha.empty()) throw PreconditionError("product_model: need at least one factor");
  ModelOperator M = ModelOperator::identity();
  std::string desc;
  for (const auto& al : alpha) {
    M = M.compose(ModelOperator::first_order(TXiPoly::monomial(GaussianRational(al), 1, 1)));
    desc += "(D_t - " + format_rational(al) + " t xi)";
  }
  M.description = desc;
  return M;
}

ModelOperator with_lower_order(ModelOperator principal, const std::vector<TXiPoly>& q, int order_bound) {
  const int m = principal.order();
  if (!principal.monic()) throw PreconditionError("with_lower_order: principal part is not monic in D_t");
  if (order_bound < 0 || order_bound > m - 1)
    throw PreconditionError("with_lower_order: order bound must lie in [0, m-1]");
  if (static_cast<int>(q.size()) > m) throw PreconditionError("with_lower_order: Q has D_t-order >= m");
  ModelOperator Q;
  Q.a = q;
  if (Q.a.empty()) Q.a = {TXiPoly{}};
  for (std::size_t j = 0; j < q.size(); ++j)
    for (const auto& [k, c] : q[j].terms())
      if (static_cast<int>(j) + k.second > order_bound)
        throw PreconditionError("with_lower_order: term t^" + std::to_string(k.first) + " xi^" +
                                std::to_string(k.second) + " D^" + std::to_string(j) + " exceeds the order bound");
  Q.description = "Q";
  const std::string desc = principal.description;
  ModelOperator r = principal + Q;
  r.lower_order_bound = order_bound;
  r.description = desc + " + Q";
  return r;
}

ModelOperator model_from_symbol(const PhasePolynomial& P, bool require_monic) {
  const int n = P.n();
  if (n < 1) throw PreconditionError("model_from_symbol: need n >= 1 (x_0 and a frequency variable xi_1)");
  std::vector<TXiPoly> a;
  for (const auto& [e, c] : P.terms()) {
    for (int j = 1; j <= n; ++j)
      if (e[x_var(n, j)] > 0)
        throw PreconditionError("model_from_symbol: coefficient depends on " + variable_name(n, x_var(n, j)));
    for (int j = 2; j <= n; ++j)
      if (e[xi_var(n, j)] > 0)
        throw PreconditionError("model_from_symbol: only a single frequency variable xi_1 is supported");
    const int d = e[xi_var(n, 0)];
    if (static_cast<int>(a.size()) <= d) a.resize(d + 1);
    a[d] += TXiPoly::monomial(GaussianRational(c), e[x_var(n, 0)], e[xi_var(n, 1)]);
  }
  if (a.empty()) {
    if (require_monic) throw PreconditionError("model_from_symbol: zero symbol");
    a.resize(1);
  }
  ModelOperator M;
  M.a = std::move(a);
  trim(M.a);
  if (require_monic && !M.monic()) throw PreconditionError("model_from_symbol: symbol is not monic in xi_0");
  M.description = P.to_string();
  return M;
}

CompanionSystem reduce_to_ode(const ModelOperator& M, const Rational& xi) {
  if (!M.monic()) throw PreconditionError("reduce_to_ode: operator is not monic in D_t");
  CompanionSystem S;
  S.m = M.order();
  S.c.resize(S.m);
  for (int j = 0; j < S.m; ++j) {
    // sum_j a_j (-i)^j u^(j) = 0 and (-i)^(-1) = i give u^(m) = -sum_j i^(m-j) a_j u^(j).
    const GaussianRational f = -i_pow(S.m - j);
    for (const auto& [k, c] : M.a[j].terms()) {
      Rational xp = 1;
      for (int r = 0; r < k.second; ++r) xp *= xi;
      S.c[j] += TXiPoly::monomial(c * f * GaussianRational(xp), k.first, 0);
    }
  }
  return S;
}

std::string to_string(Precision p) { return p == Precision::extended ? "extended" : "double"; }

// ---------------------------------------------------------------------------
// Per-frequency integration

std::vector<double> frequency_grid(double log10_lo, double log10_hi, std::size_t count) {
  if (count < 2 || !(log10_hi > log10_lo)) throw PreconditionError("frequency_grid: need count >= 2 and lo < hi");
  std::vector<double> g(count);
  for (std::size_t i = 0; i < count; ++i)
    g[i] = std::pow(10.0, log10_lo + (log10_hi - log10_lo) * static_cast<double>(i) / static_cast<double>(count - 1));
  return g;
}

namespace {

// Scaled variables z_j = xi^(m-1-j) u^(j) make E = |z|^2 and keep every coefficient O(xi):
//   z_j' = xi z_{j+1} (j < m-1),  z_{m-1}' = sum_j c_j(t) xi^-(m-1-j) z_j.
// The m columns of Z start at the canonical vectors e_k, so each has E(0) = 1.
template <class R>
struct ScaledSystem {
  using C = std::complex<R>;
  int m = 0;
  R xi = 0;
  std::vector<std::vector<std::pair<int, C>>> coeff;  // per j: (t power, coefficient)

  ScaledSystem(const ModelOperator& M, R xi_) : m(M.order()), xi(xi_), coeff(m) {
    for (int j = 0; j < m; ++j) {
      const GaussianRational f = -i_pow(m - j);
      for (const auto& [k, c] : M.a[j].terms())
        coeff[j].push_back({k.first, to_complex<R>(c * f) * std::pow(xi, static_cast<R>(k.second - (m - 1 - j)))});
    }
  }

  void operator()(R t, const std::vector<C>& Z, std::vector<C>& dZ) const {
    std::vector<C> g(m);
    for (int j = 0; j < m; ++j) {
      C s = 0;
      for (const auto& [tp, c] : coeff[j]) s += c * std::pow(t, static_cast<R>(tp));
      g[j] = s;
    }
    for (int col = 0; col < m; ++col) {
      const C* z = &Z[col * m];
      C* dz = &dZ[col * m];
      for (int j = 0; j + 1 < m; ++j) dz[j] = xi * z[j + 1];
      C s = 0;
      for (int j = 0; j < m; ++j) s += g[j] * z[j];
      dz[m - 1] = s;
    }
  }
};

template <class R>
R max_column_norm(const std::vector<std::complex<R>>& Z, int m) {
  R best = 0;
  for (int col = 0; col < m; ++col) {
    R s = 0;
    for (int j = 0; j < m; ++j) s += std::norm(Z[col * m + j]);
    best = std::max(best, std::sqrt(s));
  }
  return best;
}

template <class R>
GrowthPoint integrate_growth(const ModelOperator& M, double xi_d, const SweepOptions& o, Precision prec) {
  using namespace dopri;
  using C = std::complex<R>;
  const R xi = static_cast<R>(xi_d);
  const ScaledSystem<R> F(M, xi);
  const int m = F.m;
  const std::size_t N = static_cast<std::size_t>(m) * m;

  GrowthPoint gp;
  gp.xi = xi_d;
  gp.precision = prec;
  if (m == 0) return gp;

  std::vector<C> Z(N, C(0)), k1(N), k2(N), k3(N), k4(N), k5(N), k6(N), k7(N), Y(N), Znew(N);
  for (int c = 0; c < m; ++c) Z[c * m + c] = 1;

  const R T = static_cast<R>(o.T);
  const R rtol = static_cast<R>(o.rtol), atol = static_cast<R>(o.atol);
  const R renorm = static_cast<R>(1e100);
  R log_scale = 0;  // Z is the true fundamental matrix times exp(-log_scale)
  R log_G = 0;
  R t = 0;

  F(t, Z, k1);
  R fn = 0;
  for (const auto& v : k1) fn = std::max(fn, std::abs(v));
  R h = std::min<R>(T, static_cast<R>(0.01) / std::max<R>(1, fn));

  auto stage = [&](std::vector<C>& out, std::initializer_list<std::pair<R, const std::vector<C>*>> terms) {
    for (std::size_t i = 0; i < N; ++i) {
      C s = Z[i];
      for (const auto& [w, k] : terms) s += h * w * (*k)[i];
      out[i] = s;
    }
  };

  std::size_t steps = 0;
  while (t < T) {
    if (steps >= o.max_steps) {
      gp.ok = false;
      gp.note = "step limit reached at t = " + std::to_string(static_cast<double>(t));
      break;
    }
    if (t + h > T) h = T - t;
    stage(Y, {{a21, &k1}});
    F(t + c2 * h, Y, k2);
    stage(Y, {{a31, &k1}, {a32, &k2}});
    F(t + c3 * h, Y, k3);
    stage(Y, {{a41, &k1}, {a42, &k2}, {a43, &k3}});
    F(t + c4 * h, Y, k4);
    stage(Y, {{a51, &k1}, {a52, &k2}, {a53, &k3}, {a54, &k4}});
    F(t + c5 * h, Y, k5);
    stage(Y, {{a61, &k1}, {a62, &k2}, {a63, &k3}, {a64, &k4}, {a65, &k5}});
    F(t + h, Y, k6);
    stage(Znew, {{a71, &k1}, {a73, &k3}, {a74, &k4}, {a75, &k5}, {a76, &k6}});
    F(t + h, Znew, k7);

    // Error relative to the whole matrix: the columns share one scale, and decaying
    // components of a growing solution should not force tiny steps.
    R scale = 0;
    for (std::size_t i = 0; i < N; ++i) scale = std::max({scale, std::abs(Z[i]), std::abs(Znew[i])});
    const R sc = atol + rtol * scale;
    R err = 0;
    for (std::size_t i = 0; i < N; ++i) {
      const C e = h * (R(e1) * k1[i] + R(e3) * k3[i] + R(e4) * k4[i] + R(e5) * k5[i] + R(e6) * k6[i] + R(e7) * k7[i]);
      err = std::max(err, std::abs(e) / sc);
    }
    if (!std::isfinite(static_cast<double>(err))) {
      h *= static_cast<R>(0.1);
      if (h < std::numeric_limits<R>::epsilon() * std::max<R>(1, t)) {
        gp.ok = false;
        gp.note = "non-finite step at t = " + std::to_string(static_cast<double>(t));
        break;
      }
      continue;
    }
    const R fac = std::clamp<R>(static_cast<R>(0.9) * std::pow(std::max<R>(err, static_cast<R>(1e-10)), static_cast<R>(-0.2)),
                                static_cast<R>(0.2), static_cast<R>(5));
    if (err <= 1) {
      t += h;
      Z.swap(Znew);
      k1.swap(k7);
      ++steps;
      R nrm = max_column_norm(Z, m);
      if (nrm > renorm) {
        for (auto& v : Z) v /= renorm;
        for (auto& v : k1) v /= renorm;
        log_scale += std::log(renorm);
        nrm /= renorm;
      }
      log_G = std::max(log_G, log_scale + std::log(nrm));
    }
    h *= fac;
  }
  gp.steps = steps;
  gp.log_G = static_cast<double>(log_G);
  gp.log_E_final = static_cast<double>(2 * (log_scale + std::log(max_column_norm(Z, m))));
  return gp;
}

}  // namespace

GrowthPoint growth_at(const ModelOperator& M, double xi, const SweepOptions& opts, Precision precision) {
  if (!M.monic()) throw PreconditionError("growth_at: operator is not monic in D_t");
  if (!(opts.T > 0)) throw PreconditionError("growth_at: T must be positive");
  if (!(xi > 0)) throw PreconditionError("growth_at: frequency must be positive");
  return precision == Precision::extended ? integrate_growth<long double>(M, xi, opts, precision)
                                          : integrate_growth<double>(M, xi, opts, precision);
}

GrowthSweep sweep(const ModelOperator& M, const std::vector<double>& grid, const SweepOptions& opts) {
  if (!(opts.T > 0)) throw PreconditionError("sweep: T must be positive");
  if (grid.empty()) throw PreconditionError("sweep: empty frequency grid");
  for (std::size_t i = 0; i < grid.size(); ++i)
    if (!(grid[i] > 0) || (i > 0 && !(grid[i] > grid[i - 1])))
      throw PreconditionError("sweep: grid must be positive and strictly increasing");
  if (!M.monic()) throw PreconditionError("sweep: operator is not monic in D_t");

  GrowthSweep S;
  S.T = opts.T;
  S.points.resize(grid.size());
  const double log_threshold = std::log(opts.extended_threshold);

  // Independent frequencies; results land at their grid index so the output is ordered by xi.
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < grid.size();) {
      GrowthPoint gp;
      try {
        // The double-precision pass is the growth prediction; beyond the threshold its
        // exponent fit would degrade, so the point is recomputed in extended precision.
        gp = growth_at(M, grid[i], opts, Precision::double_precision);
        if (gp.ok && gp.log_G > log_threshold) gp = growth_at(M, grid[i], opts, Precision::extended);
      } catch (const std::exception& e) {
        gp.xi = grid[i];
        gp.ok = false;
        gp.note = e.what();
      }
      S.points[i] = gp;
    }
  };
  const unsigned hw = std::max(1u, std::min<unsigned>(std::thread::hardware_concurrency(), 8u));
  std::vector<std::thread> pool;
  for (unsigned w = 1; w < std::min<std::size_t>(hw, grid.size()); ++w) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  for (const auto& p : S.points)
    if (!p.ok) ++S.gaps;
  return S;
}

// ---------------------------------------------------------------------------
// Exponent fitting

namespace {

struct LineFit {
  double intercept = 0, slope = 0, rms = 0, slope_se = 0;
};

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  LineFit f;
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  f.slope = sxx > 0 ? sxy / sxx : 0;
  f.intercept = my - f.slope * mx;
  double ss = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = y[i] - f.intercept - f.slope * x[i];
    ss += r * r;
  }
  f.rms = std::sqrt(ss / static_cast<double>(n));
  if (n > 2 && sxx > 0) f.slope_se = std::sqrt(ss / static_cast<double>(n - 2) / sxx);
  return f;
}

}  // namespace

ExponentFit fit_exponent(const std::vector<double>& xi, const std::vector<double>& log_G) {
  if (xi.size() != log_G.size()) throw DimensionError("fit_exponent: size mismatch");
  const double log2 = std::log(2.0);
  std::vector<double> x, y, lg;
  for (std::size_t i = 0; i < xi.size(); ++i) {
    if (!(xi[i] > 0) || !std::isfinite(log_G[i])) continue;
    if (log_G[i] > log2) {
      x.push_back(std::log(xi[i]));
      lg.push_back(log_G[i]);
      y.push_back(std::log(log_G[i]));
    }
  }
  ExponentFit fit;
  if (x.empty()) {
    fit.polynomial_growth = true;
    fit.note = "every G <= 2: polynomial growth";
    return fit;
  }
  if (x.size() < 8)
    throw PreconditionError("fit_exponent: only " + std::to_string(x.size()) +
                            " frequencies have G > 2; at least 8 are needed");

  const LineFit e = fit_line(x, y);
  fit.slope = e.slope;
  fit.kappa = e.slope;
  fit.C = std::exp(e.intercept);
  fit.residual = e.rms;
  fit.band = 2 * e.slope_se;
  fit.points_used = x.size();

  for (std::size_t skip = 0; skip < x.size(); ++skip) {
    std::vector<double> xs, ys;
    for (std::size_t i = 0; i < x.size(); ++i)
      if (i != skip) {
        xs.push_back(x[i]);
        ys.push_back(y[i]);
      }
    fit.loo_max_dev = std::max(fit.loo_max_dev, std::abs(fit_line(xs, ys).slope - e.slope));
  }

  // Competing model log G = a + k log xi, scored in the same log log G space.
  const LineFit p = fit_line(x, lg);
  fit.poly_degree = p.slope;
  double ss = 0;
  bool valid = true;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double pred = p.intercept + p.slope * x[i];
    if (!(pred > 0)) {
      valid = false;
      break;
    }
    const double r = y[i] - std::log(pred);
    ss += r * r;
  }
  const double poly_rms = valid ? std::sqrt(ss / static_cast<double>(x.size())) : std::numeric_limits<double>::infinity();
  if (poly_rms <= e.rms) {
    fit.polynomial_growth = true;
    fit.kappa = 0;
    fit.note = "log G is fit at least as well by a + k log xi: polynomial growth";
  }
  return fit;
}

ExponentFit fit_exponent(const GrowthSweep& S) {
  std::vector<double> xi, lg;
  for (const auto& p : S.points)
    if (p.ok) {
      xi.push_back(p.xi);
      lg.push_back(p.log_G);
    }
  ExponentFit f = fit_exponent(xi, lg);
  if (S.gaps > 0) f.note += (f.note.empty() ? "" : "; ") + std::to_string(S.gaps) + " frequencies failed and were skipped";
  return f;
}

GrowthReport growth_report(const ModelOperator& M, const std::vector<double>& grid, const SweepOptions& opts) {
  const auto t0 = std::chrono::steady_clock::now();
  GrowthReport r;
  r.sweep = sweep(M, grid, opts);
  SweepOptions half = opts;
  half.T = opts.T / 2;
  r.half = sweep(M, grid, half);
  r.fit = fit_exponent(r.sweep);
  r.fit_half = fit_exponent(r.half);
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

std::string sweep_csv(const GrowthSweep& S) {
  std::ostringstream os;
  os.precision(17);
  os << "xi,logG,logE_final,precision,steps,ok\n";
  for (const auto& p : S.points)
    os << p.xi << "," << p.log_G << "," << p.log_E_final << "," << to_string(p.precision) << "," << p.steps << ","
       << (p.ok ? 1 : 0) << "\n";
  return os.str();
}

std::string sweep_svg(const GrowthSweep& S, const std::string& title) {
  std::vector<std::pair<double, double>> pts;
  for (const auto& p : S.points)
    if (p.ok && p.log_G > std::log(2.0)) pts.push_back({std::log10(p.xi), std::log10(p.log_G)});
  double umin = 0, umax = 1, vmin = 0, vmax = 1;
  if (!pts.empty()) {
    umin = vmin = std::numeric_limits<double>::infinity();
    umax = vmax = -umin;
    for (const auto& [u, v] : pts) {
      umin = std::min(umin, u);
      umax = std::max(umax, u);
      vmin = std::min(vmin, v);
      vmax = std::max(vmax, v);
    }
    if (!(umax > umin)) umax = umin + 1;
    if (!(vmax > vmin)) vmax = vmin + 1;
  }
  const double W = 480, H = 360, pad = 40;
  const auto X = [&](double u) { return pad + (u - umin) / (umax - umin) * (W - 2 * pad); };
  const auto Y = [&](double v) { return H - pad - (v - vmin) / (vmax - vmin) * (H - 2 * pad); };
  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\">\n"
     << "<text x=\"" << pad << "\" y=\"20\" font-size=\"12\">" << title << " (log10 log G vs log10 xi)</text>\n"
     << "<rect x=\"" << pad << "\" y=\"" << pad << "\" width=\"" << W - 2 * pad << "\" height=\"" << H - 2 * pad
     << "\" fill=\"none\" stroke=\"#999\"/>\n";
  for (const auto& [u, v] : pts) os << "<circle cx=\"" << X(u) << "\" cy=\"" << Y(v) << "\" r=\"3\" fill=\"#d62728\"/>\n";
  os << "</svg>\n";
  return os.str();
}

}  // namespace hypercone
