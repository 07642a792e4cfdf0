#include "hypercone/weights.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>

#include "hypercone/sampling.hpp"

namespace hypercone {

WeightConfig::WeightConfig(int m_, Rational eps_star_, double gamma_, std::vector<double> alpha_, CharManifold sigma_)
    : m(m_), eps_star(std::move(eps_star_)), gamma(gamma_), alpha(std::move(alpha_)), sigma(std::move(sigma_)) {
  if (m < 1) throw PreconditionError("WeightConfig: m must be >= 1");
  if (!(eps_star > 0 && eps_star < 1)) throw PreconditionError("WeightConfig: eps* must lie in (0, 1)");
  if (!(gamma >= 1)) throw PreconditionError("WeightConfig: gamma must be >= 1");
  if (static_cast<int>(alpha.size()) != sigma.k())
    throw PreconditionError("WeightConfig: need one alpha per b_1..b_k (" + std::to_string(sigma.k()) + ")");
  // 0 < delta < rho < 1 holds for every eps* in (0, 1) once m >= 2; m = 1 gives delta <= 0.
  if (!(delta() > 0 && delta() < rho_exp() && rho_exp() < 1))
    throw PreconditionError("WeightConfig: exponents violate 0 < delta < rho < 1");
}

WeightConfig WeightConfig::with_gamma(double g) const {
  WeightConfig c = *this;
  if (!(g >= 1)) throw PreconditionError("WeightConfig: gamma must be >= 1");
  c.gamma = g;
  return c;
}

WeightValues weights(const WeightConfig& cfg, const PhasePoint& z) {
  if (z.n() != cfg.sigma.n()) throw DimensionError("weights: dimension mismatch");
  const double delta = cfg.delta().get_d(), kappa = cfg.kappa().get_d();
  WeightValues v;
  double xi2 = 0;
  for (double c : z.xi) xi2 += c * c;
  v.bracket = std::sqrt(cfg.gamma * cfg.gamma + xi2);
  const double floor2 = std::pow(v.bracket, -2 * delta);
  double b2 = 0, phi = 0;
  for (int j = 1; j <= cfg.sigma.k(); ++j) {
    const double b = evaluate(cfg.sigma.defining[j], z);
    b2 += b * b;
    phi += cfg.alpha[j - 1] * b;
  }
  v.phi = phi / v.bracket;
  v.w = std::sqrt(b2 / (v.bracket * v.bracket) + floor2);
  v.omega = std::sqrt(v.phi * v.phi + floor2);
  // phi + omega cancels when phi < 0; (omega + phi)(omega - phi) = <xi>^-2delta avoids that.
  v.phi_plus_omega = v.phi >= 0 ? v.phi + v.omega : floor2 / (v.omega - v.phi);
  v.psi = std::pow(v.bracket, kappa) * std::log(v.phi_plus_omega);
  return v;
}

std::vector<double> elementary_symmetric(const std::vector<double>& v) {
  std::vector<double> e(v.size() + 1, 0.0);
  e[0] = 1;
  for (std::size_t i = 0; i < v.size(); ++i)
    for (std::size_t j = i + 1; j >= 1; --j) e[j] += e[j - 1] * v[i];
  return e;
}

HValues h_functions(const std::vector<double>& lambdas, const WeightConfig& cfg, const PhasePoint& z, double eps) {
  if (!(eps > 0)) throw PreconditionError("h_functions: eps must be positive");
  HValues r;
  r.weight = weights(cfg, z);
  r.lambdas = lambdas;
  r.tau = eps / r.weight.omega * std::pow(r.weight.bracket, cfg.kappa().get_d());
  std::vector<double> q2;
  q2.reserve(lambdas.size());
  for (double l : lambdas) {
    const double d = z.xi[0] - l;
    q2.push_back(d * d + r.tau * r.tau);
  }
  r.h = elementary_symmetric(q2);
  return r;
}

HValues h_functions(const PhasePolynomial& p, const WeightConfig& cfg, const PhasePoint& z, double eps) {
  const RootTable t = factor_roots(p, cfg.sigma, {z});
  if (!t.violations.empty() || t.rows.empty())
    throw PreconditionError("h_functions: nonreal roots in xi_0 at the requested point");
  if (t.m != cfg.m) throw PreconditionError("h_functions: symbol degree in xi_0 differs from cfg.m");
  return h_functions(t.rows.front().lambdas, cfg, z, eps);
}

// ---------------------------------------------------------------------------
// Grids

double WeightGrid::min_spacing() const {
  std::vector<double> s = offsets;
  s.insert(s.end(), xi0_offsets.begin(), xi0_offsets.end());
  std::sort(s.begin(), s.end());
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < s.size(); ++i)
    if (s[i] > s[i - 1]) best = std::min(best, s[i] - s[i - 1]);
  return best;
}

namespace {

// Orthonormal basis of the Euclidean complement of span(T_rho Sigma, N) in flat coordinates.
std::vector<std::vector<double>> transversal_basis(const CharManifold& sigma) {
  const int n = sigma.n();
  const std::size_t dim = static_cast<std::size_t>(2 * (n + 1));
  std::vector<RationalVector> rows = tangent_space(sigma);
  RationalVector N(dim, 0);
  N[xi_var(n, 0)] = 1;
  rows.push_back(N);
  const auto ker = RationalMatrix::from_rows(rows).kernel();
  std::vector<std::vector<double>> basis;
  for (const auto& v : ker) {
    std::vector<double> d(dim);
    for (std::size_t i = 0; i < dim; ++i) d[i] = v[i].get_d();
    for (const auto& b : basis) {
      double c = 0;
      for (std::size_t i = 0; i < dim; ++i) c += d[i] * b[i];
      for (std::size_t i = 0; i < dim; ++i) d[i] -= c * b[i];
    }
    double nrm = 0;
    for (double x : d) nrm += x * x;
    nrm = std::sqrt(nrm);
    for (double& x : d) x /= nrm;
    basis.push_back(std::move(d));
  }
  return basis;
}

}  // namespace

std::vector<PhasePoint> weight_grid_points(const WeightConfig& cfg, const WeightGrid& grid) {
  const int n = cfg.sigma.n();
  const std::size_t dim = static_cast<std::size_t>(2 * (n + 1));
  const auto basis = transversal_basis(cfg.sigma);
  const std::size_t d = basis.size();

  // Unit vectors in the complement, coordinates of `basis`.
  std::vector<std::vector<double>> dirs;
  if (d > 0) {
    for (auto& c : SphereSampler::coordinate_directions(d)) {
      if (dirs.size() >= std::max<std::size_t>(grid.directions, 1)) break;
      dirs.push_back(c);
    }
    SphereSampler S(d, grid.seed);
    while (dirs.size() < grid.directions) dirs.push_back(S.next());
  }

  const double delta = cfg.delta().get_d();
  const auto flat_rho = cfg.sigma.rho.flat();
  std::vector<PhasePoint> pts;
  for (double scale : grid.scales) {
    const double L = scale * cfg.gamma;
    const double sx = std::pow(L, -delta), sxi = std::pow(L, 1 - delta);
    for (double t : grid.xi0_offsets) {
      auto emit = [&](const std::vector<double>& disp) {
        std::vector<double> f(dim);
        for (int j = 0; j <= n; ++j) {
          f[x_var(n, j)] = flat_rho[x_var(n, j)] + disp[x_var(n, j)] * sx;
          f[xi_var(n, j)] = L * flat_rho[xi_var(n, j)] + disp[xi_var(n, j)] * sxi;
        }
        f[xi_var(n, 0)] = t * sxi;
        pts.push_back(PhasePoint::from_flat(f));
      };
      for (double s : grid.offsets) {
        if (s == 0 || d == 0) {
          emit(std::vector<double>(dim, 0.0));
          if (d == 0) break;
          continue;
        }
        for (const auto& u : dirs) {
          std::vector<double> disp(dim, 0.0);
          for (std::size_t a = 0; a < d; ++a)
            for (std::size_t i = 0; i < dim; ++i) disp[i] += s * u[a] * basis[a][i];
          emit(disp);
        }
      }
    }
  }
  return pts;
}

WeightBounds weight_bounds(const WeightConfig& cfg, const std::vector<PhasePoint>& points) {
  WeightBounds b;
  const double delta = cfg.delta().get_d();
  for (const auto& z : points) {
    const auto v = weights(cfg, z);
    b.C_upper = std::max(b.C_upper, v.phi_plus_omega);
    b.C_lower = std::max(b.C_lower, std::pow(v.bracket, -2 * delta) / v.phi_plus_omega);
    if (v.omega < std::abs(v.phi)) ++b.omega_below_phi;
    ++b.points;
  }
  return b;
}

// ---------------------------------------------------------------------------
// Root-product ratios

namespace {

std::vector<std::vector<double>> roots_on(const PhasePolynomial& p, const WeightConfig& cfg,
                                          const std::vector<PhasePoint>& pts) {
  const RootTable t = factor_roots(p, cfg.sigma, pts);
  if (!t.violations.empty())
    throw PreconditionError("root_product_probe: nonreal roots in xi_0 at " + std::to_string(t.violations.size()) +
                            " grid points");
  if (t.m != cfg.m) throw PreconditionError("root_product_probe: symbol degree in xi_0 differs from cfg.m");
  std::vector<std::vector<double>> out;
  out.reserve(t.rows.size());
  for (const auto& r : t.rows) out.push_back(r.lambdas);
  return out;
}

}  // namespace

RootProductReport root_product_probe(const PhasePolynomial& p, const WeightConfig& cfg, const std::vector<double>& eps,
                            const std::vector<double>& gammas, const WeightGrid& grid, double stability_tol) {
  if (eps.empty() || gammas.empty()) throw PreconditionError("root_product_probe: empty eps or gamma list");
  const int m = cfg.m;
  RootProductReport rep;
  rep.all_positive = true;
  for (double e : eps) {
    // infima[k][j] per gamma
    std::map<std::pair<int, int>, std::vector<double>> infima;
    for (double g : gammas) {
      const WeightConfig c = cfg.with_gamma(g);
      const auto pts = weight_grid_points(c, grid);
      const auto roots = roots_on(p, c, pts);
      rep.points_per_gamma = pts.size();
      std::vector<RootProductRow> rows;
      for (int k = 1; k <= m; ++k)
        for (int j = k; j <= m; ++j) {
          RootProductRow r;
          r.eps = e;
          r.gamma = g;
          r.k = k;
          r.j = j;
          r.infimum = std::numeric_limits<double>::infinity();
          rows.push_back(r);
        }
      for (std::size_t i = 0; i < pts.size(); ++i) {
        const HValues h = h_functions(roots[i], c, pts[i], e);
        const double unit = e * h.weight.omega * h.weight.bracket;
        std::size_t idx = 0;
        for (int k = 1; k <= m; ++k)
          for (int j = k; j <= m; ++j, ++idx) {
            const double ratio = h.h[m - k] / (std::pow(unit, 2 * (j - k)) * h.h[m - j]);
            if (ratio < rows[idx].infimum) {
              rows[idx].infimum = ratio;
              rows[idx].argmin = pts[i];
            }
          }
      }
      for (const auto& r : rows) {
        if (!(r.infimum > 0) || !std::isfinite(r.infimum)) rep.all_positive = false;
        infima[{r.k, r.j}].push_back(r.infimum);
        rep.rows.push_back(r);
      }
    }
    for (const auto& [kj, v] : infima) {
      RootProductStability s;
      s.eps = e;
      s.k = kj.first;
      s.j = kj.second;
      const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
      s.spread = *lo > 0 ? (*hi - *lo) / *lo : std::numeric_limits<double>::infinity();
      s.stable = s.spread <= stability_tol;
      rep.max_spread = std::max(rep.max_spread, s.spread);
      rep.stability.push_back(s);
    }
  }
  rep.all_stable = std::all_of(rep.stability.begin(), rep.stability.end(), [](const auto& s) { return s.stable; });
  return rep;
}

// ---------------------------------------------------------------------------
// Derivative envelopes

std::string to_string(Envelope e) {
  switch (e) {
    case Envelope::w: return "w";
    case Envelope::omega: return "omega";
    case Envelope::psi: return "psi";
    case Envelope::p_vs_h: return "p-vs-h";
  }
  return "w";
}

Envelope envelope_from_string(const std::string& s) {
  if (s == "w") return Envelope::w;
  if (s == "omega") return Envelope::omega;
  if (s == "psi") return Envelope::psi;
  if (s == "p-vs-h" || s == "p_vs_h") return Envelope::p_vs_h;
  throw PreconditionError("unknown envelope '" + s + "' (expected w, omega, psi or p-vs-h)");
}

EnvelopeReport derivative_bound_probe(const PhasePolynomial& p, const WeightConfig& cfg, Envelope which,
                                      const std::vector<double>& gammas, const WeightGrid& grid, double fd_step,
                                      double eps) {
  if (!(fd_step > 0 && fd_step <= 0.1))
    throw PreconditionError("derivative_bound_probe: fd_step must lie in (0, 0.1]");
  if (!(fd_step < grid.min_spacing() / 2))
    throw PreconditionError("derivative_bound_probe: fd_step is not below half the grid spacing");
  if (gammas.empty()) throw PreconditionError("derivative_bound_probe: empty gamma list");
  const int n = cfg.sigma.n();
  const double delta = cfg.delta().get_d(), rho = cfg.rho_exp().get_d(), kappa = cfg.kappa().get_d();

  EnvelopeReport rep;
  rep.which = which;
  for (double g : gammas) {
    const WeightConfig c = cfg.with_gamma(g);
    const auto pts = weight_grid_points(c, grid);
    EnvelopeRow row;
    row.gamma = g;
    auto value = [&](const PhasePoint& z) {
      switch (which) {
        case Envelope::w: return weights(c, z).w;
        case Envelope::omega: return weights(c, z).omega;
        case Envelope::psi: return weights(c, z).psi;
        case Envelope::p_vs_h: return evaluate(p, z);
      }
      return 0.0;
    };
    for (const auto& z : pts) {
      const WeightValues wv = weights(c, z);
      const double B = wv.bracket;
      double h = 0;
      if (which == Envelope::p_vs_h) h = std::sqrt(h_functions(p, c, z, eps).h[c.m - 1]);
      const auto base = z.flat();
      for (std::size_t var = 0; var < base.size(); ++var) {
        const bool is_xi = var >= static_cast<std::size_t>(n + 1);
        const double step = is_xi ? fd_step * std::pow(B, rho) : fd_step * std::pow(B, -delta);
        auto fp = base, fm = base;
        fp[var] += step;
        fm[var] -= step;
        const double d = (value(PhasePoint::from_flat(fp)) - value(PhasePoint::from_flat(fm))) / (2 * step);
        double env = 0;
        switch (which) {
          case Envelope::w: env = wv.w * (is_xi ? std::pow(B, -rho) : std::pow(B, delta)); break;
          case Envelope::omega: env = wv.omega * (is_xi ? std::pow(B, -rho) : std::pow(B, delta)); break;
          case Envelope::psi: env = std::pow(B, kappa - (is_xi ? 1 : 0)) / wv.omega; break;
          case Envelope::p_vs_h: env = std::pow(B, is_xi ? 0 : 1) * h; break;
        }
        const double ratio = std::abs(d) / env;
        if (ratio > row.max_ratio) {
          row.max_ratio = ratio;
          row.argmax = z;
        }
      }
      ++row.points;
    }
    rep.C = std::max(rep.C, row.max_ratio);
    rep.rows.push_back(row);
  }
  const double first = rep.rows.front().max_ratio, last = rep.rows.back().max_ratio;
  rep.divergent = rep.rows.size() > 1 && last > 1.5 * first;
  if (rep.divergent) rep.note = "envelope ratio grows along the gamma ladder";
  return rep;
}

std::string root_product_csv(const RootProductReport& r) {
  std::ostringstream os;
  os.precision(12);
  os << "eps,gamma,k,j,infimum\n";
  for (const auto& row : r.rows) os << row.eps << "," << row.gamma << "," << row.k << "," << row.j << "," << row.infimum << "\n";
  return os.str();
}

std::string envelope_csv(const EnvelopeReport& r) {
  std::ostringstream os;
  os.precision(12);
  os << "envelope,gamma,max_ratio,points\n";
  for (const auto& row : r.rows) os << to_string(r.which) << "," << row.gamma << "," << row.max_ratio << "," << row.points << "\n";
  return os.str();
}

}  // namespace hypercone
