#include "hypercone/characteristic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "hypercone/sampling.hpp"
#include "hypercone/univariate.hpp"

namespace hypercone {

std::string to_string(Decision d) {
  switch (d) {
    case Decision::yes: return "yes";
    case Decision::no: return "no";
    case Decision::undecided: return "undecided";
  }
  return "undecided";
}

CharManifold make_unchecked_manifold(std::vector<PhasePolynomial> b, PhasePoint base) {
  // Construct a trivially valid manifold, then swap in the payload.
  CharManifold m = [&] {
    const int n = base.n();
    std::vector<double> x(static_cast<std::size_t>(n + 1), 0.0), xi(static_cast<std::size_t>(n + 1), 0.0);
    if (n > 0) xi[static_cast<std::size_t>(n)] = 1.0;
    PhasePoint p0(x, xi);
    return CharManifold({PhasePolynomial::xi(n, 0)}, p0);
  }();
  m.defining = std::move(b);
  m.rho = std::move(base);
  return m;
}

CharManifold::CharManifold(std::vector<PhasePolynomial> b, PhasePoint base)
    : defining(std::move(b)), rho(std::move(base)) {
  if (defining.empty()) throw PreconditionError("CharManifold: no defining functions");
  const auto pt = rho.exact();
  for (std::size_t j = 0; j < defining.size(); ++j) {
    if (defining[j].n() != rho.n()) throw DimensionError("CharManifold: dimension mismatch");
    if (defining[j].evaluate_exact(pt) != 0)
      throw PreconditionError("CharManifold: b_" + std::to_string(j) + "(rho) != 0");
  }
  if (jacobian().rank() != defining.size())
    throw PreconditionError("CharManifold: differentials db_j are linearly dependent at rho");
}

RationalMatrix CharManifold::jacobian() const {
  const auto pt = rho.exact();
  std::vector<RationalVector> rows;
  for (const auto& b : defining) rows.push_back(gradient_exact(b, pt));
  return RationalMatrix::from_rows(rows);
}

std::vector<RationalVector> tangent_space(const CharManifold& sigma) {
  RationalMatrix J = sigma.jacobian();
  if (J.rank() != sigma.defining.size())
    throw PreconditionError("tangent_space: Jacobian of the defining functions is rank deficient");
  return J.kernel();
}

bool Localization::direction_noncharacteristic() const {
  return p_loc.evaluate_exact(direction.exact()) != 0;
}

bool Localization::invariant_along(const std::vector<RationalVector>& basis) const {
  for (const auto& Y : basis) {
    PhasePolynomial d(p_loc.n());
    for (std::size_t i = 0; i < Y.size(); ++i)
      if (Y[i] != 0) d += partial(p_loc, i) * Y[i];
    if (!d.is_zero()) return false;
  }
  return true;
}

int characteristic_order(const PhasePolynomial& p, const PhasePoint& rho) {
  if (rho.n() != p.n()) throw DimensionError("characteristic_order: dimension mismatch");
  if (p.is_zero()) throw PreconditionError("characteristic_order: zero polynomial");
  const PhasePolynomial s = p.shifted(rho.exact());
  const int deg = s.total_degree();
  for (int d = 0; d <= deg; ++d)
    if (!homogeneous_part(s, d).is_zero()) return d;
  return deg;  // unreachable for nonzero p
}

namespace {

PhaseVector theta_direction(int n) {
  std::vector<double> dx(static_cast<std::size_t>(n + 1), 0.0), dxi(static_cast<std::size_t>(n + 1), 0.0);
  dxi[0] = 1.0;
  return {dx, dxi};
}

RationalVector to_exact(const std::vector<double>& v) {
  RationalVector r;
  r.reserve(v.size());
  for (double d : v) r.emplace_back(d);
  return r;
}

double norm(const std::vector<double>& v) {
  double s = 0;
  for (double d : v) s += d * d;
  return std::sqrt(s);
}

}  // namespace

Localization localize(const PhasePolynomial& p, const PhasePoint& rho) {
  if (rho.n() != p.n()) throw DimensionError("localize: dimension mismatch");
  const auto pt = rho.exact();
  if (p.evaluate_exact(pt) != 0) throw PreconditionError("localize: p(rho) != 0");
  Localization L;
  L.rho = rho;
  const PhasePolynomial s = p.shifted(pt);
  const int deg = s.total_degree();
  for (int d = 1; d <= deg; ++d) {
    PhasePolynomial h = homogeneous_part(s, d);
    if (!h.is_zero()) {
      L.order = d;
      L.p_loc = std::move(h);
      break;
    }
  }
  L.direction = theta_direction(p.n());
  return L;
}

HyperbolicityVerdict is_hyperbolic(const PhasePolynomial& p_hom, const PhaseVector& N,
                                   const SamplingOptions& opts, double tol) {
  if (N.n() != p_hom.n()) throw DimensionError("is_hyperbolic: dimension mismatch");
  const auto Nx = N.exact();
  if (p_hom.evaluate_exact(Nx) == 0)
    throw PreconditionError("is_hyperbolic: p(N) = 0, so p is not hyperbolic in direction N");

  HyperbolicityVerdict v;
  const bool exact = p_hom.total_degree() <= 12;
  v.method = exact ? "exact-sturm" : "floating";
  const std::size_t dim = p_hom.num_vars();
  std::vector<std::vector<double>> dirs;
  if (opts.include_coordinate_directions) dirs = SphereSampler::coordinate_directions(dim);
  SphereSampler sampler(dim, opts.seed);
  for (std::size_t i = 0; i < opts.samples; ++i) dirs.push_back(sampler.next());

  const auto Nf = N.flat();
  for (const auto& X : dirs) {
    bool real;
    if (exact) {
      real = real_root_report(restrict_to_line(p_hom, to_exact(X), Nx)).all_real();
    } else {
      real = real_roots_if_real(restrict_to_line(p_hom, X, Nf), tol).has_value();
    }
    ++v.samples_checked;
    if (!real) {
      v.status = Decision::no;
      v.witness = PhaseVector::from_flat(X);
      v.note = "t -> p(X + tN) has a nonreal root";
      return v;
    }
  }
  v.status = Decision::yes;
  std::ostringstream os;
  os << "real-rooted on all " << v.samples_checked << " sampled directions";
  v.note = os.str();
  return v;
}

HyperbolicityVerdict is_strictly_hyperbolic_on_quotient(const Localization& L,
                                                        const CharManifold& sigma,
                                                        const SamplingOptions& opts, double tol) {
  HyperbolicityVerdict v;
  v.method = "exact-sturm";
  const auto T = tangent_space(sigma);
  if (!L.invariant_along(T)) {
    v.status = Decision::undecided;
    v.note = "localization is not translation invariant along T_rho Sigma; condition inapplicable";
    return v;
  }
  if (!L.direction_noncharacteristic()) {
    v.status = Decision::no;
    v.note = "p_loc(N) = 0";
    return v;
  }
  // Complement of span(T, N): kernel of the matrix with those vectors as rows.
  std::vector<RationalVector> rows = T;
  rows.push_back(L.direction_exact());
  const auto complement = RationalMatrix::from_rows(rows).kernel();
  if (complement.empty()) {
    v.status = Decision::yes;
    v.note = "quotient is spanned by N; condition holds vacuously";
    return v;
  }

  const auto Nx = L.direction_exact();
  const auto Nf = L.direction.flat();
  const std::size_t dim = complement.size();
  std::vector<std::vector<double>> coeffs;
  if (opts.include_coordinate_directions) coeffs = SphereSampler::coordinate_directions(dim);
  SphereSampler sampler(dim, opts.seed);
  for (std::size_t i = 0; i < opts.samples; ++i) coeffs.push_back(sampler.next());

  bool near_collision = false;
  double min_sep = std::numeric_limits<double>::infinity();
  for (const auto& c : coeffs) {
    RationalVector X(L.p_loc.num_vars());
    for (std::size_t a = 0; a < dim; ++a) {
      Rational ca(c[a]);
      if (ca == 0) continue;
      for (std::size_t i = 0; i < X.size(); ++i) X[i] += ca * complement[a][i];
    }
    ++v.samples_checked;
    auto f = restrict_to_line(L.p_loc, X, Nx);
    auto rep = real_root_report(f);
    std::vector<double> Xf(X.size());
    for (std::size_t i = 0; i < X.size(); ++i) Xf[i] = X[i].get_d();
    if (!rep.all_real() || !rep.squarefree()) {
      v.status = Decision::no;
      v.witness = PhaseVector::from_flat(Xf);
      v.note = !rep.all_real() ? "nonreal root off the quotient zero class"
                               : "repeated root off the quotient zero class";
      return v;
    }
    auto roots = real_roots_if_real(restrict_to_line(L.p_loc, Xf, Nf), 1e-6);
    if (roots && roots->size() >= 2) {
      double gap = std::numeric_limits<double>::infinity();
      for (std::size_t i = 1; i < roots->size(); ++i) gap = std::min(gap, (*roots)[i] - (*roots)[i - 1]);
      const double scale = norm(Xf);
      min_sep = std::min(min_sep, gap / scale);
      if (gap <= tol * scale) near_collision = true;
    }
  }
  std::ostringstream os;
  os << "distinct real roots on all " << v.samples_checked << " sampled quotient directions";
  if (std::isfinite(min_sep)) os << "; min relative separation " << min_sep;
  v.note = os.str();
  v.status = near_collision ? Decision::undecided : Decision::yes;
  if (near_collision) v.note += "; separation below tolerance at some sample";
  return v;
}

RootTable factor_roots(const PhasePolynomial& p, const CharManifold& sigma,
                       const std::vector<PhasePoint>& grid, double tol) {
  const int n = p.n();
  const std::size_t xi0 = xi_var(n, 0);
  const std::size_t xi0v[] = {xi0};
  const int m = p.degree_in(xi0v);
  {
    Exponent lead(p.num_vars(), 0);
    lead[xi0] = static_cast<std::uint16_t>(m);
    int lead_terms = 0;
    for (const auto& [e, c] : p.terms())
      if (e[xi0] == m) ++lead_terms;
    if (m < 1 || lead_terms != 1 || p.coefficient(lead) != 1)
      throw PreconditionError("factor_roots: symbol must be monic in xi_0");
  }
  RootTable t;
  t.m = m;
  t.c_fit = std::numeric_limits<double>::infinity();
  std::vector<double> dir(p.num_vars(), 0.0);
  dir[xi0] = 1.0;
  for (const auto& pt : grid) {
    auto base = pt.flat();
    base[xi0] = 0.0;
    RootRow row;
    row.point = pt;
    double b2 = 0;
    for (std::size_t j = 1; j < sigma.defining.size(); ++j) {
      const double b = sigma.defining[j].evaluate_flat(base);
      b2 += b * b;
    }
    row.b_prime_norm = std::sqrt(b2);
    auto f = restrict_to_line(p, base, dir);
    auto cr = complex_roots(f);
    double scale = 0;
    for (auto z : cr) scale = std::max(scale, std::abs(z));
    bool real = true;
    for (auto z : cr)
      if (std::abs(z.imag()) > tol * std::max(1.0, scale) && std::abs(z.imag()) > 1e-6 * scale) real = false;
    if (!real) {
      t.violations.push_back(pt);
      continue;
    }
    for (auto z : cr) row.lambdas.push_back(z.real());
    std::sort(row.lambdas.begin(), row.lambdas.end());
    double sum = 0;
    for (double l : row.lambdas) sum += l;
    t.max_root_sum = std::max(t.max_root_sum, std::abs(sum));
    if (row.b_prime_norm > 1e-12) {
      ++t.ratio_points;
      for (double l : row.lambdas) t.C_fit = std::max(t.C_fit, std::abs(l) / row.b_prime_norm);
      for (std::size_t i = 1; i < row.lambdas.size(); ++i)
        t.c_fit = std::min(t.c_fit, (row.lambdas[i] - row.lambdas[i - 1]) / row.b_prime_norm);
    }
    t.rows.push_back(std::move(row));
  }
  if (t.ratio_points == 0 || m < 2) t.c_fit = 0;
  return t;
}

std::string root_table_csv(const RootTable& t) {
  std::ostringstream os;
  os.precision(17);
  const int n = t.rows.empty() ? 0 : t.rows.front().point.n();
  for (int j = 0; j <= n; ++j) os << "x" << j << ",";
  for (int j = 0; j <= n; ++j) os << "xi" << j << ",";
  for (int j = 1; j <= t.m; ++j) os << "lambda_" << j << ",";
  os << "b_prime_norm\n";
  for (const auto& r : t.rows) {
    for (double v : r.point.x) os << v << ",";
    for (double v : r.point.xi) os << v << ",";
    for (double v : r.lambdas) os << v << ",";
    os << r.b_prime_norm << "\n";
  }
  return os.str();
}

}  // namespace hypercone
