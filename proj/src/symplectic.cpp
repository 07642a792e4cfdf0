#include "hypercone/symplectic.hpp"

#include <algorithm>
#include <cmath>

#include "hypercone/univariate.hpp"

namespace hypercone {

PhasePolynomial poisson_bracket(const PhasePolynomial& f, const PhasePolynomial& g) {
  if (f.n() != g.n()) throw DimensionError("poisson_bracket: dimension mismatch");
  const int n = f.n();
  PhasePolynomial r(n);
  for (int mu = 0; mu <= n; ++mu) {
    r += partial(f, xi_var(n, mu)) * partial(g, x_var(n, mu));
    r -= partial(f, x_var(n, mu)) * partial(g, xi_var(n, mu));
  }
  return r;
}

RationalVector hamilton_field_exact(const PhasePolynomial& p, std::span<const Rational> point) {
  const int n = p.n();
  const auto h = static_cast<std::size_t>(n + 1);
  RationalVector grad = gradient_exact(p, point);
  RationalVector H(2 * h);
  for (std::size_t j = 0; j < h; ++j) {
    H[j] = grad[h + j];
    H[h + j] = -grad[j];
  }
  return H;
}

PhaseVector hamilton_field(const PhasePolynomial& p, const PhasePoint& point) {
  if (point.n() != p.n()) throw DimensionError("hamilton_field: dimension mismatch");
  const int n = p.n();
  const auto flat = point.flat();
  std::vector<double> dx(static_cast<std::size_t>(n + 1)), dxi(static_cast<std::size_t>(n + 1));
  for (int j = 0; j <= n; ++j) {
    dx[static_cast<std::size_t>(j)] = partial(p, xi_var(n, j)).evaluate_flat(flat);
    dxi[static_cast<std::size_t>(j)] = -partial(p, x_var(n, j)).evaluate_flat(flat);
  }
  return {dx, dxi};
}

double symplectic_form(std::span<const double> X, std::span<const double> Y) {
  if (X.size() != Y.size() || X.size() % 2) throw DimensionError("symplectic_form: dimension mismatch");
  const std::size_t h = X.size() / 2;
  double s = 0;
  for (std::size_t j = 0; j < h; ++j) s += X[h + j] * Y[j] - X[j] * Y[h + j];
  return s;
}

double symplectic_form(const PhaseVector& X, const PhaseVector& Y) {
  return symplectic_form(X.flat(), Y.flat());
}

Rational symplectic_form_exact(std::span<const Rational> X, std::span<const Rational> Y) {
  if (X.size() != Y.size() || X.size() % 2) throw DimensionError("symplectic_form: dimension mismatch");
  const std::size_t h = X.size() / 2;
  Rational s = 0;
  for (std::size_t j = 0; j < h; ++j) s += X[h + j] * Y[j] - X[j] * Y[h + j];
  return s;
}

HamiltonMap hamilton_map(const PhasePolynomial& p, const PhasePoint& rho) {
  if (rho.n() != p.n()) throw DimensionError("hamilton_map: dimension mismatch");
  const auto pt = rho.exact();
  if (p.evaluate_exact(pt) != 0)
    throw PreconditionError("hamilton_map: p(rho) != 0, rho is not characteristic");
  for (const auto& g : gradient_exact(p, pt))
    if (g != 0) throw PreconditionError("hamilton_map: rho is a simple characteristic (dp != 0)");

  const int n = p.n();
  const std::size_t N = p.num_vars();
  const std::size_t h = static_cast<std::size_t>(n + 1);
  // Rows of the Jacobian of H_p = (grad_xi p, -grad_x p).
  std::vector<PhasePolynomial> field(N);
  for (std::size_t j = 0; j < h; ++j) {
    field[j] = partial(p, h + j);
    field[h + j] = -partial(p, j);
  }
  HamiltonMap out;
  out.rho = rho;
  out.exact = RationalMatrix(N, N);
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = 0; j < N; ++j) out.exact(i, j) = partial(field[i], j).evaluate_exact(pt);
  out.F = Eigen::MatrixXd(static_cast<Eigen::Index>(N), static_cast<Eigen::Index>(N));
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = 0; j < N; ++j)
      out.F(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = out.exact(i, j).get_d();
  return out;
}

RationalVector characteristic_polynomial(const RationalMatrix& A) {
  const std::size_t n = A.rows();
  if (n != A.cols()) throw DimensionError("characteristic_polynomial: matrix not square");
  RationalVector c(n + 1);
  c[n] = 1;
  RationalMatrix M(n, n);  // M_0 = 0
  for (std::size_t k = 1; k <= n; ++k) {
    RationalMatrix next = A * M;
    for (std::size_t i = 0; i < n; ++i) next(i, i) += c[n - k + 1];
    M = std::move(next);
    RationalMatrix AM = A * M;
    Rational tr = 0;
    for (std::size_t i = 0; i < n; ++i) tr += AM(i, i);
    c[n - k] = -tr / static_cast<long>(k);
  }
  return c;
}

namespace {

bool quadruple_symmetric(const std::vector<std::complex<double>>& ev, double scale) {
  // Defective eigenvalues perturb like eps^(1/k); use a loose pairing tolerance.
  const double tol = 1e-5 * std::max(1.0, scale);
  auto has = [&](std::complex<double> z) {
    return std::any_of(ev.begin(), ev.end(), [&](auto w) { return std::abs(w - z) <= tol; });
  };
  for (auto z : ev)
    if (!has(-z) || !has(std::conj(z)) || !has(-std::conj(z))) return false;
  return true;
}

std::vector<std::complex<double>> eigenvalues_of(const Eigen::MatrixXd& F) {
  std::vector<std::complex<double>> out;
  if (F.rows() == 0) return out;
  Eigen::EigenSolver<Eigen::MatrixXd> es(F, false);
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) out.push_back(es.eigenvalues()(i));
  std::sort(out.begin(), out.end(), [](auto a, auto b) {
    return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
  });
  return out;
}

int float_rank(const Eigen::MatrixXd& M, double abs_tol) {
  if (M.size() == 0) return 0;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(M);
  int r = 0;
  for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i)
    if (svd.singularValues()(i) > abs_tol) ++r;
  return r;
}

}  // namespace

SpectrumReport classify_spectrum(const HamiltonMap& map, double tol) {
  SpectrumReport r;
  r.method = "exact";
  r.tol = tol;
  r.norm_F = map.F.norm();
  r.eigenvalues = eigenvalues_of(map.F);
  r.quadruple_symmetric = quadruple_symmetric(r.eigenvalues, r.norm_F);

  const std::size_t N = map.exact.rows();
  RationalUnivariate chi;
  chi.c = characteristic_polynomial(map.exact);
  RationalUnivariate s = squarefree_part(chi);
  if (s.degree() > 0) {
    SturmSequence sturm(s);
    // Nonzero real roots come in +-lambda pairs; count the positive ones.
    r.real_pair_count = sturm.count_above(Rational(0));
  }
  r.has_nonzero_real = r.real_pair_count > 0;

  RationalMatrix F2 = map.exact * map.exact;
  auto ker = F2.kernel();
  auto img = F2.column_space();
  std::vector<RationalVector> both = ker;
  both.insert(both.end(), img.begin(), img.end());
  const std::size_t span_dim = both.empty() ? 0 : RationalMatrix::from_columns(both).rank();
  r.dim_W = static_cast<int>(ker.size() + img.size() - span_dim);
  (void)N;
  return r;
}

SpectrumReport classify_spectrum(const Eigen::MatrixXd& F, double tol) {
  SpectrumReport r;
  r.method = "floating";
  r.tol = tol;
  r.norm_F = F.norm();
  r.eigenvalues = eigenvalues_of(F);
  r.quadruple_symmetric = quadruple_symmetric(r.eigenvalues, r.norm_F);
  const double thr = tol * r.norm_F;
  const auto in_band = [&](double v) { return v >= 0.1 * thr && v <= 10.0 * thr; };
  int positive_real = 0;
  for (auto z : r.eigenvalues) {
    const double re = std::abs(z.real()), im = std::abs(z.imag());
    if (thr > 0 && (in_band(re) || (re > thr && in_band(im)))) r.ambiguous = true;
    if (re > thr && im < thr && z.real() > 0) ++positive_real;
  }
  r.real_pair_count = positive_real;
  r.has_nonzero_real = positive_real > 0;

  const Eigen::MatrixXd F2 = F * F;
  const double rank_tol = std::max(thr, 1e-300) * std::max(1.0, r.norm_F);
  const Eigen::Index N = F.rows();
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(F2, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const int rk = float_rank(F2, rank_tol);
  // Image basis: first rk left singular vectors; kernel basis: last N - rk right ones.
  Eigen::MatrixXd stacked(N, N);
  stacked << svd.matrixV().rightCols(N - rk), svd.matrixU().leftCols(rk);
  const int span_dim = float_rank(stacked, 1e-8);
  r.dim_W = static_cast<int>(N) - span_dim;
  return r;
}

}  // namespace hypercone
