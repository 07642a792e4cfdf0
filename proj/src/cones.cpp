#include "hypercone/cones.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>

#include "hypercone/sampling.hpp"
#include "hypercone/symplectic.hpp"
#include "hypercone/univariate.hpp"

namespace hypercone {

std::string to_string(WitnessKind k) {
  switch (k) {
    case WitnessKind::gamma_member: return "gamma_member";
    case WitnessKind::transversality_witness: return "transversality_witness";
    case WitnessKind::propagation_witness: return "propagation_witness";
    case WitnessKind::none: return "none";
  }
  return "none";
}

std::string to_string(ConeStatus s) {
  switch (s) {
    case ConeStatus::member: return "member";
    case ConeStatus::non_member: return "non_member";
    case ConeStatus::undecided: return "undecided";
  }
  return "undecided";
}

std::string to_string(Transversality t) {
  switch (t) {
    case Transversality::transversal: return "transversal";
    case Transversality::non_transversal: return "non_transversal";
    case Transversality::undecided: return "undecided";
  }
  return "undecided";
}

namespace {

RationalVector to_exact(std::span<const double> v) {
  RationalVector r;
  r.reserve(v.size());
  for (double d : v) r.emplace_back(d);
  return r;
}

std::vector<double> to_double(const RationalVector& v) {
  std::vector<double> r(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) r[i] = v[i].get_d();
  return r;
}

double norm(std::span<const double> v) {
  double s = 0;
  for (double d : v) s += d * d;
  return std::sqrt(s);
}

void normalize(std::vector<double>& v) {
  const double n = norm(v);
  if (n > 0)
    for (double& d : v) d /= n;
}

RationalVector axpy(const RationalVector& y, const Rational& a, const RationalVector& x) {
  RationalVector r = y;
  for (std::size_t i = 0; i < r.size(); ++i) r[i] += a * x[i];
  return r;
}

/// Scale so that the largest |component| is 1.
RationalVector unit_max(RationalVector v) {
  Rational m = 0;
  for (const auto& c : v) m = std::max(m, Rational(abs(c)));
  if (m != 0)
    for (auto& c : v) c /= m;
  return v;
}

/// Largest real root of a real-rooted polynomial: s > r_max iff every derivative
/// f^(j)(s), j < deg, has the sign of the leading coefficient. Bisection on that
/// predicate stays accurate at multiple roots where companion eigenvalues do not.
double max_real_root(const RealUnivariate& f) {
  RealUnivariate g = f;
  g.trim();
  const int m = g.degree();
  if (m <= 0) return -std::numeric_limits<double>::infinity();
  const double lead = g.c[static_cast<std::size_t>(m)];
  std::vector<RealUnivariate> ders{g};
  for (int j = 1; j < m; ++j) {
    RealUnivariate d;
    const auto& prev = ders.back().c;
    for (std::size_t i = 1; i < prev.size(); ++i) d.c.push_back(prev[i] * static_cast<double>(i));
    ders.push_back(std::move(d));
  }
  double bound = 0;
  for (int i = 0; i < m; ++i) bound = std::max(bound, std::abs(g.c[static_cast<std::size_t>(i)] / lead));
  double lo = -1.0 - bound, hi = 1.0 + bound;
  const auto above = [&](double s) {
    for (const auto& d : ders)
      if (eval(d, s) * lead <= 0) return false;
    return true;
  };
  for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(1.0, std::abs(hi)); ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    (above(mid) ? hi : lo) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

double max_root_along_N(const Localization& L, std::span<const double> X) {
  const auto N = L.direction.flat();
  return max_real_root(restrict_to_line(L.p_loc, X, N));
}

GammaMembership gamma_membership_exact(const Localization& L, std::span<const Rational> X,
                                       const Rational& tol) {
  if (X.size() != L.p_loc.num_vars()) throw DimensionError("gamma_membership: dimension mismatch");
  const auto N = L.direction_exact();
  RationalUnivariate f = restrict_to_line(L.p_loc, X, N);
  f.trim();
  if (f.degree() < 1) throw PreconditionError("gamma_membership: p_loc(N) = 0");
  GammaMembership out;
  const SturmSequence sturm(squarefree_part(f));
  const Rational lo = -tol;
  const bool root_at_lo = eval(f, lo) == 0;
  out.member = sturm.count_above(lo) == 0 && !root_at_lo;
  out.boundary = root_at_lo || sturm.count_in(lo, tol) > 0;
  std::vector<double> Xf(X.size());
  for (std::size_t i = 0; i < X.size(); ++i) Xf[i] = X[i].get_d();
  out.margin = -max_root_along_N(L, Xf);
  return out;
}

GammaMembership gamma_membership(const Localization& L, const PhaseVector& X, double tol) {
  const auto x = X.exact();
  return gamma_membership_exact(L, x, Rational(tol));
}

std::vector<RationalVector> sigma_perp(const CharManifold& sigma) {
  const auto pt = sigma.rho.exact();
  std::vector<RationalVector> H;
  for (const auto& b : sigma.defining) H.push_back(hamilton_field_exact(b, pt));
  return H;
}

namespace {

struct Objective {
  std::function<double(const std::vector<double>&)> f;
  std::size_t evals = 0;
  std::size_t budget = 0;
  double operator()(const std::vector<double>& z) {
    ++evals;
    return f(z);
  }
  bool exhausted() const { return evals >= budget; }
};

/// Maximize over the unit sphere: coordinate and quasi-random starts, then
/// coordinate ascent with halving steps from the best start.
std::pair<std::vector<double>, double> sphere_maximize(Objective& obj, std::size_t dim,
                                                       std::uint64_t seed) {
  std::vector<double> best;
  double best_val = -std::numeric_limits<double>::infinity();
  const auto consider = [&](std::vector<double> z) {
    normalize(z);
    const double v = obj(z);
    if (v > best_val) {
      best_val = v;
      best = std::move(z);
    }
  };
  for (auto& e : SphereSampler::coordinate_directions(dim)) {
    if (obj.exhausted()) break;
    consider(std::move(e));
  }
  SphereSampler sampler(dim, seed);
  const std::size_t start_budget = obj.budget / 2;
  while (obj.evals < start_budget) consider(sampler.next());

  double h = 0.25;
  while (!obj.exhausted() && h > 1e-9) {
    bool improved = false;
    for (std::size_t i = 0; i < dim && !obj.exhausted(); ++i) {
      for (double s : {1.0, -1.0}) {
        if (obj.exhausted()) break;
        std::vector<double> z = best;
        z[i] += s * h;
        normalize(z);
        const double v = obj(z);
        if (v > best_val) {
          best_val = v;
          best = std::move(z);
          improved = true;
        }
      }
    }
    if (!improved) h *= 0.5;
  }
  return {best, best_val};
}

std::vector<double> round_all(std::vector<double> v, int bits = 24) {
  for (double& d : v) d = round_dyadic(d, bits);
  return v;
}

ConeWitness propagation_witness(std::span<const Rational> Y, const Rational& value) {
  ConeWitness w;
  w.kind = WitnessKind::propagation_witness;
  std::vector<double> y(Y.size());
  for (std::size_t i = 0; i < Y.size(); ++i) y[i] = Y[i].get_d();
  w.X = PhaseVector::from_flat(y);
  w.certificate["sigma_X_Y"] = format_rational(value);
  w.certificate["Y_in_gamma"] = "exact-sturm";
  return w;
}

}  // namespace

PropagationResult propagation_membership_exact(const Localization& L, const CharManifold& sigma,
                                               std::span<const Rational> X,
                                               const ConeSearchOptions& opts) {
  const std::size_t dim = L.p_loc.num_vars();
  if (X.size() != dim) throw DimensionError("propagation_membership: dimension mismatch");
  PropagationResult r;
  const RationalVector Xe(X.begin(), X.end());
  const auto Nx = L.direction_exact();
  const Rational sXN = symplectic_form_exact(Xe, Nx);

  const auto try_witness = [&](const RationalVector& Y, const char* note) {
    const Rational v = symplectic_form_exact(Xe, Y);
    if (v > 0 && gamma_membership_exact(L, Y, Rational(0)).member) {
      r.status = ConeStatus::non_member;
      r.witness = propagation_witness(Y, v);
      r.note = note;
      return true;
    }
    return false;
  };

  if (std::all_of(Xe.begin(), Xe.end(), [](const Rational& c) { return c == 0; })) {
    r.status = ConeStatus::member;
    r.note = "X = 0";
    return r;
  }
  if (sXN > 0 && try_witness(Nx, "sigma(X, N) > 0")) return r;

  // Gamma_rho is invariant under translation by T_rho Sigma, so any Y in T_rho Sigma with
  // sigma(X, Y) != 0 yields an exact witness N + lambda Y.
  const auto T = tangent_space(sigma);
  if (L.invariant_along(T)) {
    for (const auto& t : T) {
      const Rational st = symplectic_form_exact(Xe, t);
      if (st == 0) continue;
      const Rational lambda = (abs(sXN) / abs(st) + 1) * (st > 0 ? 1 : -1);
      if (try_witness(axpy(Nx, lambda, t), "sigma(X, .) does not vanish on T_rho Sigma")) return r;
    }
  }

  const auto Xf = to_double(Xe);
  const double xnorm = norm(Xf);
  if (sXN == 0) {
    // Z = (X.dxi; -X.dx) has sigma(X, Z) = |X|^2, and Z + sN lies in Gamma for s large.
    const std::size_t h = dim / 2;
    RationalVector Z(dim);
    for (std::size_t j = 0; j < h; ++j) {
      Z[j] = Xe[h + j];
      Z[h + j] = -Xe[j];
    }
    const double rmax = max_root_along_N(L, to_double(Z));
    const Rational s(std::ceil(rmax) + 1.0);
    if (try_witness(axpy(Z, s, Nx), "sigma(X, N) = 0 and X != 0")) return r;
  }

  // sigma(X, N) < 0: sup over Gamma of sigma(X, Z + sN) with s > r_max(Z) is
  // g(Z) = sigma(X, Z) + r_max(Z) sigma(X, N).
  const auto Nf = L.direction.flat();
  const double sxn = sXN.get_d();
  Objective obj;
  obj.budget = std::max<std::size_t>(opts.budget, 4 * dim + 8);
  obj.f = [&](const std::vector<double>& Z) {
    return (symplectic_form(Xf, Z) + max_root_along_N(L, Z) * sxn) / xnorm;
  };
  auto [Zbest, gbest] = sphere_maximize(obj, dim, opts.seed);
  r.samples = obj.evals;
  r.max_value = gbest;
  if (gbest <= opts.tol) {
    r.status = ConeStatus::member;
    std::ostringstream os;
    os << "sigma(X, Y) <= 0 on Gamma_rho up to sampling; max normalized value " << gbest << " over "
       << r.samples << " evaluations";
    r.note = os.str();
    return r;
  }
  // Build Y = Z + sN with r_max(Z) < s < sigma(X, Z) / |sigma(X, N)|, then re-verify exactly.
  const auto Zr = to_exact(round_all(Zbest));
  const double a = symplectic_form(Xf, to_double(Zr));
  const double rmax = max_root_along_N(L, to_double(Zr));
  const double upper = sxn < 0 ? a / -sxn : rmax + 1.0;
  for (double frac : {0.5, 0.25, 0.75, 0.1, 0.9}) {
    const Rational s(round_dyadic(rmax + frac * (upper - rmax), 40));
    if (try_witness(axpy(Zr, s, Nx), "positive value of sigma(X, .) on Gamma_rho")) {
      r.samples = obj.evals;
      r.max_value = gbest;
      return r;
    }
  }
  r.status = ConeStatus::undecided;
  r.note = "sampled maximum positive but exact re-verification of the witness failed";
  return r;
}

PropagationResult propagation_membership(const Localization& L, const CharManifold& sigma,
                                         const PhaseVector& X, const ConeSearchOptions& opts) {
  const auto x = X.exact();
  return propagation_membership_exact(L, sigma, x, opts);
}

TransversalityResult transversality_check(const Localization& L, const CharManifold& sigma,
                                          const ConeSearchOptions& opts) {
  TransversalityResult out;
  const std::size_t dim = L.p_loc.num_vars();
  const auto H = sigma_perp(sigma);
  const auto Nx = L.direction_exact();
  const std::size_t k = H.size() - 1;

  // (ii): Gamma_rho ∩ span{H_{b_1}, ..., H_{b_k}} != {} (alpha_0 = 0).
  if (k >= 1) {
    std::vector<std::vector<double>> Hf;
    for (std::size_t j = 1; j <= k; ++j) Hf.push_back(to_double(H[j]));
    const auto combine = [&](const std::vector<double>& alpha) {
      std::vector<double> X(dim, 0.0);
      for (std::size_t j = 0; j < k; ++j)
        for (std::size_t i = 0; i < dim; ++i) X[i] += alpha[j] * Hf[j][i];
      return X;
    };
    Objective obj;
    obj.budget = std::max<std::size_t>(opts.budget, 4 * k + 8);
    obj.f = [&](const std::vector<double>& alpha) {
      const auto X = combine(alpha);
      const double nx = norm(X);
      return nx == 0 ? -std::numeric_limits<double>::infinity() : -max_root_along_N(L, X) / nx;
    };
    auto [alpha, margin] = sphere_maximize(obj, k, opts.seed);
    out.samples += obj.evals;
    out.best_margin = margin;
    if (margin > opts.tol) {
      const auto a = to_exact(round_all(alpha));
      RationalVector X(dim);
      for (std::size_t j = 0; j < k; ++j) X = axpy(X, a[j], H[j + 1]);
      const auto gm = gamma_membership_exact(L, X, Rational(0));
      if (gm.member) {
        ConeWitness w;
        w.kind = WitnessKind::transversality_witness;
        w.X = PhaseVector::from_flat(to_double(X));
        for (std::size_t j = 0; j < k; ++j) w.certificate["alpha_" + std::to_string(j + 1)] = format_rational(a[j]);
        w.certificate["margin"] = std::to_string(gm.margin);
        w.certificate["sigma_X_N"] = format_rational(symplectic_form_exact(X, Nx));
        out.status = Transversality::transversal;
        out.witness = std::move(w);
        out.method = "gamma-perp-search";
        out.note = "X in span{H_b1..H_bk} ∩ Gamma_rho, verified by exact Sturm count";
        return out;
      }
    }
  }

  // (i): C_rho ∩ T_rho Sigma lies in T_rho Sigma ∩ (T_rho Sigma)^sigma because Gamma_rho is
  // invariant along T_rho Sigma. That intersection is {sum c_j H_j | J H c = 0}.
  if (!L.invariant_along(tangent_space(sigma))) {
    out.method = "none";
    out.note = "localization not invariant along T_rho Sigma; no certificate found";
    return out;
  }
  const RationalMatrix J = sigma.jacobian();
  const RationalMatrix Hm = RationalMatrix::from_columns(H);
  const auto coeffs = (J * Hm).kernel();
  std::vector<RationalVector> K;
  for (const auto& c : coeffs) K.push_back(Hm * c);
  if (K.empty()) {
    out.status = Transversality::transversal;
    out.method = "isotropic-intersection";
    out.note = "T_rho Sigma ∩ (T_rho Sigma)^sigma = {0}, so C_rho ∩ T_rho Sigma = {0}";
    return out;
  }

  std::vector<std::vector<double>> cand = SphereSampler::coordinate_directions(K.size());
  if (K.size() > 1) {
    SphereSampler sampler(K.size(), opts.seed + 1);
    while (cand.size() < 16) cand.push_back(sampler.next());
  }
  ConeSearchOptions sub = opts;
  sub.budget = std::max<std::size_t>(opts.budget / cand.size(), 64);
  std::size_t non_members = 0;
  for (const auto& c : cand) {
    RationalVector X(dim);
    const auto ce = to_exact(round_all(c));
    for (std::size_t a = 0; a < K.size(); ++a) X = axpy(X, ce[a], K[a]);
    X = unit_max(X);
    const auto pr = propagation_membership_exact(L, sigma, X, sub);
    out.samples += pr.samples;
    if (pr.status == ConeStatus::member) {
      ConeWitness w;
      w.kind = WitnessKind::propagation_witness;
      w.X = PhaseVector::from_flat(to_double(X));
      w.certificate["max_sigma_over_gamma"] = std::to_string(pr.max_value);
      w.certificate["samples"] = std::to_string(pr.samples);
      out.status = Transversality::non_transversal;
      out.witness = std::move(w);
      out.method = "tangent-cone-search";
      out.note = "X in T_rho Sigma with sigma(X, Y) <= 0 on sampled Gamma_rho: " + pr.note;
      return out;
    }
    if (pr.status == ConeStatus::non_member) ++non_members;
  }
  out.method = "both-searches";
  std::ostringstream os;
  os << "no Gamma_rho point in span{H_bj} (best margin " << out.best_margin << "); "
     << non_members << "/" << cand.size() << " tangent candidates refuted";
  out.note = os.str();
  return out;
}

BracketCriterion bracket_criterion(const CharManifold& sigma) {
  const std::size_t k1 = sigma.defining.size();
  const auto pt = sigma.rho.exact();
  BracketCriterion out;
  out.brackets = RationalMatrix(k1, k1);
  for (std::size_t i = 0; i < k1; ++i)
    for (std::size_t j = i + 1; j < k1; ++j) {
      const Rational v = poisson_bracket(sigma.defining[i], sigma.defining[j]).evaluate_exact(pt);
      out.brackets(i, j) = v;
      out.brackets(j, i) = -v;
    }
  out.determinant = out.brackets.determinant();
  out.nonsingular = out.determinant != 0;
  return out;
}

bool involutivity_check(const CharManifold& sigma) {
  return bracket_criterion(sigma).brackets.is_zero();
}

}  // namespace hypercone
