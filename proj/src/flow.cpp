#include "hypercone/flow.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "dopri_tableau.hpp"
#include "hypercone/sampling.hpp"
#include "hypercone/symplectic.hpp"

namespace hypercone {

HamiltonField::HamiltonField(const PhasePolynomial& p) : p_(p) {
  const int n = p.n();
  const auto h = static_cast<std::size_t>(n + 1);
  comps_.resize(2 * h);
  for (std::size_t j = 0; j < h; ++j) {
    comps_[j] = partial(p, h + j);
    comps_[h + j] = -partial(p, j);
  }
}

void HamiltonField::operator()(const std::vector<double>& y, std::vector<double>& dy) const {
  dy.resize(comps_.size());
  for (std::size_t i = 0; i < comps_.size(); ++i) dy[i] = comps_[i].evaluate_flat(y);
}

namespace {

using namespace dopri;

double vnorm(const std::vector<double>& v) {
  double s = 0;
  for (double d : v) s += d * d;
  return std::sqrt(s);
}

double distance(const PhasePoint& a, const PhasePoint& b) {
  const auto fa = a.flat(), fb = b.flat();
  double s = 0;
  for (std::size_t i = 0; i < fa.size(); ++i) s += (fa[i] - fb[i]) * (fa[i] - fb[i]);
  return std::sqrt(s);
}

}  // namespace

PhasePoint Trajectory::at(double t) const {
  if (samples.empty()) throw PreconditionError("Trajectory::at: empty trajectory");
  if (t <= samples.front().t) return samples.front().point;
  if (t >= samples.back().t) return samples.back().point;
  auto it = std::upper_bound(samples.begin(), samples.end(), t,
                             [](double v, const FlowSample& s) { return v < s.t; });
  const std::size_t i = static_cast<std::size_t>(it - samples.begin()) - 1;
  const double h = samples[i + 1].t - samples[i].t;
  const double th = (t - samples[i].t) / h, th1 = 1 - th;
  const auto& r = dense[i];
  std::vector<double> y(r[0].size());
  for (std::size_t k = 0; k < y.size(); ++k)
    y[k] = r[0][k] + th * (r[1][k] + th1 * (r[2][k] + th * (r[3][k] + th1 * r[4][k])));
  return PhasePoint::from_flat(y);
}

Trajectory integrate(const PhasePolynomial& p, const PhasePoint& start, double t_end,
                     const IntegratorOptions& opts) {
  return integrate(HamiltonField(p), start, t_end, opts);
}

Trajectory integrate(const HamiltonField& field, const PhasePoint& start, double t_end,
                     const IntegratorOptions& opts) {
  if (start.n() != field.symbol().n()) throw DimensionError("integrate: dimension mismatch");
  if (!(t_end > 0)) throw PreconditionError("integrate: t_end must be positive");
  if (opts.direction != 1 && opts.direction != -1) throw PreconditionError("integrate: direction must be +-1");

  Trajectory tr;
  tr.direction = opts.direction;
  tr.rtol = opts.rtol;
  tr.atol = opts.atol;
  const double dir = opts.direction;
  const auto f = [&](const std::vector<double>& y, std::vector<double>& dy) {
    field(y, dy);
    for (double& d : dy) d *= dir;
  };
  const auto& p = field.symbol();
  const auto record_drift = [&](const std::vector<double>& y) {
    tr.p_drift = std::max(tr.p_drift, std::abs(p.evaluate_flat(y)) / opts.drift_scale);
  };

  std::vector<double> y = start.flat();
  const std::size_t N = y.size();
  std::vector<double> k1(N), k2(N), k3(N), k4(N), k5(N), k6(N), k7(N), yt(N), ynew(N);
  double t = 0;
  tr.samples.push_back({t, start});
  record_drift(y);
  f(y, k1);

  double h = opts.h0;
  if (h <= 0) {
    const double d0 = vnorm(y), d1n = vnorm(k1);
    h = (d0 < 1e-5 || d1n < 1e-5) ? 1e-6 : 0.01 * d0 / d1n;
    h = std::min(h, t_end);
  }
  const auto scaled_err = [&](const std::vector<double>& err) {
    double s = 0;
    for (std::size_t i = 0; i < N; ++i) {
      const double sc = opts.atol + opts.rtol * std::max(std::abs(y[i]), std::abs(ynew[i]));
      s += (err[i] / sc) * (err[i] / sc);
    }
    return std::sqrt(s / static_cast<double>(N));
  };

  std::vector<double> err(N);
  while (t < t_end) {
    if (tr.steps >= opts.max_steps) {
      tr.truncated = true;
      tr.note = "step limit reached";
      break;
    }
    if (h < 1e-14 * std::max(1.0, std::abs(t))) {
      tr.truncated = true;
      tr.note = "step size underflow";
      break;
    }
    const bool last = t + h >= t_end;
    if (last) h = t_end - t;
    for (std::size_t i = 0; i < N; ++i) yt[i] = y[i] + h * a21 * k1[i];
    f(yt, k2);
    for (std::size_t i = 0; i < N; ++i) yt[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
    f(yt, k3);
    for (std::size_t i = 0; i < N; ++i) yt[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
    f(yt, k4);
    for (std::size_t i = 0; i < N; ++i)
      yt[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
    f(yt, k5);
    for (std::size_t i = 0; i < N; ++i)
      yt[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
    f(yt, k6);
    for (std::size_t i = 0; i < N; ++i)
      ynew[i] = y[i] + h * (a71 * k1[i] + a73 * k3[i] + a74 * k4[i] + a75 * k5[i] + a76 * k6[i]);
    f(ynew, k7);
    for (std::size_t i = 0; i < N; ++i)
      err[i] = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
    const double e = scaled_err(err);

    if (e <= 1.0) {
      std::array<std::vector<double>, 5> r;
      r[0] = y;
      r[1].resize(N);
      r[2].resize(N);
      r[3].resize(N);
      r[4].resize(N);
      for (std::size_t i = 0; i < N; ++i) {
        r[1][i] = ynew[i] - y[i];
        r[2][i] = h * k1[i] - r[1][i];
        r[3][i] = r[1][i] - h * k7[i] - r[2][i];
        r[4][i] = h * (d1 * k1[i] + d3 * k3[i] + d4 * k4[i] + d5 * k5[i] + d6 * k6[i] + d7 * k7[i]);
      }
      tr.dense.push_back(std::move(r));
      t = last ? t_end : t + h;
      y = ynew;
      k1 = k7;
      ++tr.steps;
      const PhasePoint q = PhasePoint::from_flat(y);
      tr.samples.push_back({t, q});
      record_drift(y);
      if (opts.stop && opts.stop(q)) {
        tr.stopped = true;
        break;
      }
      const double fac = e == 0 ? 5.0 : std::clamp(0.9 * std::pow(e, -0.2), 0.2, 5.0);
      h *= fac;
    } else {
      ++tr.rejected;
      h *= std::max(0.2, 0.9 * std::pow(e, -0.2));
    }
  }
  return tr;
}

bool PlanarCone::contains(const PhasePoint& q) const {
  const auto f = q.flat(), r = rho.flat();
  const double u = f[u_var] - r[u_var], v = f[v_var] - r[v_var];
  return u * u_sign > 0 && std::abs(v) < slope * std::abs(u);
}

ArrivalStats cone_arrival_probe(const PhasePolynomial& p, const PlanarCone& cone,
                                const std::vector<PhasePoint>& starts, double t_max,
                                double threshold, IntegratorOptions opts) {
  ArrivalStats stats;
  stats.threshold = threshold;
  const HamiltonField field(p);
  for (const auto& s : starts) {
    ArrivalRecord rec;
    rec.start = s;
    const double r0 = distance(s, cone.rho);
    if (r0 == 0) {
      rec.arrived = true;
      rec.final_radius_ratio = 0;
      ++stats.arrived;
      stats.records.push_back(rec);
      continue;
    }
    if (!cone.contains(s)) throw PreconditionError("cone_arrival_probe: start outside the cone");
    // Pick the direction in which |X - rho|^2 decreases initially.
    std::vector<double> dy;
    const auto y = s.flat(), r = cone.rho.flat();
    field(y, dy);
    double rate = 0;
    for (std::size_t i = 0; i < y.size(); ++i) rate += (y[i] - r[i]) * dy[i];
    opts.direction = rate <= 0 ? 1 : -1;
    bool inside = true;
    opts.stop = [&](const PhasePoint& q) {
      if (!cone.contains(q) && distance(q, cone.rho) > 0) inside = false;
      return !inside || distance(q, cone.rho) < threshold * r0;
    };
    const Trajectory tr = integrate(field, s, t_max, opts);
    rec.direction = opts.direction;
    rec.cone_maintained = inside;
    rec.final_radius_ratio = distance(tr.back(), cone.rho) / r0;
    rec.arrived = inside && rec.final_radius_ratio < threshold;
    rec.t_final = tr.samples.back().t;
    rec.steps = tr.steps;
    rec.p_drift = tr.p_drift;
    stats.max_p_drift = std::max(stats.max_p_drift, tr.p_drift);
    if (rec.arrived) ++stats.arrived;
    stats.records.push_back(rec);
  }
  stats.fraction = starts.empty() ? 0.0 : static_cast<double>(stats.arrived) / static_cast<double>(starts.size());
  return stats;
}

double sigma_distance(const CharManifold& sigma, const PhasePoint& q) {
  const auto f = q.flat();
  double s = 0;
  for (const auto& b : sigma.defining) {
    const double v = b.evaluate_flat(f);
    s += v * v;
  }
  return std::sqrt(s);
}

namespace {

std::vector<double> gamma_direction(const PhasePolynomial& p, const PhasePolynomial& dp_dxi0,
                                    const PhasePoint& q) {
  const auto f = q.flat();
  auto H = hamilton_field(p, q).flat();
  const double g = dp_dxi0.evaluate_flat(f) >= 0 ? 1.0 : -1.0;
  double m = 0;
  for (double v : H) m = std::max(m, std::abs(v));
  if (m > 0)
    for (double& v : H) v *= g / m;
  return H;
}

}  // namespace

std::vector<LimitDirection> limit_direction_probe(const PhasePolynomial& p, const Localization& L,
                                                  const CharManifold& sigma,
                                                  const std::vector<Trajectory>& trajectories,
                                                  double approach_ratio,
                                                  const ConeSearchOptions& cone_opts) {
  const PhasePolynomial dp0 = partial(p, xi_var(p.n(), 0));
  std::vector<LimitDirection> out;
  for (const auto& tr : trajectories) {
    LimitDirection ld;
    if (tr.samples.size() < 2) {
      ld.skipped = true;
      ld.note = "empty trajectory";
      out.push_back(ld);
      continue;
    }
    const double d0 = sigma_distance(sigma, tr.samples.front().point);
    const double df = sigma_distance(sigma, tr.back());
    ld.final_distance = df;
    if (!(df <= approach_ratio * d0)) {
      ld.skipped = true;
      ld.note = "trajectory does not approach Sigma";
      out.push_back(ld);
      continue;
    }
    const auto Xf = gamma_direction(p, dp0, tr.back());
    // Direction one decade of distance earlier, for a convergence estimate.
    std::size_t k = tr.samples.size() - 1;
    while (k > 0 && sigma_distance(sigma, tr.samples[k].point) < 10 * df) --k;
    const auto Xk = gamma_direction(p, dp0, tr.samples[k].point);
    for (std::size_t i = 0; i < Xf.size(); ++i) ld.spread = std::max(ld.spread, std::abs(Xf[i] - Xk[i]));

    std::vector<double> snapped(Xf.size());
    for (std::size_t i = 0; i < Xf.size(); ++i) snapped[i] = round_dyadic(Xf[i], 16);
    ld.X = PhaseVector::from_flat(snapped);
    const auto pr = propagation_membership(L, sigma, ld.X, cone_opts);
    ld.cone_check = pr.status;
    ld.inconsistent = pr.status == ConeStatus::non_member;
    ld.note = pr.note;
    out.push_back(std::move(ld));
  }
  return out;
}

GeometryProbe bichar_geometry_probe(const PhasePolynomial& p, const CharManifold& sigma, double eps,
                                    double t_max) {
  GeometryProbe g;
  g.geometry.source = GeometrySource::numeric_probe;
  const HamiltonMap F = hamilton_map(p, sigma.rho);
  const Localization L = localize(p, sigma.rho);
  const double scale = std::max(1.0, F.F.norm());
  Eigen::EigenSolver<Eigen::MatrixXd> es(F.F);
  const auto rho = sigma.rho.flat();
  const HamiltonField field(p);
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    const auto lambda = es.eigenvalues()(i);
    if (std::abs(lambda.imag()) > 1e-9 * scale || std::abs(lambda.real()) <= 1e-9 * scale) continue;
    Eigen::VectorXd v = es.eigenvectors().col(i).real();
    v /= v.norm();
    for (double s : {1.0, -1.0}) {
      std::vector<double> y(rho);
      for (std::size_t j = 0; j < y.size(); ++j) y[j] += s * eps * v(static_cast<Eigen::Index>(j));
      const PhasePoint start = PhasePoint::from_flat(y);
      const double d0 = sigma_distance(sigma, start);
      IntegratorOptions opts;
      opts.direction = lambda.real() > 0 ? -1 : 1;
      opts.stop = [&](const PhasePoint& q) { return sigma_distance(sigma, q) < 1e-6 * d0; };
      g.trajectories.push_back(integrate(field, start, t_max, opts));
    }
  }
  g.directions = limit_direction_probe(p, L, sigma, g.trajectories);

  const RationalMatrix J = sigma.jacobian();
  const auto Jd = J.to_double_row_major();
  std::vector<std::vector<double>> transversal, tangent;
  const auto seen = [](const std::vector<std::vector<double>>& lines, const std::vector<double>& X) {
    for (const auto& l : lines) {
      double dp = 0, dm = 0;
      for (std::size_t i = 0; i < X.size(); ++i) {
        dp = std::max(dp, std::abs(l[i] - X[i]));
        dm = std::max(dm, std::abs(l[i] + X[i]));
      }
      if (std::min(dp, dm) < 1e-3) return true;
    }
    return false;
  };
  for (const auto& d : g.directions) {
    if (d.skipped) continue;
    const auto X = d.X.flat();
    double jx = 0;
    for (std::size_t r = 0; r < J.rows(); ++r) {
      double s = 0;
      for (std::size_t c = 0; c < J.cols(); ++c) s += Jd[r * J.cols() + c] * X[c];
      jx = std::max(jx, std::abs(s));
    }
    auto& bucket = jx > 1e-6 ? transversal : tangent;
    if (!seen(bucket, X)) bucket.push_back(X);
  }
  g.transversal_lines = transversal.size();
  g.tangent_lines = tangent.size();
  if (!transversal.empty()) g.geometry.mode = BicharMode::transversal_bichar_exists;
  else if (!tangent.empty()) g.geometry.mode = BicharMode::tangent_bichar_exists;
  else g.geometry.mode = BicharMode::unknown;
  std::ostringstream os;
  os << g.trajectories.size() << " eigen-direction launches, " << g.transversal_lines
     << " transversal and " << g.tangent_lines << " tangent limit lines";
  g.note = os.str();
  return g;
}

std::string trajectory_csv(const PhasePolynomial& p, const Trajectory& tr) {
  std::ostringstream os;
  os.precision(17);
  const int n = p.n();
  os << "t";
  for (int j = 0; j <= n; ++j) os << ",x" << j;
  for (int j = 0; j <= n; ++j) os << ",xi" << j;
  os << ",p_value\n";
  for (const auto& s : tr.samples) {
    os << s.t * tr.direction;
    const auto f = s.point.flat();
    for (double v : f) os << "," << v;
    os << "," << p.evaluate_flat(f) << "\n";
  }
  return os.str();
}

std::string phase_portrait_svg(const std::vector<Trajectory>& trs, std::size_t u_var, std::size_t v_var,
                               const std::string& title) {
  double umin = std::numeric_limits<double>::infinity(), umax = -umin, vmin = umin, vmax = -umin;
  for (const auto& tr : trs)
    for (const auto& s : tr.samples) {
      const auto f = s.point.flat();
      umin = std::min(umin, f[u_var]);
      umax = std::max(umax, f[u_var]);
      vmin = std::min(vmin, f[v_var]);
      vmax = std::max(vmax, f[v_var]);
    }
  if (!(umax > umin)) umax = umin + 1;
  if (!(vmax > vmin)) vmax = vmin + 1;
  const double W = 480, H = 480, pad = 40;
  const auto X = [&](double u) { return pad + (u - umin) / (umax - umin) * (W - 2 * pad); };
  const auto Y = [&](double v) { return H - pad - (v - vmin) / (vmax - vmin) * (H - 2 * pad); };
  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\">\n"
     << "<text x=\"" << pad << "\" y=\"20\" font-size=\"12\">" << title << "</text>\n"
     << "<rect x=\"" << pad << "\" y=\"" << pad << "\" width=\"" << W - 2 * pad << "\" height=\"" << H - 2 * pad
     << "\" fill=\"none\" stroke=\"#999\"/>\n";
  for (const auto& tr : trs) {
    os << "<polyline fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"1\" points=\"";
    for (const auto& s : tr.samples) {
      const auto f = s.point.flat();
      os << X(f[u_var]) << "," << Y(f[v_var]) << " ";
    }
    os << "\"/>\n";
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace hypercone
