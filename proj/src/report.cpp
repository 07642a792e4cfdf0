#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <future>

#include <json.hpp>

#include "hypercone/report.hpp"
#include "hypercone/sampling.hpp"

#ifndef HYPERCONE_DATA_DIR
#define HYPERCONE_DATA_DIR "data"
#endif

namespace hypercone {

using json = nlohmann::json;

namespace {

struct Section {
  json body = json::object();
  std::map<std::string, std::string> artifacts;
  std::vector<std::string> undecided;
  std::string error;
  double seconds = 0;
};

template <class F>
Section timed(F&& f) {
  Section s;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    f(s);
  } catch (const std::exception& e) {
    s.error = e.what();
  }
  s.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return s;
}

json vec_json(const PhaseVector& v) { return {{"dx", v.dx}, {"dxi", v.dxi}}; }
json point_json(const PhasePoint& p) { return {{"x", p.x}, {"xi", p.xi}}; }

json exact_vec_json(const RationalVector& v) {
  json a = json::array();
  for (const auto& q : v) a.push_back(format_rational(q));
  return a;
}

json matrix_json(const RationalMatrix& M) {
  json rows = json::array();
  for (std::size_t i = 0; i < M.rows(); ++i) {
    json r = json::array();
    for (std::size_t j = 0; j < M.cols(); ++j) r.push_back(format_rational(M(i, j)));
    rows.push_back(r);
  }
  return rows;
}

json verdict_json(const HyperbolicityVerdict& v) {
  json j = {{"status", to_string(v.status)}, {"samples", v.samples_checked}, {"method", v.method}};
  if (v.witness) j["witness"] = vec_json(*v.witness);
  if (!v.note.empty()) j["note"] = v.note;
  return j;
}

json witness_json(const ConeWitness& w) {
  return {{"kind", to_string(w.kind)}, {"X", vec_json(w.X)}, {"certificate", w.certificate}};
}

json gevrey_json(const GevreyVerdict& v) {
  json j;
  switch (v.kind) {
    case GevreyVerdict::Kind::rational: j["G"] = v.to_string(); break;
    case GevreyVerdict::Kind::infinity: j["G"] = "inf"; break;
    case GevreyVerdict::Kind::interval: j["G"] = {{"lo", v.lo.get_str()}, {"hi", v.hi.get_str()}}; break;
    case GevreyVerdict::Kind::none: j["G"] = nullptr; break;
  }
  j["display"] = v.to_string();
  j["provenance"] = v.provenance;
  j["inputs"] = v.inputs;
  if (!v.note.empty()) j["note"] = v.note;
  return j;
}

json fit_json(const ExponentFit& f) {
  return {{"kappa", f.kappa},       {"slope", f.slope},           {"C", f.C},
          {"residual", f.residual}, {"band", f.band},             {"loo_max_dev", f.loo_max_dev},
          {"points_used", f.points_used}, {"polynomial_growth", f.polynomial_growth},
          {"poly_degree", f.poly_degree}, {"note", f.note}};
}

std::set<Analysis> with_prerequisites(std::set<Analysis> a) {
  if (a.count(Analysis::classify)) {
    a.insert(Analysis::order);
    a.insert(Analysis::localize);
    a.insert(Analysis::spectrum);
    a.insert(Analysis::cones);
  }
  if (a.count(Analysis::cones)) {
    a.insert(Analysis::order);
    a.insert(Analysis::localize);
  }
  if (a.count(Analysis::localize) || a.count(Analysis::spectrum)) a.insert(Analysis::order);
  return a;
}

// Starts rho + (u, v) inside {|v| < slope |u|, sign u = u_sign}, spread by Halton points.
std::vector<PhasePoint> cone_starts(const PhasePoint& rho, const ConeStartSpec& c) {
  std::vector<PhasePoint> out;
  const auto base = rho.flat();
  for (std::size_t i = 0; i < c.count; ++i) {
    auto f = base;
    const double u = c.radius * (0.25 + 0.75 * halton(i + 1, 2));
    const double v = 0.9 * c.slope * u * (2 * halton(i + 1, 3) - 1);
    f[c.u_var] += round_dyadic(c.u_sign * u, 30);
    f[c.v_var] += round_dyadic(v, 30);
    out.push_back(PhasePoint::from_flat(f));
  }
  return out;
}

Section run_flow(const AnalysisRequest& r, bool svg) {
  return timed([&](Section& s) {
    const auto& f = *r.flow;
    const PhasePolynomial& p = *r.symbol;
    IntegratorOptions opts;
    opts.rtol = f.rtol;
    opts.atol = f.atol;
    opts.direction = f.direction;
    std::vector<Trajectory> trs;
    json list = json::array();
    for (std::size_t i = 0; i < f.starts.size(); ++i) {
      Trajectory tr = integrate(p, f.starts[i], f.t_end, opts);
      list.push_back({{"start", point_json(f.starts[i])},
                      {"end", point_json(tr.back())},
                      {"t_final", tr.samples.back().t},
                      {"direction", tr.direction},
                      {"steps", tr.steps},
                      {"rejected", tr.rejected},
                      {"p_drift", tr.p_drift},
                      {"truncated", tr.truncated}});
      s.artifacts["flow_" + std::to_string(i) + ".csv"] = trajectory_csv(p, tr);
      trs.push_back(std::move(tr));
    }
    s.body["trajectories"] = list;
    if (f.cone) {
      const auto& c = *f.cone;
      PlanarCone cone;
      cone.rho = *r.rho;
      cone.u_var = c.u_var;
      cone.v_var = c.v_var;
      cone.slope = c.slope;
      cone.u_sign = c.u_sign;
      IntegratorOptions o2 = opts;
      const auto starts = cone_starts(*r.rho, c);
      const ArrivalStats st = cone_arrival_probe(p, cone, starts, c.t_max, c.threshold, o2);
      bool maintained = true;
      std::size_t max_steps = 0;
      json recs = json::array();
      for (const auto& rec : st.records) {
        maintained = maintained && rec.cone_maintained;
        max_steps = std::max(max_steps, rec.steps);
        recs.push_back({{"start", point_json(rec.start)},
                        {"arrived", rec.arrived},
                        {"cone_maintained", rec.cone_maintained},
                        {"final_radius_ratio", rec.final_radius_ratio},
                        {"t_final", rec.t_final},
                        {"direction", rec.direction},
                        {"steps", rec.steps},
                        {"p_drift", rec.p_drift}});
      }
      s.body["cone_arrival"] = {{"starts", st.records.size()}, {"arrived", st.arrived},
                                {"fraction", st.fraction},     {"max_p_drift", st.max_p_drift},
                                {"threshold", st.threshold},   {"cone_maintained", maintained},
                                {"max_steps", max_steps},      {"records", recs}};
    }
    if (svg && !trs.empty()) {
      // The first coordinate pair that moves is the most informative default view.
      const std::size_t u = f.cone ? f.cone->u_var : 0;
      const std::size_t v = f.cone ? f.cone->v_var : static_cast<std::size_t>(r.n + 1);
      s.artifacts["flow.svg"] = phase_portrait_svg(trs, u, v, r.name.empty() ? "flow" : r.name);
    }
  });
}

Section run_sweep(const AnalysisRequest& r, bool svg) {
  return timed([&](Section& s) {
    const auto& sp = *r.sweep;
    const ModelOperator M = sp.model();
    SweepOptions o;
    o.T = sp.T;
    o.rtol = sp.rtol;
    const auto grid = frequency_grid(sp.log10_lo, sp.log10_hi, sp.count);
    const GrowthReport g = growth_report(M, grid, o);
    json pts = json::array();
    for (const auto& p : g.sweep.points)
      pts.push_back({{"xi", p.xi}, {"logG", p.log_G}, {"logE_final", p.log_E_final},
                     {"precision", to_string(p.precision)}, {"steps", p.steps}, {"ok", p.ok}, {"note", p.note}});
    s.body["operator"] = M.to_string();
    s.body["order"] = M.order();
    s.body["lower_order_bound"] = M.lower_order_bound;
    s.body["T"] = sp.T;
    s.body["points"] = pts;
    s.body["gaps"] = g.sweep.gaps;
    s.body["fit"] = fit_json(g.fit);
    s.body["fit_half_T"] = fit_json(g.fit_half);
    s.body["kappa_T_vs_half_T"] = std::abs(g.fit.kappa - g.fit_half.kappa);
    s.artifacts["sweep.csv"] = sweep_csv(g.sweep);
    s.artifacts["sweep_half_T.csv"] = sweep_csv(g.half);
    if (svg) s.artifacts["sweep.svg"] = sweep_svg(g.sweep, M.description);
  });
}

Section run_weights(const AnalysisRequest& r) {
  return timed([&](Section& s) {
    const auto& w = *r.weights;
    const CharManifold sigma(r.manifold, *r.rho);
    std::vector<double> alpha = w.alpha;
    if (alpha.empty()) alpha.assign(static_cast<std::size_t>(sigma.k()), 0.0);
    const WeightConfig cfg(w.m, w.eps_star, w.gammas.front(), alpha, sigma);
    s.body["delta"] = format_rational(cfg.delta());
    s.body["rho"] = format_rational(cfg.rho_exp());
    s.body["kappa"] = format_rational(cfg.kappa());
    s.body["identities"] = {{"rho_plus_delta_is_1", cfg.rho_exp() + cfg.delta() == 1},
                            {"kappa_plus_2delta_is_1", cfg.kappa() + 2 * cfg.delta() == 1}};
    json bounds = json::array();
    for (double g : w.gammas) {
      const auto c = cfg.with_gamma(g);
      const auto b = weight_bounds(c, weight_grid_points(c, {}));
      bounds.push_back({{"gamma", g}, {"C_upper", b.C_upper}, {"C_lower", b.C_lower},
                        {"omega_below_phi", b.omega_below_phi}, {"points", b.points}});
    }
    s.body["phi_plus_omega_bounds"] = bounds;
    const RootProductReport L = root_product_probe(*r.symbol, cfg, w.eps, w.gammas);
    json stab = json::array();
    for (const auto& st : L.stability)
      stab.push_back({{"eps", st.eps}, {"k", st.k}, {"j", st.j}, {"spread", st.spread}, {"stable", st.stable}});
    s.body["root_products"] = {{"points_per_gamma", L.points_per_gamma}, {"all_positive", L.all_positive},
                               {"all_stable", L.all_stable},       {"max_spread", L.max_spread},
                               {"stability", stab}};
    s.artifacts["root_products.csv"] = root_product_csv(L);
    json env = json::object();
    for (Envelope e : w.envelopes) {
      const EnvelopeReport er = derivative_bound_probe(*r.symbol, cfg, e, w.gammas, {}, w.fd_step, w.eps.front());
      json rows = json::array();
      for (const auto& row : er.rows) rows.push_back({{"gamma", row.gamma}, {"max_ratio", row.max_ratio}});
      env[to_string(e)] = {{"C", er.C}, {"divergent", er.divergent}, {"rows", rows}, {"note", er.note}};
      s.artifacts["envelope_" + to_string(e) + ".csv"] = envelope_csv(er);
    }
    s.body["envelopes"] = env;
  });
}

}  // namespace

ReportBundle run(const AnalysisRequest& r, bool svg) {
  const auto t0 = std::chrono::steady_clock::now();
  const std::set<Analysis> todo = with_prerequisites(r.analyses);
  auto has = [&](Analysis a) { return todo.count(a) > 0; };

  // Independent analyses run alongside the characteristic chain.
  std::future<Section> flow, sweep, weights;
  if (has(Analysis::flow)) flow = std::async(std::launch::async, run_flow, std::cref(r), svg);
  if (has(Analysis::sweep)) sweep = std::async(std::launch::async, run_sweep, std::cref(r), svg);
  if (has(Analysis::weights)) weights = std::async(std::launch::async, run_weights, std::cref(r));

  std::map<Analysis, Section> done;
  ConeSearchOptions copts;
  copts.budget = r.options.budget;
  copts.seed = r.options.seed;
  copts.tol = r.options.tol;

  std::optional<int> order;
  std::optional<Localization> loc;
  std::optional<SpectrumReport> spec;
  std::optional<CharManifold> sigma;
  std::optional<TransversalityResult> trans;
  std::optional<HyperbolicityVerdict> quotient;
  bool involutive = false;
  auto blocked = [&](Section& s, const char* what) { throw PreconditionError(std::string("skipped: ") + what); (void)s; };

  if (has(Analysis::order)) {
    done[Analysis::order] = timed([&](Section& s) {
      order = characteristic_order(*r.symbol, *r.rho);
      s.body["characteristic_order"] = *order;
      s.body["degree"] = r.symbol->total_degree();
    });
  }
  if (has(Analysis::localize)) {
    done[Analysis::localize] = timed([&](Section& s) {
      if (!order) blocked(s, "order failed");
      loc = localize(*r.symbol, *r.rho);
      s.body["order"] = loc->order;
      s.body["p_loc"] = loc->p_loc.to_string();
      s.body["direction"] = vec_json(loc->direction);
      s.body["direction_noncharacteristic"] = loc->direction_noncharacteristic();
      SamplingOptions so;
      so.seed = r.options.seed;
      so.samples = std::min<std::size_t>(r.options.budget, 512);
      if (loc->direction_noncharacteristic()) {
        const auto hv = is_hyperbolic(loc->p_loc, loc->direction, so);
        s.body["hyperbolic"] = verdict_json(hv);
        if (hv.status == Decision::undecided) s.undecided.push_back("localize.hyperbolic");
      }
    });
  }
  if (has(Analysis::spectrum)) {
    done[Analysis::spectrum] = timed([&](Section& s) {
      if (!order) blocked(s, "order failed");
      const HamiltonMap F = hamilton_map(*r.symbol, *r.rho);
      spec = classify_spectrum(F, r.options.tol);
      json ev = json::array();
      for (auto z : spec->eigenvalues) ev.push_back({z.real(), z.imag()});
      s.body["F"] = matrix_json(F.exact);
      s.body["eigenvalues"] = ev;
      s.body["has_nonzero_real"] = spec->has_nonzero_real;
      s.body["real_pair_count"] = spec->real_pair_count;
      s.body["dim_W"] = spec->dim_W;
      s.body["ambiguous"] = spec->ambiguous;
      s.body["method"] = spec->method;
      s.body["norm_F"] = spec->norm_F;
      if (spec->ambiguous) s.undecided.push_back("spectrum");
    });
  }
  if (has(Analysis::cones)) {
    done[Analysis::cones] = timed([&](Section& s) {
      if (!loc) blocked(s, "localize failed");
      sigma.emplace(r.manifold, *r.rho);
      s.body["codimension"] = sigma->codimension();
      json perp = json::array();
      for (const auto& h : sigma_perp(*sigma)) perp.push_back(exact_vec_json(h));
      s.body["sigma_perp"] = perp;
      const auto bc = bracket_criterion(*sigma);
      s.body["brackets"] = {{"matrix", matrix_json(bc.brackets)},
                            {"determinant", format_rational(bc.determinant)},
                            {"nonsingular", bc.nonsingular}};
      involutive = involutivity_check(*sigma);
      s.body["involutive"] = involutive;
      s.body["p_loc_invariant_along_tangent"] = loc->invariant_along(tangent_space(*sigma));
      trans = transversality_check(*loc, *sigma, copts);
      json t = {{"status", to_string(trans->status)}, {"method", trans->method}, {"samples", trans->samples},
                {"best_margin", trans->best_margin}};
      if (trans->witness) t["witness"] = witness_json(*trans->witness);
      if (!trans->note.empty()) t["note"] = trans->note;
      s.body["transversality"] = t;
      if (trans->status == Transversality::undecided) s.undecided.push_back("cones.transversality");
      SamplingOptions so;
      so.seed = r.options.seed;
      so.samples = std::min<std::size_t>(r.options.budget, 512);
      quotient = is_strictly_hyperbolic_on_quotient(*loc, *sigma, so);
      s.body["quotient_strictly_hyperbolic"] = verdict_json(*quotient);
      if (quotient->status == Decision::undecided) s.undecided.push_back("cones.quotient_strictly_hyperbolic");
    });
  }
  if (has(Analysis::classify)) {
    done[Analysis::classify] = timed([&](Section& s) {
      if (!order || !sigma) blocked(s, "prerequisites failed");
      const int m = *order;
      if (m < 2) throw PreconditionError("classify: rho is not a multiple characteristic (order " + std::to_string(m) + ")");
      GevreyVerdict v;
      if (involutive) {
        s.body["rule"] = "involutive";
        v = classify_involutive(*sigma, *r.symbol, m);
      } else if (m == 2) {
        s.body["rule"] = "double";
        if (!spec) blocked(s, "spectrum failed");
        if (!r.classify.double_flags) throw PreconditionError("classify: m = 2 requires asserted \"double_flags\"");
        BicharGeometry geo;
        if (r.classify.geometry) {
          geo.mode = *r.classify.geometry;
          geo.source = GeometrySource::user_supplied;
        } else {
          const GeometryProbe gp = bichar_geometry_probe(*r.symbol, *sigma);
          geo = gp.geometry;
          s.body["geometry_probe"] = {{"transversal_lines", gp.transversal_lines},
                                      {"tangent_lines", gp.tangent_lines},
                                      {"trajectories", gp.trajectories.size()},
                                      {"note", gp.note}};
        }
        s.body["geometry"] = {{"mode", to_string(geo.mode)}, {"source", to_string(geo.source)}};
        v = classify_double(*spec, geo, sigma->codimension(), *r.classify.double_flags);
      } else {
        s.body["rule"] = "order_m";
        if (!trans || !quotient) blocked(s, "cones failed");
        v = classify_order_m(quotient->status, trans->status, m);
      }
      s.body["verdict"] = gevrey_json(v);
      if (!v.has_value()) s.undecided.push_back("classify");
      if (r.lower_order && r.classify.levi_kappa) {
        json lv = json::array();
        for (const auto& viol : ivrii_levi_filter(*r.lower_order, *r.rho, m, *r.classify.levi_kappa))
          lv.push_back({{"order", viol.order}, {"value", format_rational(viol.value)}});
        s.body["levi_violations"] = lv;
      }
    });
  }
  if (flow.valid()) done[Analysis::flow] = flow.get();
  if (sweep.valid()) done[Analysis::sweep] = sweep.get();
  if (weights.valid()) done[Analysis::weights] = weights.get();

  ReportBundle b;
  json report, meta, executed = json::array(), requested = json::array();
  report["schema"] = kSchema;
  report["name"] = r.name;
  report["options"] = {{"seed", r.options.seed}, {"budget", r.options.budget}, {"tol", r.options.tol}};
  for (auto a : r.analyses) requested.push_back(to_string(a));
  report["requested"] = requested;
  json analyses = json::object(), errors = json::object(), timings = json::object();
  for (auto& [a, sec] : done) {
    const std::string name = to_string(a);
    executed.push_back(name);
    if (!sec.error.empty()) {
      errors[name] = sec.error;
      b.errors[name] = sec.error;
    } else {
      analyses[name] = sec.body;
    }
    for (auto& u : sec.undecided) b.undecided.push_back(u);
    for (auto& [fname, content] : sec.artifacts) b.artifacts[fname] = content;
    timings[name] = sec.seconds;
  }
  report["executed"] = executed;
  report["analyses"] = analyses;
  report["errors"] = errors;
  report["undecided"] = b.undecided;
  b.exit_code = !b.errors.empty() ? 1 : (!b.undecided.empty() ? 2 : 0);
  report["status"] = b.exit_code == 0 ? "ok" : (b.exit_code == 2 ? "undecided" : "error");
  report["exit_code"] = b.exit_code;
  b.report = report.dump(2) + "\n";

  const auto now = std::chrono::system_clock::now();
  meta["schema"] = kSchema;
  meta["name"] = r.name;
  meta["started_unix"] = std::chrono::duration<double>(now.time_since_epoch()).count();
  meta["seconds"] = timings;
  meta["total_seconds"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  b.metadata = meta.dump(2) + "\n";
  return b;
}

void write_bundle(const ReportBundle& b, const std::string& out_dir, const std::string& stem) {
  namespace fs = std::filesystem;
  fs::create_directories(out_dir);
  auto write = [&](const std::string& name, const std::string& content) {
    std::ofstream out(fs::path(out_dir) / name, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + (fs::path(out_dir) / name).string());
    out << content;
  };
  write(stem + ".report.json", b.report);
  write(stem + ".meta.json", b.metadata);
  for (const auto& [name, content] : b.artifacts) write(stem + "." + name, content);
}

std::string bundled_requests_dir() {
  if (const char* env = std::getenv("HYPERCONE_DATA_DIR"); env && *env)
    return (std::filesystem::path(env) / "requests").string();
  return (std::filesystem::path(HYPERCONE_DATA_DIR) / "requests").string();
}

}  // namespace hypercone
