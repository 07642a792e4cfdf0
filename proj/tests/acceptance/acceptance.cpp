#include <chrono>
#include <cmath>
#include <filesystem>
#include <functional>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <json.hpp>

#include "../generators.hpp"
#include "hypercone/catalog.hpp"
#include "hypercone/report.hpp"
#include "hypercone/sampling.hpp"
#include "hypercone/symplectic.hpp"

using namespace hypercone;
using json = nlohmann::json;

namespace {

// Collects failed checks of one criterion; the criterion passes when none failed.
struct Check {
  std::vector<std::string> failures;
  std::vector<std::string> info;

  void expect(bool ok, const std::string& what) {
    if (!ok) failures.push_back(what);
  }
  void note(const std::string& s) { info.push_back(s); }
};

std::string fmt(double v, int prec = 4) {
  std::ostringstream o;
  o << std::setprecision(prec) << v;
  return o.str();
}

json run_file(const std::string& name, Check& c) {
  const auto path = (std::filesystem::path(bundled_requests_dir()) / name).string();
  const ReportBundle b = run(parse_request_file(path));
  for (const auto& [a, msg] : b.errors) c.expect(false, name + ": " + a + " failed: " + msg);
  return json::parse(b.report);
}

bool is_zero(const RationalVector& v) {
  return std::all_of(v.begin(), v.end(), [](const Rational& q) { return q == 0; });
}

void criterion1(Check& c) {
  gen::Gen g(1);
  const RationalVector X{1, 1, 0, 0, 0, 0};
  for (int i = 0; i < 1000; ++i) {
    const auto Y = g.rational_vector(6, 9, 7);
    if (symplectic_form_exact(X, Y) != -Y[3] - Y[4]) {
      c.expect(false, "sigma(X, Y) != -eta0 - eta1");
      return;
    }
  }
  c.note("1000 rational Y");
}

void criterion2(Check& c) {
  const auto b4 = bracket_criterion(linear_product({1, 0, -1}).manifold());
  c.expect(b4.nonsingular && b4.brackets(0, 1) == 1, "linear product: bracket matrix not nonsingular with {xi0, x0 xi1} = 1");
  const auto b2 = bracket_criterion(tilted_pair({Rational(1, 2)}).manifold());
  c.expect(b2.brackets.rows() == 3 && b2.determinant == 0, "tilted pair: bracket determinant is not exactly 0");
  c.note("det(linear product) = " + format_rational(b4.determinant) + ", det(tilted pair) = " + format_rational(b2.determinant));
}

void criterion3(Check& c) {
  ConeSearchOptions opts;
  opts.budget = 10000;
  for (Rational v : {Rational(1, 4), Rational(1, 2), Rational(9, 10), Rational(1), Rational(3, 2)}) {
    const auto s = tilted_pair({v});
    const auto L = localize(s.p, s.rho);
    const auto r = transversality_check(L, s.manifold(), opts);
    const std::string tag = "tilted pair c = " + format_rational(v);
    if (v < 1) {
      c.expect(r.status == Transversality::transversal, tag + ": " + to_string(r.status));
    } else {
      c.expect(r.status == Transversality::non_transversal, tag + ": " + to_string(r.status));
      if (r.witness) {
        const std::vector<double> expect{1, 1, 0, 0, 0, 0};
        c.expect(r.witness->X.flat() == expect, tag + ": witness is not (1,1,0,...;0,...)");
        const auto re = propagation_membership_exact(L, s.manifold(), r.witness->X.exact(), opts);
        c.expect(re.status != ConeStatus::non_member, tag + ": witness fails re-verification");
      } else {
        c.expect(false, tag + ": no witness");
      }
    }
    c.expect(r.samples <= 10000, tag + ": budget exceeded");
  }
  for (const char* f : {"ex1_3.json", "ex2_1.json"}) {
    const auto j = run_file(f, c);
    c.expect(j["analyses"]["cones"]["transversality"]["status"] == "transversal", std::string(f) + ": not transversal");
    if (std::string(f) == "ex2_1.json")
      c.expect(j["analyses"]["cones"]["quotient_strictly_hyperbolic"]["status"] == "yes",
               "ex2_1.json: quotient not strictly hyperbolic");
  }
}

void criterion4(Check& c) {
  const DoubleCharFlags flags{true, true, true};
  auto row = [&](bool real, int W, BicharMode mode) {
    SpectrumReport s;
    s.has_nonzero_real = real;
    s.dim_W = W;
    return classify_double(s, {mode, GeometrySource::user_supplied}, 3, flags).to_string();
  };
  c.expect(row(true, 0, BicharMode::unknown) == "inf", "table row inf");
  c.expect(row(false, 2, BicharMode::no_bichar_meets_sigma) == "4", "table row 4");
  c.expect(row(false, 2, BicharMode::tangent_bichar_exists) == "3", "table row 3");
  c.expect(row(false, 0, BicharMode::no_bichar_meets_sigma) == "2", "table row 2");

  auto G = [&](const char* f) { return run_file(f, c)["analyses"]["classify"]["verdict"]["G"]; };
  c.expect(G("ex2_1.json") == "3", "cubic cone (a = 1, b = -1/2) is not exactly 3");
  c.expect(G("ex1_2.json") == "inf", "tilted pair c = 1/2 is not inf");
  const auto iv = G("ex1_2_nontransversal.json");
  c.expect(iv.is_object() && iv["lo"] == "4/3" && iv["hi"] == "2", "tilted pair c = (1/2, 3/2) is not [4/3, 2]");
  c.expect(G("involutive_cubic.json") == "3/2", "xi0^3 is not 3/2");
  // Same interval with max c exactly 1.
  const auto s = tilted_pair({Rational(1, 2), Rational(1)});
  const auto L = localize(s.p, s.rho);
  const auto t = transversality_check(L, s.manifold());
  const auto q = is_strictly_hyperbolic_on_quotient(L, s.manifold());
  c.expect(classify_order_m(q.status, t.status, L.order).to_string() == "[4/3, 2]", "c = (1/2, 1) is not [4/3, 2]");
}

void criterion5(Check& c) {
  auto x0 = PhasePolynomial::x(0, 0), xi0 = PhasePolynomial::xi(0, 0);
  const PhasePoint o({0}, {0});
  auto near = [](double a, double b) { return std::abs(a - b) <= 1e-9 * std::max(1.0, std::abs(b)); };
  const auto a = classify_spectrum(hamilton_map(xi0.pow(2) - x0.pow(2), o));
  c.expect(a.has_nonzero_real, "xi0^2 - x0^2: no nonzero real eigenvalue");
  for (auto z : a.eigenvalues) c.expect(near(std::abs(z.real()), 2) && near(z.imag(), 0), "xi0^2 - x0^2: eigenvalue not +-2");
  const auto b = classify_spectrum(hamilton_map(xi0.pow(2) + x0.pow(2), o));
  c.expect(!b.has_nonzero_real, "xi0^2 + x0^2: real eigenvalue reported");
  for (auto z : b.eigenvalues) c.expect(near(z.real(), 0) && near(std::abs(z.imag()), 2), "xi0^2 + x0^2: eigenvalue not +-2i");
  const auto cc = cubic_cone(1, Rational(-1, 2));
  const auto F = hamilton_map(cc.p, cc.rho);
  bool zero = true;
  for (std::size_t i = 0; i < F.exact.rows(); ++i)
    for (std::size_t j = 0; j < F.exact.cols(); ++j) zero = zero && F.exact(i, j) == 0;
  c.expect(zero, "order-3 characteristic: F != 0");
}

void criterion6(Check& c) {
  const auto s = straight_pair({1, 2});
  gen::Gen g(6);
  std::vector<PhasePoint> grid;
  while (grid.size() < 1000) {
    PhasePoint z({g.real(-1, 1), g.real(-1, 1), g.real(-1, 1)}, {0, g.real(-1, 1), g.real(0.5, 2)});
    if (std::hypot(z.x[0] * z.xi[2], z.xi[1]) > 1e-3) grid.push_back(z);
  }
  const auto t = factor_roots(s.p, s.manifold(), grid);
  double worst = 0;
  for (const auto& r : t.rows) {
    const double b = std::hypot(r.point.x[0] * r.point.xi[2], r.point.xi[1]);
    const std::vector<double> exact{-std::sqrt(2.0) * b, -b, b, std::sqrt(2.0) * b};
    if (r.lambdas.size() != 4) {
      c.expect(false, "wrong root count");
      return;
    }
    for (int j = 0; j < 4; ++j) worst = std::max(worst, std::abs(r.lambdas[j] - exact[j]) / b);
  }
  c.expect(t.violations.empty(), "nonreal roots");
  c.expect(worst < 1e-7, "roots differ from closed form by " + fmt(worst));
  c.expect(t.c_fit > 0, "c_fit <= 0");
  c.expect(t.C_fit <= std::sqrt(2.0) + 1e-6, "C_fit > sqrt 2");
  c.note("c_fit = " + fmt(t.c_fit, 8) + ", C_fit = " + fmt(t.C_fit, 10) + ", max root error " + fmt(worst, 2));
}

void criterion7(Check& c) {
  const auto j = run_file("ex1_3.json", c)["analyses"]["weights"]["root_products"];
  c.expect(j["all_positive"] == true, "some grid infimum is not positive");
  c.expect(j["all_stable"] == true, "some infimum drifts more than 20% over the gamma ladder");
  c.expect(j["stability"].size() == 20, "expected 10 (k, j) pairs for each eps");
  c.note("max spread " + fmt(j["max_spread"].get<double>()) + " over " + std::to_string(j["points_per_gamma"].get<int>()) +
         " points per gamma");
}

void criterion8(Check& c) {
  const auto j = run_file("ex2_1_flow.json", c)["analyses"]["flow"]["cone_arrival"];
  c.expect(j["starts"] == 64, "expected 64 starts");
  c.expect(j["fraction"] == 1.0, "arrival fraction " + j["fraction"].dump());
  c.expect(j["cone_maintained"] == true, "a trajectory left the cone");
  c.expect(j["max_p_drift"].get<double>() <= 1e-7, "p drift " + j["max_p_drift"].dump());
  double worst = 0;
  for (const auto& r : j["records"]) worst = std::max(worst, r["final_radius_ratio"].get<double>());
  c.expect(worst < 1e-6, "final radius ratio " + fmt(worst));
  c.note("max radius ratio " + fmt(worst, 3) + ", max steps " + j["max_steps"].dump());
}

void criterion9(Check& c) {
  auto fit = [&](const char* f) { return run_file(f, c)["analyses"]["sweep"]; };
  const auto a = fit("sweep_d0sq_d1.json");
  const double ka = a["fit"]["kappa"];
  c.expect(std::abs(ka - 0.5) <= 0.05, "kappa(D0^2 + D1) = " + fmt(ka));
  double worst = 0;  // closed form u = exp(+-sqrt(xi) t), up to the power of xi from the energy scaling
  for (const auto& p : a["points"]) {
    const double xi = p["xi"];
    worst = std::max(worst, std::abs(p["logG"].get<double>() - std::sqrt(xi)) / (0.5 * std::log(xi) + 1));
  }
  c.expect(worst <= 1, "D0^2 + D1 deviates from the closed form");
  const double kb = fit("sweep_d0cube_d1sq.json")["fit"]["kappa"];
  c.expect(std::abs(kb - 2.0 / 3.0) <= 0.05, "kappa(D0^3 + D1^2) = " + fmt(kb));
  const auto ctl = fit("sweep_control.json")["fit"];
  c.expect(ctl["polynomial_growth"] == true, "control not flagged polynomial");
  const auto prod = run_file("ex1_4.json", c)["analyses"]["sweep"]["fit"];
  const double kp = prod["kappa"], sp = prod["slope"];
  c.expect(kp <= 1.0 / 3.0 + 0.1 && sp <= 1.0 / 3.0 + 0.1, "product model exponent " + fmt(kp) + " / slope " + fmt(sp));
  c.note("kappa: " + fmt(ka, 3) + ", " + fmt(kb, 3) + ", control poly, product " + fmt(kp, 3) +
         (prod["polynomial_growth"] == true ? " (poly, slope " + fmt(sp, 3) + ")" : ""));
}

void criterion10(Check& c) {
  gen::Gen g(10);
  // Jacobi and Leibniz identities, exact.
  for (int it = 0; it < 1000; ++it) {
    auto f = g.polynomial(1, 3, 3), h = g.polynomial(1, 3, 3), k = g.polynomial(1, 3, 3);
    auto jac = poisson_bracket(f, poisson_bracket(h, k)) + poisson_bracket(h, poisson_bracket(k, f)) +
               poisson_bracket(k, poisson_bracket(f, h));
    auto leib = poisson_bracket(f, h * k) - poisson_bracket(f, h) * k - h * poisson_bracket(f, k);
    if (!jac.is_zero() || !leib.is_zero()) {
      c.expect(false, "Jacobi/Leibniz failed");
      break;
    }
  }
  // Gamma convexity.
  const auto s = straight_pair({1, 2});
  const auto L = localize(s.p, s.rho);
  std::vector<std::vector<double>> members;
  for (int i = 0; i < 4000 && members.size() < 50; ++i) {
    auto v = g.unit_vector(6);
    if (gamma_membership(L, PhaseVector::from_flat(v)).member) members.push_back(v);
  }
  c.expect(members.size() >= 20, "too few Gamma samples");
  for (int i = 0; i < 500 && members.size() >= 2; ++i) {
    const auto& a = members[static_cast<std::size_t>(g.integer(0, static_cast<int>(members.size()) - 1))];
    const auto& b = members[static_cast<std::size_t>(g.integer(0, static_cast<int>(members.size()) - 1))];
    const double t = g.real(0, 1);
    std::vector<double> m(6);
    for (std::size_t k = 0; k < 6; ++k) m[k] = t * a[k] + (1 - t) * b[k];
    if (!gamma_membership(L, PhaseVector::from_flat(m)).member) {
      c.expect(false, "Gamma not convex");
      break;
    }
  }
  // Hamilton map against finite differences of H_p.
  for (const auto& cs : {tilted_pair({Rational(1, 2)}), tilted_pair({Rational(3, 2)})}) {
    const auto F = hamilton_map(cs.p, cs.rho);
    const auto v = g.unit_vector(6);
    const double h = 1e-5;
    auto a = cs.rho.flat(), b = cs.rho.flat();
    for (std::size_t k = 0; k < 6; ++k) a[k] += h * v[k], b[k] -= h * v[k];
    const auto Ha = hamilton_field(cs.p, PhasePoint::from_flat(a)).flat();
    const auto Hb = hamilton_field(cs.p, PhasePoint::from_flat(b)).flat();
    for (std::size_t i = 0; i < 6; ++i) {
      double Fv = 0;
      for (std::size_t j = 0; j < 6; ++j) Fv += F.F(static_cast<long>(i), static_cast<long>(j)) * v[j];
      c.expect(std::abs((Ha[i] - Hb[i]) / (2 * h) - Fv) < 1e-6, "Hamilton map FD mismatch");
    }
  }
  // fit_exponent inverse problems.
  const auto xi = frequency_grid(1, 4.5, 15);
  std::vector<double> lg, lp;
  for (double x : xi) lg.push_back(3 * std::sqrt(x)), lp.push_back(2 * std::log(x));
  c.expect(std::abs(fit_exponent(xi, lg).kappa - 0.5) < 1e-3, "fit of exp(3 xi^1/2) off");
  c.expect(fit_exponent(xi, lp).polynomial_growth, "xi^2 not flagged polynomial");
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    double limit_s;
    std::function<void(Check&)> body;
  };
  const std::vector<Criterion> criteria = {
      {1, "symplectic sign pinning", 1, criterion1},
      {2, "bracket criterion", 1, criterion2},
      {3, "transversality verdicts", 30, criterion3},
      {4, "classifier table and examples", 5, criterion4},
      {5, "Hamilton-map spectra", 1, criterion5},
      {6, "root bounds at desk scale", 10, criterion6},
      {7, "root-product lower bound at desk scale", 60, criterion7},
      {8, "cubic-cone flow arrival", 30, criterion8},
      {9, "growth exponents", 300, criterion9},
      {10, "property suites", 60, criterion10},
  };
  int failed = 0;
  for (const auto& cr : criteria) {
    Check c;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      cr.body(c);
    } catch (const std::exception& e) {
      c.expect(false, std::string("exception: ") + e.what());
    }
    const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    c.expect(dt < cr.limit_s, "runtime " + fmt(dt) + " s over " + fmt(cr.limit_s) + " s");
    const bool ok = c.failures.empty();
    failed += !ok;
    std::cout << (ok ? "PASS" : "FAIL") << " " << cr.id << " " << cr.name << " (" << std::fixed
              << std::setprecision(3) << dt << " s)" << std::defaultfloat;
    for (const auto& s : c.info) std::cout << "; " << s;
    std::cout << "\n";
    for (const auto& f : c.failures) std::cout << "    " << f << "\n";
  }
  std::cout << (criteria.size() - static_cast<std::size_t>(failed)) << "/" << criteria.size() << " criteria passed\n";
  return failed == 0 ? 0 : 1;
}
