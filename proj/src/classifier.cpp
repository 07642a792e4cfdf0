#include "hypercone/classifier.hpp"

#include <numeric>

namespace hypercone {

GevreyVerdict GevreyVerdict::exact(const Rational& q) {
  GevreyVerdict v;
  v.kind = Kind::rational;
  v.value = q;
  v.value.canonicalize();
  return v;
}

GevreyVerdict GevreyVerdict::infinite() {
  GevreyVerdict v;
  v.kind = Kind::infinity;
  return v;
}

GevreyVerdict GevreyVerdict::range(const Rational& lo, const Rational& hi) {
  if (lo > hi) throw PreconditionError("GevreyVerdict: interval with lo > hi");
  GevreyVerdict v;
  v.kind = Kind::interval;
  v.lo = lo;
  v.hi = hi;
  v.lo.canonicalize();
  v.hi.canonicalize();
  return v;
}

GevreyVerdict GevreyVerdict::no_verdict(std::string why) {
  GevreyVerdict v;
  v.note = std::move(why);
  return v;
}

namespace {

std::string fmt(const Rational& q) {
  return q.get_den() == 1 ? q.get_num().get_str() : format_rational(q);
}

}  // namespace

std::string GevreyVerdict::to_string() const {
  switch (kind) {
    case Kind::rational: return fmt(value);
    case Kind::infinity: return "inf";
    case Kind::interval: return "[" + fmt(lo) + ", " + fmt(hi) + "]";
    case Kind::none: return "none";
  }
  return "none";
}

std::string to_string(BicharMode m) {
  switch (m) {
    case BicharMode::no_bichar_meets_sigma: return "no_bichar_meets_sigma";
    case BicharMode::tangent_bichar_exists: return "tangent_bichar_exists";
    case BicharMode::transversal_bichar_exists: return "transversal_bichar_exists";
    case BicharMode::unknown: return "unknown";
  }
  return "unknown";
}

std::string to_string(GeometrySource s) {
  return s == GeometrySource::user_supplied ? "user_supplied" : "numeric_probe";
}

GevreyVerdict classify_double(const SpectrumReport& spec, const BicharGeometry& geo, int codim,
                              const DoubleCharFlags& flags) {
  if (!flags.vanishes_exactly_order_two || !flags.symplectic_rank_constant || !flags.no_spectral_transition)
    throw PreconditionError("classify_double: table assumptions not asserted");
  if (codim != 3) throw PreconditionError("classify_double: table requires codim Sigma = 3");

  const bool real = spec.has_nonzero_real;
  const bool W = spec.dim_W > 0;
  const auto mode = geo.mode;
  GevreyVerdict v;
  if (spec.ambiguous) {
    v = GevreyVerdict::range(2, 4);
    v.provenance = {"double-characteristic table: spectrum ambiguous at tolerance"};
  } else if (real && W) {
    v = GevreyVerdict::no_verdict("nonzero real eigenvalue with W != {0} lies outside the table");
  } else if (real) {
    v = GevreyVerdict::infinite();
    v.provenance = {"double-characteristic table: nonzero real eigenvalue, W = {0}"};
  } else if (W && mode == BicharMode::no_bichar_meets_sigma) {
    v = GevreyVerdict::exact(4);
    v.provenance = {"double-characteristic table: no real eigenvalue, W != {0}, no bicharacteristic meets Sigma"};
  } else if (W && mode == BicharMode::tangent_bichar_exists) {
    v = GevreyVerdict::exact(3);
    v.provenance = {"double-characteristic table: no real eigenvalue, W != {0}, tangent bicharacteristic"};
  } else if (!W && mode == BicharMode::no_bichar_meets_sigma) {
    v = GevreyVerdict::exact(2);
    v.provenance = {"double-characteristic table: no real eigenvalue, W = {0}, no bicharacteristic meets Sigma"};
  } else if (!W && mode == BicharMode::tangent_bichar_exists) {
    v = GevreyVerdict::no_verdict("no real eigenvalue, W = {0} with a tangent bicharacteristic is a gap in the table");
  } else {
    v = GevreyVerdict::range(2, 4);
    v.provenance = {"double-characteristic table: bicharacteristic geometry unknown"};
  }
  v.inputs["has_nonzero_real"] = real ? "true" : "false";
  v.inputs["dim_W"] = std::to_string(spec.dim_W);
  v.inputs["geometry"] = to_string(mode);
  v.inputs["geometry_source"] = to_string(geo.source);
  v.inputs["spectrum_method"] = spec.method;
  return v;
}

GevreyVerdict classify_order_m(Decision cond_quotient, Transversality cond_transversal, int m) {
  if (m < 3) throw PreconditionError("classify_order_m: requires m >= 3");
  const Rational floor(m, m - 1), ceiling(m, m - 2);
  GevreyVerdict v;
  if (cond_quotient == Decision::yes && cond_transversal == Transversality::transversal) {
    v = GevreyVerdict::exact(ceiling);
    v.provenance = {"strict hyperbolicity on the quotient and transversality give G(p) = m/(m-2)"};
  } else {
    v = GevreyVerdict::range(floor, ceiling);
    v.provenance = {"Bronshtein floor m/(m-1)", "Ivrii ceiling m/(m-2)"};
    const bool refuted = cond_quotient == Decision::no || cond_transversal == Transversality::non_transversal;
    v.note = refuted ? "a sufficient condition for m/(m-2) fails; its converse is open, so only bounds apply"
                     : "a sufficient condition for m/(m-2) is undecided";
  }
  v.inputs["m"] = std::to_string(m);
  v.inputs["quotient_strictly_hyperbolic"] = to_string(cond_quotient);
  v.inputs["transversality"] = to_string(cond_transversal);
  return v;
}

bool involutive_normal_form(const CharManifold& sigma, const PhasePolynomial& p, int m) {
  const int n = p.n();
  const std::size_t k = sigma.defining.size() - 1;
  if (static_cast<int>(k) > n) return false;
  for (std::size_t j = 0; j <= k; ++j)
    if (!(sigma.defining[j] == PhasePolynomial::xi(n, static_cast<int>(j)))) return false;
  Exponent lead(p.num_vars(), 0);
  lead[xi_var(n, 0)] = static_cast<std::uint16_t>(m);
  if (p.coefficient(lead) != 1) return false;
  for (const auto& [e, c] : p.terms()) {
    if (e == lead) continue;
    int tilde = 0;
    for (int j = 0; j <= n; ++j) {
      const int d = e[xi_var(n, j)];
      if (j > static_cast<int>(k) && d > 0) return false;
      if (j <= static_cast<int>(k)) tilde += d;
    }
    if (tilde != m || e[xi_var(n, 0)] > m - 2) return false;
  }
  return true;
}

GevreyVerdict classify_involutive(const CharManifold& sigma, const PhasePolynomial& p, int m) {
  if (!involutivity_check(sigma)) throw PreconditionError("classify_involutive: Sigma is not involutive");
  if (m < 2) throw PreconditionError("classify_involutive: requires m >= 2");
  GevreyVerdict v;
  if (involutive_normal_form(sigma, p, m)) {
    v = GevreyVerdict::exact(Rational(m, m - 1));
    v.provenance = {"involutive normal form: Levi conditions cap G(p) at m/(m-1), matching the Bronshtein floor"};
  } else if (m >= 3) {
    v = GevreyVerdict::range(Rational(m, m - 1), Rational(m, m - 2));
    v.provenance = {"Bronshtein floor m/(m-1)", "Ivrii ceiling m/(m-2)"};
    v.note = "involutive Sigma but p is not in the normal form; only bounds apply";
  } else {
    v = GevreyVerdict::no_verdict("involutive Sigma but p is not in the normal form");
  }
  v.inputs["m"] = std::to_string(m);
  v.inputs["involutive"] = "true";
  return v;
}

std::vector<LeviViolation> ivrii_levi_filter(const PhasePolynomial& p_lower, const PhasePoint& rho,
                                             int m, const Rational& kappa) {
  if (kappa <= 1) throw PreconditionError("ivrii_levi_filter: requires kappa > 1");
  if (rho.n() != p_lower.n()) throw DimensionError("ivrii_levi_filter: dimension mismatch");
  const Rational bound = Rational(m) - 2 * kappa / (kappa - 1);
  std::vector<LeviViolation> out;
  if (bound < 0) return out;
  const PhasePolynomial s = p_lower.shifted(rho.exact());
  for (const auto& [e, c] : s.terms()) {
    const int order = std::accumulate(e.begin(), e.end(), 0);
    if (Rational(order) > bound) continue;
    // d^e P(rho) = e! * (Taylor coefficient).
    Rational v = c;
    for (auto d : e)
      for (unsigned i = 2; i <= d; ++i) v *= i;
    out.push_back({e, v});
  }
  return out;
}

}  // namespace hypercone
