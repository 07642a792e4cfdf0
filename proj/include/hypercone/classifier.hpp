#pragma once

#include <map>
#include <string>
#include <vector>

#include "hypercone/characteristic.hpp"
#include "hypercone/cones.hpp"
#include "hypercone/symplectic.hpp"

namespace hypercone {

/// G(p) as an exact rational, infinity, or an interval of rationals. `none` means the
/// inputs fall outside every rule; `note` says why.
struct GevreyVerdict {
  enum class Kind { rational, infinity, interval, none };
  Kind kind = Kind::none;
  Rational value;   // kind == rational
  Rational lo, hi;  // kind == interval
  std::vector<std::string> provenance;
  std::map<std::string, std::string> inputs;
  std::string note;

  static GevreyVerdict exact(const Rational& q);
  static GevreyVerdict infinite();
  static GevreyVerdict range(const Rational& lo, const Rational& hi);
  static GevreyVerdict no_verdict(std::string why);

  /// "3", "3/2", "inf", "[3/2, 3]" or "none".
  std::string to_string() const;
  bool has_value() const { return kind != Kind::none; }
};

enum class BicharMode { no_bichar_meets_sigma, tangent_bichar_exists, transversal_bichar_exists, unknown };
enum class GeometrySource { user_supplied, numeric_probe };
std::string to_string(BicharMode m);
std::string to_string(GeometrySource s);

struct BicharGeometry {
  BicharMode mode = BicharMode::unknown;
  GeometrySource source = GeometrySource::user_supplied;
};

/// Assumptions of the double-characteristic table, asserted by the caller.
struct DoubleCharFlags {
  bool vanishes_exactly_order_two = false;
  bool symplectic_rank_constant = false;
  bool no_spectral_transition = false;
};

/// Table lookup for m = 2 with codim Sigma = 3. Throws PreconditionError when the
/// flags or codimension do not hold.
GevreyVerdict classify_double(const SpectrumReport& spec, const BicharGeometry& geo, int codim,
                              const DoubleCharFlags& flags);

/// m >= 3; quotient strict hyperbolicity and transversality verdicts from upstream.
GevreyVerdict classify_order_m(Decision cond_quotient, Transversality cond_transversal, int m);

/// Involutive Sigma in normal form {xi_0 = ... = xi_k = 0}. Throws when Sigma is not involutive.
GevreyVerdict classify_involutive(const CharManifold& sigma, const PhasePolynomial& p, int m);
/// p = xi_0^m + sum a_alpha(x) xi~^alpha, |alpha| = m, alpha_0 <= m - 2, with b_j = xi_j.
bool involutive_normal_form(const CharManifold& sigma, const PhasePolynomial& p, int m);

struct LeviViolation {
  Exponent order;  // derivative multi-index over all phase variables
  Rational value;  // the derivative at rho
};

/// Nonvanishing derivatives of P_lower at rho of total order <= m - 2 kappa / (kappa - 1).
/// Throws PreconditionError for kappa <= 1.
std::vector<LeviViolation> ivrii_levi_filter(const PhasePolynomial& p_lower, const PhasePoint& rho,
                                             int m, const Rational& kappa);

}  // namespace hypercone
