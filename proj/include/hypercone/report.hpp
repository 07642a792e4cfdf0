#pragma once

#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "hypercone/classifier.hpp"
#include "hypercone/flow.hpp"
#include "hypercone/growth.hpp"
#include "hypercone/weights.hpp"

namespace hypercone {

/// Schema violation or malformed input. `where` is a JSON pointer ("/manifold/1") or
/// "line L, column C" for syntax errors.
class RequestError : public std::invalid_argument {
 public:
  RequestError(std::string where, const std::string& what)
      : std::invalid_argument(where.empty() ? what : where + ": " + what), where_(std::move(where)) {}
  const std::string& where() const { return where_; }

 private:
  std::string where_;
};

inline constexpr const char* kSchema = "hypercone/1";

/// Polynomial expression in x0..xn, xi0..xin with + - * / ^ and parentheses. Literals are
/// integers, decimals or a/b; division is only by nonzero constants; exponents are
/// nonnegative integer literals. Throws RequestError with the column of the offending token.
PhasePolynomial parse_expression(const std::string& text, int n);

enum class Analysis { order, localize, spectrum, cones, classify, flow, sweep, weights };
std::string to_string(Analysis a);
Analysis analysis_from_string(const std::string& s);

struct RunOptions {
  std::uint64_t seed = 0;
  std::size_t budget = 4096;
  double tol = 1e-9;
};

struct ClassifySpec {
  std::optional<DoubleCharFlags> double_flags;  // asserted table assumptions for m = 2
  std::optional<BicharMode> geometry;            // user-supplied; otherwise probed numerically
  std::optional<Rational> levi_kappa;            // run the Levi filter on lower_order with this kappa
};

struct ConeStartSpec {
  std::size_t u_var = 0, v_var = 0;
  double slope = 1;
  int u_sign = -1;
  std::size_t count = 0;  // generated starts inside the cone
  double radius = 0.1;
  double t_max = 50;
  double threshold = 1e-6;
};

struct FlowSpec {
  std::vector<PhasePoint> starts;
  double t_end = 1;
  int direction = 1;
  double rtol = 1e-10, atol = 1e-14;
  std::optional<ConeStartSpec> cone;
};

struct SweepSpec {
  int n = 1;
  std::vector<PhasePolynomial> factors;       // composed left to right as D_t-operators
  std::optional<PhasePolynomial> operator_;   // normal-ordered symbol, when factors are absent
  std::optional<PhasePolynomial> lower_order;
  int order_bound = -1;
  double log10_lo = 1, log10_hi = 4.5;
  std::size_t count = 15;
  double T = 1;
  double rtol = 1e-9;

  ModelOperator model() const;
};

struct WeightsSpec {
  int m = 0;
  Rational eps_star{1, 10};
  std::vector<double> alpha;
  std::vector<double> eps{0.1, 0.3};
  std::vector<double> gammas{1e2, 1e3, 1e4};
  double fd_step = 1e-3;
  std::vector<Envelope> envelopes{Envelope::w, Envelope::omega, Envelope::psi, Envelope::p_vs_h};
};

struct AnalysisRequest {
  std::string name;
  std::string description;
  int n = -1;
  std::optional<PhasePolynomial> symbol;
  std::optional<PhasePolynomial> lower_order;
  std::vector<PhasePolynomial> manifold;
  std::optional<PhasePoint> rho;
  std::set<Analysis> analyses;
  RunOptions options;
  ClassifySpec classify;
  std::optional<FlowSpec> flow;
  std::optional<SweepSpec> sweep;
  std::optional<WeightsSpec> weights;
};

/// Validates the schema, dimensions and per-analysis preconditions that can be checked
/// without computation (e.g. a base point for cone analyses).
AnalysisRequest parse_request(const std::string& json_text);
AnalysisRequest parse_request_file(const std::string& path);
/// Sorted keys, polynomials as term lists; parse_request(canonical_json(r)) reproduces it.
std::string canonical_json(const AnalysisRequest& r);

struct ReportBundle {
  std::string report;    // deterministic JSON
  std::string metadata;  // timings and other run-dependent data
  std::map<std::string, std::string> artifacts;  // file name -> content (CSV, SVG)
  std::vector<std::string> undecided;
  std::map<std::string, std::string> errors;  // analysis -> message
  int exit_code = 0;  // 0 ok, 2 some verdict undecided, 1 some analysis failed
};

/// Runs the requested analyses (plus prerequisites) in dependency order. Failures are
/// isolated per analysis and reported; the rest of the report is still produced.
ReportBundle run(const AnalysisRequest& r, bool svg = false);
void write_bundle(const ReportBundle& b, const std::string& out_dir, const std::string& stem);

/// Directory holding the bundled request files: $HYPERCONE_DATA_DIR/requests if set,
/// otherwise the source tree's data/requests.
std::string bundled_requests_dir();

}  // namespace hypercone
