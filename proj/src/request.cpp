#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "hypercone/report.hpp"

namespace hypercone {

using json = nlohmann::json;

// ---------------------------------------------------------------------------
// Expression front-end

namespace {

class ExprParser {
 public:
  ExprParser(const std::string& s, int n) : s_(s), n_(n) {}

  PhasePolynomial parse() {
    PhasePolynomial r = expr();
    skip();
    if (pos_ < s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    return r;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw RequestError("", "column " + std::to_string(pos_ + 1) + ": " + what);
  }
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool eat(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  PhasePolynomial expr() {
    PhasePolynomial r = term();
    for (;;) {
      if (eat('+')) r += term();
      else if (eat('-')) r -= term();
      else return r;
    }
  }

  PhasePolynomial term() {
    PhasePolynomial r = unary();
    for (;;) {
      if (eat('*')) {
        r *= unary();
      } else if (eat('/')) {
        const std::size_t at = pos_;
        const PhasePolynomial d = unary();
        if (d.total_degree() > 0) {
          pos_ = at;
          fail("division by a non-constant expression");
        }
        if (d.is_zero()) {
          pos_ = at;
          fail("division by zero");
        }
        r *= Rational(1) / d.terms().begin()->second;
      } else {
        return r;
      }
    }
  }

  PhasePolynomial unary() {
    if (eat('-')) return -unary();
    if (eat('+')) return unary();
    return power();
  }

  PhasePolynomial power() {
    PhasePolynomial base = primary();
    if (!eat('^')) return base;
    skip();
    const std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (start == pos_) fail("exponent must be a nonnegative integer literal");
    const unsigned long k = std::stoul(s_.substr(start, pos_ - start));
    if (k > 64) fail("exponent too large");
    return base.pow(static_cast<unsigned>(k));
  }

  PhasePolynomial primary() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end of expression");
    const char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      PhasePolynomial r = expr();
      if (!eat(')')) fail("expected ')'");
      return r;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      const std::size_t start = pos_;
      while (pos_ < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '.')) ++pos_;
      try {
        return PhasePolynomial::constant(n_, parse_rational(s_.substr(start, pos_ - start)));
      } catch (const std::invalid_argument& e) {
        pos_ = start;
        fail(e.what());
      }
    }
    if (c == 'x') {
      const std::size_t start = pos_;
      ++pos_;
      const bool is_xi = pos_ < s_.size() && s_[pos_] == 'i';
      if (is_xi) ++pos_;
      const std::size_t ds = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      if (ds == pos_) {
        pos_ = start;
        fail("variable needs an index, e.g. x0 or xi1");
      }
      const int j = std::stoi(s_.substr(ds, pos_ - ds));
      if (j > n_) {
        pos_ = start;
        fail("variable " + s_.substr(start, pos_ - start) + " exceeds n = " + std::to_string(n_));
      }
      return is_xi ? PhasePolynomial::xi(n_, j) : PhasePolynomial::x(n_, j);
    }
    fail("unexpected '" + std::string(1, c) + "'");
  }

  const std::string& s_;
  int n_;
  std::size_t pos_ = 0;
};

}  // namespace

PhasePolynomial parse_expression(const std::string& text, int n) {
  if (n < 0) throw RequestError("", "dimension n must be >= 0");
  return ExprParser(text, n).parse();
}

std::string to_string(Analysis a) {
  switch (a) {
    case Analysis::order: return "order";
    case Analysis::localize: return "localize";
    case Analysis::spectrum: return "spectrum";
    case Analysis::cones: return "cones";
    case Analysis::classify: return "classify";
    case Analysis::flow: return "flow";
    case Analysis::sweep: return "sweep";
    case Analysis::weights: return "weights";
  }
  return "order";
}

Analysis analysis_from_string(const std::string& s) {
  for (auto a : {Analysis::order, Analysis::localize, Analysis::spectrum, Analysis::cones, Analysis::classify,
                 Analysis::flow, Analysis::sweep, Analysis::weights})
    if (to_string(a) == s) return a;
  throw RequestError("", "unknown analysis '" + s + "'");
}

// ---------------------------------------------------------------------------
// JSON reading helpers. Every accessor names the JSON pointer of the value it reads.

namespace {

std::string child(const std::string& path, const std::string& key) { return path + "/" + key; }
std::string child(const std::string& path, std::size_t i) { return path + "/" + std::to_string(i); }

const json* find(const json& obj, const char* key) {
  auto it = obj.find(key);
  return it == obj.end() || it->is_null() ? nullptr : &*it;
}

void check_keys(const json& obj, const std::string& path, std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) throw RequestError(path.empty() ? "/" : path, "expected an object");
  for (const auto& [k, v] : obj.items())
    if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return k == a; }))
      throw RequestError(child(path, k), "unknown field");
}

std::string get_string(const json& v, const std::string& path) {
  if (!v.is_string()) throw RequestError(path, "expected a string");
  return v.get<std::string>();
}

double get_double(const json& v, const std::string& path) {
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) {
    try {
      return parse_rational(v.get<std::string>()).get_d();
    } catch (const std::invalid_argument& e) {
      throw RequestError(path, e.what());
    }
  }
  throw RequestError(path, "expected a number");
}

Rational get_rational(const json& v, const std::string& path) {
  try {
    if (v.is_string()) return parse_rational(v.get<std::string>());
    if (v.is_number_integer()) return Rational(v.get<long>());
    if (v.is_number()) return Rational(v.get<double>());  // doubles are dyadic, exact
  } catch (const std::invalid_argument& e) {
    throw RequestError(path, e.what());
  }
  throw RequestError(path, "expected a rational (string \"a/b\" or number)");
}

long get_int(const json& v, const std::string& path) {
  if (!v.is_number_integer()) throw RequestError(path, "expected an integer");
  return v.get<long>();
}

bool get_bool(const json& v, const std::string& path) {
  if (!v.is_boolean()) throw RequestError(path, "expected true or false");
  return v.get<bool>();
}

std::vector<double> get_doubles(const json& v, const std::string& path) {
  if (!v.is_array()) throw RequestError(path, "expected an array");
  std::vector<double> out;
  for (std::size_t i = 0; i < v.size(); ++i) out.push_back(get_double(v[i], child(path, i)));
  return out;
}

/// Expression string, or {"terms": [{"coef": "a/b", "exp": [...]}, ...]}.
PhasePolynomial get_poly(const json& v, int n, const std::string& path) {
  if (n < 0) throw RequestError(path, "polynomial given but \"n\" is missing");
  if (v.is_string()) {
    try {
      return parse_expression(v.get<std::string>(), n);
    } catch (const RequestError& e) {
      throw RequestError(path, e.what());
    }
  }
  if (v.is_object()) {
    check_keys(v, path, {"terms"});
    const json* terms = find(v, "terms");
    if (!terms || !terms->is_array()) throw RequestError(child(path, "terms"), "expected an array");
    PhasePolynomial p(n);
    for (std::size_t i = 0; i < terms->size(); ++i) {
      const std::string tp = child(child(path, "terms"), i);
      const json& t = (*terms)[i];
      check_keys(t, tp, {"coef", "exp"});
      if (!find(t, "coef") || !find(t, "exp")) throw RequestError(tp, "term needs \"coef\" and \"exp\"");
      const Rational c = get_rational(t["coef"], child(tp, "coef"));
      const json& e = t["exp"];
      if (!e.is_array() || e.size() != p.num_vars())
        throw RequestError(child(tp, "exp"), "expected " + std::to_string(p.num_vars()) + " exponents");
      Exponent ex(p.num_vars());
      for (std::size_t k = 0; k < e.size(); ++k) {
        const long d = get_int(e[k], child(child(tp, "exp"), k));
        if (d < 0 || d > 64) throw RequestError(child(child(tp, "exp"), k), "exponent out of range");
        ex[k] = static_cast<std::uint16_t>(d);
      }
      p.add_term(ex, c);
    }
    return p;
  }
  throw RequestError(path, "expected an expression string or {\"terms\": [...]}");
}

json poly_json(const PhasePolynomial& p) {
  json terms = json::array();
  for (const auto& [e, c] : p.terms()) terms.push_back({{"coef", format_rational(c)}, {"exp", e}});
  return {{"terms", terms}};
}

PhasePoint get_point(const json& v, int n, const std::string& path) {
  check_keys(v, path, {"x", "xi"});
  if (!find(v, "x") || !find(v, "xi")) throw RequestError(path, "point needs \"x\" and \"xi\"");
  std::vector<double> xs, xis;
  for (auto [key, out] : {std::pair{"x", &xs}, std::pair{"xi", &xis}}) {
    const json& a = v[key];
    const std::string ap = child(path, key);
    if (!a.is_array() || static_cast<int>(a.size()) != n + 1)
      throw RequestError(ap, "expected " + std::to_string(n + 1) + " coordinates");
    for (std::size_t i = 0; i < a.size(); ++i) {
      const Rational q = get_rational(a[i], child(ap, i));
      const double d = q.get_d();
      if (Rational(d) != q) throw RequestError(child(ap, i), "coordinate is not exactly representable (use a dyadic rational)");
      out->push_back(d);
    }
  }
  return PhasePoint(xs, xis);
}

json point_json(const PhasePoint& p) {
  json x = json::array(), xi = json::array();
  for (double v : p.x) x.push_back(format_rational(Rational(v)));
  for (double v : p.xi) xi.push_back(format_rational(Rational(v)));
  return {{"x", x}, {"xi", xi}};
}

BicharMode mode_from_string(const std::string& s, const std::string& path) {
  for (auto m : {BicharMode::no_bichar_meets_sigma, BicharMode::tangent_bichar_exists,
                 BicharMode::transversal_bichar_exists, BicharMode::unknown})
    if (to_string(m) == s) return m;
  throw RequestError(path, "unknown bicharacteristic geometry '" + s + "'");
}

}  // namespace

ModelOperator SweepSpec::model() const {
  ModelOperator M;
  if (!factors.empty()) {
    M = ModelOperator::identity();
    std::string desc;
    for (const auto& f : factors) {
      M = M.compose(model_from_symbol(f));
      desc += "(" + f.to_string() + ")";
    }
    M.description = desc;
  } else if (operator_) {
    M = model_from_symbol(*operator_);
  } else {
    throw PreconditionError("sweep: no operator given");
  }
  if (lower_order) {
    const ModelOperator Q = model_from_symbol(*lower_order, false);
    M = with_lower_order(M, Q.a, order_bound);
  }
  return M;
}

AnalysisRequest parse_request(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    // Byte offset -> line and column.
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw RequestError("line " + std::to_string(line) + ", column " + std::to_string(col), "malformed JSON");
  }
  check_keys(doc, "", {"schema", "name", "description", "n", "symbol", "lower_order", "manifold", "rho", "analyses",
                       "options", "classify", "flow", "sweep", "weights"});
  AnalysisRequest r;
  const json* schema = find(doc, "schema");
  if (!schema) throw RequestError("/schema", "missing");
  if (get_string(*schema, "/schema") != kSchema)
    throw RequestError("/schema", "unsupported schema (expected \"" + std::string(kSchema) + "\")");
  if (auto v = find(doc, "name")) r.name = get_string(*v, "/name");
  if (auto v = find(doc, "description")) r.description = get_string(*v, "/description");
  if (auto v = find(doc, "n")) {
    r.n = static_cast<int>(get_int(*v, "/n"));
    if (r.n < 0 || r.n > 16) throw RequestError("/n", "n must lie in [0, 16]");
  }
  if (auto v = find(doc, "symbol")) r.symbol = get_poly(*v, r.n, "/symbol");
  if (auto v = find(doc, "lower_order")) r.lower_order = get_poly(*v, r.n, "/lower_order");
  if (auto v = find(doc, "manifold")) {
    if (!v->is_array()) throw RequestError("/manifold", "expected an array of defining functions");
    for (std::size_t i = 0; i < v->size(); ++i) r.manifold.push_back(get_poly((*v)[i], r.n, child("/manifold", i)));
  }
  if (auto v = find(doc, "rho")) {
    if (r.n < 0) throw RequestError("/rho", "base point given but \"n\" is missing");
    r.rho = get_point(*v, r.n, "/rho");
  }
  if (auto v = find(doc, "analyses")) {
    if (!v->is_array()) throw RequestError("/analyses", "expected an array");
    for (std::size_t i = 0; i < v->size(); ++i) {
      try {
        r.analyses.insert(analysis_from_string(get_string((*v)[i], child("/analyses", i))));
      } catch (const RequestError& e) {
        if (!e.where().empty()) throw;
        throw RequestError(child("/analyses", i), e.what());
      }
    }
  }
  if (auto v = find(doc, "options")) {
    check_keys(*v, "/options", {"seed", "budget", "tol"});
    if (auto s = find(*v, "seed")) {
      const long seed = get_int(*s, "/options/seed");
      if (seed < 0) throw RequestError("/options/seed", "must be nonnegative");
      r.options.seed = static_cast<std::uint64_t>(seed);
    }
    if (auto s = find(*v, "budget")) {
      const long b = get_int(*s, "/options/budget");
      if (b < 1) throw RequestError("/options/budget", "must be positive");
      r.options.budget = static_cast<std::size_t>(b);
    }
    if (auto s = find(*v, "tol")) {
      r.options.tol = get_double(*s, "/options/tol");
      if (!(r.options.tol > 0)) throw RequestError("/options/tol", "must be positive");
    }
  }
  if (auto v = find(doc, "classify")) {
    check_keys(*v, "/classify", {"double_flags", "geometry", "levi_kappa"});
    if (auto f = find(*v, "double_flags")) {
      check_keys(*f, "/classify/double_flags",
                 {"vanishes_exactly_order_two", "symplectic_rank_constant", "no_spectral_transition"});
      DoubleCharFlags fl;
      auto flag = [&](const char* k) {
        const json* b = find(*f, k);
        return b ? get_bool(*b, child("/classify/double_flags", k)) : false;
      };
      fl.vanishes_exactly_order_two = flag("vanishes_exactly_order_two");
      fl.symplectic_rank_constant = flag("symplectic_rank_constant");
      fl.no_spectral_transition = flag("no_spectral_transition");
      r.classify.double_flags = fl;
    }
    if (auto g = find(*v, "geometry")) {
      const std::string s = get_string(*g, "/classify/geometry");
      if (s != "probe") r.classify.geometry = mode_from_string(s, "/classify/geometry");
    }
    if (auto k = find(*v, "levi_kappa")) r.classify.levi_kappa = get_rational(*k, "/classify/levi_kappa");
  }
  if (auto v = find(doc, "flow")) {
    check_keys(*v, "/flow", {"starts", "t_end", "direction", "rtol", "atol", "cone"});
    FlowSpec f;
    if (auto s = find(*v, "starts")) {
      if (!s->is_array()) throw RequestError("/flow/starts", "expected an array of points");
      for (std::size_t i = 0; i < s->size(); ++i) f.starts.push_back(get_point((*s)[i], r.n, child("/flow/starts", i)));
    }
    if (auto s = find(*v, "t_end")) f.t_end = get_double(*s, "/flow/t_end");
    if (auto s = find(*v, "direction")) {
      f.direction = static_cast<int>(get_int(*s, "/flow/direction"));
      if (f.direction != 1 && f.direction != -1) throw RequestError("/flow/direction", "must be 1 or -1");
    }
    if (auto s = find(*v, "rtol")) f.rtol = get_double(*s, "/flow/rtol");
    if (auto s = find(*v, "atol")) f.atol = get_double(*s, "/flow/atol");
    if (auto c = find(*v, "cone")) {
      check_keys(*c, "/flow/cone", {"u_var", "v_var", "slope", "u_sign", "count", "radius", "t_max", "threshold"});
      ConeStartSpec cs;
      const std::size_t dim = r.n >= 0 ? static_cast<std::size_t>(2 * (r.n + 1)) : 0;
      auto var = [&](const char* k) {
        const json* j = find(*c, k);
        if (!j) throw RequestError(child("/flow/cone", k), "missing");
        const long i = get_int(*j, child("/flow/cone", k));
        if (i < 0 || static_cast<std::size_t>(i) >= dim) throw RequestError(child("/flow/cone", k), "variable index out of range");
        return static_cast<std::size_t>(i);
      };
      cs.u_var = var("u_var");
      cs.v_var = var("v_var");
      if (auto s = find(*c, "slope")) cs.slope = get_double(*s, "/flow/cone/slope");
      if (auto s = find(*c, "u_sign")) cs.u_sign = static_cast<int>(get_int(*s, "/flow/cone/u_sign"));
      if (cs.u_sign != 1 && cs.u_sign != -1) throw RequestError("/flow/cone/u_sign", "must be 1 or -1");
      if (auto s = find(*c, "count")) cs.count = static_cast<std::size_t>(std::max(0L, get_int(*s, "/flow/cone/count")));
      if (auto s = find(*c, "radius")) cs.radius = get_double(*s, "/flow/cone/radius");
      if (auto s = find(*c, "t_max")) cs.t_max = get_double(*s, "/flow/cone/t_max");
      if (auto s = find(*c, "threshold")) cs.threshold = get_double(*s, "/flow/cone/threshold");
      if (!(cs.slope > 0)) throw RequestError("/flow/cone/slope", "must be positive");
      if (!(cs.radius > 0)) throw RequestError("/flow/cone/radius", "must be positive");
      f.cone = cs;
    }
    r.flow = f;
  }
  if (auto v = find(doc, "sweep")) {
    check_keys(*v, "/sweep", {"n", "factors", "operator", "lower_order", "order_bound", "grid", "T", "rtol"});
    SweepSpec s;
    if (auto k = find(*v, "n")) s.n = static_cast<int>(get_int(*k, "/sweep/n"));
    if (s.n < 1) throw RequestError("/sweep/n", "must be >= 1");
    if (auto k = find(*v, "factors")) {
      if (!k->is_array()) throw RequestError("/sweep/factors", "expected an array");
      for (std::size_t i = 0; i < k->size(); ++i) s.factors.push_back(get_poly((*k)[i], s.n, child("/sweep/factors", i)));
    }
    if (auto k = find(*v, "operator")) s.operator_ = get_poly(*k, s.n, "/sweep/operator");
    if (s.factors.empty() == !s.operator_.has_value())
      throw RequestError("/sweep", "give exactly one of \"factors\" or \"operator\"");
    if (auto k = find(*v, "lower_order")) {
      s.lower_order = get_poly(*k, s.n, "/sweep/lower_order");
      const json* b = find(*v, "order_bound");
      if (!b) throw RequestError("/sweep/order_bound", "required with lower_order");
      s.order_bound = static_cast<int>(get_int(*b, "/sweep/order_bound"));
    }
    if (auto g = find(*v, "grid")) {
      check_keys(*g, "/sweep/grid", {"log10_lo", "log10_hi", "count"});
      if (auto k = find(*g, "log10_lo")) s.log10_lo = get_double(*k, "/sweep/grid/log10_lo");
      if (auto k = find(*g, "log10_hi")) s.log10_hi = get_double(*k, "/sweep/grid/log10_hi");
      if (auto k = find(*g, "count")) s.count = static_cast<std::size_t>(std::max(0L, get_int(*k, "/sweep/grid/count")));
      if (!(s.log10_hi > s.log10_lo) || s.count < 2) throw RequestError("/sweep/grid", "need log10_lo < log10_hi and count >= 2");
    }
    if (auto k = find(*v, "T")) s.T = get_double(*k, "/sweep/T");
    if (!(s.T > 0)) throw RequestError("/sweep/T", "must be positive");
    if (auto k = find(*v, "rtol")) s.rtol = get_double(*k, "/sweep/rtol");
    try {
      (void)s.model();
    } catch (const PreconditionError& e) {
      throw RequestError("/sweep", e.what());
    }
    r.sweep = s;
  }
  if (auto v = find(doc, "weights")) {
    check_keys(*v, "/weights", {"m", "eps_star", "alpha", "eps", "gammas", "fd_step", "envelopes"});
    WeightsSpec w;
    const json* m = find(*v, "m");
    if (!m) throw RequestError("/weights/m", "missing");
    w.m = static_cast<int>(get_int(*m, "/weights/m"));
    if (auto k = find(*v, "eps_star")) w.eps_star = get_rational(*k, "/weights/eps_star");
    if (auto k = find(*v, "alpha")) w.alpha = get_doubles(*k, "/weights/alpha");
    if (auto k = find(*v, "eps")) w.eps = get_doubles(*k, "/weights/eps");
    if (auto k = find(*v, "gammas")) w.gammas = get_doubles(*k, "/weights/gammas");
    if (auto k = find(*v, "fd_step")) w.fd_step = get_double(*k, "/weights/fd_step");
    if (auto k = find(*v, "envelopes")) {
      if (!k->is_array()) throw RequestError("/weights/envelopes", "expected an array");
      w.envelopes.clear();
      for (std::size_t i = 0; i < k->size(); ++i) {
        try {
          w.envelopes.push_back(envelope_from_string(get_string((*k)[i], child("/weights/envelopes", i))));
        } catch (const PreconditionError& e) {
          throw RequestError(child("/weights/envelopes", i), e.what());
        }
      }
    }
    r.weights = w;
  }

  // Per-analysis preconditions that need no computation.
  auto need = [&](Analysis a, bool ok, const std::string& what) {
    if (r.analyses.count(a) && !ok) throw RequestError("/analyses", to_string(a) + ": " + what);
  };
  for (auto a : {Analysis::order, Analysis::localize, Analysis::spectrum, Analysis::cones, Analysis::classify}) {
    need(a, r.symbol.has_value(), "requires \"symbol\"");
    need(a, r.rho.has_value(), "requires a base point \"rho\"");
  }
  need(Analysis::cones, !r.manifold.empty(), "requires \"manifold\"");
  need(Analysis::classify, !r.manifold.empty(), "requires \"manifold\"");
  need(Analysis::flow, r.symbol.has_value(), "requires \"symbol\"");
  need(Analysis::flow, r.flow.has_value(), "requires a \"flow\" section");
  need(Analysis::flow, !r.flow || !r.flow->cone || r.rho.has_value(), "cone starts require a base point \"rho\"");
  need(Analysis::sweep, r.sweep.has_value(), "requires a \"sweep\" section");
  need(Analysis::weights, r.weights.has_value(), "requires a \"weights\" section");
  need(Analysis::weights, r.symbol.has_value() && r.rho.has_value() && !r.manifold.empty(),
       "requires \"symbol\", \"manifold\" and \"rho\"");
  if (r.symbol && r.lower_order && r.classify.levi_kappa && !(*r.classify.levi_kappa > 1))
    throw RequestError("/classify/levi_kappa", "kappa must exceed 1");
  return r;
}

AnalysisRequest parse_request_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw RequestError("", "cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_request(ss.str());
}

std::string canonical_json(const AnalysisRequest& r) {
  json j;
  j["schema"] = kSchema;
  j["name"] = r.name;
  j["description"] = r.description;
  if (r.n >= 0) j["n"] = r.n;
  if (r.symbol) j["symbol"] = poly_json(*r.symbol);
  if (r.lower_order) j["lower_order"] = poly_json(*r.lower_order);
  if (!r.manifold.empty()) {
    json m = json::array();
    for (const auto& b : r.manifold) m.push_back(poly_json(b));
    j["manifold"] = m;
  }
  if (r.rho) j["rho"] = point_json(*r.rho);
  json an = json::array();
  for (auto a : r.analyses) an.push_back(to_string(a));
  j["analyses"] = an;
  j["options"] = {{"seed", r.options.seed}, {"budget", r.options.budget}, {"tol", r.options.tol}};
  json c = json::object();
  if (r.classify.double_flags)
    c["double_flags"] = {{"vanishes_exactly_order_two", r.classify.double_flags->vanishes_exactly_order_two},
                         {"symplectic_rank_constant", r.classify.double_flags->symplectic_rank_constant},
                         {"no_spectral_transition", r.classify.double_flags->no_spectral_transition}};
  c["geometry"] = r.classify.geometry ? to_string(*r.classify.geometry) : "probe";
  if (r.classify.levi_kappa) c["levi_kappa"] = format_rational(*r.classify.levi_kappa);
  j["classify"] = c;
  if (r.flow) {
    json f;
    json starts = json::array();
    for (const auto& s : r.flow->starts) starts.push_back(point_json(s));
    f["starts"] = starts;
    f["t_end"] = r.flow->t_end;
    f["direction"] = r.flow->direction;
    f["rtol"] = r.flow->rtol;
    f["atol"] = r.flow->atol;
    if (r.flow->cone) {
      const auto& cs = *r.flow->cone;
      f["cone"] = {{"u_var", cs.u_var}, {"v_var", cs.v_var}, {"slope", cs.slope},   {"u_sign", cs.u_sign},
                   {"count", cs.count}, {"radius", cs.radius}, {"t_max", cs.t_max}, {"threshold", cs.threshold}};
    }
    j["flow"] = f;
  }
  if (r.sweep) {
    const auto& s = *r.sweep;
    json w;
    w["n"] = s.n;
    if (!s.factors.empty()) {
      json fs = json::array();
      for (const auto& f : s.factors) fs.push_back(poly_json(f));
      w["factors"] = fs;
    }
    if (s.operator_) w["operator"] = poly_json(*s.operator_);
    if (s.lower_order) {
      w["lower_order"] = poly_json(*s.lower_order);
      w["order_bound"] = s.order_bound;
    }
    w["grid"] = {{"log10_lo", s.log10_lo}, {"log10_hi", s.log10_hi}, {"count", s.count}};
    w["T"] = s.T;
    w["rtol"] = s.rtol;
    j["sweep"] = w;
  }
  if (r.weights) {
    const auto& w = *r.weights;
    json e = json::array();
    for (auto v : w.envelopes) e.push_back(to_string(v));
    j["weights"] = {{"m", w.m},         {"eps_star", format_rational(w.eps_star)}, {"alpha", w.alpha}, {"eps", w.eps},
                    {"gammas", w.gammas}, {"fd_step", w.fd_step},                   {"envelopes", e}};
  }
  return j.dump(2) + "\n";
}

}  // namespace hypercone
