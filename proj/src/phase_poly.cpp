#include "hypercone/phase_poly.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numeric>
#include <sstream>

namespace hypercone {

PhasePoint::PhasePoint(std::vector<double> x_, std::vector<double> xi_)
    : x(std::move(x_)), xi(std::move(xi_)) {
  if (x.size() != xi.size() || x.empty())
    throw DimensionError("PhasePoint: x and xi must have equal nonzero length");
}

std::vector<double> PhasePoint::flat() const {
  std::vector<double> v(x);
  v.insert(v.end(), xi.begin(), xi.end());
  return v;
}

PhasePoint PhasePoint::from_flat(std::span<const double> v) {
  if (v.size() % 2 != 0 || v.empty()) throw DimensionError("PhasePoint: odd flat length");
  const auto h = v.size() / 2;
  return PhasePoint({v.begin(), v.begin() + h}, {v.begin() + h, v.end()});
}

RationalVector PhasePoint::exact() const {
  RationalVector r;
  r.reserve(2 * x.size());
  for (double d : x) r.emplace_back(d);
  for (double d : xi) r.emplace_back(d);
  return r;
}

double PhasePoint::xi_norm() const {
  double s = 0;
  for (double d : xi) s += d * d;
  return std::sqrt(s);
}

PhaseVector::PhaseVector(std::vector<double> dx_, std::vector<double> dxi_)
    : dx(std::move(dx_)), dxi(std::move(dxi_)) {
  if (dx.size() != dxi.size() || dx.empty())
    throw DimensionError("PhaseVector: dx and dxi must have equal nonzero length");
}

std::vector<double> PhaseVector::flat() const {
  std::vector<double> v(dx);
  v.insert(v.end(), dxi.begin(), dxi.end());
  return v;
}

PhaseVector PhaseVector::from_flat(std::span<const double> v) {
  if (v.size() % 2 != 0 || v.empty()) throw DimensionError("PhaseVector: odd flat length");
  const auto h = v.size() / 2;
  return PhaseVector({v.begin(), v.begin() + h}, {v.begin() + h, v.end()});
}

PhaseVector PhaseVector::from_exact(std::span<const Rational> v) {
  std::vector<double> d(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) d[i] = v[i].get_d();
  return from_flat(d);
}

RationalVector PhaseVector::exact() const {
  RationalVector r;
  r.reserve(2 * dx.size());
  for (double d : dx) r.emplace_back(d);
  for (double d : dxi) r.emplace_back(d);
  return r;
}

double PhaseVector::norm() const {
  double s = 0;
  for (double d : dx) s += d * d;
  for (double d : dxi) s += d * d;
  return std::sqrt(s);
}

std::string variable_name(int n, std::size_t var) {
  const auto h = static_cast<std::size_t>(n + 1);
  if (var < h) return "x" + std::to_string(var);
  return "xi" + std::to_string(var - h);
}

bool GrlexLess::operator()(const Exponent& a, const Exponent& b) const {
  const auto da = std::accumulate(a.begin(), a.end(), 0u);
  const auto db = std::accumulate(b.begin(), b.end(), 0u);
  if (da != db) return da < db;
  // Larger power of an earlier variable sorts first within a degree.
  return std::lexicographical_compare(b.begin(), b.end(), a.begin(), a.end());
}

PhasePolynomial::PhasePolynomial(int n) : n_(n) {
  if (n < 0) throw DimensionError("PhasePolynomial: n must be >= 0");
}

PhasePolynomial PhasePolynomial::constant(int n, const Rational& c) {
  PhasePolynomial p(n);
  p.add_term(Exponent(p.num_vars(), 0), c);
  return p;
}

PhasePolynomial PhasePolynomial::variable(int n, std::size_t var) {
  PhasePolynomial p(n);
  if (var >= p.num_vars()) throw DimensionError("variable index out of range");
  Exponent e(p.num_vars(), 0);
  e[var] = 1;
  p.add_term(e, 1);
  return p;
}

int PhasePolynomial::total_degree() const {
  int d = -1;
  for (const auto& [e, c] : terms_)
    d = std::max(d, static_cast<int>(std::accumulate(e.begin(), e.end(), 0u)));
  return d;
}

int PhasePolynomial::degree_in(std::span<const std::size_t> vars) const {
  int d = -1;
  for (const auto& [e, c] : terms_) {
    int s = 0;
    for (auto v : vars) s += e.at(v);
    d = std::max(d, s);
  }
  return d;
}

Rational PhasePolynomial::coefficient(const Exponent& e) const {
  auto it = terms_.find(e);
  return it == terms_.end() ? Rational(0) : it->second;
}

void PhasePolynomial::add_term(const Exponent& e, const Rational& c) {
  if (e.size() != num_vars()) throw DimensionError("exponent length must be 2(n+1)");
  if (c == 0) return;
  auto [it, inserted] = terms_.try_emplace(e, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

void PhasePolynomial::check_same_dim(const PhasePolynomial& o) const {
  if (n_ != o.n_) throw DimensionError("polynomials live on different phase spaces");
}

PhasePolynomial& PhasePolynomial::operator+=(const PhasePolynomial& o) {
  check_same_dim(o);
  for (const auto& [e, c] : o.terms_) add_term(e, c);
  return *this;
}

PhasePolynomial& PhasePolynomial::operator-=(const PhasePolynomial& o) {
  check_same_dim(o);
  for (const auto& [e, c] : o.terms_) add_term(e, -c);
  return *this;
}

PhasePolynomial& PhasePolynomial::operator*=(const PhasePolynomial& o) {
  check_same_dim(o);
  PhasePolynomial r(n_);
  Exponent e(num_vars());
  for (const auto& [ea, ca] : terms_)
    for (const auto& [eb, cb] : o.terms_) {
      for (std::size_t i = 0; i < e.size(); ++i) e[i] = static_cast<std::uint16_t>(ea[i] + eb[i]);
      r.add_term(e, ca * cb);
    }
  *this = std::move(r);
  return *this;
}

PhasePolynomial& PhasePolynomial::operator*=(const Rational& c) {
  if (c == 0) {
    terms_.clear();
    return *this;
  }
  for (auto& [e, v] : terms_) v *= c;
  return *this;
}

PhasePolynomial PhasePolynomial::operator-() const {
  PhasePolynomial r(*this);
  for (auto& [e, v] : r.terms_) v = -v;
  return r;
}

PhasePolynomial PhasePolynomial::pow(unsigned k) const {
  PhasePolynomial r = constant(n_, 1);
  PhasePolynomial base = *this;
  while (k) {
    if (k & 1u) r *= base;
    k >>= 1u;
    if (k) base *= base;
  }
  return r;
}

namespace {

Rational binomial(unsigned n, unsigned k) {
  mpz_class r;
  mpz_bin_uiui(r.get_mpz_t(), n, k);
  return Rational(r);
}

Rational rational_pow(const Rational& b, unsigned k) {
  Rational r = 1;
  for (unsigned i = 0; i < k; ++i) r *= b;
  return r;
}

double double_pow(double b, unsigned k) {
  double r = 1.0;
  for (unsigned i = 0; i < k; ++i) r *= b;
  return r;
}

}  // namespace

PhasePolynomial PhasePolynomial::shifted(std::span<const Rational> shift) const {
  if (shift.size() != num_vars()) throw DimensionError("shift has wrong dimension");
  PhasePolynomial out(n_);
  for (const auto& [e, c] : terms_) {
    // Expand prod_i (s_i + X_i)^{e_i} one variable at a time.
    std::vector<std::pair<Exponent, Rational>> acc{{Exponent(num_vars(), 0), c}};
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (e[i] == 0) continue;
      std::vector<std::pair<Exponent, Rational>> next;
      for (const auto& [pe, pc] : acc) {
        for (unsigned k = 0; k <= e[i]; ++k) {
          Rational f = binomial(e[i], k) * rational_pow(shift[i], e[i] - k);
          if (f == 0) continue;
          Exponent ne = pe;
          ne[i] = static_cast<std::uint16_t>(k);
          next.emplace_back(std::move(ne), pc * f);
        }
      }
      acc = std::move(next);
    }
    for (const auto& [pe, pc] : acc) out.add_term(pe, pc);
  }
  return out;
}

Rational PhasePolynomial::evaluate_exact(std::span<const Rational> point) const {
  if (point.size() != num_vars()) throw DimensionError("evaluation point has wrong dimension");
  Rational sum = 0;
  for (const auto& [e, c] : terms_) {
    Rational t = c;
    for (std::size_t i = 0; i < e.size(); ++i)
      if (e[i]) t *= rational_pow(point[i], e[i]);
    sum += t;
  }
  return sum;
}

double PhasePolynomial::evaluate_flat(std::span<const double> point) const {
  if (point.size() != num_vars()) throw DimensionError("evaluation point has wrong dimension");
  double sum = 0.0;
  for (const auto& [e, c] : terms_) {
    double t = c.get_d();
    for (std::size_t i = 0; i < e.size(); ++i)
      if (e[i]) t *= double_pow(point[i], e[i]);
    sum += t;
  }
  return sum;
}

std::string PhasePolynomial::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  // Highest degree first reads more naturally.
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    const auto& [e, c] = *it;
    Rational a = abs(c);
    if (first) {
      if (c < 0) os << "-";
    } else {
      os << (c < 0 ? " - " : " + ");
    }
    first = false;
    bool is_const = std::all_of(e.begin(), e.end(), [](auto k) { return k == 0; });
    bool wrote = false;
    if (a != 1 || is_const) {
      os << a.get_str();
      wrote = true;
    }
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (!e[i]) continue;
      if (wrote) os << "*";
      os << variable_name(n_, i);
      if (e[i] > 1) os << "^" << e[i];
      wrote = true;
    }
  }
  return os.str();
}

double evaluate(const PhasePolynomial& p, const PhasePoint& point) {
  if (point.n() != p.n()) throw DimensionError("evaluate: dimension mismatch");
  return p.evaluate_flat(point.flat());
}

Rational evaluate_exact(const PhasePolynomial& p, const PhasePoint& point) {
  if (point.n() != p.n()) throw DimensionError("evaluate: dimension mismatch");
  return p.evaluate_exact(point.exact());
}

PhasePolynomial partial(const PhasePolynomial& p, std::size_t var) {
  if (var >= p.num_vars()) throw DimensionError("partial: variable index out of range");
  PhasePolynomial r(p.n());
  for (const auto& [e, c] : p.terms()) {
    if (e[var] == 0) continue;
    Exponent ne = e;
    ne[var] = static_cast<std::uint16_t>(e[var] - 1);
    r.add_term(ne, c * e[var]);
  }
  return r;
}

PhasePolynomial homogeneous_part(const PhasePolynomial& p, int degree) {
  PhasePolynomial r(p.n());
  for (const auto& [e, c] : p.terms())
    if (static_cast<int>(std::accumulate(e.begin(), e.end(), 0u)) == degree) r.add_term(e, c);
  return r;
}

PhasePolynomial taylor_at(const PhasePolynomial& p, std::span<const Rational> rho, int degree) {
  if (degree < 0) return PhasePolynomial(p.n());
  return homogeneous_part(p.shifted(rho), degree);
}

PhasePolynomial taylor_at(const PhasePolynomial& p, const PhasePoint& rho, int degree) {
  if (rho.n() != p.n()) throw DimensionError("taylor_at: dimension mismatch");
  return taylor_at(p, rho.exact(), degree);
}

bool is_homogeneous(const PhasePolynomial& p, std::span<const std::size_t> vars, int degree) {
  for (const auto& [e, c] : p.terms()) {
    int s = 0;
    for (auto v : vars) s += e.at(v);
    if (s != degree) return false;
  }
  return true;
}

std::vector<std::size_t> x_variables(int n) {
  std::vector<std::size_t> v(static_cast<std::size_t>(n + 1));
  std::iota(v.begin(), v.end(), 0u);
  return v;
}

std::vector<std::size_t> xi_variables(int n) {
  std::vector<std::size_t> v(static_cast<std::size_t>(n + 1));
  std::iota(v.begin(), v.end(), static_cast<std::size_t>(n + 1));
  return v;
}

std::vector<std::size_t> all_variables(int n) {
  std::vector<std::size_t> v(static_cast<std::size_t>(2 * (n + 1)));
  std::iota(v.begin(), v.end(), 0u);
  return v;
}

RationalVector gradient_exact(const PhasePolynomial& p, std::span<const Rational> point) {
  RationalVector g(p.num_vars());
  for (std::size_t i = 0; i < g.size(); ++i) g[i] = partial(p, i).evaluate_exact(point);
  return g;
}

Rational parse_rational(const std::string& text) {
  std::string s = text;
  s.erase(std::remove_if(s.begin(), s.end(), [](unsigned char ch) { return std::isspace(ch); }),
          s.end());
  if (s.empty()) throw std::invalid_argument("empty rational literal");
  auto bad = [&] { return std::invalid_argument("malformed rational literal '" + text + "'"); };
  const auto slash = s.find('/');
  if (slash != std::string::npos) {
    std::string num = s.substr(0, slash), den = s.substr(slash + 1);
    auto is_int = [](const std::string& t) {
      std::size_t i = (!t.empty() && (t[0] == '-' || t[0] == '+')) ? 1 : 0;
      return i < t.size() && std::all_of(t.begin() + static_cast<long>(i), t.end(),
                                         [](unsigned char ch) { return std::isdigit(ch); });
    };
    if (!is_int(num) || !is_int(den)) throw bad();
    if (num[0] == '+') num.erase(0, 1);
    if (den[0] == '+') den.erase(0, 1);
    mpz_class a(num, 10), b(den, 10);
    if (b == 0) throw std::invalid_argument("zero denominator in '" + text + "'");
    Rational q(a, b);
    q.canonicalize();
    return q;
  }
  // Decimal literal with optional exponent.
  std::size_t i = 0;
  bool neg = false;
  if (s[i] == '+' || s[i] == '-') neg = s[i++] == '-';
  std::string digits;
  long frac = 0;
  bool seen_dot = false, any = false;
  for (; i < s.size() && (std::isdigit(static_cast<unsigned char>(s[i])) || s[i] == '.'); ++i) {
    if (s[i] == '.') {
      if (seen_dot) throw bad();
      seen_dot = true;
    } else {
      digits += s[i];
      any = true;
      if (seen_dot) ++frac;
    }
  }
  if (!any) throw bad();
  long ex = 0;
  if (i < s.size()) {
    if (s[i] != 'e' && s[i] != 'E') throw bad();
    ++i;
    std::size_t used = 0;
    try {
      ex = std::stol(s.substr(i), &used);
    } catch (const std::exception&) {
      throw bad();
    }
    if (i + used != s.size()) throw bad();
  }
  mpz_class num(digits, 10);
  long shift = ex - frac;
  mpz_class ten_pow;
  mpz_ui_pow_ui(ten_pow.get_mpz_t(), 10, static_cast<unsigned long>(shift < 0 ? -shift : shift));
  Rational q = shift >= 0 ? Rational(num * ten_pow) : Rational(num, ten_pow);
  q.canonicalize();
  return neg ? Rational(-q) : q;
}

std::string format_rational(const Rational& q) {
  if (q.get_den() == 1) return q.get_num().get_str();
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

}  // namespace hypercone
