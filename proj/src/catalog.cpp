#include "hypercone/catalog.hpp"

#include <sstream>

namespace hypercone {

namespace {

using P = PhasePolynomial;

std::string join(const std::vector<Rational>& v) {
  std::ostringstream os;
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << format_rational(v[i]);
  return os.str();
}

void require_n(int n, int min, const char* who) {
  if (n < min) throw DimensionError(std::string(who) + ": needs n >= " + std::to_string(min));
}

SymbolCase pair_product(const std::vector<Rational>& c, int n, const P& b1, const char* id,
                        const char* what) {
  require_n(n, 2, id);
  if (c.empty()) throw PreconditionError(std::string(id) + ": no constants");
  SymbolCase s;
  s.b = {P::xi(n, 0), b1, P::xi(n, 1)};
  s.p = P::constant(n, 1);
  const P q = s.b[1].pow(2) + s.b[2].pow(2);
  for (const auto& cj : c) s.p *= s.b[0].pow(2) - cj * q;
  s.rho = base_point(n);
  s.m = 2 * static_cast<int>(c.size());
  s.id = id;
  s.description = std::string(what) + ", c = (" + join(c) + ")";
  return s;
}

}  // namespace

PhasePoint base_point(int n) {
  std::vector<double> x(static_cast<std::size_t>(n + 1), 0.0), xi(x);
  xi.back() = 1.0;
  return {x, xi};
}

SymbolCase tilted_pair(const std::vector<Rational>& c, int n) {
  return pair_product(c, n, (P::x(n, 0) - P::x(n, 1)) * P::xi(n, n), "tilted_pair",
                      "prod (xi0^2 - c_j((x0-x1)^2 xin^2 + xi1^2))");
}

SymbolCase straight_pair(const std::vector<Rational>& c, int n) {
  return pair_product(c, n, P::x(n, 0) * P::xi(n, n), "straight_pair",
                      "prod (xi0^2 - c_j(x0^2 xin^2 + xi1^2))");
}

SymbolCase cubic_cone(const Rational& a, const Rational& b, int n) {
  require_n(n, 2, "cubic_cone");
  SymbolCase s;
  const P xi0 = P::xi(n, 0), xin = P::xi(n, n);
  s.b = {xi0, P::x(n, 0) * xin, P::x(n, 1) * xin, P::xi(n, 1)};
  s.p = xi0.pow(3) - Rational(3) * a * (s.b[1].pow(2) + s.b[2].pow(2) + s.b[3].pow(2)) * xi0 -
        Rational(2) * b * s.b[1] * s.b[2] * s.b[3];
  s.rho = base_point(n);
  s.m = 3;
  s.id = "cubic_cone";
  s.description = "xi0^3 - 3a((x0^2+x1^2)xin^2 + xi1^2)xi0 - 2b x0 x1 xi1 xin^2, a = " +
                  format_rational(a) + ", b = " + format_rational(b);
  return s;
}

SymbolCase linear_product(const std::vector<Rational>& alpha) {
  const int n = 1;
  if (alpha.empty()) throw PreconditionError("linear_product: no roots");
  SymbolCase s;
  s.b = {P::xi(n, 0), P::x(n, 0) * P::xi(n, 1)};
  s.p = P::constant(n, 1);
  for (const auto& a : alpha) s.p *= s.b[0] - a * s.b[1];
  s.rho = base_point(n);
  s.m = static_cast<int>(alpha.size());
  s.id = "linear_product";
  s.description = "prod (xi0 - alpha_j x0 xi1), alpha = (" + join(alpha) + ")";
  return s;
}

std::vector<SymbolCase> bundled_cases() {
  return {tilted_pair({Rational(1, 2)}), tilted_pair({Rational(3, 2)}),
          straight_pair({Rational(1), Rational(2)}), cubic_cone(Rational(1), Rational(-1, 2)),
          linear_product({Rational(1), Rational(0), Rational(-1)})};
}

}  // namespace hypercone
