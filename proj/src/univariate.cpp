#include "hypercone/univariate.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>

namespace hypercone {

namespace {

template <class T>
Univariate<T> mul(const Univariate<T>& a, const Univariate<T>& b) {
  if (a.c.empty() || b.c.empty()) return {};
  Univariate<T> r;
  r.c.assign(a.c.size() + b.c.size() - 1, T(0));
  for (std::size_t i = 0; i < a.c.size(); ++i)
    for (std::size_t j = 0; j < b.c.size(); ++j) r.c[i + j] += a.c[i] * b.c[j];
  return r;
}

template <class T>
Univariate<T> restrict_impl(const PhasePolynomial& p, std::span<const T> base,
                            std::span<const T> dir) {
  if (base.size() != p.num_vars() || dir.size() != p.num_vars())
    throw DimensionError("restrict_to_line: dimension mismatch");
  Univariate<T> out;
  for (const auto& [e, coef] : p.terms()) {
    Univariate<T> term;
    if constexpr (std::is_same_v<T, double>)
      term.c = {coef.get_d()};
    else
      term.c = {T(coef)};
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (!e[i]) continue;
      Univariate<T> lin;
      lin.c = {base[i], dir[i]};
      for (unsigned k = 0; k < e[i]; ++k) term = mul(term, lin);
    }
    if (out.c.size() < term.c.size()) out.c.resize(term.c.size(), T(0));
    for (std::size_t i = 0; i < term.c.size(); ++i) out.c[i] += term.c[i];
  }
  out.trim();
  return out;
}

// Remainder of a / b over Q.
RationalUnivariate rem(RationalUnivariate a, const RationalUnivariate& b) {
  const int db = b.degree();
  if (db < 0) throw std::domain_error("polynomial division by zero");
  a.trim();
  while (a.degree() >= db) {
    const int da = a.degree();
    Rational f = a.c[static_cast<std::size_t>(da)] / b.c[static_cast<std::size_t>(db)];
    for (int i = 0; i <= db; ++i)
      a.c[static_cast<std::size_t>(da - db + i)] -= f * b.c[static_cast<std::size_t>(i)];
    a.trim();
  }
  return a;
}

RationalUnivariate quot(RationalUnivariate a, const RationalUnivariate& b) {
  const int db = b.degree();
  a.trim();
  RationalUnivariate q;
  if (a.degree() < db) return q;
  q.c.assign(static_cast<std::size_t>(a.degree() - db + 1), Rational(0));
  while (a.degree() >= db) {
    const int da = a.degree();
    Rational f = a.c[static_cast<std::size_t>(da)] / b.c[static_cast<std::size_t>(db)];
    q.c[static_cast<std::size_t>(da - db)] = f;
    for (int i = 0; i <= db; ++i)
      a.c[static_cast<std::size_t>(da - db + i)] -= f * b.c[static_cast<std::size_t>(i)];
    a.trim();
  }
  return q;
}

void make_monic(RationalUnivariate& f) {
  f.trim();
  if (f.c.empty()) return;
  Rational lead = f.c.back();
  for (auto& v : f.c) v /= lead;
}

void normalize_positive(RationalUnivariate& f) {
  f.trim();
  if (f.c.empty()) return;
  Rational lead = abs(f.c.back());
  for (auto& v : f.c) v /= lead;
}

int sign(const Rational& q) { return sgn(q); }

}  // namespace

RationalUnivariate restrict_to_line(const PhasePolynomial& p, std::span<const Rational> base,
                                    std::span<const Rational> dir) {
  return restrict_impl<Rational>(p, base, dir);
}

RealUnivariate restrict_to_line(const PhasePolynomial& p, std::span<const double> base,
                                std::span<const double> dir) {
  return restrict_impl<double>(p, base, dir);
}

Rational eval(const RationalUnivariate& f, const Rational& t) {
  Rational r = 0;
  for (auto it = f.c.rbegin(); it != f.c.rend(); ++it) r = r * t + *it;
  return r;
}

double eval(const RealUnivariate& f, double t) {
  double r = 0;
  for (auto it = f.c.rbegin(); it != f.c.rend(); ++it) r = r * t + *it;
  return r;
}

RationalUnivariate derivative(const RationalUnivariate& f) {
  RationalUnivariate d;
  for (std::size_t i = 1; i < f.c.size(); ++i) d.c.push_back(f.c[i] * static_cast<long>(i));
  d.trim();
  return d;
}

RationalUnivariate gcd(RationalUnivariate a, RationalUnivariate b) {
  a.trim();
  b.trim();
  while (b.degree() >= 0) {
    RationalUnivariate r = rem(a, b);
    a = std::move(b);
    b = std::move(r);
    normalize_positive(b);
  }
  make_monic(a);
  return a;
}

RationalUnivariate squarefree_part(const RationalUnivariate& f) {
  RationalUnivariate g = gcd(f, derivative(f));
  RationalUnivariate s = g.degree() <= 0 ? f : quot(f, g);
  make_monic(s);
  return s;
}

SturmSequence::SturmSequence(const RationalUnivariate& squarefree) {
  RationalUnivariate p0 = squarefree;
  normalize_positive(p0);
  if (p0.degree() < 0) throw std::domain_error("Sturm sequence of the zero polynomial");
  chain_.push_back(p0);
  RationalUnivariate p1 = derivative(p0);
  normalize_positive(p1);
  if (p1.degree() < 0) return;
  chain_.push_back(p1);
  while (true) {
    RationalUnivariate r = rem(chain_[chain_.size() - 2], chain_.back());
    if (r.degree() < 0) break;
    for (auto& v : r.c) v = -v;
    normalize_positive(r);
    chain_.push_back(std::move(r));
  }
}

int SturmSequence::variations_at(const Rational& t) const {
  int v = 0, last = 0;
  for (const auto& f : chain_) {
    int s = sign(eval(f, t));
    if (s == 0) continue;
    if (last != 0 && s != last) ++v;
    last = s;
  }
  return v;
}

int SturmSequence::variations_at_infinity(int dir) const {
  int v = 0, last = 0;
  for (const auto& f : chain_) {
    int d = f.degree();
    int s = sign(f.c[static_cast<std::size_t>(d)]);
    if (dir < 0 && (d % 2 == 1)) s = -s;
    if (last != 0 && s != last) ++v;
    last = s;
  }
  return v;
}

int SturmSequence::count_in(const Rational& a, const Rational& b) const {
  if (!(a < b)) return 0;
  return variations_at(a) - variations_at(b);
}

int SturmSequence::count_real() const { return variations_at_infinity(-1) - variations_at_infinity(1); }

int SturmSequence::count_above(const Rational& a) const {
  return variations_at(a) - variations_at_infinity(1);
}

int SturmSequence::count_below(const Rational& b) const {
  return variations_at_infinity(-1) - variations_at(b);
}

RealRootReport real_root_report(const RationalUnivariate& f) {
  RealRootReport r;
  r.degree = f.degree();
  if (r.degree <= 0) return r;
  RationalUnivariate s = squarefree_part(f);
  r.distinct_roots = s.degree();
  r.distinct_real_roots = SturmSequence(s).count_real();
  return r;
}

std::vector<std::complex<double>> complex_roots(const RealUnivariate& f) {
  RealUnivariate g = f;
  g.trim();
  const int d = g.degree();
  if (d <= 0) return {};
  // Zero roots factor out exactly.
  int zeros = 0;
  while (zeros < d && g.c[static_cast<std::size_t>(zeros)] == 0.0) ++zeros;
  std::vector<std::complex<double>> roots(static_cast<std::size_t>(zeros), {0.0, 0.0});
  const int k = d - zeros;
  if (k == 0) return roots;
  std::vector<double> a(g.c.begin() + zeros, g.c.end());
  const double lead = a.back();
  if (k == 1) {
    roots.emplace_back(-a[0] / lead, 0.0);
    return roots;
  }
  Eigen::MatrixXd comp = Eigen::MatrixXd::Zero(k, k);
  for (int i = 1; i < k; ++i) comp(i, i - 1) = 1.0;
  for (int i = 0; i < k; ++i) comp(i, k - 1) = -a[static_cast<std::size_t>(i)] / lead;
  Eigen::EigenSolver<Eigen::MatrixXd> es(comp, false);
  auto ev = es.eigenvalues();
  for (int i = 0; i < k; ++i) {
    std::complex<double> z = ev(i);
    for (int it = 0; it < 3; ++it) {
      std::complex<double> fv = 0, dv = 0;
      for (int j = k; j >= 0; --j) {
        dv = dv * z + fv;
        fv = fv * z + a[static_cast<std::size_t>(j)];
      }
      if (std::abs(dv) == 0.0) break;
      std::complex<double> step = fv / dv;
      std::complex<double> zn = z - step;
      // Newton can jump between clustered roots; accept only contractions.
      std::complex<double> fn = 0;
      for (int j = k; j >= 0; --j) fn = fn * zn + a[static_cast<std::size_t>(j)];
      if (std::abs(fn) < std::abs(fv)) z = zn; else break;
    }
    roots.push_back(z);
  }
  return roots;
}

std::optional<std::vector<double>> real_roots_if_real(const RealUnivariate& f, double tol) {
  auto roots = complex_roots(f);
  std::vector<double> out;
  out.reserve(roots.size());
  for (const auto& z : roots) {
    if (std::abs(z.imag()) > tol * (1.0 + std::abs(z))) return std::nullopt;
    out.push_back(z.real());
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace hypercone
