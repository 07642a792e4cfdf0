#include "hypercone/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <iterator>
#include <numbers>

namespace hypercone {

namespace {

constexpr unsigned kPrimes[] = {2,  3,  5,  7,  11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53,
                                59, 61, 67, 71, 73, 79, 83, 89, 97, 101, 103, 107, 109, 113};

}  // namespace

double halton(std::uint64_t index, unsigned base) {
  double f = 1.0, r = 0.0;
  while (index > 0) {
    f /= base;
    r += f * static_cast<double>(index % base);
    index /= base;
  }
  return r;
}

double round_dyadic(double v, int bits) {
  const double s = std::ldexp(1.0, bits);
  return std::round(v * s) / s;
}

SphereSampler::SphereSampler(std::size_t dim, std::uint64_t seed)
    : dim_(dim), index_(1 + seed * 7919u) {}

std::vector<double> SphereSampler::next() {
  std::vector<double> v(dim_);
  const std::size_t pairs = (dim_ + 1) / 2;
  if (2 * pairs > std::size(kPrimes)) {
    // Beyond the prime table: fall back to a scrambled index stream per axis.
    for (std::size_t i = 0; i < dim_; ++i)
      v[i] = std::sin(static_cast<double>(index_ * (i + 1)) * 12.9898 + static_cast<double>(i));
  } else {
    for (std::size_t p = 0; p < pairs; ++p) {
      double u1 = halton(index_, kPrimes[2 * p]);
      double u2 = halton(index_, kPrimes[2 * p + 1]);
      u1 = std::max(u1, 1e-12);
      const double r = std::sqrt(-2.0 * std::log(u1));
      const double th = 2.0 * std::numbers::pi * u2;
      v[2 * p] = r * std::cos(th);
      if (2 * p + 1 < dim_) v[2 * p + 1] = r * std::sin(th);
    }
  }
  ++index_;
  double nrm = 0;
  for (double d : v) nrm += d * d;
  nrm = std::sqrt(nrm);
  if (nrm == 0) {
    v.assign(dim_, 0.0);
    v[0] = 1.0;
    return v;
  }
  for (double& d : v) d = round_dyadic(d / nrm);
  return v;
}

std::vector<std::vector<double>> SphereSampler::coordinate_directions(std::size_t dim) {
  std::vector<std::vector<double>> out;
  for (std::size_t i = 0; i < dim; ++i)
    for (double s : {1.0, -1.0}) {
      std::vector<double> e(dim, 0.0);
      e[i] = s;
      out.push_back(std::move(e));
    }
  return out;
}

}  // namespace hypercone
