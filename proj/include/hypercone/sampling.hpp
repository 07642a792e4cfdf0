#pragma once

#include <cstdint>
#include <vector>

namespace hypercone {

/// Deterministic quasi-random unit vectors (Halton points pushed through
/// Box-Muller). Components are rounded to multiples of 2^-16 before
/// normalization so downstream exact arithmetic stays cheap.
class SphereSampler {
 public:
  SphereSampler(std::size_t dim, std::uint64_t seed = 0);

  std::size_t dim() const { return dim_; }
  /// Next unit vector. Not exactly unit length after dyadic rounding.
  std::vector<double> next();
  /// Coordinate directions +-e_i, in order e_0, -e_0, e_1, ...
  static std::vector<std::vector<double>> coordinate_directions(std::size_t dim);

 private:
  std::size_t dim_;
  std::uint64_t index_;
};

double halton(std::uint64_t index, unsigned base);
double round_dyadic(double v, int bits = 16);

}  // namespace hypercone
