#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hypercone/characteristic.hpp"

namespace hypercone {

struct GammaMembership {
  bool member = false;
  bool boundary = false;  // some root of s -> p_loc(X + sN) lies within tol of 0
  double margin = 0;      // -max root; positive inside the cone
};

/// X in Gamma_rho iff every root of s -> p_loc(X + sN) is < -tol. Decided by an exact Sturm count.
GammaMembership gamma_membership(const Localization& L, const PhaseVector& X, double tol = 1e-9);
GammaMembership gamma_membership_exact(const Localization& L, std::span<const Rational> X,
                                       const Rational& tol);

/// Largest root of s -> p_loc(X + sN), floating point. Hyperbolicity makes every root real.
double max_root_along_N(const Localization& L, std::span<const double> X);

/// Basis H_{b_0}(rho), ..., H_{b_k}(rho) of (T_rho Sigma)^sigma.
std::vector<RationalVector> sigma_perp(const CharManifold& sigma);

enum class WitnessKind { gamma_member, transversality_witness, propagation_witness, none };
std::string to_string(WitnessKind k);

struct ConeWitness {
  WitnessKind kind = WitnessKind::none;
  PhaseVector X;
  std::map<std::string, std::string> certificate;  // exact values formatted as "num/den"
};

struct ConeSearchOptions {
  std::size_t budget = 4096;  // objective evaluations per search
  std::uint64_t seed = 0;
  double tol = 1e-9;
};

enum class ConeStatus { member, non_member, undecided };
std::string to_string(ConeStatus s);

struct PropagationResult {
  ConeStatus status = ConeStatus::undecided;
  std::optional<ConeWitness> witness;  // a Y in Gamma_rho with sigma(X, Y) > 0
  double max_value = 0;                // sup of sigma(X, Y) over sampled unit Y, normalized
  std::size_t samples = 0;
  std::string note;
};

/// Semi-decision of X in C_rho = {X | sigma(X, Y) <= 0 for all Y in Gamma_rho}.
PropagationResult propagation_membership(const Localization& L, const CharManifold& sigma,
                                         const PhaseVector& X, const ConeSearchOptions& opts = {});
PropagationResult propagation_membership_exact(const Localization& L, const CharManifold& sigma,
                                               std::span<const Rational> X,
                                               const ConeSearchOptions& opts = {});

enum class Transversality { transversal, non_transversal, undecided };
std::string to_string(Transversality t);

struct TransversalityResult {
  Transversality status = Transversality::undecided;
  std::optional<ConeWitness> witness;
  std::size_t samples = 0;
  double best_margin = 0;  // best (ii)-search margin
  std::string method;
  std::string note;
};

/// C_rho ∩ T_rho Sigma = {0}? Searches Gamma_rho ∩ span{H_{b_1}..H_{b_k}} for a certificate,
/// then T_rho Sigma ∩ C_rho for a counterexample.
TransversalityResult transversality_check(const Localization& L, const CharManifold& sigma,
                                          const ConeSearchOptions& opts = {});

struct BracketCriterion {
  bool nonsingular = false;
  RationalMatrix brackets;  // ({b_i, b_j}(rho))
  Rational determinant;
};

BracketCriterion bracket_criterion(const CharManifold& sigma);
bool involutivity_check(const CharManifold& sigma);

}  // namespace hypercone
