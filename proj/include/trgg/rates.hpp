#pragma once

// Numerical evaluation of the rate functions: the conditional locality rate
// (relative entropy against a product-Poisson kernel), the degree rate, and
// the detached-node rate with its root equation, plus an independent
// constrained-minimization oracle used to cross-check the latter.

#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <stdexcept>
#include <vector>

#include "trgg/alphabet.hpp"
#include "trgg/measures.hpp"

namespace trgg {

// Volume of the d-dimensional unit ball, pi^(d/2) / Gamma((d+2)/2).
double unit_ball_volume(std::uint32_t d);

// e^-mu mu^k / k!, computed in log space. Requires mu > 0.
double poisson_pmf(double mu, std::uint64_t k);
double log_poisson_pmf(double mu, std::uint64_t k);

// Smallest K with P(Poisson(mu) > K) < eps.
std::uint64_t poisson_tail_cap(double mu, double eps);

// Product-Poisson reference kernel with per-type means omega(a,b)/l1(a).
struct PoissonProfile {
  TypeAlphabet alphabet;
  std::vector<double> type_law;   // l1
  std::vector<double> intensity;  // omega, m*m probability scale
  std::vector<double> means;      // m*m; 0 where l1(a) == 0
  std::vector<std::uint64_t> caps;  // per (a,b) truncation cap
  double tail_bound = 1e-12;

  double log_density(const LocalityCell& cell) const;  // -inf off the support
  double density(const LocalityCell& cell) const;
  // l1(a) times the product of truncated coordinate masses; within
  // tail_bound of l1(a).
  double truncated_mass(std::size_t a) const;
};

PoissonProfile build_q_poi(const TypeAlphabet& alphabet, const std::vector<double>& type_law,
                           const std::vector<double>& omega, double tail_bound = 1e-12);

// Relative entropy sum p log(p/q) over the support of p, with 0 log 0 = 0.
// Returns +inf if p puts mass outside the support of q. p must be normalized
// within 1e-12.
template <class Key>
double relative_entropy(const std::map<Key, double>& p, const std::map<Key, double>& q) {
  double total = 0.0;
  for (const auto& [key, mass] : p) {
    if (mass < 0.0) throw std::invalid_argument("relative_entropy: negative mass");
    total += mass;
  }
  if (std::abs(total - 1.0) > 1e-12)
    throw std::invalid_argument("relative_entropy: p is not normalized");
  double h = 0.0;
  for (const auto& [key, mass] : p) {
    if (mass == 0.0) continue;
    auto it = q.find(key);
    if (it == q.end() || !(it->second > 0.0)) return std::numeric_limits<double>::infinity();
    h += mass * std::log(mass / it->second);
  }
  return h;
}

struct RateEvaluation {
  double value = 0.0;  // +inf iff infeasible
  bool feasible = true;
  std::optional<double> alpha;                 // root diagnostic, detached rate only
  std::map<std::int64_t, double> minimizer;    // optimal distribution, when one exists
  double truncation_error = 0.0;
  int iterations = 0;

  static RateEvaluation infeasible_result() {
    RateEvaluation r;
    r.value = std::numeric_limits<double>::infinity();
    r.feasible = false;
    return r;
  }
};

using LocalityDistribution = std::map<LocalityCell, double>;

// Conditional locality rate: relative entropy of ell against the
// product-Poisson kernel built from ell's own type marginal and omega,
// provided ell's marginals match (type law within 1e-9 per entry, pair
// marginal within 1e-9 per entry); +inf otherwise.
RateEvaluation locality_rate(const TypeAlphabet& alphabet, const std::vector<double>& type_law,
                             const std::vector<double>& omega, const LocalityDistribution& ell);
// Count-measure view of the same evaluation.
RateEvaluation locality_rate(const TypeMeasure& varpi, const PairMeasure& omega,
                             const LocalityMeasure& ell);

// Degree rate: relative entropy of delta against Poisson(<delta>) when
// <delta> matches unit_ball_volume(d) * t within 1e-9; +inf otherwise.
RateEvaluation degree_rate(const std::map<std::uint64_t, double>& delta, std::uint32_t d, double t);

// Unique positive root of (1 - e^-alpha)/alpha = (1-y)/mu, by bisection on a
// doubling bracket, absolute tolerance 1e-12. Requires 0 < (1-y)/mu < 1.
double solve_detached_alpha(double y, double mu);

// Detached-node rate at proportion y: relative entropy of the constrained
// minimizer (mass y at zero, a tilted zero-truncated Poisson above) against
// Poisson(mu), mu = unit_ball_volume(d) * t. Infeasible when 1-y > mu or
// y == 1; the boundary 1-y == mu degenerates to mass at {0, 1}.
RateEvaluation detached_rate(double y, std::uint32_t d, double t);

// Independent evaluation of the same minimum: direct convex optimization of
// the relative entropy over distributions on {0..K} with fixed zero mass and
// mean, via a one-dimensional search over the exponential-family parameter.
// Throws InfeasibleError when the constraints admit no distribution.
double detached_rate_oracle(double y, double mu, std::uint64_t K);

}  // namespace trgg
