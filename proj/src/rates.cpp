#include "trgg/rates.hpp"

#include <algorithm>
#include <cmath>

#include "trgg/errors.hpp"

namespace trgg {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// log(e^a - 1) without overflow.
double log_expm1(double a) {
  if (a > 30.0) return a + std::log1p(-std::exp(-a));
  return std::log(std::expm1(a));
}

}  // namespace

double unit_ball_volume(std::uint32_t d) {
  if (d < 1) throw std::invalid_argument("unit_ball_volume: dimension must be at least 1");
  const double half = static_cast<double>(d) / 2.0;
  return std::pow(M_PI, half) / std::tgamma(half + 1.0);
}

double log_poisson_pmf(double mu, std::uint64_t k) {
  if (!(mu > 0.0)) throw std::invalid_argument("poisson_pmf: mean must be positive");
  const double kd = static_cast<double>(k);
  return -mu + kd * std::log(mu) - std::lgamma(kd + 1.0);
}

double poisson_pmf(double mu, std::uint64_t k) { return std::exp(log_poisson_pmf(mu, k)); }

std::uint64_t poisson_tail_cap(double mu, double eps) {
  if (!(mu > 0.0)) return 0;
  if (!(eps > 0.0)) throw std::invalid_argument("poisson_tail_cap: eps must be positive");
  auto k = static_cast<std::uint64_t>(std::ceil(mu + 10.0 * std::sqrt(mu) + 10.0));
  while (true) {
    // P(X > k) <= pmf(k+1) / (1 - mu/(k+2)) once k+2 > mu.
    const double ratio_gap = 1.0 - mu / (static_cast<double>(k) + 2.0);
    const double bound = std::exp(log_poisson_pmf(mu, k + 1)) / ratio_gap;
    if (bound < eps) return k;
    ++k;
  }
}

double PoissonProfile::log_density(const LocalityCell& cell) const {
  const std::size_t m = alphabet.size();
  const double base = type_law.at(cell.type);
  if (!(base > 0.0)) return -kInf;
  double logq = std::log(base);
  for (std::size_t b = 0; b < m; ++b) {
    const double mu = means[cell.type * m + b];
    const std::uint32_t k = cell.sigma[b];
    if (mu == 0.0) {
      if (k != 0) return -kInf;
      continue;  // Poisson(0) is a point mass at zero
    }
    logq += log_poisson_pmf(mu, k);
  }
  return logq;
}

double PoissonProfile::density(const LocalityCell& cell) const {
  const double lq = log_density(cell);
  return lq == -kInf ? 0.0 : std::exp(lq);
}

double PoissonProfile::truncated_mass(std::size_t a) const {
  const std::size_t m = alphabet.size();
  double mass = type_law.at(a);
  for (std::size_t b = 0; b < m; ++b) {
    const double mu = means[a * m + b];
    if (mu == 0.0) continue;
    double cdf = 0.0;
    for (std::uint64_t k = 0; k <= caps[a * m + b]; ++k) cdf += poisson_pmf(mu, k);
    mass *= cdf;
  }
  return mass;
}

PoissonProfile build_q_poi(const TypeAlphabet& alphabet, const std::vector<double>& type_law,
                           const std::vector<double>& omega, double tail_bound) {
  const std::size_t m = alphabet.size();
  if (type_law.size() != m) throw std::invalid_argument("q_poi: type law size mismatch");
  if (omega.size() != m * m) throw std::invalid_argument("q_poi: omega size mismatch");
  if (!(tail_bound > 0.0)) throw std::invalid_argument("q_poi: tail bound must be positive");
  PoissonProfile profile;
  profile.alphabet = alphabet;
  profile.type_law = type_law;
  profile.intensity = omega;
  profile.means.assign(m * m, 0.0);
  profile.caps.assign(m * m, 0);
  profile.tail_bound = tail_bound;
  for (std::size_t a = 0; a < m; ++a) {
    double row = 0.0;
    for (std::size_t b = 0; b < m; ++b) row += omega[a * m + b];
    if (row > 0.0 && !(type_law[a] > 0.0))
      throw std::invalid_argument("q_poi: division by zero type mass for symbol '" +
                                  alphabet.symbol(a) + "'");
    for (std::size_t b = 0; b < m; ++b) {
      if (omega[a * m + b] < 0.0) throw std::invalid_argument("q_poi: negative omega entry");
      if (omega[a * m + b] == 0.0) continue;
      const double mu = omega[a * m + b] / type_law[a];
      profile.means[a * m + b] = mu;
      // Split the per-type tail budget across coordinates.
      profile.caps[a * m + b] = poisson_tail_cap(mu, tail_bound / static_cast<double>(m));
    }
  }
  return profile;
}

namespace {

RateEvaluation locality_rate_impl(const TypeAlphabet& alphabet, const std::vector<double>& type_law,
                                  const std::vector<double>& omega, const LocalityDistribution& ell) {
  const std::size_t m = alphabet.size();
  if (type_law.size() != m) throw std::invalid_argument("locality_rate: type law size mismatch");
  if (omega.size() != m * m) throw std::invalid_argument("locality_rate: omega size mismatch");

  double total = 0.0;
  std::vector<double> marginal(m, 0.0);
  std::vector<double> weighted(m * m, 0.0);
  for (const auto& [cell, mass] : ell) {
    if (mass < 0.0) throw std::invalid_argument("locality_rate: negative mass");
    if (cell.type >= m || cell.sigma.size() != m)
      throw std::invalid_argument("locality_rate: malformed cell");
    total += mass;
    marginal[cell.type] += mass;
    for (std::size_t b = 0; b < m; ++b)
      weighted[cell.type * m + b] += mass * static_cast<double>(cell.sigma[b]);
  }
  if (std::abs(total - 1.0) > 1e-9)
    throw std::invalid_argument("locality_rate: ell is not normalized");

  constexpr double kFeasTol = 1e-9;
  for (std::size_t a = 0; a < m; ++a)
    if (std::abs(marginal[a] - type_law[a]) > kFeasTol) return RateEvaluation::infeasible_result();
  for (std::size_t i = 0; i < m * m; ++i)
    if (std::abs(weighted[i] - omega[i]) > kFeasTol) return RateEvaluation::infeasible_result();

  const PoissonProfile profile = build_q_poi(alphabet, marginal, omega);
  double value = 0.0;
  for (const auto& [cell, mass] : ell) {
    if (mass == 0.0) continue;
    const double logq = profile.log_density(cell);
    if (logq == -kInf) return RateEvaluation::infeasible_result();
    value += mass * (std::log(mass) - logq);
  }
  RateEvaluation result;
  result.value = value;
  result.feasible = true;
  result.truncation_error = profile.tail_bound;
  return result;
}

}  // namespace

RateEvaluation locality_rate(const TypeAlphabet& alphabet, const std::vector<double>& type_law,
                             const std::vector<double>& omega, const LocalityDistribution& ell) {
  return locality_rate_impl(alphabet, type_law, omega, ell);
}

RateEvaluation locality_rate(const TypeMeasure& varpi, const PairMeasure& omega,
                             const LocalityMeasure& ell) {
  if (varpi.alphabet != omega.alphabet || varpi.alphabet != ell.alphabet)
    throw std::invalid_argument("locality_rate: alphabet mismatch");
  const std::size_t m = varpi.alphabet.size();
  std::vector<double> omega_prob(m * m);
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = 0; b < m; ++b) omega_prob[a * m + b] = omega.omega(a, b);
  LocalityDistribution dist;
  const double n = static_cast<double>(ell.n);
  for (const auto& [cell, count] : ell.counts) dist[cell] = static_cast<double>(count) / n;
  return locality_rate_impl(varpi.alphabet, varpi.probabilities(), omega_prob, dist);
}

RateEvaluation degree_rate(const std::map<std::uint64_t, double>& delta, std::uint32_t d, double t) {
  if (!(t > 0.0)) throw std::invalid_argument("degree_rate: t must be positive");
  double total = 0.0;
  double mean = 0.0;
  for (const auto& [k, mass] : delta) {
    if (mass < 0.0) throw std::invalid_argument("degree_rate: negative mass");
    total += mass;
    mean += static_cast<double>(k) * mass;
  }
  if (std::abs(total - 1.0) > 1e-9)
    throw std::invalid_argument("degree_rate: delta is not normalized");

  const double constraint = unit_ball_volume(d) * t;
  if (std::abs(mean - constraint) > 1e-9) return RateEvaluation::infeasible_result();

  RateEvaluation result;
  for (const auto& [k, mass] : delta) {
    if (mass == 0.0) continue;
    result.value += mass * (std::log(mass) - log_poisson_pmf(mean, k));
  }
  result.feasible = true;
  for (const auto& [k, mass] : delta) result.minimizer[static_cast<std::int64_t>(k)] = mass;
  return result;
}

double solve_detached_alpha(double y, double mu) {
  if (!(mu > 0.0)) throw std::invalid_argument("solve_detached_alpha: mu must be positive");
  const double target = (1.0 - y) / mu;
  if (!(target > 0.0) || !(target < 1.0))
    throw std::invalid_argument("solve_detached_alpha: outside feasible region");
  auto f = [](double a) { return -std::expm1(-a) / a; };  // strictly decreasing, 1 at 0+
  double lo = 0.0;  // f -> 1 as a -> 0+
  double hi = 1.0;
  while (f(hi) > target) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e306) throw std::runtime_error("solve_detached_alpha: bracket overflow");
  }
  while (hi - lo > 1e-12) {
    const double mid = 0.5 * (lo + hi);
    if (f(mid) > target)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

RateEvaluation detached_rate(double y, std::uint32_t d, double t) {
  if (!(y >= 0.0) || !(y <= 1.0)) throw std::invalid_argument("detached_rate: y must lie in [0,1]");
  if (!(t > 0.0)) throw std::invalid_argument("detached_rate: t must be positive");
  const double mu = unit_ball_volume(d) * t;

  if (1.0 - y > mu) return RateEvaluation::infeasible_result();
  if (y >= 1.0) return RateEvaluation::infeasible_result();  // mean constraint needs mass above 0

  const double target = (1.0 - y) / mu;
  RateEvaluation result;
  result.feasible = true;

  if (target >= 1.0 - 1e-12) {
    // Boundary 1-y == mu: all non-zero mass sits at degree 1.
    result.alpha = 0.0;
    result.minimizer[0] = y;
    result.minimizer[1] = 1.0 - y;
    if (y > 0.0) result.value += y * (std::log(y) - log_poisson_pmf(mu, 0));
    result.value += (1.0 - y) * (std::log(1.0 - y) - log_poisson_pmf(mu, 1));
    return result;
  }

  const double alpha = solve_detached_alpha(y, mu);
  result.alpha = alpha;

  // Minimizer: p(0) = y, p(k) = (1-y) alpha^k / (k! (e^alpha - 1)).
  const double log_rest = std::log(1.0 - y);
  const double log_alpha = std::log(alpha);
  const double log_norm = log_expm1(alpha);
  const std::uint64_t cap =
      std::max<std::uint64_t>({poisson_tail_cap(alpha, 1e-16), poisson_tail_cap(mu, 1e-16), 8});
  const std::uint64_t lo =
      alpha > 1e4 ? static_cast<std::uint64_t>(
                        std::max(1.0, std::floor(alpha - 60.0 * std::sqrt(alpha) - 60.0)))
                  : 1;

  if (y > 0.0) {
    result.value += y * (std::log(y) - log_poisson_pmf(mu, 0));
    result.minimizer[0] = y;
  }
  double tail_mass = 1.0 - y;
  for (std::uint64_t k = lo; k <= cap; ++k) {
    const double kd = static_cast<double>(k);
    const double logp = log_rest + kd * log_alpha - std::lgamma(kd + 1.0) - log_norm;
    const double p = std::exp(logp);
    if (p > 0.0) result.value += p * (logp - log_poisson_pmf(mu, k));
    tail_mass -= p;
    if (k <= lo + 256 || p > 1e-300) result.minimizer[static_cast<std::int64_t>(k)] = p;
  }
  result.truncation_error = std::max(0.0, tail_mass);
  return result;
}

double detached_rate_oracle(double y, double mu, std::uint64_t K) {
  if (!(y >= 0.0) || !(y <= 1.0)) throw std::invalid_argument("oracle: y must lie in [0,1]");
  if (!(mu > 0.0)) throw std::invalid_argument("oracle: mu must be positive");
  if (K < 1) throw std::invalid_argument("oracle: K must be at least 1");
  if (y >= 1.0) throw InfeasibleError("oracle: zero mass cannot carry a positive mean");
  if (1.0 - y > mu) throw InfeasibleError("oracle: outside feasible region");

  const double rest = 1.0 - y;
  const double target_mean = mu / rest;  // conditional mean over {1..K}
  if (target_mean >= static_cast<double>(K))
    throw InfeasibleError("oracle: truncated support cannot carry the mean");

  std::vector<double> logq(K + 1);
  for (std::uint64_t k = 0; k <= K; ++k) logq[k] = log_poisson_pmf(mu, k);

  auto value_with = [&](const std::vector<double>& weights) {
    // weights: conditional distribution over {1..K}, index k-1.
    double v = y > 0.0 ? y * (std::log(y) - logq[0]) : 0.0;
    for (std::uint64_t k = 1; k <= K; ++k) {
      const double p = rest * weights[k - 1];
      if (p > 0.0) v += p * (std::log(p) - logq[k]);
    }
    return v;
  };

  if (target_mean <= 1.0 + 1e-12) {
    std::vector<double> weights(K, 0.0);
    weights[0] = 1.0;
    return value_with(weights);
  }

  // Exponential family delta(k) proportional to q(k) e^{beta k} on {1..K};
  // the conditional mean is strictly increasing in beta.
  auto tilted = [&](double beta, std::vector<double>& weights) {
    double lse = -kInf;
    for (std::uint64_t k = 1; k <= K; ++k)
      lse = std::max(lse, logq[k] + beta * static_cast<double>(k));
    double z = 0.0;
    for (std::uint64_t k = 1; k <= K; ++k) {
      weights[k - 1] = std::exp(logq[k] + beta * static_cast<double>(k) - lse);
      z += weights[k - 1];
    }
    double mean = 0.0;
    for (std::uint64_t k = 1; k <= K; ++k) {
      weights[k - 1] /= z;
      mean += static_cast<double>(k) * weights[k - 1];
    }
    return mean;
  };

  std::vector<double> weights(K, 0.0);
  double lo = -1.0;
  double hi = 1.0;
  while (tilted(lo, weights) > target_mean) lo *= 2.0;
  while (tilted(hi, weights) < target_mean) hi *= 2.0;
  for (int iter = 0; iter < 200 && hi - lo > 1e-14 * std::max(1.0, std::abs(hi)); ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (tilted(mid, weights) < target_mean)
      lo = mid;
    else
      hi = mid;
  }
  tilted(0.5 * (lo + hi), weights);
  return value_with(weights);
}

}  // namespace trgg
