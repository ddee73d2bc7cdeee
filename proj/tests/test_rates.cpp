#include <doctest.h>

#include <cmath>
#include <limits>

#include "trgg/errors.hpp"
#include "trgg/rates.hpp"
#include "trgg/rng.hpp"

using namespace trgg;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Truncated, renormalized product-Poisson distribution over the profile box.
LocalityDistribution truncated_profile(const PoissonProfile& profile) {
  const std::size_t m = profile.alphabet.size();
  REQUIRE(m == 2);
  LocalityDistribution ell;
  double total = 0.0;
  for (std::uint32_t type = 0; type < 2; ++type) {
    const auto cap0 = static_cast<std::uint32_t>(profile.caps[type * m + 0]);
    const auto cap1 = static_cast<std::uint32_t>(profile.caps[type * m + 1]);
    for (std::uint32_t s0 = 0; s0 <= cap0; ++s0) {
      for (std::uint32_t s1 = 0; s1 <= cap1; ++s1) {
        LocalityCell cell{type, {s0, s1}};
        const double q = profile.density(cell);
        if (q > 0.0) {
          ell[cell] = q;
          total += q;
        }
      }
    }
  }
  for (auto& [cell, mass] : ell) mass /= total;
  return ell;
}

}  // namespace

TEST_SUITE("rates") {

TEST_CASE("unit ball volumes") {
  CHECK(std::abs(unit_ball_volume(1) - 2.0) < 1e-12);
  CHECK(std::abs(unit_ball_volume(2) - M_PI) < 1e-12);
  CHECK(std::abs(unit_ball_volume(3) - 4.0 * M_PI / 3.0) < 1e-12);
  CHECK_THROWS_AS(unit_ball_volume(0), std::invalid_argument);
}

TEST_CASE("poisson pmf values and mass") {
  CHECK(poisson_pmf(1.0, 0) == doctest::Approx(0.36787944117144233).epsilon(1e-12));
  CHECK(poisson_pmf(2.0, 2) == doctest::Approx(0.2706705664732254).epsilon(1e-12));
  CHECK_THROWS_AS(poisson_pmf(0.0, 1), std::invalid_argument);
  CHECK_THROWS_AS(poisson_pmf(-1.0, 1), std::invalid_argument);

  for (double mu : {0.5, 1.0, 2.0, 10.0}) {
    const auto cap = static_cast<std::uint64_t>(mu + 40.0 * std::sqrt(mu) + 40.0);
    double mass = 0.0;
    for (std::uint64_t k = 0; k <= cap; ++k) mass += poisson_pmf(mu, k);
    CHECK(std::abs(mass - 1.0) < 1e-12);
  }
}

TEST_CASE("poisson tail caps bound the tail they promise") {
  for (double mu : {0.3, 1.0, 5.0, 20.0}) {
    const std::uint64_t cap = poisson_tail_cap(mu, 1e-12);
    double mass = 0.0;
    for (std::uint64_t k = 0; k <= cap; ++k) mass += poisson_pmf(mu, k);
    CHECK(1.0 - mass < 1e-12);
  }
}

TEST_CASE("single-type kernel is a plain Poisson law") {
  TypeAlphabet alphabet({"a"});
  const auto profile = build_q_poi(alphabet, {1.0}, {0.7});
  for (std::uint32_t k = 0; k <= 20; ++k)
    CHECK(profile.density(LocalityCell{0, {k}}) ==
          doctest::Approx(poisson_pmf(0.7, k)).epsilon(1e-13));
  CHECK(std::abs(profile.truncated_mass(0) - 1.0) < 1e-12);
}

TEST_CASE("zero intensity concentrates the kernel at the zero vector") {
  TypeAlphabet alphabet({"a", "b"});
  const auto profile = build_q_poi(alphabet, {0.25, 0.75}, {0, 0, 0, 0});
  CHECK(profile.density(LocalityCell{0, {0, 0}}) == doctest::Approx(0.25));
  CHECK(profile.density(LocalityCell{1, {0, 0}}) == doctest::Approx(0.75));
  CHECK(profile.density(LocalityCell{0, {1, 0}}) == 0.0);
  CHECK(profile.density(LocalityCell{1, {0, 3}}) == 0.0);
}

TEST_CASE("two-type kernel factorizes over coordinates") {
  TypeAlphabet alphabet({"a", "b"});
  const std::vector<double> type_law = {0.4, 0.6};
  const std::vector<double> omega = {0.3, 0.2, 0.2, 0.5};
  const auto profile = build_q_poi(alphabet, type_law, omega);
  Rng rng(12);
  for (int i = 0; i < 100; ++i) {
    LocalityCell cell;
    cell.type = static_cast<std::uint32_t>(rng.bounded(2));
    cell.sigma = {static_cast<std::uint32_t>(rng.bounded(12)),
                  static_cast<std::uint32_t>(rng.bounded(12))};
    // direct product of two Poisson factors, no log-space shortcut
    const double mu0 = omega[cell.type * 2 + 0] / type_law[cell.type];
    const double mu1 = omega[cell.type * 2 + 1] / type_law[cell.type];
    auto factorial = [](std::uint32_t k) {
      double f = 1.0;
      for (std::uint32_t i = 2; i <= k; ++i) f *= i;
      return f;
    };
    const double direct = type_law[cell.type] *
                          (std::exp(-mu0) * std::pow(mu0, cell.sigma[0]) / factorial(cell.sigma[0])) *
                          (std::exp(-mu1) * std::pow(mu1, cell.sigma[1]) / factorial(cell.sigma[1]));
    CHECK(profile.density(cell) == doctest::Approx(direct).epsilon(1e-10));
  }
  for (std::size_t a = 0; a < 2; ++a)
    CHECK(std::abs(profile.truncated_mass(a) - type_law[a]) < profile.tail_bound);
}

TEST_CASE("kernel requires positive mass on active types") {
  TypeAlphabet alphabet({"a", "b"});
  CHECK_THROWS_AS(build_q_poi(alphabet, {0.0, 1.0}, {0.1, 0, 0, 0.2}), std::invalid_argument);
  // inactive zero-mass type is fine
  CHECK_NOTHROW(build_q_poi(alphabet, {0.0, 1.0}, {0, 0, 0, 0.2}));
}

TEST_CASE("relative entropy basics") {
  std::map<int, double> p = {{0, 0.5}, {1, 0.5}};
  std::map<int, double> q = {{0, 0.25}, {1, 0.75}};
  CHECK(relative_entropy(p, p) == 0.0);
  CHECK(relative_entropy(p, q) == doctest::Approx(0.14384103622589046).epsilon(1e-12));

  std::map<int, double> wide = {{0, 0.5}, {2, 0.5}};
  CHECK(relative_entropy(wide, q) == kInf);

  std::map<int, double> unnormalized = {{0, 0.5}, {1, 0.6}};
  CHECK_THROWS_AS(relative_entropy(unnormalized, q), std::invalid_argument);
}

TEST_CASE("relative entropy is nonnegative on random sparse pairs") {
  Rng rng(808);
  for (int trial = 0; trial < 200; ++trial) {
    std::map<int, double> p, q;
    const int support = 2 + static_cast<int>(rng.bounded(6));
    double ps = 0.0, qs = 0.0;
    for (int k = 0; k < support; ++k) {
      p[k] = rng.next_double() + 1e-3;
      q[k] = rng.next_double() + 1e-3;
      ps += p[k];
      qs += q[k];
    }
    for (auto& [k, v] : p) v /= ps;
    for (auto& [k, v] : q) v /= qs;
    const double h = relative_entropy(p, q);
    CHECK(h >= -1e-12);
  }
}

TEST_CASE("locality rate vanishes on the kernel itself") {
  TypeAlphabet alphabet({"a", "b"});
  const std::vector<double> type_law = {0.5, 0.5};
  const std::vector<double> omega = {0.2, 0.3, 0.3, 0.2};
  const auto profile = build_q_poi(alphabet, type_law, omega);
  const auto ell = truncated_profile(profile);

  const auto eval = locality_rate(alphabet, type_law, omega, ell);
  CHECK(eval.feasible);
  CHECK(eval.value < 1e-6);
}

TEST_CASE("locality rate is infinite off the constraint set") {
  TypeAlphabet alphabet({"a", "b"});
  const std::vector<double> type_law = {0.5, 0.5};
  const std::vector<double> omega = {0.2, 0.3, 0.3, 0.2};
  const auto ell = truncated_profile(build_q_poi(alphabet, type_law, omega));

  SUBCASE("type marginal off target") {
    const auto eval = locality_rate(alphabet, {0.6, 0.4}, omega, ell);
    CHECK_FALSE(eval.feasible);
    CHECK(eval.value == kInf);
  }
  SUBCASE("pair marginal off target") {
    const std::vector<double> scaled = {0.22, 0.33, 0.33, 0.22};
    const auto eval = locality_rate(alphabet, type_law, scaled, ell);
    CHECK_FALSE(eval.feasible);
    CHECK(eval.value == kInf);
  }
}

TEST_CASE("count-measure overload accepts exact graph statistics") {
  TypeAlphabet alphabet({"a", "b"});
  const auto varpi = make_type_measure(alphabet, {3, 1});
  const auto omega = make_pair_measure(alphabet, {1, 1, 1, 0}, 4);
  LocalityMeasure ell{alphabet,
                      {{LocalityCell{0, {1, 0}}, 1},
                       {LocalityCell{0, {1, 1}}, 1},
                       {LocalityCell{0, {0, 0}}, 1},
                       {LocalityCell{1, {1, 0}}, 1}},
                      4};
  const auto eval = locality_rate(varpi, omega, ell);
  CHECK(eval.feasible);
  CHECK(eval.value >= 0.0);
  CHECK(std::isfinite(eval.value));
}

TEST_CASE("degree rate vanishes on the truncated reference law") {
  for (std::uint32_t d : {1u, 2u, 3u}) {
    for (double mu : {0.5, 1.0, 2.0}) {
      const double t = mu / unit_ball_volume(d);
      const std::uint64_t cap = poisson_tail_cap(mu, 1e-14);
      std::map<std::uint64_t, double> delta;
      double mass = 0.0;
      for (std::uint64_t k = 0; k <= cap; ++k) mass += (delta[k] = poisson_pmf(mu, k));
      for (auto& [k, v] : delta) v /= mass;
      const auto eval = degree_rate(delta, d, t);
      CHECK(eval.feasible);
      CHECK(eval.value < 1e-8);
    }
  }
}

TEST_CASE("degree rate rejects a mean off the constraint") {
  std::map<std::uint64_t, double> point = {{0, 1.0}};
  const auto eval = degree_rate(point, 2, 1.0 / M_PI);
  CHECK_FALSE(eval.feasible);
  CHECK(eval.value == kInf);
}

TEST_CASE("degree rate at a two-point law") {
  // delta = {0: 1/2, 2: 1/2}, mean 1, reference Poisson(1)
  std::map<std::uint64_t, double> delta = {{0, 0.5}, {2, 0.5}};
  const auto eval = degree_rate(delta, 2, 1.0 / M_PI);
  CHECK(eval.feasible);
  CHECK(eval.value == doctest::Approx(0.6534264097200273).epsilon(1e-9));
}

TEST_CASE("alpha solver matches the identity point and the frozen root") {
  for (double mu : {0.5, 1.0, 2.0, 4.0}) {
    const double y = std::exp(-mu);
    CHECK(solve_detached_alpha(y, mu) == doctest::Approx(mu).epsilon(1e-10));
  }
  CHECK(solve_detached_alpha(0.6, 2.0) == doctest::Approx(4.965114231744276).epsilon(1e-9));
  CHECK_THROWS_AS(solve_detached_alpha(-0.5, 1.0), std::invalid_argument);   // target >= 1
  CHECK_THROWS_AS(solve_detached_alpha(1.0, 1.0), std::invalid_argument);    // target == 0
}

TEST_CASE("alpha grows with the detached proportion") {
  double previous = 0.0;
  for (double y = 0.1; y < 0.95; y += 0.05) {
    const double alpha = solve_detached_alpha(y, 1.0);
    CHECK(alpha > previous);
    previous = alpha;
  }
}

TEST_CASE("detached rate zeros, frozen value, and branches") {
  for (std::uint32_t d : {1u, 2u, 3u}) {
    for (double mu : {0.5, 1.0, 2.0}) {
      const double t = mu / unit_ball_volume(d);
      const auto eval = detached_rate(std::exp(-mu), d, t);
      CHECK(eval.feasible);
      CHECK(eval.value < 1e-10);
    }
  }

  const auto at_06 = detached_rate(0.6, 2, 1.0 / M_PI);
  CHECK(at_06.feasible);
  CHECK(at_06.value == doctest::Approx(0.2824943575186922).epsilon(1e-9));
  CHECK(at_06.alpha.value() == doctest::Approx(2.2316118840230228).epsilon(1e-9));

  SUBCASE("below the feasible region") {
    const auto eval = detached_rate(0.2, 2, 0.5 / M_PI);  // mu = 0.5, y < 1 - mu
    CHECK_FALSE(eval.feasible);
    CHECK(eval.value == kInf);
  }
  SUBCASE("full detachment cannot carry a positive mean") {
    const auto eval = detached_rate(1.0, 2, 1.0 / M_PI);
    CHECK_FALSE(eval.feasible);
  }
  SUBCASE("boundary concentrates on degrees zero and one") {
    const auto eval = detached_rate(0.5, 2, 0.5 / M_PI);  // 1 - y == mu == 0.5
    CHECK(eval.feasible);
    CHECK(eval.value == doctest::Approx(0.15342640972002735).epsilon(1e-9));
    CHECK(eval.minimizer.at(0) == doctest::Approx(0.5));
    CHECK(eval.minimizer.at(1) == doctest::Approx(0.5));
  }
  SUBCASE("domain errors") {
    CHECK_THROWS_AS(detached_rate(-0.1, 2, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(detached_rate(0.5, 2, 0.0), std::invalid_argument);
  }
}

TEST_CASE("detached rate is midpoint convex on the feasible region") {
  const double t = 1.0 / M_PI;  // mu = 1
  for (double y = 0.2; y + 0.1 <= 0.95; y += 0.05) {
    const double left = detached_rate(y, 2, t).value;
    const double mid = detached_rate(y + 0.05, 2, t).value;
    const double right = detached_rate(y + 0.1, 2, t).value;
    CHECK(mid <= 0.5 * (left + right) + 1e-8);
  }
}

TEST_CASE("oracle agrees with the closed construction") {
  for (double mu : {0.5, 1.0, 2.0}) {
    const double t = mu / unit_ball_volume(2);
    for (double y : {0.15, 0.4, 0.6, 0.8, 0.95}) {
      if (1.0 - y > mu) {
        CHECK_THROWS_AS(detached_rate_oracle(y, mu, 300), InfeasibleError);
        CHECK_FALSE(detached_rate(y, 2, t).feasible);
        continue;
      }
      const double direct = detached_rate(y, 2, t).value;
      const double oracle = detached_rate_oracle(y, mu, 300);
      CHECK(std::abs(direct - oracle) < 1e-6);
    }
  }
}

TEST_CASE("oracle zero and truncation guard") {
  CHECK(detached_rate_oracle(std::exp(-1.0), 1.0, 60) < 1e-10);
  // 3 * (1 - 0.9) = 0.3 < mu = 1: the truncated support cannot carry the mean
  CHECK_THROWS_AS(detached_rate_oracle(0.9, 1.0, 3), InfeasibleError);
}

}  // TEST_SUITE
