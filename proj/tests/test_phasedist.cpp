// Copyright 2026 The phaselimit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "phaselimit/phasedist.hpp"

#include <gtest/gtest.h>

#include <cfloat>
#include <cmath>
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "phaselimit/error.hpp"

using namespace phaselimit;
using C = std::complex<double>;

namespace {

constexpr double kPi = std::numbers::pi;

// Quadrature oracle for the entropy of (1 + cos theta) / 2pi, 30 digits.
constexpr double kPairEntropy = 1.5310242469692907930;
constexpr double kPairLength = 4.6229093991636868716;

ProbeState pair_state() { return make_state(std::vector<C>{1.0, 1.0}); }

}  // namespace

TEST(phasedist, canonical_fock_is_uniform) {
  for (std::size_t n : {0, 3, 7}) {
    const auto d = canonical_distribution(ProbeState::fock(n, 8));
    EXPECT_EQ(d.moment(0), C(1.0));
    for (std::size_t k = 1; k <= d.kmax(); ++k) EXPECT_EQ(d.moment(k), C(0.0)) << k;
  }
}

TEST(phasedist, canonical_examples) {
  const auto d = canonical_distribution(pair_state());
  EXPECT_EQ(d.kmax(), 1u);
  EXPECT_NEAR(std::abs(d.moment(1) - C(0.5)), 0.0, 1e-15);
  const auto e = canonical_distribution(make_state(std::vector<C>{0.6, 0.8}));
  EXPECT_NEAR(e.moment(1).real(), 0.48, 1e-15);
  EXPECT_EQ(e.moment(5), C(0.0));
}

TEST(phasedist, moments_are_expectations_of_exp_ik_theta) {
  std::mt19937_64 rng(21);
  const auto s = oracle::random_state(6, rng);
  const auto d = canonical_distribution(s);
  for (std::size_t k = 1; k <= 5; ++k) {
    const double re = oracle::integrate(
        [&](double t) { return std::cos(k * t) * oracle::canonical_density(s, t); }, -kPi, kPi);
    const double im = oracle::integrate(
        [&](double t) { return std::sin(k * t) * oracle::canonical_density(s, t); }, -kPi, kPi);
    EXPECT_NEAR(d.moment(k).real(), re, 1e-12) << k;
    EXPECT_NEAR(d.moment(k).imag(), im, 1e-12) << k;
  }
}

TEST(phasedist, density_examples) {
  const auto u = PhaseDistribution::uniform();
  EXPECT_NEAR(density_at(u, 0.3), 1.0 / (2.0 * kPi), 1e-15);
  EXPECT_NEAR(density_at(u, 0.3), 0.159155, 1e-6);
  const auto d = canonical_distribution(pair_state());
  EXPECT_NEAR(density_at(d, 0.0), 1.0 / kPi, 1e-15);
  EXPECT_NEAR(density_at(d, 0.0), 0.318310, 1e-6);
  EXPECT_NEAR(density_at(d, kPi), 0.0, 1e-15);
}

TEST(phasedist, density_matches_direct_evaluation) {
  std::mt19937_64 rng(4);
  for (std::size_t dim : {1, 5, 33, 64}) {
    const auto s = oracle::random_state(dim, rng);
    const auto d = canonical_distribution(s);
    const std::size_t points = 256;
    const auto grid = density_grid(d, points);
    for (std::size_t j = 0; j < points; j += 7) {
      const double theta = -kPi + (j + 0.5) * 2.0 * kPi / points;
      EXPECT_NEAR(grid[j], oracle::canonical_density(s, theta), 1e-12);
      EXPECT_NEAR(density_at(d, theta), oracle::canonical_density(s, theta), 1e-12);
    }
    EXPECT_NEAR(oracle::integrate([&](double t) { return density_at(d, t); }, -kPi, kPi), 1.0,
                1e-12);
  }
}

TEST(phasedist, density_grid_aliases_high_moments) {
  // kmax above the grid size folds exactly.
  std::mt19937_64 rng(8);
  const auto s = oracle::random_state(100, rng);
  const auto d = canonical_distribution(s);
  const auto grid = density_grid(d, 64);
  for (std::size_t j = 0; j < 64; ++j) {
    const double theta = -kPi + (j + 0.5) * 2.0 * kPi / 64;
    EXPECT_NEAR(grid[j], oracle::canonical_density(s, theta), 1e-12);
  }
}

TEST(phasedist, from_moments_enforces_invariants) {
  EXPECT_NO_THROW(PhaseDistribution::from_moments({1.0, 0.5}));
  EXPECT_THROW(PhaseDistribution::from_moments({}), ValidationError);
  EXPECT_THROW(PhaseDistribution::from_moments({0.9, 0.1}), ValidationError);
  EXPECT_THROW(PhaseDistribution::from_moments({1.0, C(0.9, 0.9)}), ValidationError);
  // m_1 = 1 alone would give density (1 + 2 cos theta)/2pi < 0 near pi.
  EXPECT_THROW(PhaseDistribution::from_moments({1.0, 1.0}), ValidationError);
}

TEST(phasedist, mean_square_deviation_examples) {
  EXPECT_NEAR(mean_square_deviation(PhaseDistribution::uniform()), kPi * kPi / 3.0, 1e-15);
  EXPECT_NEAR(mean_square_deviation(PhaseDistribution::uniform()), 3.289868, 1e-6);
  EXPECT_NEAR(mean_square_deviation(canonical_distribution(pair_state())), kPi * kPi / 3.0 - 2.0,
              1e-14);
  EXPECT_NEAR(oracle::canonical_msd(pair_state()), 1.289868133696453, 1e-12);
  // Formal value for m_1 = 1 is negative, which is why such moments are rejected.
  EXPECT_NEAR(mean_square_deviation(PhaseDistribution::trusted({1.0, 1.0})), kPi * kPi / 3.0 - 4.0,
              1e-14);
}

TEST(phasedist, mean_square_deviation_matches_quadrature) {
  std::mt19937_64 rng(99);
  std::uniform_int_distribution<int> dims(1, 64);
  for (int trial = 0; trial < 60; ++trial) {
    const auto s = oracle::random_state(dims(rng), rng);
    const double moments = mean_square_deviation(canonical_distribution(s));
    EXPECT_NEAR(moments, oracle::canonical_msd(s), 1e-8);
    EXPECT_GT(moments, 0.0);
    EXPECT_LE(moments, kPi * kPi);
  }
}

TEST(phasedist, holevo_examples) {
  EXPECT_NEAR(holevo_variance(canonical_distribution(pair_state())), 3.0, 1e-14);
  EXPECT_TRUE(is_unbounded(holevo_variance(canonical_distribution(ProbeState::fock(2, 4)))));
  EXPECT_EQ(holevo_variance(PhaseDistribution::trusted({1.0, 1.0})), 0.0);
}

TEST(phasedist, entropy_examples) {
  EXPECT_NEAR(differential_entropy(PhaseDistribution::uniform()), std::log(2.0 * kPi), 1e-12);
  EXPECT_NEAR(differential_entropy(canonical_distribution(pair_state())), kPairEntropy, 1e-8);
  EXPECT_NEAR(oracle::canonical_entropy(pair_state()), kPairEntropy, 1e-9);
  EXPECT_NEAR(ensemble_length(PhaseDistribution::uniform()), 2.0 * kPi, 1e-11);
  EXPECT_NEAR(ensemble_length(canonical_distribution(pair_state())), kPairLength, 1e-7);
}

TEST(phasedist, entropy_grid_validation) {
  const auto u = PhaseDistribution::uniform();
  EXPECT_THROW(differential_entropy(u, 32), ValidationError);
  EXPECT_THROW(differential_entropy(u, 100), ValidationError);
  EXPECT_NO_THROW(differential_entropy(u, 64));
}

TEST(phasedist, entropy_reports_non_convergence) {
  std::mt19937_64 rng(2);
  const auto d = canonical_distribution(oracle::random_state(3000, rng));
  EXPECT_THROW(differential_entropy_estimate(d, 64, 256), ConvergenceError);
}

TEST(phasedist, entropy_refinement_contract) {
  std::mt19937_64 rng(6);
  const auto d = canonical_distribution(oracle::random_state(40, rng));
  const auto est = differential_entropy_estimate(d);
  EXPECT_LT(est.refinement_change, kEntropyRefinementTolerance);
  EXPECT_EQ(est.grid_points, 2 * kDefaultEntropyGrid);
}

TEST(phasedist, ensemble_length_shrinks_as_concentration_grows) {
  double previous = 2.0 * kPi + 1e-9;
  double previous_m1 = -1.0;
  for (std::size_t K : {1, 2, 3, 5, 8, 13, 21, 34}) {
    const auto s = make_state(std::vector<C>(K, 1.0));
    const auto d = canonical_distribution(s);
    const double length = ensemble_length(d);
    EXPECT_NEAR(std::log(length), oracle::canonical_entropy(s, 1024), 1e-7) << K;
    EXPECT_LT(length, previous) << K;
    EXPECT_GT(d.moment(1).real(), previous_m1);
    previous = length;
    previous_m1 = d.moment(1).real();
  }
  EXPECT_LT(previous, 0.5);
}

TEST(phasedist, surrogate_examples) {
  EXPECT_DOUBLE_EQ(surrogate_cost(PhaseDistribution::uniform()), 2.5);
  EXPECT_NEAR(surrogate_cost(canonical_distribution(pair_state())), 7.0 / 6.0, 1e-15);
  EXPECT_NEAR(surrogate_cost(canonical_distribution(pair_state())), 1.166667, 1e-6);
}

TEST(phasedist, surrogate_function_is_pointwise_below_theta_squared) {
  EXPECT_NEAR(surrogate_function(0.0), 0.0, 1e-15);
  for (double t : {0.3, 1.0, 2.5, -3.1}) {
    EXPECT_NEAR(surrogate_function(t), 2.5 - (8.0 / 3.0) * std::cos(t) + std::cos(2.0 * t) / 6.0,
                1e-14);
  }
  const int points = 1000000;
  for (int j = 0; j <= points; ++j) {
    const double t = -kPi + 2.0 * kPi * j / points;
    // The true gap is ~t^6/90, below double resolution for |t| < 1e-3.
    ASSERT_LE(surrogate_function(t), t * t * (1.0 + 4.0 * DBL_EPSILON)) << t;
  }
}

TEST(phasedist, concentration_properties_on_random_states) {
  std::mt19937_64 rng(123);
  std::uniform_int_distribution<int> dims(1, 48);
  for (int trial = 0; trial < 120; ++trial) {
    const auto s = trial % 3 == 0 ? oracle::random_real_state(dims(rng), rng)
                                  : oracle::random_state(dims(rng), rng);
    const auto d = canonical_distribution(s);
    const double msd = mean_square_deviation(d);
    const double h = differential_entropy(d);
    EXPECT_LE(surrogate_cost(d), msd + 1e-10);
    EXPECT_LE(h, std::log(2.0 * kPi) + 1e-9);
    // Entropic uncertainty relation.
    EXPECT_GE(h + number_entropy(s), std::log(2.0 * kPi) - 1e-8);
    // Gaussian entropy bound.
    EXPECT_LT(h, 0.5 * std::log(2.0 * kPi * std::exp(1.0) * msd) + 1e-9);
    // Holevo chain.
    const C m1 = d.moment(1);
    EXPECT_GE(std::norm(m1), m1.real() * m1.real());
    EXPECT_GE(m1.real(), 1.0 - msd / 2.0 - 1e-10);
    EXPECT_GE(min_density(d), PhaseDistribution::kDensityFloor);
  }
}

TEST(phasedist, uncertainty_relation_is_tight_for_fock_states) {
  for (std::size_t n : {0, 1, 4, 9}) {
    const auto s = ProbeState::fock(n, 10);
    EXPECT_NEAR(differential_entropy(canonical_distribution(s)) + number_entropy(s),
                std::log(2.0 * kPi), 1e-8);
  }
}
