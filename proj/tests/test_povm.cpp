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

#include "phaselimit/povm.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "phaselimit/bounds.hpp"
#include "phaselimit/error.hpp"

using namespace phaselimit;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * kPi;

// Moments of the phase-averaged error distribution by direct phase quadrature.
std::vector<Complex> quadrature_moments(const EstimatePOM& povm, const ProbeState& state,
                                        std::size_t points) {
  std::vector<Complex> m(povm.dim(), Complex{});
  for (std::size_t i = 0; i < points; ++i) {
    const double phi = kTwoPi * static_cast<double>(i) / static_cast<double>(points);
    const auto p = outcome_probabilities(povm, state, phi);
    for (std::size_t k = 0; k < m.size(); ++k) {
      for (std::size_t j = 0; j < p.size(); ++j) {
        m[k] += p[j] * std::polar(1.0, static_cast<double>(k) * (povm[j].estimate - phi));
      }
    }
  }
  for (auto& x : m) x /= static_cast<double>(points);
  return m;
}

double averaged_variance(const EstimatePOM& povm, const ProbeState& state, std::size_t points) {
  double total = 0.0;
  for (std::size_t i = 0; i < points; ++i) {
    total += per_phase_variance(povm, state, kTwoPi * static_cast<double>(i) / points);
  }
  return total / static_cast<double>(points);
}

EstimatePOM identity_pom(std::size_t dim, double estimate) {
  return EstimatePOM(dim, {PomOutcome{estimate, Eigen::MatrixXcd::Identity(dim, dim)}});
}

ProbeState pair_state() {
  const double r = 1.0 / std::sqrt(2.0);
  return ProbeState::from_real(std::vector<double>{r, r});
}

}  // namespace

TEST(povm, wrap_conventions) {
  EXPECT_DOUBLE_EQ(wrap_to_period(-0.5), kTwoPi - 0.5);
  EXPECT_DOUBLE_EQ(wrap_to_period(kTwoPi), 0.0);
  EXPECT_DOUBLE_EQ(wrap_to_period(7.0), 7.0 - kTwoPi);
  EXPECT_DOUBLE_EQ(wrap_centered(kPi), -kPi);
  EXPECT_DOUBLE_EQ(wrap_centered(-kPi), -kPi);
  EXPECT_DOUBLE_EQ(wrap_centered(3.0 * kPi / 2.0), -kPi / 2.0);
  EXPECT_DOUBLE_EQ(wrap_centered(0.25), 0.25);
}

TEST(povm, validation) {
  Eigen::MatrixXcd half = 0.5 * Eigen::MatrixXcd::Identity(2, 2);
  EXPECT_THROW(EstimatePOM(2, {PomOutcome{0.0, half}}), ValidationError);
  Eigen::MatrixXcd skew = Eigen::MatrixXcd::Identity(2, 2);
  skew(0, 1) = 0.3;
  EXPECT_THROW(EstimatePOM(2, {PomOutcome{0.0, skew}}), ValidationError);
  Eigen::MatrixXcd neg = Eigen::MatrixXcd::Zero(2, 2);
  neg(0, 0) = -0.5;
  Eigen::MatrixXcd pos = Eigen::MatrixXcd::Identity(2, 2);
  pos(0, 0) = 1.5;
  EXPECT_THROW(EstimatePOM(2, {PomOutcome{0.0, neg}, PomOutcome{1.0, pos}}), ValidationError);
  EXPECT_THROW(EstimatePOM(2, {PomOutcome{0.0, Eigen::MatrixXcd::Identity(3, 3)}}),
               ValidationError);
  EXPECT_THROW(EstimatePOM(2, {}), ValidationError);
  EXPECT_THROW(EstimatePOM(2, {PomOutcome{NAN, Eigen::MatrixXcd::Identity(2, 2)}}),
               ValidationError);
  const auto ok = identity_pom(2, -1.0);
  EXPECT_DOUBLE_EQ(ok[0].estimate, kTwoPi - 1.0);
  EXPECT_THROW(conditional_probability(ok, ProbeState::fock(3, 4), 0.0, 0), ValidationError);
  EXPECT_THROW(conditional_probability(ok, pair_state(), 0.0, 1), ValidationError);
}

TEST(povm, identity_pom_gives_uniform_error) {
  const auto povm = identity_pom(3, 0.0);
  const auto s = ProbeState::from_real(std::vector<double>{0.6, 0.0, 0.8});
  for (double phi : {0.0, 1.0, 4.0}) EXPECT_NEAR(conditional_probability(povm, s, phi, 0), 1.0, 1e-14);
  const auto avg = average_distribution(povm, s);
  EXPECT_NEAR(std::abs(avg.moment(1)), 0.0, 1e-15);
  EXPECT_NEAR(mean_square_deviation(avg), kPi * kPi / 3.0, 1e-12);
}

TEST(povm, number_measurement_is_phase_blind) {
  const auto povm = number_measurement({0.0, 1.0, 2.0});
  const auto s = ProbeState::from_real(std::vector<double>{0.6, 0.0, 0.8});
  for (double phi : {0.0, 0.7, 3.0}) {
    const auto p = outcome_probabilities(povm, s, phi);
    EXPECT_NEAR(p[0], 0.36, 1e-14);
    EXPECT_NEAR(p[1], 0.0, 1e-14);
    EXPECT_NEAR(p[2], 0.64, 1e-14);
  }
  EXPECT_NEAR(mean_square_deviation(average_distribution(povm, s)), kPi * kPi / 3.0, 1e-12);
}

TEST(povm, canonical_measurement_reproduces_canonical_distribution) {
  std::mt19937_64 rng(3);
  for (std::size_t dim : {1, 2, 5, 12}) {
    const auto s = oracle::random_state(dim, rng);
    const auto avg = average_distribution(canonical_measurement(dim, 2 * dim + 1), s);
    const auto can = canonical_distribution(s);
    for (std::size_t k = 0; k < dim; ++k) EXPECT_NEAR(std::abs(avg.moment(k) - can.moment(k)), 0.0, 1e-12);
  }
}

TEST(povm, covariant_seed_examples) {
  const auto seed = covariant_seed(canonical_measurement(4, 9));
  for (Eigen::Index a = 0; a < 4; ++a) {
    for (Eigen::Index b = 0; b < 4; ++b) EXPECT_NEAR(std::abs(seed(a, b) - 1.0 / kTwoPi), 0.0, 1e-14);
  }
  const auto number = covariant_seed(number_measurement({0.0, 1.0}));
  EXPECT_NEAR(number(0, 0).real(), 1.0 / kTwoPi, 1e-15);
  EXPECT_NEAR(std::abs(number(0, 1)), 0.0, 1e-15);
}

TEST(povm, covariant_seed_has_unit_diagonal) {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 20; ++trial) {
    const auto povm = random_pom(6, 5, 2, rng);
    const auto seed = covariant_seed(povm);
    for (Eigen::Index a = 0; a < 6; ++a) EXPECT_NEAR(std::abs(kTwoPi * seed(a, a) - 1.0), 0.0, 1e-12);
    EXPECT_NEAR((seed - seed.adjoint()).cwiseAbs().maxCoeff(), 0.0, 1e-14);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(seed);
    EXPECT_GE(es.eigenvalues().minCoeff(), -1e-12);
  }
}

TEST(povm, averaged_distribution_equals_covariant_form) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t dim = 2 + trial % 7;
    const auto povm = random_pom(dim, 1 + trial % 5 + dim / 2, 2, rng);
    const auto s = oracle::random_state(dim, rng);
    const auto avg = average_distribution(povm, s);
    const auto cov = covariant_distribution(covariant_seed(povm), s);
    const auto quad = quadrature_moments(povm, s, 2048);
    for (std::size_t k = 0; k < dim; ++k) {
      EXPECT_NEAR(std::abs(avg.moment(k) - cov.moment(k)), 0.0, 1e-12);
      EXPECT_NEAR(std::abs(avg.moment(k) - quad[k]), 0.0, 1e-12);
    }
    EXPECT_GE(min_density(avg), PhaseDistribution::kDensityFloor);
  }
}

TEST(povm, per_phase_variance_examples) {
  const auto povm = identity_pom(1, 1.0);
  const auto vac = ProbeState::vacuum();
  EXPECT_NEAR(per_phase_variance(povm, vac, 1.0), 0.0, 1e-15);
  EXPECT_NEAR(per_phase_variance(povm, vac, 0.0), 1.0, 1e-15);
  EXPECT_NEAR(per_phase_variance(povm, vac, 1.0 + kPi), kPi * kPi, 1e-12);
}

TEST(povm, averaged_variance_is_mean_square_deviation) {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 10; ++trial) {
    const std::size_t dim = 2 + trial % 5;
    const auto povm = random_pom(dim, 4, 2, rng);
    const auto s = oracle::random_state(dim, rng);
    EXPECT_NEAR(averaged_variance(povm, s, 4096), mean_square_deviation(average_distribution(povm, s)),
                1e-6);
  }
}

TEST(povm, error_respects_heisenberg_bound) {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t dim = 2 + trial % 9;
    const auto povm = random_pom(dim, dim + trial % 4, 1 + trial % 3, rng);
    const auto s = oracle::random_state(dim, rng);
    const double delta = std::sqrt(mean_square_deviation(average_distribution(povm, s)));
    EXPECT_GT(delta, heisenberg_bound(mean_number(s)));
  }
}

TEST(povm, kphase_small_cases) {
  const auto one = kphase_construction(1);
  EXPECT_EQ(one.mean_number, 0.0);
  EXPECT_NEAR(one.success[0], 1.0, 1e-14);
  EXPECT_NEAR(one.variance_at_phases[0], 0.0, 1e-14);

  const auto two = kphase_construction(2);
  EXPECT_NEAR(two.mean_number, 0.5, 1e-14);
  EXPECT_NEAR(std::abs(two.gram(0, 1)), 0.0, 1e-14);
  EXPECT_DOUBLE_EQ(two.phases[1], kPi);
  for (double v : two.variance_at_phases) EXPECT_NEAR(v, 0.0, 1e-14);
  // Averaged over all phases, a 2-outcome scheme is worse than the optimum.
  const double avg = mean_square_deviation(average_distribution(two.povm, two.state));
  EXPECT_GT(avg, kPi * kPi / 3.0 - 2.0 - 1e-12);

  EXPECT_THROW(kphase_construction(0), ValidationError);
}

TEST(povm, kphase_orthogonality) {
  for (std::size_t K : {4, 8, 16}) {
    const auto s = kphase_construction(K);
    EXPECT_NEAR((s.gram - Eigen::MatrixXcd::Identity(K, K)).cwiseAbs().maxCoeff(), 0.0, 1e-12);
    EXPECT_NEAR(s.mean_number, (K - 1) / 2.0, 1e-12);
    for (std::size_t k = 0; k < K; ++k) {
      EXPECT_NEAR(s.success[k], 1.0, 1e-12);
      EXPECT_NEAR(s.variance_at_phases[k], 0.0, 1e-12);
    }
  }
}
