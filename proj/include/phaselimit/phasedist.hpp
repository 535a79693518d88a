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

#pragma once

// 2pi-periodic phase-error densities held exactly by their trigonometric
// moments m_k = <exp(i k Theta)>, k = 0..kmax; all higher moments vanish.

#include <complex>
#include <cstddef>
#include <limits>
#include <vector>

#include "phaselimit/fock.hpp"

namespace phaselimit {

class PhaseDistribution {
 public:
  static constexpr double kMomentTolerance = 1e-12;
  static constexpr double kDensityFloor = -1e-9;
  static constexpr std::size_t kDensityCheckGrid = 4096;

  /// Validates m_0 = 1, |m_k| <= 1 + 1e-12 and density >= -1e-9 on the
  /// 4096-point check grid. Throws ValidationError otherwise.
  static PhaseDistribution from_moments(std::vector<Complex> moments);

  /// Flat density 1/(2 pi).
  static PhaseDistribution uniform();

  /// Skips the density check; for moments produced by an exact construction.
  static PhaseDistribution trusted(std::vector<Complex> moments);

  const std::vector<Complex>& moments() const { return moments_; }
  std::size_t kmax() const { return moments_.size() - 1; }

  /// m_k for k >= 0; zero beyond kmax.
  Complex moment(std::size_t k) const { return k < moments_.size() ? moments_[k] : Complex{}; }

 private:
  explicit PhaseDistribution(std::vector<Complex> moments) : moments_(std::move(moments)) {}
  std::vector<Complex> moments_;
};

/// Canonical phase distribution (1/2pi)|sum_n c_n e^{i n theta}|^2 of a state.
PhaseDistribution canonical_distribution(const ProbeState& state);

/// Fourier reconstruction of the density at `theta`.
double density_at(const PhaseDistribution& dist, double theta);

/// Density on the midpoint grid theta_j = -pi + (j + 1/2) 2pi/points.
std::vector<double> density_grid(const PhaseDistribution& dist, std::size_t points);

/// Smallest value of the density on the midpoint grid.
double min_density(const PhaseDistribution& dist, std::size_t points = PhaseDistribution::kDensityCheckGrid);

/// <Theta^2> over [-pi, pi], exact via the cosine series of theta^2.
double mean_square_deviation(const PhaseDistribution& dist);

/// Holevo variance |m_1|^-2 - 1; +infinity ("unbounded") when |m_1| < 1e-14.
double holevo_variance(const PhaseDistribution& dist);
inline bool is_unbounded(double v) { return v == std::numeric_limits<double>::infinity(); }

/// <5/2 - (8/3) cos Theta + (1/6) cos 2 Theta>, a pointwise lower bound on Theta^2.
double surrogate_cost(const PhaseDistribution& dist);

/// The surrogate's integrand.
double surrogate_function(double theta);

struct EntropyEstimate {
  double value = 0.0;
  std::size_t grid_points = 0;     // grid of the returned value
  double refinement_change = 0.0;  // |H(grid) - H(grid / 2)|
};

inline constexpr std::size_t kDefaultEntropyGrid = 8192;
inline constexpr double kEntropyRefinementTolerance = 1e-8;

/// Differential entropy -int p ln p, midpoint rule. The grid is doubled from
/// `grid_points` until successive values differ by < 1e-8; throws
/// ConvergenceError if that fails by `max_grid_points`, ValidationError if
/// `grid_points` is not a power of two >= 64.
EntropyEstimate differential_entropy_estimate(const PhaseDistribution& dist,
                                              std::size_t grid_points = kDefaultEntropyGrid,
                                              std::size_t max_grid_points = std::size_t{1} << 22);
double differential_entropy(const PhaseDistribution& dist,
                            std::size_t grid_points = kDefaultEntropyGrid);

/// exp(H(Theta)), the effective support length of the density.
double ensemble_length(const PhaseDistribution& dist,
                       std::size_t grid_points = kDefaultEntropyGrid);

}  // namespace phaselimit
