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

#include <fftw3.h>

#include <cmath>
#include <mutex>
#include <numbers>
#include <string>

#include "phaselimit/error.hpp"

namespace phaselimit {
namespace {

constexpr double kPi = std::numbers::pi;

// FFTW planning is not thread-safe; execution is.
std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

}  // namespace

PhaseDistribution PhaseDistribution::from_moments(std::vector<Complex> moments) {
  if (moments.empty()) throw ValidationError("phase distribution: no moments");
  if (moments[0] != Complex(1.0, 0.0)) {
    throw ValidationError("phase distribution: m_0 must equal 1");
  }
  for (std::size_t k = 1; k < moments.size(); ++k) {
    if (!std::isfinite(moments[k].real()) || !std::isfinite(moments[k].imag()) ||
        std::abs(moments[k]) > 1.0 + kMomentTolerance) {
      throw ValidationError("phase distribution: |m_" + std::to_string(k) + "| exceeds 1");
    }
  }
  PhaseDistribution dist(std::move(moments));
  const double floor = min_density(dist);
  if (floor < kDensityFloor) {
    throw ValidationError("phase distribution: density is negative (" + std::to_string(floor) +
                          ") on the check grid");
  }
  return dist;
}

PhaseDistribution PhaseDistribution::uniform() { return PhaseDistribution({Complex(1.0, 0.0)}); }

PhaseDistribution PhaseDistribution::trusted(std::vector<Complex> moments) {
  if (moments.empty()) throw ValidationError("phase distribution: no moments");
  moments[0] = Complex(1.0, 0.0);
  return PhaseDistribution(std::move(moments));
}

PhaseDistribution canonical_distribution(const ProbeState& state) {
  const auto& c = state.amplitudes();
  const std::size_t d = c.size();
  std::vector<Complex> m(d);
  for (std::size_t k = 0; k < d; ++k) {
    Complex sum{};
    for (std::size_t n = 0; n + k < d; ++n) sum += c[n] * std::conj(c[n + k]);
    m[k] = sum;
  }
  return PhaseDistribution::trusted(std::move(m));
}

double density_at(const PhaseDistribution& dist, double theta) {
  const auto& m = dist.moments();
  double s = 1.0;
  for (std::size_t k = 1; k < m.size(); ++k) {
    s += 2.0 * (m[k] * std::polar(1.0, -static_cast<double>(k) * theta)).real();
  }
  return s / (2.0 * kPi);
}

std::vector<double> density_grid(const PhaseDistribution& dist, std::size_t points) {
  if (points == 0) throw ValidationError("density_grid: need at least one point");
  const auto& m = dist.moments();
  const std::size_t n_pts = points;
  std::vector<Complex> buffer(n_pts);

  // density_j = (1/2pi) sum_k m_k e^{-ik theta_j},
  // e^{-ik theta_j} = (-1)^k e^{-i pi k / N} e^{-2 pi i k j / N}.
  auto add = [&](std::ptrdiff_t k, Complex value) {
    const auto kk = static_cast<std::ptrdiff_t>(n_pts);
    const auto two_n = 2 * kk;
    const std::ptrdiff_t r = ((k % two_n) + two_n) % two_n;
    const double sign = (((k % 2) + 2) % 2) ? -1.0 : 1.0;
    const Complex phase = sign * std::polar(1.0, -kPi * static_cast<double>(r) / static_cast<double>(n_pts));
    buffer[static_cast<std::size_t>(((k % kk) + kk) % kk)] += value * phase;
  };
  add(0, m[0]);
  for (std::size_t k = 1; k < m.size(); ++k) {
    add(static_cast<std::ptrdiff_t>(k), m[k]);
    add(-static_cast<std::ptrdiff_t>(k), std::conj(m[k]));
  }

  auto* data = reinterpret_cast<fftw_complex*>(buffer.data());
  fftw_plan plan;
  {
    std::lock_guard lock(fftw_planner_mutex());
    plan = fftw_plan_dft_1d(static_cast<int>(n_pts), data, data, FFTW_FORWARD, FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  {
    std::lock_guard lock(fftw_planner_mutex());
    fftw_destroy_plan(plan);
  }

  std::vector<double> density(n_pts);
  for (std::size_t j = 0; j < n_pts; ++j) density[j] = buffer[j].real() / (2.0 * kPi);
  return density;
}

double min_density(const PhaseDistribution& dist, std::size_t points) {
  const auto grid = density_grid(dist, points);
  double lo = grid.front();
  for (double v : grid) lo = std::min(lo, v);
  return lo;
}

double mean_square_deviation(const PhaseDistribution& dist) {
  const auto& m = dist.moments();
  double s = kPi * kPi / 3.0;
  for (std::size_t k = 1; k < m.size(); ++k) {
    const double kk = static_cast<double>(k);
    s += ((k % 2) ? -4.0 : 4.0) * m[k].real() / (kk * kk);
  }
  return s;
}

double holevo_variance(const PhaseDistribution& dist) {
  const double r = std::abs(dist.moment(1));
  if (r < 1e-14) return std::numeric_limits<double>::infinity();
  return 1.0 / (r * r) - 1.0;
}

double surrogate_function(double theta) {
  // Half-angle form of 5/2 - (8/3) cos t + (1/6) cos 2t; avoids cancellation near 0.
  const double h = std::sin(0.5 * theta);
  const double s = h * h;
  return 4.0 * s + (4.0 / 3.0) * s * s;
}

double surrogate_cost(const PhaseDistribution& dist) {
  return 2.5 - (8.0 / 3.0) * dist.moment(1).real() + dist.moment(2).real() / 6.0;
}

namespace {

double midpoint_entropy(const PhaseDistribution& dist, std::size_t points) {
  const auto grid = density_grid(dist, points);
  const double h = 2.0 * kPi / static_cast<double>(points);
  double s = 0.0;
  for (double p : grid) {
    if (p > 0.0) s -= p * std::log(p);
  }
  return s * h;
}

}  // namespace

EntropyEstimate differential_entropy_estimate(const PhaseDistribution& dist,
                                              std::size_t grid_points,
                                              std::size_t max_grid_points) {
  if (grid_points < 64 || !is_power_of_two(grid_points)) {
    throw ValidationError("differential_entropy: grid must be a power of two >= 64");
  }
  std::size_t n = grid_points;
  double coarse = midpoint_entropy(dist, n);
  while (n < max_grid_points) {
    n *= 2;
    const double fine = midpoint_entropy(dist, n);
    const double change = std::abs(fine - coarse);
    if (change < kEntropyRefinementTolerance) return {fine, n, change};
    coarse = fine;
  }
  throw ConvergenceError("differential_entropy: no convergence up to " + std::to_string(n) +
                         " grid points");
}

double differential_entropy(const PhaseDistribution& dist, std::size_t grid_points) {
  return differential_entropy_estimate(dist, grid_points).value;
}

double ensemble_length(const PhaseDistribution& dist, std::size_t grid_points) {
  return std::exp(differential_entropy(dist, grid_points));
}

}  // namespace phaselimit
