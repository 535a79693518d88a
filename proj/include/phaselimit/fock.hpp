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

// Probe states in the eigenbasis of a shift generator with nonnegative
// integer spectrum, and statistics of the generator's number distribution.

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

namespace phaselimit {

using Complex = std::complex<double>;

/// Normalized pure state, amplitude c_n on generator eigenvalue n.
class ProbeState {
 public:
  static constexpr double kNormTolerance = 1e-12;

  /// Normalizes `amplitudes`; throws ValidationError on empty, zero-norm,
  /// or non-finite input.
  static ProbeState from_amplitudes(std::span<const Complex> amplitudes);
  static ProbeState from_real(std::span<const double> amplitudes);

  /// Fock state |n> in a space of dimension `dim` (> n).
  static ProbeState fock(std::size_t n, std::size_t dim);
  static ProbeState vacuum() { return fock(0, 1); }

  const std::vector<Complex>& amplitudes() const { return amplitudes_; }
  std::size_t dim() const { return amplitudes_.size(); }
  const Complex& operator[](std::size_t n) const { return amplitudes_[n]; }

  /// Factor the input was multiplied by to reach unit norm.
  double applied_scale() const { return applied_scale_; }

  /// Copy zero-padded to `dim` (>= current dim).
  ProbeState padded(std::size_t dim) const;

 private:
  ProbeState(std::vector<Complex> amplitudes, double scale)
      : amplitudes_(std::move(amplitudes)), applied_scale_(scale) {}

  std::vector<Complex> amplitudes_;
  double applied_scale_ = 1.0;
};

ProbeState make_state(std::span<const Complex> amplitudes);

/// Probability distribution of the generator eigenvalue.
class NumberDistribution {
 public:
  /// Validates p_n >= 0 and sum within 1e-12 of one.
  explicit NumberDistribution(std::vector<double> probabilities);

  const std::vector<double>& probabilities() const { return probabilities_; }
  std::size_t size() const { return probabilities_.size(); }
  double operator[](std::size_t n) const { return probabilities_[n]; }

  double mean() const;
  /// Shannon entropy in nats, 0 ln 0 = 0.
  double entropy() const;

 private:
  std::vector<double> probabilities_;
};

NumberDistribution number_distribution(const ProbeState& state);
double mean_number(const ProbeState& state);
double number_entropy(const ProbeState& state);

/// Entropy of the thermal (geometric) distribution with mean `nbar`, the
/// maximum over all number distributions with that mean.
double thermal_entropy(double nbar);

/// Multimode shift generator N = sum_k p_k (N_k)^q.
class GeneratorSpec {
 public:
  GeneratorSpec(std::vector<std::int64_t> passes, int exponent,
                std::vector<std::int64_t> cutoffs);

  /// Single mode, one pass, linear: N = a^dagger a up to `cutoff`.
  static GeneratorSpec single_mode(std::int64_t cutoff) {
    return GeneratorSpec({1}, 1, {cutoff});
  }

  std::size_t mode_count() const { return passes_.size(); }
  const std::vector<std::int64_t>& passes() const { return passes_; }
  int exponent() const { return exponent_; }
  const std::vector<std::int64_t>& cutoffs() const { return cutoffs_; }

  /// Size of the joint occupation basis, prod_k (cutoff_k + 1).
  std::size_t joint_dim() const;
  /// Largest eigenvalue reachable within the cutoffs.
  std::int64_t max_eigenvalue() const;

  /// Occupations of joint basis index `index`; the last mode varies fastest.
  std::vector<std::int64_t> occupations(std::size_t index) const;

 private:
  std::vector<std::int64_t> passes_;
  int exponent_;
  std::vector<std::int64_t> cutoffs_;
};

std::int64_t generator_eigenvalue(const GeneratorSpec& spec,
                                  std::span<const std::int64_t> occupations);

/// Single-mode state with the same distribution of N as the multimode input.
/// Amplitudes are the nonnegative square roots of the merged probabilities.
ProbeState reduce_to_single_mode(const GeneratorSpec& spec,
                                 std::span<const Complex> multimode_amplitudes);

}  // namespace phaselimit
