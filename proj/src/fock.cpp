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

#include "phaselimit/fock.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "phaselimit/error.hpp"

namespace phaselimit {

ProbeState ProbeState::from_amplitudes(std::span<const Complex> amplitudes) {
  if (amplitudes.empty()) throw ValidationError("state: empty amplitude vector");
  double norm2 = 0.0;
  for (const auto& c : amplitudes) {
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) {
      throw ValidationError("state: non-finite amplitude");
    }
    norm2 += std::norm(c);
  }
  if (!(norm2 > 0.0)) throw ValidationError("state: zero norm");
  const double scale = 1.0 / std::sqrt(norm2);
  std::vector<Complex> normalized(amplitudes.begin(), amplitudes.end());
  for (auto& c : normalized) c *= scale;
  return ProbeState(std::move(normalized), scale);
}

ProbeState ProbeState::from_real(std::span<const double> amplitudes) {
  std::vector<Complex> c(amplitudes.begin(), amplitudes.end());
  return from_amplitudes(c);
}

ProbeState ProbeState::fock(std::size_t n, std::size_t dim) {
  if (n >= dim) throw ValidationError("fock: n must be below dim");
  std::vector<Complex> c(dim);
  c[n] = 1.0;
  return ProbeState(std::move(c), 1.0);
}

ProbeState ProbeState::padded(std::size_t dim) const {
  if (dim < amplitudes_.size()) throw ValidationError("state: cannot pad to a smaller dim");
  std::vector<Complex> c = amplitudes_;
  c.resize(dim);
  return ProbeState(std::move(c), applied_scale_);
}

ProbeState make_state(std::span<const Complex> amplitudes) {
  return ProbeState::from_amplitudes(amplitudes);
}

NumberDistribution::NumberDistribution(std::vector<double> probabilities)
    : probabilities_(std::move(probabilities)) {
  if (probabilities_.empty()) throw ValidationError("number distribution: empty");
  double total = 0.0;
  for (double p : probabilities_) {
    if (!(p >= 0.0) || !std::isfinite(p)) {
      throw ValidationError("number distribution: negative or non-finite probability");
    }
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-12) {
    throw ValidationError("number distribution: probabilities sum to " + std::to_string(total));
  }
}

double NumberDistribution::mean() const {
  double m = 0.0;
  for (std::size_t n = 0; n < probabilities_.size(); ++n) m += static_cast<double>(n) * probabilities_[n];
  return m;
}

double NumberDistribution::entropy() const {
  double h = 0.0;
  for (double p : probabilities_) {
    if (p > 0.0) h -= p * std::log(p);
  }
  return h;
}

NumberDistribution number_distribution(const ProbeState& state) {
  std::vector<double> p(state.dim());
  for (std::size_t n = 0; n < p.size(); ++n) p[n] = std::norm(state[n]);
  return NumberDistribution(std::move(p));
}

double mean_number(const ProbeState& state) { return number_distribution(state).mean(); }

double number_entropy(const ProbeState& state) { return number_distribution(state).entropy(); }

double thermal_entropy(double nbar) {
  if (!(nbar >= 0.0)) throw ValidationError("thermal_entropy: nbar must be nonnegative");
  if (nbar == 0.0) return 0.0;
  return std::log1p(nbar) + nbar * std::log1p(1.0 / nbar);
}

GeneratorSpec::GeneratorSpec(std::vector<std::int64_t> passes, int exponent,
                             std::vector<std::int64_t> cutoffs)
    : passes_(std::move(passes)), exponent_(exponent), cutoffs_(std::move(cutoffs)) {
  if (passes_.empty()) throw ValidationError("generator: at least one mode required");
  if (passes_.size() != cutoffs_.size()) {
    throw ValidationError("generator: passes and cutoffs differ in length");
  }
  if (exponent_ < 1) throw ValidationError("generator: exponent must be >= 1");
  for (auto p : passes_) {
    if (p < 1) throw ValidationError("generator: pass counts must be >= 1");
  }
  for (auto c : cutoffs_) {
    if (c < 1) throw ValidationError("generator: cutoffs must be >= 1");
  }
}

std::size_t GeneratorSpec::joint_dim() const {
  std::size_t d = 1;
  for (auto c : cutoffs_) d *= static_cast<std::size_t>(c + 1);
  return d;
}

std::int64_t GeneratorSpec::max_eigenvalue() const { return generator_eigenvalue(*this, cutoffs_); }

std::vector<std::int64_t> GeneratorSpec::occupations(std::size_t index) const {
  std::vector<std::int64_t> occ(cutoffs_.size());
  for (std::size_t k = cutoffs_.size(); k-- > 0;) {
    const auto base = static_cast<std::size_t>(cutoffs_[k] + 1);
    occ[k] = static_cast<std::int64_t>(index % base);
    index /= base;
  }
  return occ;
}

std::int64_t generator_eigenvalue(const GeneratorSpec& spec,
                                  std::span<const std::int64_t> occupations) {
  if (occupations.size() != spec.mode_count()) {
    throw ValidationError("generator_eigenvalue: occupation vector length mismatch");
  }
  std::int64_t total = 0;
  for (std::size_t k = 0; k < occupations.size(); ++k) {
    const auto n = occupations[k];
    if (n < 0 || n > spec.cutoffs()[k]) {
      throw ValidationError("generator_eigenvalue: occupation out of range in mode " +
                            std::to_string(k));
    }
    std::int64_t power = 1;
    for (int i = 0; i < spec.exponent(); ++i) power *= n;
    total += spec.passes()[k] * power;
  }
  return total;
}

ProbeState reduce_to_single_mode(const GeneratorSpec& spec,
                                 std::span<const Complex> multimode_amplitudes) {
  if (multimode_amplitudes.size() != spec.joint_dim()) {
    throw ValidationError("reduce_to_single_mode: expected " + std::to_string(spec.joint_dim()) +
                          " joint amplitudes, got " +
                          std::to_string(multimode_amplitudes.size()));
  }
  double norm2 = 0.0;
  for (const auto& c : multimode_amplitudes) norm2 += std::norm(c);
  if (std::abs(norm2 - 1.0) > 1e-10) {
    throw ValidationError("reduce_to_single_mode: input is not normalized");
  }
  std::vector<double> merged(static_cast<std::size_t>(spec.max_eigenvalue()) + 1, 0.0);
  for (std::size_t i = 0; i < multimode_amplitudes.size(); ++i) {
    const auto occ = spec.occupations(i);
    merged[static_cast<std::size_t>(generator_eigenvalue(spec, occ))] +=
        std::norm(multimode_amplitudes[i]);
  }
  std::vector<Complex> amplitudes(merged.size());
  for (std::size_t m = 0; m < merged.size(); ++m) amplitudes[m] = std::sqrt(merged[m]);
  return ProbeState::from_amplitudes(amplitudes);
}

}  // namespace phaselimit
