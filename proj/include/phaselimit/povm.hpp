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

// Discrete estimate-valued measurements on a phase-shifted probe
// rho_phi = exp(-i N phi) rho_0 exp(i N phi), and the phase-averaged error
// density of Theta = estimate - phi.

#include <Eigen/Dense>

#include <cstdint>
#include <random>
#include <vector>

#include "phaselimit/fock.hpp"
#include "phaselimit/phasedist.hpp"

namespace phaselimit {

/// Reduces an angle into [0, 2pi).
double wrap_to_period(double angle);
/// Reduces an angle into [-pi, pi); wrap_centered(pi) == -pi.
double wrap_centered(double angle);

struct PomOutcome {
  double estimate = 0.0;     // in [0, 2pi)
  Eigen::MatrixXcd element;  // Hermitian PSD, dim x dim
};

class EstimatePOM {
 public:
  static constexpr double kTolerance = 1e-10;

  /// Validates Hermiticity, PSD (eigenvalue floor -1e-10) and completeness
  /// (entrywise within 1e-10). Estimates are reduced into [0, 2pi).
  EstimatePOM(std::size_t dim, std::vector<PomOutcome> outcomes);

  std::size_t dim() const { return dim_; }
  std::size_t size() const { return outcomes_.size(); }
  const std::vector<PomOutcome>& outcomes() const { return outcomes_; }
  const PomOutcome& operator[](std::size_t j) const { return outcomes_[j]; }

 private:
  std::size_t dim_;
  std::vector<PomOutcome> outcomes_;
};

/// tr[M_j rho_phi], clamped at zero. States shorter than the POM are
/// zero-padded; longer states are rejected.
double conditional_probability(const EstimatePOM& povm, const ProbeState& state, double phi,
                               std::size_t outcome_index);
std::vector<double> outcome_probabilities(const EstimatePOM& povm, const ProbeState& state,
                                          double phi);

/// Exact moments of the phase-averaged error density:
///   m_k = sum_j e^{i k est_j} sum_n (M_j)_{n+k,n} c_n conj(c_{n+k}).
PhaseDistribution average_distribution(const EstimatePOM& povm, const ProbeState& state);

/// Seed of the equivalent covariant measurement,
///   M0 = (1/2pi) sum_j e^{i N est_j} M_j e^{-i N est_j},
/// so that {e^{-i N t} M0 e^{i N t} dt} is complete. Throws ValidationError
/// if diag(2pi M0) deviates from one by more than 1e-10.
Eigen::MatrixXcd covariant_seed(const EstimatePOM& povm);

/// Error density of the covariant measurement generated by `seed`:
///   m_k = 2pi sum_n seed_{n+k,n} c_n conj(c_{n+k}).
PhaseDistribution covariant_distribution(const Eigen::MatrixXcd& seed, const ProbeState& state);

/// sum_j wrap(est_j - phi)^2 p(j | phi).
double per_phase_variance(const EstimatePOM& povm, const ProbeState& state, double phi);

/// Projective measurement of N with estimate `estimates[n]` on outcome n.
EstimatePOM number_measurement(const std::vector<double>& estimates);

/// Covariant measurement with seed `seed` sampled at `points` equally
/// spaced estimates 2pi j / points. Complete when points >= dim and
/// diag(2pi seed) = 1.
EstimatePOM discretized_covariant(const Eigen::MatrixXcd& seed, std::size_t points);

/// Canonical phase measurement realized with `points` >= dim outcomes.
EstimatePOM canonical_measurement(std::size_t dim, std::size_t points);

/// Random POM: outcome elements S^{-1/2} G_j G_j^dagger S^{-1/2} with
/// Gaussian G_j of rank `rank`, and uniformly random estimates.
EstimatePOM random_pom(std::size_t dim, std::size_t outcomes, std::size_t rank,
                       std::mt19937_64& rng);

struct KPhaseScheme {
  std::size_t K = 0;
  ProbeState state;
  EstimatePOM povm;
  std::vector<double> phases;              // phi_k = 2 pi k / K
  Eigen::MatrixXcd gram;                   // <psi_{phi_j} | psi_{phi_k}>
  std::vector<double> success;             // p(k | phi_k)
  std::vector<double> variance_at_phases;  // Var_{phi_k}
  double mean_number = 0.0;
};

/// Uniform superposition of |0>..|K-1> measured with the projectors onto its
/// K shifted copies, labelled by phi_k.
KPhaseScheme kphase_construction(std::size_t K);

}  // namespace phaselimit
