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

#include <cmath>
#include <numbers>
#include <string>

#include "phaselimit/error.hpp"

namespace phaselimit {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

Eigen::VectorXcd padded_amplitudes(const ProbeState& state, std::size_t dim) {
  if (state.dim() > dim) {
    throw ValidationError("state dimension " + std::to_string(state.dim()) +
                          " exceeds measurement dimension " + std::to_string(dim));
  }
  Eigen::VectorXcd c = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(dim));
  for (std::size_t n = 0; n < state.dim(); ++n) c(static_cast<Eigen::Index>(n)) = state[n];
  return c;
}

// exp(-i N phi) c
Eigen::VectorXcd shifted(const Eigen::VectorXcd& c, double phi) {
  Eigen::VectorXcd out(c.size());
  for (Eigen::Index n = 0; n < c.size(); ++n) {
    out(n) = c(n) * std::polar(1.0, -static_cast<double>(n) * phi);
  }
  return out;
}

}  // namespace

double wrap_to_period(double angle) {
  double r = std::fmod(angle, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  if (r >= kTwoPi) r -= kTwoPi;
  return r;
}

double wrap_centered(double angle) {
  double r = wrap_to_period(angle + kPi) - kPi;
  if (r >= kPi) r -= kTwoPi;
  return r;
}

EstimatePOM::EstimatePOM(std::size_t dim, std::vector<PomOutcome> outcomes)
    : dim_(dim), outcomes_(std::move(outcomes)) {
  if (dim_ < 1) throw ValidationError("POM: dim must be >= 1");
  if (outcomes_.empty()) throw ValidationError("POM: no outcomes");
  const auto n = static_cast<Eigen::Index>(dim_);
  Eigen::MatrixXcd total = Eigen::MatrixXcd::Zero(n, n);
  for (std::size_t j = 0; j < outcomes_.size(); ++j) {
    auto& o = outcomes_[j];
    if (!std::isfinite(o.estimate)) throw ValidationError("POM: non-finite estimate");
    o.estimate = wrap_to_period(o.estimate);
    if (o.element.rows() != n || o.element.cols() != n) {
      throw ValidationError("POM: element " + std::to_string(j) + " has the wrong shape");
    }
    if ((o.element - o.element.adjoint()).cwiseAbs().maxCoeff() > kTolerance) {
      throw ValidationError("POM: element " + std::to_string(j) + " is not Hermitian");
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(o.element, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -kTolerance) {
      throw ValidationError("POM: element " + std::to_string(j) + " is not positive semidefinite");
    }
    total += o.element;
  }
  const double gap = (total - Eigen::MatrixXcd::Identity(n, n)).cwiseAbs().maxCoeff();
  if (gap > kTolerance) {
    throw ValidationError("POM: elements do not sum to the identity (deviation " +
                          std::to_string(gap) + ")");
  }
}

double conditional_probability(const EstimatePOM& povm, const ProbeState& state, double phi,
                               std::size_t outcome_index) {
  if (outcome_index >= povm.size()) {
    throw ValidationError("conditional_probability: outcome index out of range");
  }
  const Eigen::VectorXcd psi = shifted(padded_amplitudes(state, povm.dim()), phi);
  const Complex p = psi.dot(povm[outcome_index].element * psi);
  return std::max(0.0, p.real());
}

std::vector<double> outcome_probabilities(const EstimatePOM& povm, const ProbeState& state,
                                          double phi) {
  const Eigen::VectorXcd psi = shifted(padded_amplitudes(state, povm.dim()), phi);
  std::vector<double> p(povm.size());
  for (std::size_t j = 0; j < povm.size(); ++j) {
    p[j] = std::max(0.0, psi.dot(povm[j].element * psi).real());
  }
  return p;
}

PhaseDistribution average_distribution(const EstimatePOM& povm, const ProbeState& state) {
  const Eigen::VectorXcd c = padded_amplitudes(state, povm.dim());
  const auto d = static_cast<Eigen::Index>(povm.dim());
  std::vector<Complex> m(static_cast<std::size_t>(d));
  for (Eigen::Index k = 0; k < d; ++k) {
    Complex total{};
    for (const auto& o : povm.outcomes()) {
      Complex inner{};
      for (Eigen::Index n = 0; n + k < d; ++n) inner += o.element(n + k, n) * c(n) * std::conj(c(n + k));
      total += std::polar(1.0, static_cast<double>(k) * o.estimate) * inner;
    }
    m[static_cast<std::size_t>(k)] = total;
  }
  return PhaseDistribution::trusted(std::move(m));
}

Eigen::MatrixXcd covariant_seed(const EstimatePOM& povm) {
  const auto d = static_cast<Eigen::Index>(povm.dim());
  Eigen::MatrixXcd seed = Eigen::MatrixXcd::Zero(d, d);
  for (const auto& o : povm.outcomes()) {
    for (Eigen::Index a = 0; a < d; ++a) {
      for (Eigen::Index b = 0; b < d; ++b) {
        seed(a, b) += std::polar(1.0, static_cast<double>(a - b) * o.estimate) * o.element(a, b);
      }
    }
  }
  seed /= kTwoPi;
  for (Eigen::Index a = 0; a < d; ++a) {
    if (std::abs(kTwoPi * seed(a, a) - 1.0) > EstimatePOM::kTolerance) {
      throw ValidationError("covariant_seed: covariant family is not complete");
    }
  }
  return seed;
}

PhaseDistribution covariant_distribution(const Eigen::MatrixXcd& seed, const ProbeState& state) {
  const auto d = seed.rows();
  const Eigen::VectorXcd c = padded_amplitudes(state, static_cast<std::size_t>(d));
  std::vector<Complex> m(static_cast<std::size_t>(d));
  for (Eigen::Index k = 0; k < d; ++k) {
    Complex inner{};
    for (Eigen::Index n = 0; n + k < d; ++n) inner += seed(n + k, n) * c(n) * std::conj(c(n + k));
    m[static_cast<std::size_t>(k)] = kTwoPi * inner;
  }
  return PhaseDistribution::trusted(std::move(m));
}

double per_phase_variance(const EstimatePOM& povm, const ProbeState& state, double phi) {
  const auto p = outcome_probabilities(povm, state, phi);
  double v = 0.0;
  for (std::size_t j = 0; j < p.size(); ++j) {
    const double e = wrap_centered(povm[j].estimate - phi);
    v += e * e * p[j];
  }
  return v;
}

EstimatePOM number_measurement(const std::vector<double>& estimates) {
  const auto d = static_cast<Eigen::Index>(estimates.size());
  std::vector<PomOutcome> outcomes;
  for (Eigen::Index n = 0; n < d; ++n) {
    PomOutcome o;
    o.estimate = estimates[static_cast<std::size_t>(n)];
    o.element = Eigen::MatrixXcd::Zero(d, d);
    o.element(n, n) = 1.0;
    outcomes.push_back(std::move(o));
  }
  return EstimatePOM(estimates.size(), std::move(outcomes));
}

EstimatePOM discretized_covariant(const Eigen::MatrixXcd& seed, std::size_t points) {
  const auto d = seed.rows();
  if (points < static_cast<std::size_t>(d)) {
    throw ValidationError("discretized_covariant: need at least dim estimate points");
  }
  std::vector<PomOutcome> outcomes;
  for (std::size_t j = 0; j < points; ++j) {
    const double phi = kTwoPi * static_cast<double>(j) / static_cast<double>(points);
    PomOutcome o;
    o.estimate = phi;
    o.element = Eigen::MatrixXcd(d, d);
    for (Eigen::Index a = 0; a < d; ++a) {
      for (Eigen::Index b = 0; b < d; ++b) {
        o.element(a, b) = (kTwoPi / static_cast<double>(points)) * seed(a, b) *
                          std::polar(1.0, -static_cast<double>(a - b) * phi);
      }
    }
    outcomes.push_back(std::move(o));
  }
  return EstimatePOM(static_cast<std::size_t>(d), std::move(outcomes));
}

EstimatePOM canonical_measurement(std::size_t dim, std::size_t points) {
  const auto d = static_cast<Eigen::Index>(dim);
  const Eigen::MatrixXcd seed = Eigen::MatrixXcd::Constant(d, d, Complex(1.0 / kTwoPi, 0.0));
  return discretized_covariant(seed, points);
}

EstimatePOM random_pom(std::size_t dim, std::size_t outcomes, std::size_t rank,
                       std::mt19937_64& rng) {
  if (outcomes * rank < dim) throw ValidationError("random_pom: outcomes * rank must reach dim");
  const auto d = static_cast<Eigen::Index>(dim);
  std::normal_distribution<double> gauss;
  std::uniform_real_distribution<double> angle(0.0, kTwoPi);
  std::vector<Eigen::MatrixXcd> raw;
  Eigen::MatrixXcd total = Eigen::MatrixXcd::Zero(d, d);
  for (std::size_t j = 0; j < outcomes; ++j) {
    Eigen::MatrixXcd g(d, static_cast<Eigen::Index>(rank));
    for (Eigen::Index a = 0; a < g.rows(); ++a) {
      for (Eigen::Index b = 0; b < g.cols(); ++b) g(a, b) = Complex(gauss(rng), gauss(rng));
    }
    raw.push_back(g * g.adjoint());
    total += raw.back();
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(total);
  const Eigen::MatrixXcd inv_sqrt = es.operatorInverseSqrt();
  std::vector<PomOutcome> result;
  for (auto& a : raw) {
    PomOutcome o;
    o.estimate = angle(rng);
    Eigen::MatrixXcd m = inv_sqrt * a * inv_sqrt;
    o.element = 0.5 * (m + m.adjoint());
    result.push_back(std::move(o));
  }
  return EstimatePOM(dim, std::move(result));
}

KPhaseScheme kphase_construction(std::size_t K) {
  if (K < 1) throw ValidationError("kphase_construction: K must be >= 1");
  const auto d = static_cast<Eigen::Index>(K);
  std::vector<Complex> amplitudes(K, Complex(1.0, 0.0));
  ProbeState psi = ProbeState::from_amplitudes(amplitudes);
  const Eigen::VectorXcd c = padded_amplitudes(psi, K);

  std::vector<double> phases(K);
  std::vector<Eigen::VectorXcd> copies;
  std::vector<PomOutcome> outcomes;
  for (std::size_t k = 0; k < K; ++k) {
    phases[k] = kTwoPi * static_cast<double>(k) / static_cast<double>(K);
    copies.push_back(shifted(c, phases[k]));
    outcomes.push_back({phases[k], copies.back() * copies.back().adjoint()});
  }
  EstimatePOM povm(K, std::move(outcomes));

  Eigen::MatrixXcd gram(d, d);
  for (Eigen::Index j = 0; j < d; ++j) {
    for (Eigen::Index k = 0; k < d; ++k) gram(j, k) = copies[j].dot(copies[k]);
  }
  std::vector<double> success(K), variance(K);
  for (std::size_t k = 0; k < K; ++k) {
    success[k] = conditional_probability(povm, psi, phases[k], k);
    variance[k] = per_phase_variance(povm, psi, phases[k]);
  }
  const double mean = mean_number(psi);
  return KPhaseScheme{K, std::move(psi), std::move(povm), std::move(phases), std::move(gram),
                      std::move(success), std::move(variance), mean};
}

}  // namespace phaselimit
