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

// Minimum phase-error cost over probe states at a fixed mean <N>, via the
// Lagrange-multiplier eigenproblem
//
//   B(lambda) = A + lambda * diag(0, 1, ..., dim - 1),
//
// where c^T A c is the cost of the canonical phase distribution of a real
// state c. The smallest eigenpair of B gives the constrained minimum at the
// mean it attains; lambda is bisected until that mean hits the target.

#include <Eigen/Dense>

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "phaselimit/fock.hpp"

namespace phaselimit {

enum class CostKind {
  ExactSquare,  // theta^2
  Surrogate,    // 5/2 - (8/3) cos theta + (1/6) cos 2 theta
};

std::string_view to_string(CostKind kind);
/// Accepts "exact" / "surrogate" (and the enumerator names).
CostKind parse_cost_kind(std::string_view text);

/// Real symmetric band matrix; band d holds A(i, i + d).
class SymmetricBandMatrix {
 public:
  SymmetricBandMatrix(std::size_t size, std::size_t bandwidth);

  std::size_t size() const { return size_; }
  std::size_t bandwidth() const { return bands_.size() - 1; }

  double get(std::size_t i, std::size_t j) const;
  void set(std::size_t i, std::size_t j, double value);
  /// A(i, i) += value.
  void add_to_diagonal(std::size_t i, double value) { bands_[0][i] += value; }

  Eigen::VectorXd multiply(const Eigen::VectorXd& x) const;
  /// Largest absolute row sum, an upper bound on the spectral norm.
  double norm_estimate() const;
  /// Smallest Gershgorin disc edge, a lower bound on the spectrum.
  double gershgorin_lower_bound() const;
  Eigen::MatrixXd to_dense() const;

 private:
  std::size_t size_;
  std::vector<std::vector<double>> bands_;
};

/// Dense Toeplitz cost matrix. ExactSquare: diagonal pi^2/3, offset k entry
/// 2(-1)^k / k^2. Surrogate: 5/2, -4/3, 1/12 on offsets 0, 1, 2.
Eigen::MatrixXd cost_matrix(CostKind kind, std::size_t dim);
/// Same matrix in band storage (bandwidth 2 for Surrogate, dim-1 for ExactSquare).
SymmetricBandMatrix cost_band(CostKind kind, std::size_t dim);

struct Eigenpair {
  double value = 0.0;
  Eigen::VectorXd vector;
  double residual = 0.0;       // ||A v - value v||
  double norm_estimate = 0.0;  // max absolute row sum of A
  int iterations = 0;
};

/// Residual contract: ||A v - mu v|| <= 1e-9 * norm_estimate.
inline constexpr double kEigenResidualTolerance = 1e-9;

/// Smallest eigenpair of a dense symmetric matrix (LAPACK dsyevr, index
/// range 1..1). Throws ValidationError if asymmetric beyond 1e-12.
Eigenpair min_eigenpair(const Eigen::MatrixXd& matrix);

/// Smallest eigenpair of a band matrix: the shift is bisected against
/// positive-definiteness of the band Cholesky factor until it sits just below
/// the lowest eigenvalue, then inverse iteration with that factor converges
/// in a few steps. `seed` fixes the start vector. Throws ConvergenceError
/// when the residual contract is not met.
Eigenpair min_eigenpair(const SymmetricBandMatrix& matrix, std::uint64_t seed = 0);

/// Dispatch matching the (matrix, sparse) form: `sparse` routes a dense input
/// through band storage with the smallest bandwidth that holds it.
Eigenpair min_eigenpair(const Eigen::MatrixXd& matrix, bool sparse, std::uint64_t seed = 0);

enum class EigenPath { Auto, Dense, Banded };

struct SolverOptions {
  EigenPath path = EigenPath::Auto;  // Auto: Banded for Surrogate, Dense for ExactSquare
  std::uint64_t seed = 0;
};

struct MultiplierSolution {
  double mu = 0.0;
  Eigen::VectorXd state;
  double mean = 0.0;
  double residual = 0.0;
  int iterations = 0;
};

/// Smallest eigenpair of B(lambda) and the mean number it attains.
MultiplierSolution solve_at_multiplier(CostKind kind, std::size_t dim, double lambda,
                                       const SolverOptions& options = {});

struct OptimizeOptions {
  SolverOptions solver;
  std::size_t dim_cap = 1 << 20;  // dense solves are capped at 8192 regardless
  int max_bisections = 200;
};

inline constexpr double kDefaultMeanTolerance = 1e-8;
inline constexpr double kTailTolerance = 1e-10;

struct OptimizationResult {
  CostKind kind = CostKind::ExactSquare;
  double target_mean = 0.0;
  std::vector<double> amplitudes;  // real, unit norm
  double cost = 0.0;
  double achieved_mean = 0.0;
  double lambda = 0.0;
  double eigenvalue = 0.0;  // cost + lambda * achieved_mean
  std::size_t dim = 0;
  double tail_mass = 0.0;  // sum_{n >= dim-2} c_n^2
  double residual = 0.0;
  int iterations = 0;  // eigen solves in the final dimension
  int attempts = 0;    // dimensions tried

  ProbeState state() const { return ProbeState::from_real(amplitudes); }
};

/// Bisects lambda until |mean - target| <= mean_tol * (1 + target). The
/// dimension doubles from `dim` while the tail mass is >= 1e-10.
/// Throws ValidationError for an infeasible target and ConvergenceError when
/// the bracket, the bisection or the truncation cap fails.
OptimizationResult optimize_at_mean(CostKind kind, double target_mean, std::size_t dim,
                                    double mean_tol = kDefaultMeanTolerance,
                                    const OptimizeOptions& options = {});

/// Truncation used for a curve point: max(min_dim, ceil(factor * mean)),
/// or `fixed_dim` when nonzero.
struct DimPolicy {
  std::size_t min_dim = 64;
  double factor = 8.0;
  std::size_t fixed_dim = 0;

  std::size_t dim_for(double mean) const;
};

struct CurveRow {
  CostKind kind = CostKind::ExactSquare;
  double mean = 0.0;
  std::size_t dim = 0;
  double lambda = 0.0;
  double cost = 0.0;
  double delta = 0.0;    // sqrt(cost)
  double product = 0.0;  // (mean + 1) * delta
  double tail_mass = 0.0;
  double residual = 0.0;
  int iterations = 0;
};

struct CurveOptions {
  double mean_tol = kDefaultMeanTolerance;
  OptimizeOptions optimize;
  /// Worker threads; 0 reads PHASELIMIT_THREADS (default 1).
  unsigned threads = 0;
};

/// Minimum (mean + 1) * sqrt(cost) at each mean. `means` must be positive and
/// strictly ascending; rows come back in input order.
std::vector<CurveRow> figure2_curve(CostKind kind, const std::vector<double>& means,
                                    const DimPolicy& policy = {},
                                    const CurveOptions& options = {});

CurveRow curve_row(const OptimizationResult& result);

/// Thread count from PHASELIMIT_THREADS, at least 1.
unsigned configured_threads();

}  // namespace phaselimit
