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

#include "phaselimit/optimizer.hpp"

#include <lapacke.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <limits>
#include <numbers>
#include <random>
#include <string>
#include <thread>

#include "phaselimit/error.hpp"

namespace phaselimit {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr std::size_t kDenseCap = 8192;

double exact_coefficient(std::size_t k) {
  if (k == 0) return kPi * kPi / 3.0;
  const double kk = static_cast<double>(k);
  return ((k % 2) ? -2.0 : 2.0) / (kk * kk);
}

double surrogate_coefficient(std::size_t k) {
  switch (k) {
    case 0: return 2.5;
    case 1: return -4.0 / 3.0;
    case 2: return 1.0 / 12.0;
    default: return 0.0;
  }
}

double cost_coefficient(CostKind kind, std::size_t k) {
  return kind == CostKind::ExactSquare ? exact_coefficient(k) : surrogate_coefficient(k);
}

// Flip the global sign so the largest-magnitude entry is positive.
void fix_sign(Eigen::VectorXd& v) {
  Eigen::Index idx = 0;
  v.cwiseAbs().maxCoeff(&idx);
  if (v(idx) < 0.0) v = -v;
}

// Band Cholesky factor of (A - shift I); row i holds L(i, i - d), d = 0..b.
class BandCholesky {
 public:
  BandCholesky(const SymmetricBandMatrix& a, double shift)
      : n_(a.size()), b_(a.bandwidth()), l_(n_ * (b_ + 1), 0.0) {
    for (std::size_t i = 0; i < n_ && ok_; ++i) {
      const std::size_t dmax = std::min(i, b_);
      for (std::size_t d = dmax + 1; d-- > 0;) {
        const std::size_t j = i - d;
        double s = a.get(i, j) - (d == 0 ? shift : 0.0);
        const std::size_t kstart = i >= b_ ? i - b_ : 0;
        for (std::size_t k = kstart; k < j; ++k) s -= at(i, k) * at(j, k);
        if (d == 0) {
          if (!(s > 0.0)) {
            ok_ = false;
            break;
          }
          ref(i, i) = std::sqrt(s);
        } else {
          ref(i, j) = s / at(j, j);
        }
      }
    }
  }

  bool ok() const { return ok_; }

  Eigen::VectorXd solve(const Eigen::VectorXd& rhs) const {
    Eigen::VectorXd y(static_cast<Eigen::Index>(n_));
    for (std::size_t i = 0; i < n_; ++i) {
      double s = rhs(static_cast<Eigen::Index>(i));
      const std::size_t kstart = i >= b_ ? i - b_ : 0;
      for (std::size_t k = kstart; k < i; ++k) s -= at(i, k) * y(static_cast<Eigen::Index>(k));
      y(static_cast<Eigen::Index>(i)) = s / at(i, i);
    }
    Eigen::VectorXd x(static_cast<Eigen::Index>(n_));
    for (std::size_t i = n_; i-- > 0;) {
      double s = y(static_cast<Eigen::Index>(i));
      const std::size_t kend = std::min(n_ - 1, i + b_);
      for (std::size_t k = i + 1; k <= kend; ++k) s -= at(k, i) * x(static_cast<Eigen::Index>(k));
      x(static_cast<Eigen::Index>(i)) = s / at(i, i);
    }
    return x;
  }

 private:
  double at(std::size_t i, std::size_t j) const { return l_[i * (b_ + 1) + (i - j)]; }
  double& ref(std::size_t i, std::size_t j) { return l_[i * (b_ + 1) + (i - j)]; }

  std::size_t n_;
  std::size_t b_;
  std::vector<double> l_;
  bool ok_ = true;
};

double residual_norm(const Eigen::VectorXd& av, const Eigen::VectorXd& v, double mu) {
  return (av - mu * v).norm();
}

}  // namespace

std::string_view to_string(CostKind kind) {
  return kind == CostKind::ExactSquare ? "exact" : "surrogate";
}

CostKind parse_cost_kind(std::string_view text) {
  if (text == "exact" || text == "ExactSquare") return CostKind::ExactSquare;
  if (text == "surrogate" || text == "Surrogate") return CostKind::Surrogate;
  throw ValidationError("unknown cost kind '" + std::string(text) + "'");
}

SymmetricBandMatrix::SymmetricBandMatrix(std::size_t size, std::size_t bandwidth) : size_(size) {
  if (size == 0) throw ValidationError("band matrix: size must be >= 1");
  bandwidth = std::min(bandwidth, size - 1);
  bands_.resize(bandwidth + 1);
  for (std::size_t d = 0; d <= bandwidth; ++d) bands_[d].assign(size - d, 0.0);
}

double SymmetricBandMatrix::get(std::size_t i, std::size_t j) const {
  const std::size_t lo = std::min(i, j), d = i > j ? i - j : j - i;
  return d < bands_.size() ? bands_[d][lo] : 0.0;
}

void SymmetricBandMatrix::set(std::size_t i, std::size_t j, double value) {
  const std::size_t lo = std::min(i, j), d = i > j ? i - j : j - i;
  if (d >= bands_.size()) throw ValidationError("band matrix: entry outside the band");
  bands_[d][lo] = value;
}

Eigen::VectorXd SymmetricBandMatrix::multiply(const Eigen::VectorXd& x) const {
  Eigen::VectorXd y = Eigen::VectorXd::Zero(x.size());
  for (std::size_t i = 0; i < size_; ++i) y(i) = bands_[0][i] * x(i);
  for (std::size_t d = 1; d < bands_.size(); ++d) {
    const auto& band = bands_[d];
    for (std::size_t i = 0; i < band.size(); ++i) {
      y(i) += band[i] * x(i + d);
      y(i + d) += band[i] * x(i);
    }
  }
  return y;
}

double SymmetricBandMatrix::norm_estimate() const {
  Eigen::VectorXd sums = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(size_));
  for (std::size_t i = 0; i < size_; ++i) sums(i) = std::abs(bands_[0][i]);
  for (std::size_t d = 1; d < bands_.size(); ++d) {
    for (std::size_t i = 0; i < bands_[d].size(); ++i) {
      sums(i) += std::abs(bands_[d][i]);
      sums(i + d) += std::abs(bands_[d][i]);
    }
  }
  return sums.maxCoeff();
}

double SymmetricBandMatrix::gershgorin_lower_bound() const {
  Eigen::VectorXd off = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(size_));
  for (std::size_t d = 1; d < bands_.size(); ++d) {
    for (std::size_t i = 0; i < bands_[d].size(); ++i) {
      off(i) += std::abs(bands_[d][i]);
      off(i + d) += std::abs(bands_[d][i]);
    }
  }
  double lo = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < size_; ++i) lo = std::min(lo, bands_[0][i] - off(i));
  return lo;
}

Eigen::MatrixXd SymmetricBandMatrix::to_dense() const {
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(size_, size_);
  for (std::size_t d = 0; d < bands_.size(); ++d) {
    for (std::size_t i = 0; i < bands_[d].size(); ++i) {
      a(i, i + d) = bands_[d][i];
      a(i + d, i) = bands_[d][i];
    }
  }
  return a;
}

Eigen::MatrixXd cost_matrix(CostKind kind, std::size_t dim) {
  if (dim < 1) throw ValidationError("cost_matrix: dim must be >= 1");
  const auto n = static_cast<Eigen::Index>(dim);
  Eigen::MatrixXd a(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      a(i, j) = cost_coefficient(kind, static_cast<std::size_t>(std::abs(i - j)));
    }
  }
  return a;
}

SymmetricBandMatrix cost_band(CostKind kind, std::size_t dim) {
  if (dim < 1) throw ValidationError("cost_band: dim must be >= 1");
  const std::size_t bandwidth = kind == CostKind::Surrogate ? 2 : dim - 1;
  SymmetricBandMatrix a(dim, bandwidth);
  for (std::size_t d = 0; d <= a.bandwidth(); ++d) {
    for (std::size_t i = 0; i + d < dim; ++i) a.set(i, i + d, cost_coefficient(kind, d));
  }
  return a;
}

Eigenpair min_eigenpair(const Eigen::MatrixXd& matrix) {
  const auto n = matrix.rows();
  if (n < 1 || matrix.cols() != n) throw ValidationError("min_eigenpair: matrix must be square");
  if ((matrix - matrix.transpose()).cwiseAbs().maxCoeff() > 1e-12) {
    throw ValidationError("min_eigenpair: matrix is not symmetric");
  }
  Eigen::MatrixXd work = matrix;
  Eigen::VectorXd z(n);
  double w[1] = {0.0};
  lapack_int found = 0;
  lapack_int isuppz[2] = {0, 0};
  const lapack_int info = LAPACKE_dsyevr(
      LAPACK_COL_MAJOR, 'V', 'I', 'L', static_cast<lapack_int>(n), work.data(),
      static_cast<lapack_int>(n), 0.0, 0.0, 1, 1, 0.0, &found, w, z.data(),
      static_cast<lapack_int>(n), isuppz);
  if (info != 0 || found != 1) {
    throw ConvergenceError("min_eigenpair: dsyevr failed with info " + std::to_string(info));
  }
  Eigenpair result;
  z.normalize();
  fix_sign(z);
  result.vector = std::move(z);
  const Eigen::VectorXd av = matrix * result.vector;
  result.value = result.vector.dot(av);
  result.residual = residual_norm(av, result.vector, result.value);
  result.norm_estimate = matrix.cwiseAbs().rowwise().sum().maxCoeff();
  result.iterations = 1;
  if (result.residual > kEigenResidualTolerance * result.norm_estimate) {
    throw ConvergenceError("min_eigenpair: dense residual " + std::to_string(result.residual) +
                           " exceeds contract");
  }
  return result;
}

Eigenpair min_eigenpair(const SymmetricBandMatrix& matrix, std::uint64_t seed) {
  const std::size_t n = matrix.size();
  const double norm = std::max(matrix.norm_estimate(), std::numeric_limits<double>::min());

  // lo: A - lo I factorizes (lo <= mu_1); hi: an upper bound on mu_1.
  double hi = matrix.get(0, 0);
  for (std::size_t i = 1; i < n; ++i) hi = std::min(hi, matrix.get(i, i));
  double lo = matrix.gershgorin_lower_bound() - 1e-3 * norm;
  int factorizations = 0;
  BandCholesky best(matrix, lo);
  ++factorizations;
  while (!best.ok()) {
    lo -= norm;
    best = BandCholesky(matrix, lo);
    if (++factorizations > 64) throw ConvergenceError("min_eigenpair: no factorizable shift");
  }
  while (hi - lo > 2e-15 * norm && factorizations < 400) {
    const double mid = 0.5 * (lo + hi);
    BandCholesky trial(matrix, mid);
    ++factorizations;
    if (trial.ok()) {
      lo = mid;
      best = std::move(trial);
    } else {
      hi = mid;
    }
  }

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uniform(-1.0, 1.0);
  Eigen::VectorXd v(static_cast<Eigen::Index>(n));
  for (auto& x : v) x = uniform(rng);
  v.normalize();

  Eigenpair result;
  result.norm_estimate = norm;
  double previous = std::numeric_limits<double>::infinity();
  for (int it = 1; it <= 60; ++it) {
    Eigen::VectorXd x = best.solve(v);
    const double xn = x.norm();
    if (!std::isfinite(xn) || xn == 0.0) {
      throw ConvergenceError("min_eigenpair: inverse iteration broke down");
    }
    v = x / xn;
    const Eigen::VectorXd av = matrix.multiply(v);
    const double mu = v.dot(av);
    const double r = residual_norm(av, v, mu);
    result.value = mu;
    result.residual = r;
    result.iterations = it;
    if (r <= 1e-14 * norm) break;
    if (it >= 3 && r > 0.5 * previous) break;
    previous = r;
  }
  fix_sign(v);
  result.vector = std::move(v);
  if (result.residual > kEigenResidualTolerance * norm) {
    throw ConvergenceError("min_eigenpair: band residual " + std::to_string(result.residual) +
                           " exceeds contract");
  }
  return result;
}

Eigenpair min_eigenpair(const Eigen::MatrixXd& matrix, bool sparse, std::uint64_t seed) {
  if (!sparse) return min_eigenpair(matrix);
  const auto n = matrix.rows();
  if (n < 1 || matrix.cols() != n) throw ValidationError("min_eigenpair: matrix must be square");
  if ((matrix - matrix.transpose()).cwiseAbs().maxCoeff() > 1e-12) {
    throw ValidationError("min_eigenpair: matrix is not symmetric");
  }
  std::size_t bandwidth = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i; j < n; ++j) {
      if (matrix(i, j) != 0.0) bandwidth = std::max(bandwidth, static_cast<std::size_t>(j - i));
    }
  }
  SymmetricBandMatrix band(static_cast<std::size_t>(n), bandwidth);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i; j < n && static_cast<std::size_t>(j - i) <= bandwidth; ++j) {
      band.set(i, j, 0.5 * (matrix(i, j) + matrix(j, i)));
    }
  }
  return min_eigenpair(band, seed);
}

MultiplierSolution solve_at_multiplier(CostKind kind, std::size_t dim, double lambda,
                                       const SolverOptions& options) {
  if (dim < 1) throw ValidationError("solve_at_multiplier: dim must be >= 1");
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
    throw ValidationError("solve_at_multiplier: lambda must be finite and >= 0");
  }
  const bool banded = options.path == EigenPath::Banded ||
                      (options.path == EigenPath::Auto && kind == CostKind::Surrogate);
  Eigenpair pair;
  if (banded) {
    auto b = cost_band(kind, dim);
    for (std::size_t n = 0; n < dim; ++n) b.add_to_diagonal(n, lambda * static_cast<double>(n));
    pair = min_eigenpair(b, options.seed);
  } else {
    if (dim > kDenseCap) {
      throw ValidationError("solve_at_multiplier: dense path limited to dim " +
                            std::to_string(kDenseCap));
    }
    Eigen::MatrixXd b = cost_matrix(kind, dim);
    for (std::size_t n = 0; n < dim; ++n) b(n, n) += lambda * static_cast<double>(n);
    pair = min_eigenpair(b);
  }
  MultiplierSolution s;
  s.mu = pair.value;
  s.residual = pair.residual;
  s.iterations = pair.iterations;
  s.mean = 0.0;
  for (std::size_t n = 0; n < dim; ++n) {
    s.mean += static_cast<double>(n) * pair.vector(n) * pair.vector(n);
  }
  s.state = std::move(pair.vector);
  return s;
}

namespace {

double quadratic_cost(CostKind kind, const Eigen::VectorXd& c) {
  const auto n = c.size();
  double s = cost_coefficient(kind, 0) * c.squaredNorm();
  const Eigen::Index kmax = kind == CostKind::Surrogate ? std::min<Eigen::Index>(2, n - 1) : n - 1;
  for (Eigen::Index k = 1; k <= kmax; ++k) {
    const double dot = c.head(n - k).dot(c.tail(n - k));
    s += 2.0 * cost_coefficient(kind, static_cast<std::size_t>(k)) * dot;
  }
  return s;
}

OptimizationResult vacuum_result(CostKind kind, std::size_t dim) {
  OptimizationResult r;
  r.kind = kind;
  r.amplitudes.assign(dim, 0.0);
  r.amplitudes[0] = 1.0;
  r.cost = cost_coefficient(kind, 0);
  r.eigenvalue = r.cost;
  r.dim = dim;
  r.attempts = 1;
  return r;
}

enum class AttemptStatus { Done, NeedLargerDim };

}  // namespace

OptimizationResult optimize_at_mean(CostKind kind, double target_mean, std::size_t dim,
                                    double mean_tol, const OptimizeOptions& options) {
  if (!std::isfinite(target_mean) || target_mean < 0.0) {
    throw ValidationError("optimize_at_mean: target mean must be finite and >= 0");
  }
  if (dim < 1) throw ValidationError("optimize_at_mean: dim must be >= 1");
  if (target_mean > static_cast<double>(dim - 1)) {
    throw ValidationError("optimize_at_mean: target mean " + std::to_string(target_mean) +
                          " is infeasible in dim " + std::to_string(dim));
  }
  if (!(mean_tol > 0.0)) throw ValidationError("optimize_at_mean: mean_tol must be > 0");
  if (target_mean == 0.0) return vacuum_result(kind, dim);

  const bool dense = options.solver.path == EigenPath::Dense ||
                     (options.solver.path == EigenPath::Auto && kind == CostKind::ExactSquare);
  const std::size_t cap = dense ? std::min(options.dim_cap, kDenseCap) : options.dim_cap;
  const double tol = mean_tol * (1.0 + target_mean);

  int attempts = 0;
  for (std::size_t d = dim;; d *= 2) {
    ++attempts;
    int solves = 0;
    auto solve = [&](double lambda) {
      ++solves;
      return solve_at_multiplier(kind, d, lambda, options.solver);
    };

    double lo = 0.0;
    MultiplierSolution best = solve(lo);
    bool converged = std::abs(best.mean - target_mean) <= tol;
    AttemptStatus status = AttemptStatus::Done;
    if (!converged && best.mean < target_mean) {
      // Even lambda = 0 undershoots: the truncation is too small.
      status = AttemptStatus::NeedLargerDim;
    }

    if (status == AttemptStatus::Done && !converged) {
      double hi = kPi * kPi;
      MultiplierSolution at_hi = solve(hi);
      for (int grow = 0; at_hi.mean > target_mean + tol; ++grow) {
        if (grow >= 60) throw ConvergenceError("optimize_at_mean: could not bracket lambda");
        lo = hi;
        hi *= 4.0;
        at_hi = solve(hi);
      }
      if (std::abs(at_hi.mean - target_mean) <= tol) {
        best = std::move(at_hi);
        lo = hi;
        converged = true;
      }
      for (int step = 0; !converged && step < options.max_bisections; ++step) {
        const double mid = (lo > 0.0 && hi > 4.0 * lo) ? std::sqrt(lo * hi) : 0.5 * (lo + hi);
        if (!(mid > lo && mid < hi)) break;
        MultiplierSolution s = solve(mid);
        if (std::abs(s.mean - target_mean) <= tol) {
          best = std::move(s);
          lo = mid;
          converged = true;
        } else if (s.mean > target_mean) {
          lo = mid;
        } else {
          hi = mid;
        }
      }
      if (!converged) {
        throw ConvergenceError("optimize_at_mean: lambda bisection did not reach mean " +
                               std::to_string(target_mean) + " in dim " + std::to_string(d));
      }
    }

    if (status == AttemptStatus::Done) {
      double tail = 0.0;
      for (std::size_t n = d >= 2 ? d - 2 : 0; n < d; ++n) tail += best.state(n) * best.state(n);
      // With d <= 2 the tail window is the whole space; the caller's truncation stands.
      if (tail < kTailTolerance || d <= 2) {
        OptimizationResult r;
        r.kind = kind;
        r.target_mean = target_mean;
        r.amplitudes.assign(best.state.data(), best.state.data() + best.state.size());
        r.achieved_mean = best.mean;
        r.lambda = lo;
        r.cost = quadratic_cost(kind, best.state);
        r.eigenvalue = r.cost + r.lambda * r.achieved_mean;
        r.dim = d;
        r.tail_mass = tail;
        r.residual = best.residual;
        r.iterations = solves;
        r.attempts = attempts;
        return r;
      }
    }
    if (2 * d > cap) {
      throw ConvergenceError("optimize_at_mean: truncation cap " + std::to_string(cap) +
                             " reached without an adequate tail");
    }
  }
}

std::size_t DimPolicy::dim_for(double mean) const {
  if (fixed_dim > 0) return fixed_dim;
  const auto scaled = static_cast<std::size_t>(std::ceil(factor * mean));
  return std::max(min_dim, scaled);
}

CurveRow curve_row(const OptimizationResult& result) {
  CurveRow row;
  row.kind = result.kind;
  row.mean = result.target_mean;
  row.dim = result.dim;
  row.lambda = result.lambda;
  row.cost = result.cost;
  row.delta = std::sqrt(std::max(result.cost, 0.0));
  row.product = (result.target_mean + 1.0) * row.delta;
  row.tail_mass = result.tail_mass;
  row.residual = result.residual;
  row.iterations = result.iterations;
  return row;
}

unsigned configured_threads() {
  if (const char* env = std::getenv("PHASELIMIT_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && v >= 1) return static_cast<unsigned>(v);
  }
  return 1;
}

std::vector<CurveRow> figure2_curve(CostKind kind, const std::vector<double>& means,
                                    const DimPolicy& policy, const CurveOptions& options) {
  for (std::size_t i = 0; i < means.size(); ++i) {
    if (!(means[i] > 0.0) || !std::isfinite(means[i])) {
      throw ValidationError("figure2_curve: means must be positive and finite");
    }
    if (i > 0 && !(means[i] > means[i - 1])) {
      throw ValidationError("figure2_curve: means must be strictly ascending");
    }
  }
  std::vector<CurveRow> rows(means.size());
  std::vector<std::exception_ptr> errors(means.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < means.size(); i = next++) {
      try {
        rows[i] = curve_row(optimize_at_mean(kind, means[i], policy.dim_for(means[i]),
                                             options.mean_tol, options.optimize));
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const unsigned threads =
      std::max(1u, std::min<unsigned>(options.threads ? options.threads : configured_threads(),
                                      static_cast<unsigned>(std::max<std::size_t>(1, means.size()))));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return rows;
}

}  // namespace phaselimit
