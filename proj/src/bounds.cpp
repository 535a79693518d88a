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

#include "phaselimit/bounds.hpp"

#include <cmath>
#include <numbers>

#include "phaselimit/error.hpp"

namespace phaselimit {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kE = std::numbers::e;
constexpr double kSeriesCutoff = 1e-18;
constexpr double kSatisfiedTolerance = 1e-10;

void require_nonnegative(double nbar, const char* what) {
  if (!(nbar >= 0.0) || !std::isfinite(nbar)) {
    throw ValidationError(std::string(what) + ": nbar must be finite and nonnegative");
  }
}

// Ai(z) = c1 f(z) + c2 g(z) with
//   f = sum_k 3^k (1/3)_k z^{3k} / (3k)!,   g = sum_k 3^k (2/3)_k z^{3k+1} / (3k+1)!.
// Term ratios: f: z^3 / ((3k+2)(3k+3)),  g: z^3 / ((3k+3)(3k+4)).
struct AirySeries {
  double f = 0.0, g = 0.0, df = 0.0, dg = 0.0;
};

AirySeries airy_series(double z) {
  AirySeries s;
  if (z == 0.0) {
    s.f = 1.0;
    s.dg = 1.0;
    return s;
  }
  const double z3 = z * z * z;
  double tf = 1.0;
  double tg = z;
  for (int k = 0; k < 400; ++k) {
    s.f += tf;
    s.g += tg;
    // d/dz z^{3k} = 3k z^{3k-1}; d/dz z^{3k+1} = (3k+1) z^{3k}.
    if (k > 0) s.df += tf * 3.0 * k / z;
    s.dg += tg * (3.0 * k + 1.0) / z;
    const double kk = static_cast<double>(k);
    tf *= z3 / ((3.0 * kk + 2.0) * (3.0 * kk + 3.0));
    tg *= z3 / ((3.0 * kk + 3.0) * (3.0 * kk + 4.0));
    if (std::abs(tf) < kSeriesCutoff && std::abs(tg) < kSeriesCutoff) break;
  }
  return s;
}

}  // namespace

double k_A() { return std::sqrt(2.0 * kPi / (kE * kE * kE)); }

double airy_ai_at_zero() { return std::pow(3.0, -2.0 / 3.0) / std::tgamma(2.0 / 3.0); }

double airy_ai_prime_at_zero() { return -std::pow(3.0, -1.0 / 3.0) / std::tgamma(1.0 / 3.0); }

double airy_ai(double z) {
  const auto s = airy_series(z);
  return airy_ai_at_zero() * s.f + airy_ai_prime_at_zero() * s.g;
}

double airy_ai_prime(double z) {
  const auto s = airy_series(z);
  return airy_ai_at_zero() * s.df + airy_ai_prime_at_zero() * s.dg;
}

double airy_first_zero() {
  double lo = -2.4, hi = -2.3;
  double f_lo = airy_ai(lo);
  if (f_lo * airy_ai(hi) >= 0.0) {
    throw ConvergenceError("airy_first_zero: bracket [-2.4, -2.3] has no sign change");
  }
  for (int i = 0; i < 40; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double f_mid = airy_ai(mid);
    if ((f_mid < 0.0) == (f_lo < 0.0)) {
      lo = mid;
      f_lo = f_mid;
    } else {
      hi = mid;
    }
  }
  double z = 0.5 * (lo + hi);
  for (int i = 0; i < 20; ++i) {
    const double step = airy_ai(z) / airy_ai_prime(z);
    z -= step;
    if (std::abs(step) < 1e-16) break;
  }
  if (std::abs(airy_ai(z)) >= 1e-13 || z <= -2.4 || z >= -2.3) {
    throw ConvergenceError("airy_first_zero: polishing failed");
  }
  return z;
}

double k_C() {
  static const double value = 2.0 * std::pow(-airy_first_zero() / 3.0, 1.5);
  return value;
}

double heisenberg_bound(double nbar) {
  require_nonnegative(nbar, "heisenberg_bound");
  return k_A() / (nbar + 1.0);
}

double conjectured_bound(double nbar) {
  require_nonnegative(nbar, "conjectured_bound");
  return k_C() / (nbar + 1.0);
}

BoundEntry make_entry(std::string name, std::string description, double lhs, double rhs,
                      Relation relation, bool informational) {
  BoundEntry e;
  e.name = std::move(name);
  e.description = std::move(description);
  e.lhs = lhs;
  e.rhs = rhs;
  e.relation = relation;
  e.margin = lhs - rhs;
  e.satisfied = relation == Relation::Greater ? e.margin > 0.0 : e.margin >= -kSatisfiedTolerance;
  e.informational = informational;
  return e;
}

bool BoundReport::all_satisfied() const {
  for (const auto& e : entries) {
    if (!e.informational && !e.satisfied) return false;
  }
  return true;
}

const BoundEntry& BoundReport::entry(const std::string& name) const {
  for (const auto& e : entries) {
    if (e.name == name) return e;
  }
  throw ValidationError("bound report: no entry named " + name);
}

BoundReport chain_report(const PhaseDistribution& dist, const NumberDistribution& numbers,
                         std::size_t grid_points) {
  BoundReport r;
  r.mean_number = numbers.mean();
  r.number_entropy = numbers.entropy();
  r.phase_entropy = differential_entropy(dist, grid_points);
  r.mean_square_deviation = mean_square_deviation(dist);
  r.ensemble_length = std::exp(r.phase_entropy);

  const double n1 = r.mean_number + 1.0;
  const double hn = r.number_entropy;
  const double var = r.mean_square_deviation;
  const double entropic_var = (2.0 * kPi / kE) * std::exp(-2.0 * hn);
  const double length_floor = 2.0 * kPi * std::exp(-hn);

  r.entries.push_back(make_entry("a", "H(Theta) + H(N) >= ln 2pi", r.phase_entropy + hn,
                                 std::log(2.0 * kPi), Relation::GreaterEqual));
  r.entries.push_back(make_entry("b", "dPhi^2 > (2pi/e) exp(-2H(N))", var, entropic_var,
                                 Relation::Greater));
  r.entries.push_back(make_entry("c", "(2pi/e) exp(-2H(N)) > (2pi/e^3) / <N+1>^2", entropic_var,
                                 (2.0 * kPi / (kE * kE * kE)) / (n1 * n1), Relation::Greater));
  r.entries.push_back(make_entry("d", "dPhi > k_A / <N+1>", std::sqrt(var), k_A() / n1,
                                 Relation::Greater));
  r.entries.push_back(make_entry("e", "L >= 2pi exp(-H(N))", r.ensemble_length, length_floor,
                                 Relation::GreaterEqual));
  r.entries.push_back(make_entry("f", "2pi exp(-H(N)) > (2pi/e) / <N+1>", length_floor,
                                 (2.0 * kPi / kE) / n1, Relation::Greater));
  r.entries.push_back(make_entry("gaussian", "0.5 ln(2pi e dPhi^2) > H(Theta)",
                                 0.5 * std::log(2.0 * kPi * kE * var), r.phase_entropy,
                                 Relation::Greater, true));
  r.entries.push_back(make_entry("thermal", "(2pi/e) exp(-2H(N)) >= (2pi/e) exp(-2 S_th(<N>))",
                                 entropic_var,
                                 (2.0 * kPi / kE) * std::exp(-2.0 * thermal_entropy(r.mean_number)),
                                 Relation::GreaterEqual, true));
  return r;
}

BoundReport entropy_chain_report(const ProbeState& state, std::size_t grid_points) {
  return chain_report(canonical_distribution(state), number_distribution(state), grid_points);
}

}  // namespace phaselimit
