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

// Analytic constants and inequality chains for the average phase-error
// distribution. All bounds take the mean of the shift generator N.

#include <string>
#include <vector>

#include "phaselimit/fock.hpp"
#include "phaselimit/phasedist.hpp"

namespace phaselimit {

/// sqrt(2 pi / e^3).
double k_A();

/// Airy function Ai and its derivative from the Maclaurin series.
double airy_ai(double z);
double airy_ai_prime(double z);

/// Ai(0) = 3^{-2/3} / Gamma(2/3) and Ai'(0) = -3^{-1/3} / Gamma(1/3).
double airy_ai_at_zero();
double airy_ai_prime_at_zero();

/// First negative zero of Ai, isolated in [-2.4, -2.3].
double airy_first_zero();

/// 2 (-z_A / 3)^{3/2}.
double k_C();

/// k_A / (nbar + 1).
double heisenberg_bound(double nbar);
/// k_C / (nbar + 1).
double conjectured_bound(double nbar);

enum class Relation { Greater, GreaterEqual };

struct BoundEntry {
  std::string name;
  std::string description;
  double lhs = 0.0;
  double rhs = 0.0;
  Relation relation = Relation::GreaterEqual;
  bool satisfied = false;
  double margin = 0.0;  // lhs - rhs
  bool informational = false;
};

/// ">" requires a positive margin; ">=" tolerates margin >= -1e-10.
BoundEntry make_entry(std::string name, std::string description, double lhs, double rhs,
                      Relation relation, bool informational = false);

struct BoundReport {
  std::vector<BoundEntry> entries;
  double mean_number = 0.0;
  double number_entropy = 0.0;
  double phase_entropy = 0.0;
  double mean_square_deviation = 0.0;
  double ensemble_length = 0.0;

  /// True when every non-informational entry holds.
  bool all_satisfied() const;
  const BoundEntry& entry(const std::string& name) const;
};

/// Entropy chain for an error density `dist` paired with the number
/// distribution of the generator on the probe:
///   a  H(Theta) + H(N) >= ln 2pi
///   b  dPhi^2 > (2pi/e) e^{-2H(N)}
///   c  (2pi/e) e^{-2H(N)} > (2pi/e^3) / <N+1>^2
///   d  dPhi > k_A / <N+1>
///   e  L >= 2pi e^{-H(N)}
///   f  2pi e^{-H(N)} > (2pi/e) / <N+1>
/// plus informational entries for the Gaussian entropy bound and the
/// thermal-entropy form of c.
BoundReport chain_report(const PhaseDistribution& dist, const NumberDistribution& numbers,
                         std::size_t grid_points = kDefaultEntropyGrid);

/// chain_report on the canonical distribution of `state`.
BoundReport entropy_chain_report(const ProbeState& state,
                                 std::size_t grid_points = kDefaultEntropyGrid);

}  // namespace phaselimit
