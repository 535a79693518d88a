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

// JSON and CSV forms of the library's values. JSON documents emitted at top
// level carry "schema": "phaselimit/1".

#include <json.hpp>

#include <filesystem>
#include <string>
#include <vector>

#include "phaselimit/bounds.hpp"
#include "phaselimit/fock.hpp"
#include "phaselimit/optimizer.hpp"
#include "phaselimit/phasedist.hpp"
#include "phaselimit/povm.hpp"

namespace phaselimit {

using Json = nlohmann::ordered_json;

inline constexpr const char* kSchema = "phaselimit/1";

/// Finite values as numbers; +inf as "unbounded"; NaN as null.
Json number_json(double v);

Json to_json(const ProbeState& state);  // [[re, im], ...]
/// Accepts [[re, im], ...] or plain reals; normalizes.
ProbeState state_from_json(const Json& j);

Json to_json(const NumberDistribution& dist);  // [p_0, p_1, ...]

Json to_json(const PhaseDistribution& dist);  // {kmax, moments: [[re, im], ...]}
PhaseDistribution distribution_from_json(const Json& j);

Json to_json(const EstimatePOM& povm);  // {dim, outcomes: [{estimate, element}]}
EstimatePOM pom_from_json(const Json& j);

Json to_json(const Eigen::MatrixXcd& m);  // rows of [re, im]
Eigen::MatrixXcd complex_matrix_from_json(const Json& j);

Json to_json(const BoundEntry& entry);
Json to_json(const BoundReport& report);
/// Aligned text table, one line per entry.
std::string render_table(const BoundReport& report);

Json to_json(const OptimizationResult& result);
Json to_json(const CurveRow& row);

/// Column order of curve CSV output.
inline constexpr const char* kCurveCsvHeader =
    "kind,mean,dim,lambda,cost,delta,product,tail_mass,residual,iterations";
std::string curve_csv(const std::vector<CurveRow>& rows);

/// "theta,density" on the midpoint grid.
std::string density_csv(const PhaseDistribution& dist, std::size_t points);

/// Shortest round-trip decimal form.
std::string format_number(double v);

/// Writes via a temporary file in the same directory, then renames.
void write_file_atomic(const std::filesystem::path& path, const std::string& contents);

}  // namespace phaselimit
