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

#include "phaselimit/serialize.hpp"

#include <fmt/format.h>

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "phaselimit/error.hpp"

namespace phaselimit {
namespace {

Json complex_json(const Complex& c) { return Json::array({c.real(), c.imag()}); }

Complex complex_from_json(const Json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) {
    return {j[0].get<double>(), j[1].get<double>()};
  }
  throw ValidationError("expected a number or an [re, im] pair");
}

const Json& require(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) {
    throw ValidationError(std::string("missing field '") + key + "'");
  }
  return j.at(key);
}

const char* relation_symbol(Relation r) { return r == Relation::Greater ? ">" : ">="; }

}  // namespace

std::string format_number(double v) { return fmt::format("{}", v); }

Json number_json(double v) {
  if (std::isinf(v) && v > 0) return "unbounded";
  if (std::isnan(v)) return nullptr;
  return v;
}

Json to_json(const ProbeState& state) {
  Json out = Json::array();
  for (const auto& c : state.amplitudes()) out.push_back(complex_json(c));
  return out;
}

ProbeState state_from_json(const Json& j) {
  if (!j.is_array()) throw ValidationError("state: expected a JSON array of amplitudes");
  std::vector<Complex> amplitudes;
  for (const auto& e : j) amplitudes.push_back(complex_from_json(e));
  return make_state(amplitudes);
}

Json to_json(const NumberDistribution& dist) { return Json(dist.probabilities()); }

Json to_json(const PhaseDistribution& dist) {
  Json moments = Json::array();
  for (const auto& m : dist.moments()) moments.push_back(complex_json(m));
  return Json{{"kmax", dist.kmax()}, {"moments", moments}};
}

PhaseDistribution distribution_from_json(const Json& j) {
  const auto& moments = require(j, "moments");
  if (!moments.is_array()) throw ValidationError("distribution: moments must be an array");
  std::vector<Complex> m;
  for (const auto& e : moments) m.push_back(complex_from_json(e));
  if (j.contains("kmax") && j.at("kmax").get<std::size_t>() + 1 != m.size()) {
    throw ValidationError("distribution: kmax does not match the moment count");
  }
  return PhaseDistribution::from_moments(std::move(m));
}

Json to_json(const Eigen::MatrixXcd& m) {
  Json rows = Json::array();
  for (Eigen::Index a = 0; a < m.rows(); ++a) {
    Json row = Json::array();
    for (Eigen::Index b = 0; b < m.cols(); ++b) row.push_back(complex_json(m(a, b)));
    rows.push_back(std::move(row));
  }
  return rows;
}

Eigen::MatrixXcd complex_matrix_from_json(const Json& j) {
  if (!j.is_array() || j.empty()) throw ValidationError("matrix: expected a nonempty array of rows");
  const auto n = static_cast<Eigen::Index>(j.size());
  Eigen::MatrixXcd m(n, n);
  for (Eigen::Index a = 0; a < n; ++a) {
    const auto& row = j[static_cast<std::size_t>(a)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != n) {
      throw ValidationError("matrix: rows must be arrays of length " + std::to_string(n));
    }
    for (Eigen::Index b = 0; b < n; ++b) m(a, b) = complex_from_json(row[static_cast<std::size_t>(b)]);
  }
  return m;
}

Json to_json(const EstimatePOM& povm) {
  Json outcomes = Json::array();
  for (const auto& o : povm.outcomes()) {
    outcomes.push_back(Json{{"estimate", o.estimate}, {"element", to_json(o.element)}});
  }
  return Json{{"dim", povm.dim()}, {"outcomes", outcomes}};
}

EstimatePOM pom_from_json(const Json& j) {
  const auto dim = require(j, "dim").get<std::size_t>();
  const auto& outcomes = require(j, "outcomes");
  if (!outcomes.is_array()) throw ValidationError("POM: outcomes must be an array");
  std::vector<PomOutcome> parsed;
  for (const auto& o : outcomes) {
    PomOutcome out;
    out.estimate = require(o, "estimate").get<double>();
    out.element = complex_matrix_from_json(require(o, "element"));
    parsed.push_back(std::move(out));
  }
  return EstimatePOM(dim, std::move(parsed));
}

Json to_json(const BoundEntry& e) {
  return Json{{"name", e.name},
              {"description", e.description},
              {"lhs", number_json(e.lhs)},
              {"relation", relation_symbol(e.relation)},
              {"rhs", number_json(e.rhs)},
              {"margin", number_json(e.margin)},
              {"satisfied", e.satisfied},
              {"informational", e.informational}};
}

Json to_json(const BoundReport& report) {
  Json entries = Json::array();
  for (const auto& e : report.entries) entries.push_back(to_json(e));
  return Json{{"mean_number", report.mean_number},
              {"number_entropy", report.number_entropy},
              {"phase_entropy", report.phase_entropy},
              {"mean_square_deviation", report.mean_square_deviation},
              {"ensemble_length", report.ensemble_length},
              {"all_satisfied", report.all_satisfied()},
              {"entries", entries}};
}

std::string render_table(const BoundReport& report) {
  std::size_t width = 0;
  for (const auto& e : report.entries) width = std::max(width, e.description.size());
  std::string out = fmt::format("<N> = {:.12g}   H(N) = {:.12g}   H(Theta) = {:.12g}\n",
                                report.mean_number, report.number_entropy, report.phase_entropy);
  out += fmt::format("{:<9} {:<{}} {:>20} {:>2} {:>20} {:>20}  {}\n", "entry", "inequality", width,
                     "lhs", "", "rhs", "margin", "status");
  for (const auto& e : report.entries) {
    const char* status = e.satisfied ? "ok" : (e.informational ? "info-fail" : "FAIL");
    out += fmt::format("{:<9} {:<{}} {:>20.12g} {:>2} {:>20.12g} {:>20.12g}  {}{}\n", e.name,
                       e.description, width, e.lhs, relation_symbol(e.relation), e.rhs, e.margin,
                       status, e.informational ? " (informational)" : "");
  }
  return out;
}

Json to_json(const OptimizationResult& r) {
  return Json{{"kind", std::string(to_string(r.kind))},
              {"target_mean", r.target_mean},
              {"achieved_mean", r.achieved_mean},
              {"cost", r.cost},
              {"delta", std::sqrt(std::max(r.cost, 0.0))},
              {"product", (r.target_mean + 1.0) * std::sqrt(std::max(r.cost, 0.0))},
              {"lambda", r.lambda},
              {"eigenvalue", r.eigenvalue},
              {"dim", r.dim},
              {"tail_mass", r.tail_mass},
              {"residual", r.residual},
              {"iterations", r.iterations},
              {"attempts", r.attempts},
              {"amplitudes", r.amplitudes}};
}

Json to_json(const CurveRow& row) {
  return Json{{"kind", std::string(to_string(row.kind))},
              {"mean", row.mean},
              {"dim", row.dim},
              {"lambda", row.lambda},
              {"cost", row.cost},
              {"delta", row.delta},
              {"product", row.product},
              {"tail_mass", row.tail_mass},
              {"residual", row.residual},
              {"iterations", row.iterations}};
}

std::string curve_csv(const std::vector<CurveRow>& rows) {
  std::string out = std::string(kCurveCsvHeader) + "\n";
  for (const auto& r : rows) {
    out += fmt::format("{},{},{},{},{},{},{},{},{},{}\n", to_string(r.kind), format_number(r.mean),
                       r.dim, format_number(r.lambda), format_number(r.cost),
                       format_number(r.delta), format_number(r.product),
                       format_number(r.tail_mass), format_number(r.residual), r.iterations);
  }
  return out;
}

std::string density_csv(const PhaseDistribution& dist, std::size_t points) {
  const auto grid = density_grid(dist, points);
  std::string out = "theta,density\n";
  const double h = 2.0 * std::numbers::pi / static_cast<double>(points);
  for (std::size_t j = 0; j < points; ++j) {
    const double theta = -std::numbers::pi + (static_cast<double>(j) + 0.5) * h;
    out += fmt::format("{},{}\n", format_number(theta), format_number(grid[j]));
  }
  return out;
}

void write_file_atomic(const std::filesystem::path& path, const std::string& contents) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw ValidationError("cannot open " + tmp.string() + " for writing");
    f << contents;
    if (!f.flush()) throw ValidationError("failed writing " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw ValidationError("cannot move output into " + path.string() + ": " + ec.message());
  }
}

}  // namespace phaselimit
