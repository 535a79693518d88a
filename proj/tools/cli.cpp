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

#include "cli.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>

#include "phaselimit/bounds.hpp"
#include "phaselimit/error.hpp"
#include "phaselimit/optimizer.hpp"
#include "phaselimit/povm.hpp"
#include "phaselimit/serialize.hpp"

namespace phaselimit::cli {
namespace {

constexpr double kConjectureSlack = 1e-6;

constexpr const char* kCurveHelp =
    "CSV columns: kind, mean, dim, lambda, cost, delta, product, tail_mass, residual, "
    "iterations. product = (mean + 1) * sqrt(cost).";

struct Options {
  std::string kind;
  std::string means;
  std::size_t dim = 0;
  double mean_tol = kDefaultMeanTolerance;
  std::size_t grid = kDefaultEntropyGrid;
  std::string format;
  std::string out;
  std::uint64_t seed = 0;
  std::size_t K = 0;
  std::string state;
  std::string povm;
};

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ValidationError("cannot read " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

Json parse_json(const std::string& text, const std::string& what) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError("malformed JSON in " + what + ": " + e.what());
  }
}

// Inline JSON when the argument starts with '[' or '{', otherwise a path.
Json load_json_argument(const std::string& arg, const std::string& what) {
  if (arg.empty()) throw ValidationError(what + " is required");
  const auto first = arg.find_first_not_of(" \t\n");
  if (first != std::string::npos && (arg[first] == '[' || arg[first] == '{')) {
    return parse_json(arg, what);
  }
  return parse_json(read_file(arg), what + " file " + arg);
}

std::vector<double> parse_means(const std::string& text) {
  std::vector<double> means;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      throw ValidationError("--means: cannot parse '" + item + "'");
    }
    if (used != item.size() || !std::isfinite(v)) {
      throw ValidationError("--means: cannot parse '" + item + "'");
    }
    means.push_back(v);
  }
  if (means.empty()) throw ValidationError("--means: empty list");
  return means;
}

std::vector<CostKind> kinds_for(const std::string& kind) {
  if (kind.empty()) return {CostKind::ExactSquare, CostKind::Surrogate};
  return {parse_cost_kind(kind)};
}

Json envelope(const std::string& command) {
  return Json{{"schema", kSchema}, {"command", command}};
}

class Emitter {
 public:
  Emitter(const Options& opts, std::ostream& out) : opts_(opts), out_(out) {}
  void emit(const std::string& text) {
    if (opts_.out.empty()) {
      out_ << text;
    } else {
      write_file_atomic(opts_.out, text);
    }
  }
  void emit(const Json& j) { emit(j.dump(2) + "\n"); }

 private:
  const Options& opts_;
  std::ostream& out_;
};

void check_format(const std::string& format, std::initializer_list<const char*> allowed) {
  if (format.empty()) return;
  for (const char* a : allowed) {
    if (format == a) return;
  }
  throw ValidationError("unsupported --format '" + format + "' for this command");
}

int cmd_constants(const Options& o, Emitter& emit) {
  check_format(o.format, {"text", "json"});
  const double za = airy_first_zero();
  if (o.format == "json") {
    Json j = envelope("constants");
    j["k_A"] = k_A();
    j["k_C"] = k_C();
    j["z_A"] = za;
    j["airy_at_z_A"] = airy_ai(za);
    emit.emit(j);
  } else {
    emit.emit(fmt::format("k_A = {:.12f}\nk_C = {:.12f}\nz_A = {:.12f}\n", k_A(), k_C(), za));
  }
  return kOk;
}

int report_conjecture(double delta, double mean, std::ostream& err) {
  const double bound = conjectured_bound(mean);
  if (delta < bound - kConjectureSlack) {
    err << fmt::format(
        "WARNING: conjectured bound violated: dPhi = {} < k_C/(<N>+1) = {} at <N> = {}\n", delta,
        bound, mean);
    return kNumerical;
  }
  return kOk;
}

int cmd_bounds(const Options& o, Emitter& emit, std::ostream& err) {
  check_format(o.format, {"text", "json"});
  const ProbeState state = state_from_json(load_json_argument(o.state, "--state"));
  const BoundReport report = entropy_chain_report(state, o.grid);
  if (o.format == "json") {
    Json j = envelope("bounds");
    j["state"] = to_json(state);
    j["report"] = to_json(report);
    emit.emit(j);
  } else {
    emit.emit(render_table(report));
  }
  report_conjecture(std::sqrt(report.mean_square_deviation), report.mean_number, err);
  if (!report.all_satisfied()) {
    err << "bound chain violated\n";
    return kNumerical;
  }
  return kOk;
}

OptimizeOptions optimize_options(const Options& o) {
  OptimizeOptions opt;
  opt.solver.seed = o.seed;
  return opt;
}

int cmd_optimize(const Options& o, Emitter& emit) {
  check_format(o.format, {"json", "csv"});
  const auto means = parse_means(o.means);
  const CostKind kind = o.kind.empty() ? CostKind::ExactSquare : parse_cost_kind(o.kind);
  const DimPolicy policy{.fixed_dim = o.dim};
  std::vector<OptimizationResult> results;
  for (double m : means) {
    results.push_back(optimize_at_mean(kind, m, policy.dim_for(m), o.mean_tol, optimize_options(o)));
  }
  if (o.format == "csv") {
    std::vector<CurveRow> rows;
    for (const auto& r : results) rows.push_back(curve_row(r));
    emit.emit(curve_csv(rows));
  } else {
    Json j = envelope("optimize");
    Json arr = Json::array();
    for (const auto& r : results) arr.push_back(to_json(r));
    j["results"] = arr;
    emit.emit(j);
  }
  return kOk;
}

int cmd_curve(const Options& o, Emitter& emit, std::ostream& err) {
  check_format(o.format, {"csv", "json"});
  const auto means = parse_means(o.means.empty() ? "0.5,1,2,5,10,20,50,100" : o.means);
  const DimPolicy policy{.fixed_dim = o.dim};
  CurveOptions options;
  options.mean_tol = o.mean_tol;
  options.optimize = optimize_options(o);
  std::vector<CurveRow> rows;
  for (CostKind kind : kinds_for(o.kind)) {
    auto part = figure2_curve(kind, means, policy, options);
    rows.insert(rows.end(), part.begin(), part.end());
  }
  if (o.format == "json") {
    Json j = envelope("curve");
    j["k_C"] = k_C();
    Json arr = Json::array();
    for (const auto& r : rows) arr.push_back(to_json(r));
    j["rows"] = arr;
    emit.emit(j);
  } else {
    emit.emit(curve_csv(rows));
  }
  int status = kOk;
  for (const auto& r : rows) {
    if (r.product < k_C() - kConjectureSlack) {
      err << fmt::format("WARNING: {} curve product {} at mean {} is below k_C = {}\n",
                         to_string(r.kind), r.product, r.mean, k_C());
      status = kNumerical;
    }
  }
  return status;
}

int cmd_simulate(const Options& o, Emitter& emit, std::ostream& err) {
  check_format(o.format, {"json", "csv"});
  const EstimatePOM povm = pom_from_json(load_json_argument(o.povm, "--povm"));
  const ProbeState state = state_from_json(load_json_argument(o.state, "--state"));
  const PhaseDistribution pbar = average_distribution(povm, state);
  if (o.format == "csv") {
    emit.emit(density_csv(pbar, PhaseDistribution::kDensityCheckGrid));
    return kOk;
  }
  const NumberDistribution numbers = number_distribution(state);
  const BoundReport report = chain_report(pbar, numbers, o.grid);
  const double msd = mean_square_deviation(pbar);
  const double delta = std::sqrt(msd);
  const double floor = min_density(pbar);

  Json j = envelope("simulate");
  j["distribution"] = to_json(pbar);
  j["mean_number"] = numbers.mean();
  j["mean_square_deviation"] = msd;
  j["delta"] = delta;
  j["holevo_variance"] = number_json(holevo_variance(pbar));
  j["phase_entropy"] = report.phase_entropy;
  j["ensemble_length"] = report.ensemble_length;
  j["min_density"] = floor;
  j["heisenberg"] = to_json(make_entry("heisenberg", "dPhi > k_A / <N+1>", delta,
                                       heisenberg_bound(numbers.mean()), Relation::Greater));
  j["conjectured"] = to_json(make_entry("conjectured", "dPhi > k_C / <N+1>", delta,
                                        conjectured_bound(numbers.mean()), Relation::Greater, true));
  j["report"] = to_json(report);
  emit.emit(j);

  report_conjecture(delta, numbers.mean(), err);
  if (floor < PhaseDistribution::kDensityFloor || !report.all_satisfied()) {
    err << "average distribution violates a hard invariant\n";
    return kNumerical;
  }
  return kOk;
}

int cmd_discriminate(const Options& o, Emitter& emit) {
  check_format(o.format, {"json"});
  if (o.K < 1) throw ValidationError("--K must be >= 1");
  const KPhaseScheme scheme = kphase_construction(o.K);
  const auto d = scheme.gram.rows();
  const double gram_error =
      (scheme.gram - Eigen::MatrixXcd::Identity(d, d)).cwiseAbs().maxCoeff();
  const PhaseDistribution pbar = average_distribution(scheme.povm, scheme.state);
  const double delta = std::sqrt(mean_square_deviation(pbar));

  Json j = envelope("discriminate");
  j["K"] = scheme.K;
  j["mean_number"] = scheme.mean_number;
  j["phases"] = scheme.phases;
  j["gram"] = to_json(scheme.gram);
  j["gram_identity_error"] = gram_error;
  j["success"] = scheme.success;
  j["variance_at_phases"] = scheme.variance_at_phases;
  j["state"] = to_json(scheme.state);
  j["average_delta"] = delta;
  j["heisenberg"] = to_json(make_entry("heisenberg", "dPhi > k_A / <N+1>", delta,
                                       heisenberg_bound(scheme.mean_number), Relation::Greater));
  emit.emit(j);
  return (gram_error <= 1e-12 && delta > heisenberg_bound(scheme.mean_number)) ? kOk : kNumerical;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Heisenberg-limit bounds, optimal probe states and measurement simulation",
               "phaselimit"};
  app.require_subcommand(1);
  Options o;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--format", o.format, "Output format");
    sub->add_option("--out", o.out, "Write output to PATH (atomically) instead of stdout");
  };
  auto add_seed = [&](CLI::App* sub) {
    sub->add_option("--seed", o.seed, "Seed for randomized eigensolver start vectors");
  };

  auto* constants = app.add_subcommand("constants", "Print k_A, k_C and the first Airy zero");
  add_common(constants);

  auto* bounds = app.add_subcommand("bounds", "Entropy and variance bound chain for a state");
  bounds->add_option("--state", o.state, "State JSON ([[re, im], ...]) inline or as a file")
      ->required();
  bounds->add_option("--grid", o.grid, "Entropy quadrature grid (power of two >= 64)");
  add_common(bounds);

  auto* optimize = app.add_subcommand("optimize", "Minimum-cost probe state at given means");
  optimize->add_option("--kind", o.kind, "exact or surrogate")
      ->check(CLI::IsMember({"exact", "surrogate"}));
  optimize->add_option("--means", o.means, "Comma-separated target means")->required();
  optimize->add_option("--dim", o.dim, "Initial truncation (default max(64, 8 mean))");
  optimize->add_option("--mean-tol", o.mean_tol, "Relative mean tolerance");
  add_seed(optimize);
  add_common(optimize);

  auto* curve = app.add_subcommand("curve", "Minimum (<N>+1) dPhi versus <N>");
  curve->footer(kCurveHelp);
  curve->add_option("--kind", o.kind, "exact or surrogate (default: both)")
      ->check(CLI::IsMember({"exact", "surrogate"}));
  curve->add_option("--means", o.means, "Comma-separated ascending means");
  curve->add_option("--dim", o.dim, "Fixed initial truncation");
  curve->add_option("--mean-tol", o.mean_tol, "Relative mean tolerance");
  add_seed(curve);
  add_common(curve);

  auto* simulate =
      app.add_subcommand("simulate", "Phase-averaged error density of a measurement on a state");
  simulate->add_option("--povm", o.povm, "POM JSON inline or as a file")->required();
  simulate->add_option("--state", o.state, "State JSON inline or as a file")->required();
  simulate->add_option("--grid", o.grid, "Entropy quadrature grid (power of two >= 64)");
  add_common(simulate);

  auto* discriminate =
      app.add_subcommand("discriminate", "K-phase perfect discrimination construction");
  discriminate->add_option("--K", o.K, "Number of phases")->required();
  add_common(discriminate);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kValidation;
  }

  Emitter emitter(o, out);
  try {
    if (constants->parsed()) return cmd_constants(o, emitter);
    if (bounds->parsed()) return cmd_bounds(o, emitter, err);
    if (optimize->parsed()) return cmd_optimize(o, emitter);
    if (curve->parsed()) return cmd_curve(o, emitter, err);
    if (simulate->parsed()) return cmd_simulate(o, emitter, err);
    if (discriminate->parsed()) return cmd_discriminate(o, emitter);
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << "\n";
    return kValidation;
  } catch (const ConvergenceError& e) {
    err << "numerical failure: " << e.what() << "\n";
    return kNumerical;
  } catch (const nlohmann::json::exception& e) {
    err << "error: malformed input: " << e.what() << "\n";
    return kValidation;
  }
  return kValidation;
}

}  // namespace phaselimit::cli
