// Copyright 2026 The Microsynth Authors
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

#include "microsynth/cli.h"

#include <chrono>
#include <cmath>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "absl/status/status.h"
#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_split.h"
#include "json.hpp"
#include "microsynth/anonymizer.h"
#include "microsynth/audit.h"
#include "microsynth/dppipeline.h"
#include "microsynth/io.h"
#include "microsynth/simd/kernels.h"
#include "microsynth/tensor.h"

namespace microsynth {
namespace {

using Json = nlohmann::ordered_json;

absl::StatusOr<std::vector<int>> ParseDegrees(const std::string& text) {
  std::vector<int> out;
  for (absl::string_view tok : absl::StrSplit(text, ',', absl::SkipEmpty())) {
    int d;
    if (!absl::SimpleAtoi(tok, &d) || d < 1) {
      return absl::InvalidArgumentError(
          absl::StrCat("bad degree '", tok, "'"));
    }
    out.push_back(d);
  }
  if (out.empty()) return absl::InvalidArgumentError("no degrees given");
  return out;
}

Json DegreeJson(const DegreeError& e) {
  Json j = {{"avg_sym_sq", e.avg_sym_sq},
            {"off_sq", e.off_sq},
            {"worst_entry", e.worst_entry},
            {"tuples", e.tuples_total}};
  if (e.sampled) {
    j["sampled"] = true;
    j["tuples_evaluated"] = e.tuples_evaluated;
    j["std_error"] = e.std_error;
  }
  return j;
}

Json ReportJson(const MarginalErrorReport& report) {
  Json j = Json::object();
  for (const auto& [d, e] : report.by_degree) j[std::to_string(d)] = DegreeJson(e);
  return j;
}

class StageClock {
 public:
  void Mark(const std::string& stage) {
    const auto now = std::chrono::steady_clock::now();
    timings_[stage] =
        std::chrono::duration<double>(now - last_).count();
    last_ = now;
  }
  Json ToJson() const {
    Json j = Json::object();
    for (const auto& [k, v] : timings_) j[k] = v;
    return j;
  }

 private:
  std::chrono::steady_clock::time_point last_ =
      std::chrono::steady_clock::now();
  std::map<std::string, double> timings_;
};

}  // namespace

absl::StatusOr<RunConfig> ParseArgs(int argc, char** argv) {
  RunConfig config;
  CLI::App app{"Synthetic Boolean data by microaggregation"};
  std::string mode, degrees = "1,2,3", format = "csv";
  int k = 0, m = 0;
  double epsilon = 0.0;
  app.add_option("input", config.input, "Input CSV or bit-matrix file")
      ->required();
  app.add_option("--mode", mode, "anonymous | dp")->required();
  auto* k_opt = app.add_option("--k", k, "Number of blocks (anonymous)");
  auto* eps_opt = app.add_option("--epsilon", epsilon, "Privacy budget (dp)");
  app.add_option("--kappa", config.kappa, "Covering exponent (dp)");
  auto* m_opt = app.add_option("--m", m, "Synthetic rows (default n)");
  app.add_option("--degrees", degrees, "Marginal degrees, e.g. 1,2,3");
  app.add_option("--seed", config.seed, "Random seed");
  app.add_option("--out", config.output, "Synthetic output path");
  app.add_option("--report", config.report, "JSON report path");
  app.add_flag("--audit", config.audit, "Run input-sized audits");
  app.add_flag("--timings", config.timings, "Record stage timings");
  app.add_option("--format", format, "Output format: csv | bits");
  app.add_option("--max-tuples", config.max_tuples,
                 "Sample index tuples beyond this count");
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    return absl::CancelledError(app.help());
  } catch (const CLI::ParseError& e) {
    return absl::InvalidArgumentError(e.what());
  }
  if (mode == "anonymous") {
    config.mode = Mode::kAnonymous;
  } else if (mode == "dp") {
    config.mode = Mode::kDp;
  } else {
    return absl::InvalidArgumentError(absl::StrCat("unknown mode '", mode, "'"));
  }
  if (format == "csv") {
    config.format = OutputFormat::kCsv;
  } else if (format == "bits") {
    config.format = OutputFormat::kBits;
  } else {
    return absl::InvalidArgumentError(
        absl::StrCat("unknown format '", format, "'"));
  }
  if (k_opt->count() > 0) config.k = k;
  if (eps_opt->count() > 0) config.epsilon = epsilon;
  if (m_opt->count() > 0) config.m = m;
  auto parsed = ParseDegrees(degrees);
  if (!parsed.ok()) return parsed.status();
  config.degrees = *parsed;
  return config;
}

int Run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  // Mode-level configuration that does not depend on the data.
  if (config.mode == Mode::kAnonymous) {
    if (!config.k.has_value()) {
      err << "config error: --k is required in anonymous mode\n";
      return kExitConfig;
    }
    if (*config.k < 9) {
      err << "config error: --k must be at least 9\n";
      return kExitConfig;
    }
  } else {
    if (!config.epsilon.has_value()) {
      err << "config error: --epsilon is required in dp mode\n";
      return kExitConfig;
    }
    if (!(*config.epsilon > 0.0 && *config.epsilon < 1.0)) {
      err << "config error: --epsilon must lie in (0, 1)\n";
      return kExitConfig;
    }
    if (!(config.kappa > 0.0 && config.kappa < 1.0)) {
      err << "config error: --kappa must lie in (0, 1)\n";
      return kExitConfig;
    }
  }
  if (config.m.has_value() && *config.m < 1) {
    err << "config error: --m must be positive\n";
    return kExitConfig;
  }

  StageClock clock;
  auto dataset = IngestAny(config.input);
  if (!dataset.ok()) {
    err << "parse error: " << dataset.status().message() << "\n";
    return kExitParse;
  }
  clock.Mark("ingest");
  const int n = static_cast<int>(dataset->size());
  const int p = static_cast<int>(dataset->dimension());
  const int m = config.m.value_or(n);
  if (config.mode == Mode::kAnonymous && (*config.k > n || n % *config.k != 0)) {
    err << "config error: --k=" << *config.k << " must divide n=" << n << "\n";
    return kExitConfig;
  }

  std::vector<int> degrees;
  Json skipped = Json::array();
  for (int d : config.degrees) {
    if (d <= p) {
      degrees.push_back(d);
    } else {
      skipped.push_back(d);
    }
  }

  Json report;
  report["schema"] = 1;
  report["mode"] = config.mode == Mode::kAnonymous ? "anonymous" : "dp";
  Json params = {{"n", n}, {"p", p}, {"m", m}, {"seed", config.seed}};
  Json manifest = {{"input", config.input},
                   {"kernel_isa", std::string(simd::IsaName(simd::ActiveIsa()))},
                   {"max_tuples", config.max_tuples}};
  SynthDataset synth;
  MarginalErrorReport errors;
  Json audit;

  if (config.mode == Mode::kAnonymous) {
    auto run = RunAlgorithm1(dataset->rows, *config.k, m, config.seed,
                             degrees, config.max_tuples);
    if (!run.ok()) {
      err << "runtime error: " << run.status().ToString() << "\n";
      return kExitRuntime;
    }
    clock.Mark("pipeline");
    params["k"] = *config.k;
    manifest["anonymity"] = run->aggregate.anonymity;
    manifest["k_prime"] = run->aggregate.params.k_prime;
    manifest["alpha"] = run->aggregate.params.alpha;
    manifest["t"] = run->aggregate.projection.rank();
    manifest["s"] = run->aggregate.covering.size();
    synth = run->synth;
    errors = run->report;
    if (config.audit) audit = AuditAlgorithm1(dataset->rows, *run);
  } else {
    auto run = RunAlgorithm2(dataset->rows, *config.epsilon, config.kappa, m,
                             config.seed, degrees, config.max_tuples);
    if (!run.ok()) {
      err << "runtime error: " << run.status().ToString() << "\n";
      return kExitRuntime;
    }
    clock.Mark("pipeline");
    params["epsilon"] = *config.epsilon;
    params["kappa"] = config.kappa;
    const DpParams& dp = run->params;
    manifest["alpha"] = dp.alpha;
    manifest["t_formula"] = dp.t_formula;
    manifest["t"] = dp.t;
    manifest["b"] = dp.b;
    manifest["s"] = run->covering.size();
    manifest["weight_noise_scale"] = dp.weight_noise_scale;
    manifest["vector_noise_scale"] = dp.vector_noise_scale;
    manifest["zero_projection_fallback"] = run->zero_projection_fallback;
    Json ledger = Json::array();
    double total = 0.0;
    for (const BudgetEntry& e : run->ledger) {
      ledger.push_back({{"stage", e.stage}, {"epsilon", e.epsilon}});
      total += e.epsilon;
    }
    report["ledger"] = ledger;
    report["ledger_total"] = total;
    synth = run->synth;
    errors = run->report;
    if (config.audit) audit = AuditAlgorithm2(*run);
  }
  if (config.audit) clock.Mark("audit");

  report["params"] = params;
  report["errors_by_degree"] = ReportJson(errors);
  if (!skipped.empty()) report["skipped_degrees"] = skipped;
  report["column_names"] = dataset->column_names;
  if (config.timings) manifest["timings_seconds"] = clock.ToJson();
  report["manifest"] = manifest;
  if (config.audit) report["audit"] = audit;

  Dataset synthetic{synth.rows, dataset->column_names};
  auto encoded = config.format == OutputFormat::kCsv ? EmitCsv(synthetic)
                                                     : EmitBits(synthetic);
  if (!encoded.ok()) {
    err << "runtime error: " << encoded.status().ToString() << "\n";
    return kExitRuntime;
  }
  if (config.output.empty()) {
    out << *encoded;
  } else if (auto s = WriteFile(config.output, *encoded); !s.ok()) {
    err << "runtime error: " << s.ToString() << "\n";
    return kExitRuntime;
  }
  if (!config.report.empty()) {
    if (auto s = WriteFile(config.report, report.dump(2) + "\n"); !s.ok()) {
      err << "runtime error: " << s.ToString() << "\n";
      return kExitRuntime;
    }
  }
  return kExitOk;
}

int RunMain(int argc, char** argv, std::ostream& out, std::ostream& err) {
  auto config = ParseArgs(argc, argv);
  if (!config.ok()) {
    if (absl::IsCancelled(config.status())) {
      out << config.status().message();
      return kExitOk;
    }
    err << "config error: " << config.status().message() << "\n";
    return kExitConfig;
  }
  return Run(*config, out, err);
}

}  // namespace microsynth
