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

#ifndef MICROSYNTH_CLI_H_
#define MICROSYNTH_CLI_H_

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "absl/status/statusor.h"

namespace microsynth {

enum ExitCode : int {
  kExitOk = 0,
  kExitRuntime = 1,
  kExitConfig = 2,
  kExitParse = 3,
};

enum class Mode { kAnonymous, kDp };
enum class OutputFormat { kCsv, kBits };

struct RunConfig {
  Mode mode = Mode::kAnonymous;
  std::string input;
  std::string output;  // empty: synthetic rows go to stdout
  std::string report;  // empty: no report file
  std::optional<int> k;
  std::optional<double> epsilon;
  double kappa = 1.0 / 3.0;
  std::optional<int> m;  // defaults to n
  std::vector<int> degrees = {1, 2, 3};
  std::uint64_t seed = 0;
  bool audit = false;
  bool timings = false;
  OutputFormat format = OutputFormat::kCsv;
  std::uint64_t max_tuples = 1'000'000;
};

// Parses command-line flags. Errors are configuration errors.
absl::StatusOr<RunConfig> ParseArgs(int argc, char** argv);

// Runs one pipeline and returns the process exit code. Diagnostics go to
// `err`; synthetic rows go to `out` when no output path is configured.
int Run(const RunConfig& config, std::ostream& out, std::ostream& err);

// ParseArgs + Run with help handling.
int RunMain(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace microsynth

#endif  // MICROSYNTH_CLI_H_
