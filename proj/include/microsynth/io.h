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

#ifndef MICROSYNTH_IO_H_
#define MICROSYNTH_IO_H_

#include <string>
#include <string_view>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "microsynth/dataset.h"

namespace microsynth {

// Comma-separated 0/1 rows. The first row is a header when any of its
// tokens fails to parse as a number. Errors name 1-based (row, column)
// positions of the file.
absl::StatusOr<Dataset> ParseCsv(std::string_view text);
absl::StatusOr<Dataset> IngestCsv(const std::string& path);

// Header line (when column names are present) followed by 0/1 rows.
absl::StatusOr<std::string> EmitCsv(const Dataset& data);

// Packed bit-matrix format: the magic "MSBITS01", little-endian uint64 n
// and p, p length-prefixed column names (uint32 length, may be empty), then
// n rows of ceil(p/8) bytes with column j at bit j % 8 of byte j / 8.
inline constexpr std::string_view kBitsMagic = "MSBITS01";
absl::StatusOr<std::string> EmitBits(const Dataset& data);
absl::StatusOr<Dataset> ParseBits(std::string_view bytes);

// Reads a file in either format, detected from the magic bytes.
absl::StatusOr<Dataset> IngestAny(const std::string& path);

absl::StatusOr<std::string> ReadFile(const std::string& path);
absl::Status WriteFile(const std::string& path, std::string_view contents);

}  // namespace microsynth

#endif  // MICROSYNTH_IO_H_
