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

#include "microsynth/io.h"

#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/status.h"
#include "absl/strings/ascii.h"
#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_split.h"

namespace microsynth {
namespace {

std::vector<absl::string_view> SplitLines(absl::string_view text) {
  std::vector<absl::string_view> lines = absl::StrSplit(text, '\n');
  for (auto& line : lines) {
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  }
  while (!lines.empty() && absl::StripAsciiWhitespace(lines.back()).empty()) {
    lines.pop_back();
  }
  return lines;
}

void PutU64(std::string& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void PutU32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

class ByteReader {
 public:
  explicit ByteReader(absl::string_view bytes) : bytes_(bytes) {}

  absl::StatusOr<std::uint64_t> U64() { return Unsigned(8); }
  absl::StatusOr<std::uint64_t> U32() { return Unsigned(4); }
  absl::StatusOr<absl::string_view> Take(std::size_t count) {
    if (bytes_.size() - pos_ < count) {
      return absl::InvalidArgumentError(
          absl::StrCat("truncated bit file at byte ", pos_));
    }
    absl::string_view out = bytes_.substr(pos_, count);
    pos_ += count;
    return out;
  }
  bool done() const { return pos_ == bytes_.size(); }

 private:
  absl::StatusOr<std::uint64_t> Unsigned(int width) {
    auto raw = Take(width);
    if (!raw.ok()) return raw.status();
    std::uint64_t v = 0;
    for (int i = 0; i < width; ++i) {
      v |= static_cast<std::uint64_t>(static_cast<unsigned char>((*raw)[i]))
           << (8 * i);
    }
    return v;
  }

  absl::string_view bytes_;
  std::size_t pos_ = 0;
};

}  // namespace

absl::StatusOr<Dataset> ParseCsv(std::string_view input) {
  const absl::string_view text(input.data(), input.size());
  const std::vector<absl::string_view> lines = SplitLines(text);
  if (lines.empty()) return absl::InvalidArgumentError("empty CSV input");
  Dataset out;
  const std::vector<absl::string_view> head = absl::StrSplit(lines[0], ',');
  const std::size_t width = head.size();
  std::size_t first = 0;
  for (absl::string_view tok : head) {
    double unused;
    if (!absl::SimpleAtod(absl::StripAsciiWhitespace(tok), &unused)) {
      first = 1;
    }
  }
  if (first == 1) {
    for (absl::string_view tok : head) {
      out.column_names.emplace_back(absl::StripAsciiWhitespace(tok));
    }
  }
  std::vector<std::vector<double>> rows;
  for (std::size_t r = first; r < lines.size(); ++r) {
    std::vector<absl::string_view> tokens = absl::StrSplit(lines[r], ',');
    if (tokens.size() != width) {
      return absl::InvalidArgumentError(
          absl::StrCat("row ", r + 1, " has ", tokens.size(),
                       " fields, expected ", width));
    }
    std::vector<double> row(width);
    for (std::size_t c = 0; c < width; ++c) {
      const absl::string_view tok = absl::StripAsciiWhitespace(tokens[c]);
      double v;
      if (!absl::SimpleAtod(tok, &v) || (v != 0.0 && v != 1.0)) {
        return absl::InvalidArgumentError(
            absl::StrCat("entry '", tok, "' at (", r + 1, ",", c + 1,
                         ") is not 0 or 1"));
      }
      row[c] = v;
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) return absl::InvalidArgumentError("CSV has no data rows");
  out.rows.resize(static_cast<Eigen::Index>(rows.size()),
                  static_cast<Eigen::Index>(width));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t c = 0; c < width; ++c) out.rows(r, c) = rows[r][c];
  }
  return out;
}

absl::StatusOr<std::string> ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return absl::NotFoundError(absl::StrCat("cannot open ", path));
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

absl::Status WriteFile(const std::string& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) return absl::UnavailableError(absl::StrCat("cannot write ", path));
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) return absl::UnavailableError(absl::StrCat("write failed: ", path));
  return absl::OkStatus();
}

absl::StatusOr<Dataset> IngestCsv(const std::string& path) {
  auto text = ReadFile(path);
  if (!text.ok()) return text.status();
  return ParseCsv(*text);
}

absl::StatusOr<std::string> EmitCsv(const Dataset& data) {
  if (!IsBoolean(data.rows)) {
    return absl::InvalidArgumentError("only Boolean rows can be emitted");
  }
  std::string out;
  if (!data.column_names.empty()) {
    if (static_cast<Eigen::Index>(data.column_names.size()) !=
        data.rows.cols()) {
      return absl::InvalidArgumentError("column names disagree with width");
    }
    for (std::size_t c = 0; c < data.column_names.size(); ++c) {
      if (c > 0) out.push_back(',');
      out += data.column_names[c];
    }
    out.push_back('\n');
  }
  out.reserve(out.size() + data.rows.size() * 2);
  for (Eigen::Index r = 0; r < data.rows.rows(); ++r) {
    for (Eigen::Index c = 0; c < data.rows.cols(); ++c) {
      if (c > 0) out.push_back(',');
      out.push_back(data.rows(r, c) == 1.0 ? '1' : '0');
    }
    out.push_back('\n');
  }
  return out;
}

absl::StatusOr<std::string> EmitBits(const Dataset& data) {
  if (!IsBoolean(data.rows)) {
    return absl::InvalidArgumentError("only Boolean rows can be emitted");
  }
  const std::size_t n = static_cast<std::size_t>(data.rows.rows());
  const std::size_t p = static_cast<std::size_t>(data.rows.cols());
  std::string out(kBitsMagic);
  PutU64(out, n);
  PutU64(out, p);
  for (std::size_t c = 0; c < p; ++c) {
    const std::string name =
        c < data.column_names.size() ? data.column_names[c] : std::string();
    PutU32(out, static_cast<std::uint32_t>(name.size()));
    out += name;
  }
  const std::size_t row_bytes = (p + 7) / 8;
  for (std::size_t r = 0; r < n; ++r) {
    std::string row(row_bytes, '\0');
    for (std::size_t c = 0; c < p; ++c) {
      if (data.rows(r, c) == 1.0) {
        row[c / 8] = static_cast<char>(row[c / 8] | (1 << (c % 8)));
      }
    }
    out += row;
  }
  return out;
}

absl::StatusOr<Dataset> ParseBits(std::string_view bytes) {
  ByteReader reader(absl::string_view(bytes.data(), bytes.size()));
  auto magic = reader.Take(kBitsMagic.size());
  if (!magic.ok() ||
      std::string_view(magic->data(), magic->size()) != kBitsMagic) {
    return absl::InvalidArgumentError("missing bit-matrix magic");
  }
  auto n = reader.U64();
  if (!n.ok()) return n.status();
  auto p = reader.U64();
  if (!p.ok()) return p.status();
  if (*n == 0 || *p == 0 || *p > (1u << 24) || *n > (std::uint64_t{1} << 40)) {
    return absl::InvalidArgumentError("implausible bit-matrix shape");
  }
  Dataset out;
  bool any_name = false;
  std::vector<std::string> names;
  for (std::uint64_t c = 0; c < *p; ++c) {
    auto len = reader.U32();
    if (!len.ok()) return len.status();
    auto name = reader.Take(*len);
    if (!name.ok()) return name.status();
    names.emplace_back(*name);
    any_name |= !name->empty();
  }
  if (any_name) out.column_names = std::move(names);
  const std::size_t row_bytes = (*p + 7) / 8;
  out.rows.resize(static_cast<Eigen::Index>(*n), static_cast<Eigen::Index>(*p));
  for (std::uint64_t r = 0; r < *n; ++r) {
    auto row = reader.Take(row_bytes);
    if (!row.ok()) return row.status();
    for (std::uint64_t c = 0; c < *p; ++c) {
      const unsigned char byte = static_cast<unsigned char>((*row)[c / 8]);
      out.rows(r, c) = (byte >> (c % 8)) & 1 ? 1.0 : 0.0;
    }
  }
  if (!reader.done()) {
    return absl::InvalidArgumentError("trailing bytes after bit matrix");
  }
  return out;
}

absl::StatusOr<Dataset> IngestAny(const std::string& path) {
  auto bytes = ReadFile(path);
  if (!bytes.ok()) return bytes.status();
  if (bytes->starts_with(kBitsMagic)) return ParseBits(*bytes);
  return ParseCsv(*bytes);
}

}  // namespace microsynth
