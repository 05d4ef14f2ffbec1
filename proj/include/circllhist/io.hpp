// Copyright 2026 The circllhist Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef CIRCLLHIST_IO_HPP_
#define CIRCLLHIST_IO_HPP_

#include <cstddef>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "circllhist/histogram.hpp"

namespace circllhist {

/// File could not be opened, read or written.
class io_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct rejected_line {
  size_t line = 0;  // 1-based
  std::string text;
};

struct value_file {
  std::vector<double> values;
  std::vector<rejected_line> rejects;
};

/**
 * Parses one line of a raw value file. Blank lines and lines starting with
 * '#' yield nullopt with `skipped` set. Lines starting with '{' are read as
 * JSON objects with a numeric field "v"; anything else as a decimal number.
 * NaN and infinities count as unparsable.
 */
struct line_result {
  std::optional<double> value;
  bool skipped = false;
};
line_result parse_value_line(std::string_view line);

/// Reads a raw value file, collecting unparsable lines instead of failing.
value_file read_value_file(const std::filesystem::path& path);

enum class histogram_format { binary, text };

/// Accepts either the binary wire form or the JSON text form.
histogram read_histogram_file(const std::filesystem::path& path);
void write_histogram_file(const histogram& h, const std::filesystem::path& path,
                          histogram_format format = histogram_format::binary);

std::vector<unsigned char> read_bytes(const std::filesystem::path& path);

}  // namespace circllhist

#endif  // CIRCLLHIST_IO_HPP_
