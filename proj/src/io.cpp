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

#include "circllhist/io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iterator>

#include <nlohmann/json.hpp>

#include "circllhist/codec.hpp"

namespace circllhist {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::optional<double> parse_number(std::string_view s) {
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(value)) return std::nullopt;
  return value;
}

std::optional<double> parse_json_value(std::string_view s) {
  const auto doc = nlohmann::json::parse(s, nullptr, false);
  if (doc.is_discarded() || !doc.is_object()) return std::nullopt;
  const auto it = doc.find("v");
  if (it == doc.end() || !it->is_number()) return std::nullopt;
  const double value = it->get<double>();
  if (!std::isfinite(value)) return std::nullopt;
  return value;
}

}  // namespace

line_result parse_value_line(std::string_view line) {
  const std::string_view text = trim(line);
  if (text.empty() || text.front() == '#') return {std::nullopt, true};
  if (text.front() == '{') return {parse_json_value(text), false};
  return {parse_number(text), false};
}

value_file read_value_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw io_error("cannot read " + path.string());
  value_file out;
  std::string line;
  size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    const line_result parsed = parse_value_line(line);
    if (parsed.skipped) continue;
    if (parsed.value) {
      out.values.push_back(*parsed.value);
    } else {
      out.rejects.push_back({number, line});
    }
  }
  if (in.bad()) throw io_error("error reading " + path.string());
  return out;
}

std::vector<unsigned char> read_bytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw io_error("cannot read " + path.string());
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) throw io_error("error reading " + path.string());
  return bytes;
}

histogram read_histogram_file(const std::filesystem::path& path) {
  const std::vector<unsigned char> bytes = read_bytes(path);
  const auto first = std::find_if(bytes.begin(), bytes.end(), [](unsigned char c) { return !std::isspace(c); });
  if (first != bytes.end() && *first == '[') return decode_text(std::string_view(reinterpret_cast<const char*>(bytes.data()), bytes.size()));
  return decode(bytes);
}

void write_histogram_file(const histogram& h, const std::filesystem::path& path, histogram_format format) {
  std::vector<uint8_t> bytes;
  if (format == histogram_format::text) {
    const std::string text = encode_text(h) + "\n";
    bytes.assign(text.begin(), text.end());
  } else {
    bytes = encode(h);
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw io_error("cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw io_error("cannot write " + path.string());
}

}  // namespace circllhist
