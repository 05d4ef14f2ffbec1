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

#ifndef CIRCLLHIST_CODEC_HPP_
#define CIRCLLHIST_CODEC_HPP_

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "circllhist/histogram.hpp"

namespace circllhist {

/*
 * Binary layout (.cllh), all multi-byte fixed fields little-endian:
 *
 *   offset 0  "CLLH"                 magic
 *   offset 4  0x01                   version
 *   offset 5  uint32                 number of records
 *   offset 9  records, in canonical bin order:
 *               int8    sign * mantissa (0 for the zero bucket)
 *               int8    exponent
 *               varint  count, unsigned LEB128, 1..10 bytes, never 0
 *
 * Encoding is injective: equal histograms give equal bytes.
 */

inline constexpr uint8_t wire_version = 1;
inline constexpr size_t wire_header_size = 9;

enum class parse_errc {
  bad_magic,
  bad_version,
  truncated,
  too_many_records,
  invalid_key,
  zero_count,
  varint_overflow,
  non_canonical_varint,  // padded with redundant zero groups
  out_of_order,
  trailing_bytes,
  malformed_text,
};

const char* to_string(parse_errc code);

/// Structured decode failure. offset() is the byte position of the problem,
/// or the record index for record-level errors in the text form.
class parse_error : public std::runtime_error {
 public:
  parse_error(parse_errc code, size_t offset, const std::string& detail);

  parse_errc code() const { return code_; }
  size_t offset() const { return offset_; }

 private:
  parse_errc code_;
  size_t offset_;
};

std::vector<uint8_t> encode(const histogram& h);

/// Exact size encode(h) would produce.
size_t encoded_size(const histogram& h);

/// Throws parse_error for anything but a well-formed, canonical encoding.
histogram decode(std::span<const uint8_t> bytes);

size_t varint_size(uint64_t value);

/// JSON text form: [{"v": sign*mantissa, "e": exponent, "c": count}, ...] in canonical order.
std::string encode_text(const histogram& h);

/// Accepts records in any order; rejects duplicates, invalid keys and zero counts.
histogram decode_text(std::string_view text);

}  // namespace circllhist

#endif  // CIRCLLHIST_CODEC_HPP_
