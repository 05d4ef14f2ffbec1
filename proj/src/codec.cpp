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

#include "circllhist/codec.hpp"

#include <algorithm>
#include <array>
#include <optional>

#include <nlohmann/json.hpp>

namespace circllhist {

namespace {

constexpr std::array<uint8_t, 4> magic = {'C', 'L', 'L', 'H'};
constexpr size_t max_varint_bytes = 10;

void put_varint(std::vector<uint8_t>& out, uint64_t value) {
  while (value >= 0x80) {
    out.push_back(static_cast<uint8_t>(value | 0x80));
    value >>= 7;
  }
  out.push_back(static_cast<uint8_t>(value));
}

class reader {
 public:
  explicit reader(std::span<const uint8_t> bytes) : bytes_(bytes) {}

  size_t position() const { return pos_; }
  size_t remaining() const { return bytes_.size() - pos_; }

  uint8_t byte(const char* what) {
    if (pos_ >= bytes_.size()) throw parse_error(parse_errc::truncated, pos_, std::string("expected ") + what);
    return bytes_[pos_++];
  }

  uint32_t u32le(const char* what) {
    uint32_t value = 0;
    for (int i = 0; i < 4; ++i) value |= static_cast<uint32_t>(byte(what)) << (8 * i);
    return value;
  }

  uint64_t varint() {
    const size_t start = pos_;
    uint64_t value = 0;
    for (size_t i = 0; i < max_varint_bytes; ++i) {
      const uint8_t b = byte("count varint");
      const uint64_t payload = b & 0x7f;
      // The tenth byte may only carry the top bit of a 64-bit value.
      if (i == max_varint_bytes - 1 && payload > 1) {
        throw parse_error(parse_errc::varint_overflow, start, "count does not fit in 64 bits");
      }
      value |= payload << (7 * i);
      if ((b & 0x80) == 0) {
        if (i > 0 && b == 0) throw parse_error(parse_errc::non_canonical_varint, start, "count varint is not minimal");
        return value;
      }
    }
    throw parse_error(parse_errc::varint_overflow, start, "count varint longer than 10 bytes");
  }

 private:
  std::span<const uint8_t> bytes_;
  size_t pos_ = 0;
};

std::string key_text(int8_t value, int8_t exponent) {
  return "(v=" + std::to_string(value) + ", e=" + std::to_string(exponent) + ")";
}

}  // namespace

const char* to_string(parse_errc code) {
  switch (code) {
    case parse_errc::bad_magic: return "bad_magic";
    case parse_errc::bad_version: return "bad_version";
    case parse_errc::truncated: return "truncated";
    case parse_errc::too_many_records: return "too_many_records";
    case parse_errc::invalid_key: return "invalid_key";
    case parse_errc::zero_count: return "zero_count";
    case parse_errc::varint_overflow: return "varint_overflow";
    case parse_errc::non_canonical_varint: return "non_canonical_varint";
    case parse_errc::out_of_order: return "out_of_order";
    case parse_errc::trailing_bytes: return "trailing_bytes";
    case parse_errc::malformed_text: return "malformed_text";
  }
  return "unknown";
}

parse_error::parse_error(parse_errc code, size_t offset, const std::string& detail)
    : std::runtime_error(std::string(to_string(code)) + " at offset " + std::to_string(offset) + ": " + detail),
      code_(code),
      offset_(offset) {}

size_t varint_size(uint64_t value) {
  size_t size = 1;
  while (value >= 0x80) {
    value >>= 7;
    ++size;
  }
  return size;
}

size_t encoded_size(const histogram& h) {
  size_t size = wire_header_size;
  for (const bin_entry& entry : h.bins()) size += 2 + varint_size(entry.count);
  return size;
}

std::vector<uint8_t> encode(const histogram& h) {
  std::vector<uint8_t> out;
  out.reserve(encoded_size(h));
  for (uint8_t b : magic) out.push_back(b);
  out.push_back(wire_version);
  const auto records = static_cast<uint32_t>(h.bin_count());
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<uint8_t>(records >> (8 * i)));
  for (const bin_entry& entry : h.bins()) {
    out.push_back(static_cast<uint8_t>(entry.key.packed_value()));
    out.push_back(static_cast<uint8_t>(entry.key.packed_exponent()));
    put_varint(out, entry.count);
  }
  return out;
}

histogram decode(std::span<const uint8_t> bytes) {
  reader in(bytes);
  for (uint8_t expected : magic) {
    const size_t at = in.position();
    if (in.byte("magic") != expected) throw parse_error(parse_errc::bad_magic, at, "expected \"CLLH\"");
  }
  const uint8_t version = in.byte("version");
  if (version != wire_version) {
    throw parse_error(parse_errc::bad_version, 4, "unsupported version " + std::to_string(version));
  }
  const uint32_t records = in.u32le("record count");
  if (records > static_cast<uint32_t>(key_space_size)) {
    throw parse_error(parse_errc::too_many_records, 5, std::to_string(records) + " records exceed the key space");
  }
  // Every record takes at least three bytes.
  if (in.remaining() < static_cast<size_t>(records) * 3) {
    const size_t at = wire_header_size + (in.remaining() / 3) * 3;
    throw parse_error(parse_errc::truncated, std::min(at, bytes.size()), std::to_string(records) + " records announced");
  }

  histogram h;
  std::optional<bin_key> previous;
  for (uint32_t i = 0; i < records; ++i) {
    const size_t at = in.position();
    const auto value = static_cast<int8_t>(in.byte("mantissa byte"));
    const auto exponent = static_cast<int8_t>(in.byte("exponent byte"));
    const std::optional<bin_key> key = bin_key::from_packed(value, exponent);
    if (!key) throw parse_error(parse_errc::invalid_key, at, "invalid bin " + key_text(value, exponent));
    if (previous && !(*previous < *key)) {
      throw parse_error(parse_errc::out_of_order, at, "bin " + key_text(value, exponent) + " is duplicate or out of order");
    }
    const size_t count_at = in.position();
    const uint64_t count = in.varint();
    if (count == 0) throw parse_error(parse_errc::zero_count, count_at, "stored bins must have a non-zero count");
    h.add(*key, count);
    previous = key;
  }
  if (in.remaining() != 0) {
    throw parse_error(parse_errc::trailing_bytes, in.position(), std::to_string(in.remaining()) + " unexpected bytes");
  }
  return h;
}

std::string encode_text(const histogram& h) {
  nlohmann::ordered_json records = nlohmann::ordered_json::array();
  for (const bin_entry& entry : h.bins()) {
    records.push_back({{"v", entry.key.packed_value()}, {"e", entry.key.packed_exponent()}, {"c", entry.count}});
  }
  return records.dump();
}

histogram decode_text(std::string_view text) {
  nlohmann::json records;
  try {
    records = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw parse_error(parse_errc::malformed_text, e.byte, "not valid JSON");
  }
  if (!records.is_array()) throw parse_error(parse_errc::malformed_text, 0, "expected a JSON array of records");

  std::vector<bin_entry> entries;
  entries.reserve(records.size());
  for (size_t i = 0; i < records.size(); ++i) {
    const auto& record = records[i];
    const auto field = [&](const char* name) -> const nlohmann::json& {
      if (!record.is_object() || !record.contains(name) || !record[name].is_number_integer()) {
        throw parse_error(parse_errc::malformed_text, i, std::string("record needs integer field \"") + name + "\"");
      }
      return record[name];
    };
    const int64_t value = field("v").get<int64_t>();
    const int64_t exponent = field("e").get<int64_t>();
    const auto& count_field = field("c");
    if (!count_field.is_number_unsigned() && count_field.get<int64_t>() < 0) {
      throw parse_error(parse_errc::malformed_text, i, "count must be non-negative");
    }
    const uint64_t count = count_field.get<uint64_t>();
    if (record.size() != 3) throw parse_error(parse_errc::malformed_text, i, "unexpected fields in record");

    std::optional<bin_key> key;
    if (value >= -128 && value <= 127 && exponent >= -128 && exponent <= 127) {
      key = bin_key::from_packed(static_cast<int8_t>(value), static_cast<int8_t>(exponent));
    }
    if (!key) throw parse_error(parse_errc::invalid_key, i, "invalid bin (v=" + std::to_string(value) + ", e=" + std::to_string(exponent) + ")");
    if (count == 0) throw parse_error(parse_errc::zero_count, i, "stored bins must have a non-zero count");
    entries.push_back({*key, count});
  }

  std::stable_sort(entries.begin(), entries.end(), [](const bin_entry& a, const bin_entry& b) { return a.key < b.key; });
  histogram h;
  for (size_t i = 0; i < entries.size(); ++i) {
    if (i > 0 && entries[i - 1].key == entries[i].key) {
      throw parse_error(parse_errc::out_of_order, i, "duplicate bin (v=" + std::to_string(entries[i].key.packed_value()) + ", e=" +
                                                         std::to_string(entries[i].key.packed_exponent()) + ")");
    }
    h.add(entries[i].key, entries[i].count);
  }
  return h;
}

}  // namespace circllhist
