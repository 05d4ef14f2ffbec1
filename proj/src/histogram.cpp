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

#include "circllhist/histogram.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <string>

namespace circllhist {

namespace {

uint64_t saturating_add(uint64_t a, uint64_t b) {
  uint64_t sum = 0;
  if (__builtin_add_overflow(a, b, &sum)) return std::numeric_limits<uint64_t>::max();
  return sum;
}

std::string shortest(double y) {
  char buffer[32];
  const auto result = std::to_chars(buffer, buffer + sizeof(buffer), y);
  return std::string(buffer, result.ptr);
}

[[noreturn]] void throw_misaligned(double y) {
  std::string message = "threshold " + shortest(y);
  if (!std::isfinite(y)) {
    message += " is not finite";
  } else if (y < 0.0) {
    message += " is negative; exact counts need a boundary >= 0";
  } else {
    const bin_key k = bin_of(y);
    if (k.is_zero()) {
      message += " is not a bin boundary (nearest boundaries: 0 and " + boundary_decimal(min_exponent + 1, min_mantissa) + ")";
    } else {
      message += " is not a bin boundary (nearest boundaries: " + boundary_decimal(k.exponent(), k.mantissa()) + " and " +
                 boundary_decimal(k.exponent(), k.mantissa() + 1) + ")";
    }
  }
  throw alignment_error(message);
}

}  // namespace

void histogram::insert(double x, uint64_t count) {
  add(bin_of(x), count);
}

void histogram::insert_scaled_integer(int64_t m, int64_t e10, uint64_t count) {
  add(bin_of_scaled_integer(m, e10), count);
}

void histogram::add(bin_key key, uint64_t count) {
  if (count == 0) throw std::invalid_argument("insert count must be at least 1");
  auto it = std::lower_bound(bins_.begin(), bins_.end(), key,
                             [](const bin_entry& entry, bin_key k) { return entry.key < k; });
  if (it != bins_.end() && it->key == key) {
    it->count = saturating_add(it->count, count);
  } else {
    bins_.insert(it, bin_entry{key, count});
  }
  total_ = saturating_add(total_, count);
}

void histogram::merge(const histogram& other) {
  if (other.bins_.empty()) return;
  std::vector<bin_entry> merged;
  merged.reserve(bins_.size() + other.bins_.size());
  auto a = bins_.begin();
  auto b = other.bins_.begin();
  while (a != bins_.end() && b != other.bins_.end()) {
    if (a->key < b->key) {
      merged.push_back(*a++);
    } else if (b->key < a->key) {
      merged.push_back(*b++);
    } else {
      merged.push_back({a->key, saturating_add(a->count, b->count)});
      ++a;
      ++b;
    }
  }
  merged.insert(merged.end(), a, bins_.end());
  merged.insert(merged.end(), b, other.bins_.end());
  bins_ = std::move(merged);
  total_ = saturating_add(total_, other.total_);
}

uint64_t histogram::count_of(bin_key key) const {
  auto it = std::lower_bound(bins_.begin(), bins_.end(), key,
                             [](const bin_entry& entry, bin_key k) { return entry.key < k; });
  return it != bins_.end() && it->key == key ? it->count : 0;
}

histogram merge(const histogram& a, const histogram& b) {
  histogram result = a;
  result.merge(b);
  return result;
}

histogram merge_many(std::span<const histogram> hs) {
  histogram result;
  for (const histogram& h : hs) result.merge(h);
  return result;
}

std::vector<uint64_t> coarsen_to_thresholds(const histogram& h, std::span<const double> thresholds) {
  std::vector<uint64_t> counts;
  counts.reserve(thresholds.size() + 1);
  const auto bins = h.bins();
  auto it = bins.begin();
  uint64_t below = 0;
  std::optional<bin_key> previous;
  for (double y : thresholds) {
    const std::optional<bin_key> start = boundary_key(y);
    if (!start) throw_misaligned(y);
    if (previous && *start < *previous) {
      throw std::invalid_argument("thresholds must be non-decreasing; " + shortest(y) + " follows a larger threshold");
    }
    previous = start;
    for (; it != bins.end() && it->key < *start; ++it) below = saturating_add(below, it->count);
    counts.push_back(below);
  }
  counts.push_back(h.total());
  return counts;
}

}  // namespace circllhist
