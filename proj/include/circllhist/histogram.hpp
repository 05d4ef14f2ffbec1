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

#ifndef CIRCLLHIST_HISTOGRAM_HPP_
#define CIRCLLHIST_HISTOGRAM_HPP_

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "circllhist/binning.hpp"

namespace circllhist {

struct bin_entry {
  bin_key key;
  uint64_t count = 0;

  friend bool operator==(const bin_entry&, const bin_entry&) = default;
};

/// Raised when a threshold does not sit on a bin boundary.
class alignment_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/**
 * Sparse circllhist: a count per non-empty bin.
 *
 * Bins are kept in canonical order, so iteration, merging and cumulative
 * queries are linear scans. Counts saturate at 2^64 - 1 instead of wrapping.
 *
 * A histogram is a single-writer value. Build one per producer and merge them
 * in a consumer; const member functions may run concurrently with each other.
 */
class histogram {
 public:
  histogram() = default;

  /// Throws invalid_value_error for NaN or infinity (leaving *this unchanged), std::invalid_argument for count 0.
  void insert(double x, uint64_t count = 1);

  /// Inserts m * 10^e10 without floating point arithmetic on the binning path.
  void insert_scaled_integer(int64_t m, int64_t e10, uint64_t count = 1);

  /// Adds count to a bin directly. Throws std::invalid_argument for count 0.
  void add(bin_key key, uint64_t count);

  /// Bin-wise sum with other.
  void merge(const histogram& other);

  uint64_t total() const { return total_; }
  size_t bin_count() const { return bins_.size(); }
  bool empty() const { return bins_.empty(); }
  uint64_t count_of(bin_key key) const;

  /// Non-empty bins in canonical (ascending real-line) order.
  std::span<const bin_entry> bins() const { return bins_; }

  friend bool operator==(const histogram&, const histogram&) = default;

 private:
  std::vector<bin_entry> bins_;
  uint64_t total_ = 0;
};

histogram merge(const histogram& a, const histogram& b);

/// Fold of merge over hs; the empty sequence gives the empty histogram.
histogram merge_many(std::span<const histogram> hs);

/**
 * Exact number of samples strictly below each threshold, followed by the
 * total. Thresholds must be non-decreasing bin boundaries >= 0; anything
 * else raises alignment_error naming the threshold and its neighbouring
 * boundaries.
 */
std::vector<uint64_t> coarsen_to_thresholds(const histogram& h, std::span<const double> thresholds);

}  // namespace circllhist

#endif  // CIRCLLHIST_HISTOGRAM_HPP_
