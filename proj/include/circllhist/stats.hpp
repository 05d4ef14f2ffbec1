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

#ifndef CIRCLLHIST_STATS_HPP_
#define CIRCLLHIST_STATS_HPP_

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "circllhist/binning.hpp"
#include "circllhist/histogram.hpp"

namespace circllhist {

/**
 * Quantile definitions for a dataset x_(1) <= ... <= x_(n), 0 <= q <= 1.
 *
 *   type1_minimal       x_(ceil(qn)), and x_(1) at q = 0
 *   type7_minimal       x_(floor(q(n-1)) + 1)
 *   type7_interpolated  linear interpolation between x_(floor(q(n-1))+1) and x_(ceil(q(n-1))+1)
 *   type_hdr            x_(1) if qn <= 1/2, x_(n) if qn >= n - 1/2, else x_(floor(qn - 1/2))
 *   type_tdigest        as type_hdr, interpolating between floor(qn - 1/2) and ceil(qn - 1/2)
 *
 * For 1/2 < qn < 3/2 the hdr and tdigest index floor(qn - 1/2) is 0; it is
 * clamped to 1.
 */
enum class quantile_kind { type1_minimal, type7_minimal, type7_interpolated, type_hdr, type_tdigest };

/// Throws std::domain_error for an empty dataset or q outside [0, 1].
double dataset_quantile(std::span<const double> xs, double q, quantile_kind kind);

/// As dataset_quantile, for input that is already sorted ascending.
double sorted_quantile(std::span<const double> sorted, double q, quantile_kind kind);

/// The 1-based rank max(1, ceil(q n)) used by type-1 quantiles, capped at n.
uint64_t type1_rank(double q, uint64_t n);

/// k-th of n equally spaced points inside a bin: lower + k/(n+1) * (upper - lower).
double fair_point(const bin_bounds& bounds, uint64_t k, uint64_t n);

/// Samples placed at equal spacing inside each bin, in ascending order.
std::vector<double> fair_resample(const histogram& h);

/// count copies of each bin's midpoint. kind must be one of the midpoint kinds.
std::vector<double> midpoint_resample(const histogram& h, resampling_kind kind);

/**
 * Type-1 quantile of the chosen resampling of h, computed from cumulative
 * counts without materializing the resample. Throws std::domain_error for an
 * empty histogram or q outside [0, 1].
 */
double quantile(const histogram& h, double q, resampling_kind kind = resampling_kind::fair);

/// Elementwise quantile(h, q, kind) in one pass over the bins; qs may be in any order.
std::vector<double> quantiles(const histogram& h, std::span<const double> qs,
                              resampling_kind kind = resampling_kind::fair);

/// Statistics of the paretro-midpoint resampling. All reals are NaN when count == 0.
struct stats_summary {
  uint64_t count = 0;
  double sum = 0.0;
  double mean = 0.0;
  double stddev = 0.0;
  std::array<double, 4> moments{};  // raw moments of order 1..4

  bool empty() const { return count == 0; }
};

stats_summary summary(const histogram& h);

/**
 * Number of samples on one side of a threshold. When the threshold is a
 * boundary >= 0 the count is exact (lower == upper == estimate). Otherwise
 * lower/upper are hard bounds from the enclosing boundaries and estimate
 * counts the fair resampling.
 */
struct threshold_count {
  uint64_t estimate = 0;
  uint64_t lower = 0;
  uint64_t upper = 0;
  bool exact = false;

  friend bool operator==(const threshold_count&, const threshold_count&) = default;
};

/// Samples x < y. Throws invalid_value_error for non-finite y.
threshold_count count_below(const histogram& h, double y);

/// Samples x >= y; complements count_below to the total.
threshold_count count_above(const histogram& h, double y);

}  // namespace circllhist

#endif  // CIRCLLHIST_STATS_HPP_
