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

#include "circllhist/stats.hpp"

#include <algorithm>
#include <cmath>
#include <iterator>
#include <limits>
#include <numeric>

namespace circllhist {

namespace {

void check_q(double q) {
  if (!(q >= 0.0 && q <= 1.0)) throw std::domain_error("quantile level must lie in [0, 1]");
}

// 1-based order statistic.
double at(std::span<const double> sorted, uint64_t rank) { return sorted[rank - 1]; }

uint64_t floor_rank(double v, uint64_t n) {
  return std::clamp<uint64_t>(static_cast<uint64_t>(std::max(0.0, std::floor(v))), 1, n);
}

double point_in_bin(const bin_entry& entry, uint64_t k, resampling_kind kind) {
  if (kind == resampling_kind::fair) return fair_point(bounds_of(entry.key), k, entry.count);
  return midpoint_of(entry.key, kind);
}

// Number of fair points of the bin strictly below y.
uint64_t fair_points_below(const bin_entry& entry, double y) {
  const bin_bounds b = bounds_of(entry.key);
  const uint64_t n = entry.count;
  if (entry.key.is_zero()) return y > 0.0 ? n : 0;
  const double width = b.upper - b.lower;
  const double t = (y - b.lower) / width * (static_cast<double>(n) + 1.0);
  uint64_t j = 0;
  if (t >= static_cast<double>(n)) {
    j = n;
  } else if (t > 1.0) {
    j = static_cast<uint64_t>(std::ceil(t)) - 1;
  }
  while (j < n && fair_point(b, j + 1, n) < y) ++j;
  while (j > 0 && fair_point(b, j, n) >= y) --j;
  return j;
}

uint64_t saturating_add(uint64_t a, uint64_t b) {
  uint64_t sum = 0;
  if (__builtin_add_overflow(a, b, &sum)) return std::numeric_limits<uint64_t>::max();
  return sum;
}

}  // namespace

uint64_t type1_rank(double q, uint64_t n) {
  const double scaled = std::ceil(q * static_cast<double>(n));
  if (!(scaled >= 1.0)) return 1;
  if (scaled >= static_cast<double>(n)) return n;
  return static_cast<uint64_t>(scaled);
}

double sorted_quantile(std::span<const double> sorted, double q, quantile_kind kind) {
  if (sorted.empty()) throw std::domain_error("quantile of an empty dataset");
  check_q(q);
  const uint64_t n = sorted.size();
  const double nd = static_cast<double>(n);
  switch (kind) {
    case quantile_kind::type1_minimal:
      return at(sorted, type1_rank(q, n));
    case quantile_kind::type7_minimal:
      return at(sorted, static_cast<uint64_t>(std::floor(q * (nd - 1.0))) + 1);
    case quantile_kind::type7_interpolated: {
      const double h = q * (nd - 1.0);
      const double lo = std::floor(h);
      const double gamma = h - lo;
      const auto lo_rank = static_cast<uint64_t>(lo) + 1;
      const auto hi_rank = static_cast<uint64_t>(std::ceil(h)) + 1;
      return (1.0 - gamma) * at(sorted, lo_rank) + gamma * at(sorted, hi_rank);
    }
    case quantile_kind::type_hdr:
    case quantile_kind::type_tdigest: {
      const double qn = q * nd;
      if (qn <= 0.5) return at(sorted, 1);
      if (qn >= nd - 0.5) return at(sorted, n);
      const double h = qn - 0.5;
      const uint64_t lo_rank = floor_rank(h, n);
      if (kind == quantile_kind::type_hdr) return at(sorted, lo_rank);
      const double gamma = h - std::floor(h);
      const uint64_t hi_rank = floor_rank(std::ceil(h), n);
      return (1.0 - gamma) * at(sorted, lo_rank) + gamma * at(sorted, hi_rank);
    }
  }
  throw std::invalid_argument("unknown quantile kind");
}

double dataset_quantile(std::span<const double> xs, double q, quantile_kind kind) {
  if (xs.empty()) throw std::domain_error("quantile of an empty dataset");
  check_q(q);
  std::vector<double> sorted(xs.begin(), xs.end());
  std::sort(sorted.begin(), sorted.end());
  return sorted_quantile(sorted, q, kind);
}

double fair_point(const bin_bounds& bounds, uint64_t k, uint64_t n) {
  const double fraction = static_cast<double>(k) / (static_cast<double>(n) + 1.0);
  return bounds.lower + fraction * (bounds.upper - bounds.lower);
}

std::vector<double> fair_resample(const histogram& h) {
  std::vector<double> out;
  out.reserve(h.total());
  for (const bin_entry& entry : h.bins()) {
    const bin_bounds b = bounds_of(entry.key);
    for (uint64_t k = 1; k <= entry.count; ++k) out.push_back(fair_point(b, k, entry.count));
  }
  return out;
}

std::vector<double> midpoint_resample(const histogram& h, resampling_kind kind) {
  if (kind == resampling_kind::fair) throw std::invalid_argument("midpoint_resample needs a midpoint kind");
  std::vector<double> out;
  out.reserve(h.total());
  for (const bin_entry& entry : h.bins()) out.insert(out.end(), entry.count, midpoint_of(entry.key, kind));
  return out;
}

double quantile(const histogram& h, double q, resampling_kind kind) {
  const double level[] = {q};
  return quantiles(h, level, kind).front();
}

std::vector<double> quantiles(const histogram& h, std::span<const double> qs, resampling_kind kind) {
  for (double q : qs) check_q(q);
  if (qs.empty()) return {};
  if (h.total() == 0) throw std::domain_error("quantile of an empty histogram");

  std::vector<size_t> order(qs.size());
  std::iota(order.begin(), order.end(), size_t{0});
  std::sort(order.begin(), order.end(), [&](size_t a, size_t b) { return qs[a] < qs[b]; });

  std::vector<double> out(qs.size());
  const auto bins = h.bins();
  auto it = bins.begin();
  uint64_t before = 0;  // samples in bins preceding *it
  for (size_t index : order) {
    const uint64_t rank = type1_rank(qs[index], h.total());
    // The guard only matters once counts have saturated.
    while (std::next(it) != bins.end() && rank > saturating_add(before, it->count)) {
      before = saturating_add(before, it->count);
      ++it;
    }
    out[index] = point_in_bin(*it, std::min(rank - before, it->count), kind);
  }
  return out;
}

stats_summary summary(const histogram& h) {
  stats_summary s;
  s.count = h.total();
  if (s.count == 0) {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    s.sum = s.mean = s.stddev = nan;
    s.moments.fill(nan);
    return s;
  }
  const long double n = static_cast<long double>(s.count);
  long double sum = 0.0L;
  std::array<long double, 4> raw{};
  for (const bin_entry& entry : h.bins()) {
    const long double c = midpoint_of(entry.key, resampling_kind::paretro_midpoint);
    const long double weight = static_cast<long double>(entry.count);
    sum += weight * c;
    long double power = 1.0L;
    for (long double& moment : raw) {
      power *= c;
      moment += weight * power;
    }
  }
  const long double mean = sum / n;
  long double squares = 0.0L;
  for (const bin_entry& entry : h.bins()) {
    const long double c = midpoint_of(entry.key, resampling_kind::paretro_midpoint);
    squares += static_cast<long double>(entry.count) * (c - mean) * (c - mean);
  }
  s.sum = static_cast<double>(sum);
  s.mean = static_cast<double>(mean);
  s.stddev = static_cast<double>(std::sqrt(squares / n));
  for (size_t r = 0; r < raw.size(); ++r) s.moments[r] = static_cast<double>(raw[r] / n);
  return s;
}

threshold_count count_below(const histogram& h, double y) {
  if (!std::isfinite(y)) throw invalid_value_error("threshold must be finite");
  const auto bins = h.bins();
  if (const std::optional<bin_key> start = boundary_key(y)) {
    uint64_t below = 0;
    for (auto it = bins.begin(); it != bins.end() && it->key < *start; ++it) below = saturating_add(below, it->count);
    return {below, below, below, true};
  }

  const bin_key containing = bin_of(y);
  uint64_t below = 0;
  auto it = bins.begin();
  for (; it != bins.end() && it->key < containing; ++it) below = saturating_add(below, it->count);
  if (it == bins.end() || it->key != containing) return {below, below, below, true};
  return {saturating_add(below, fair_points_below(*it, y)), below, saturating_add(below, it->count), false};
}

threshold_count count_above(const histogram& h, double y) {
  const threshold_count below = count_below(h, y);
  const uint64_t total = h.total();
  return {total - below.estimate, total - below.upper, total - below.lower, below.exact};
}

}  // namespace circllhist
