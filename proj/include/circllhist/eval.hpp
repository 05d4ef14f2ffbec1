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

#ifndef CIRCLLHIST_EVAL_HPP_
#define CIRCLLHIST_EVAL_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "circllhist/datagen.hpp"

namespace circllhist {

/// 0, 0.25, 0.5, 0.75, 0.9, 0.95, 0.99, 0.995, 0.999, 0.9999, 0.99999, 1.
const std::vector<double>& default_quantiles();

/// The raw dataset is too large to hold for the exact comparison.
class oracle_limit_error : public std::length_error {
 public:
  using std::length_error::length_error;
};

struct eval_row {
  double q = 0.0;
  double exact = 0.0;
  double estimate = 0.0;
  /// |estimate - exact| / |exact| in percent; empty when exact == 0 ("exact-zero").
  std::optional<double> relative_error_pct;
};

/// Microseconds; minimum over the repeated runs.
struct eval_timings {
  double insert_per_sample = 0.0;
  double merge_per_batch = 0.0;
  double quantile_per_call = 0.0;
};

struct eval_report {
  std::string dataset;
  uint64_t samples = 0;
  size_t batches = 0;
  std::vector<eval_row> rows;
  size_t serialized_bytes = 0;
  size_t bin_count = 0;
  eval_timings timings;
};

struct eval_options {
  std::vector<double> quantiles = default_quantiles();
  int runs = 5;
  size_t max_samples = 100'000'000;
};

/**
 * Inserts each batch into its own histogram, merges them, and compares the
 * merged histogram's quantiles against exact type-1 quantiles of the raw
 * data. Timed phases run single-threaded; each is repeated `runs` times and
 * the minimum is kept. Throws oracle_limit_error above max_samples.
 */
eval_report run_eval(const std::string& dataset, const batch_list& batches, const eval_options& options = {});

nlohmann::ordered_json to_json(const eval_report& report);

/// Throws std::invalid_argument when the document does not follow the report schema.
eval_report report_from_json(const nlohmann::ordered_json& doc);

/// Fixed-width table with one row per quantile, followed by size and timing lines.
std::string format_report(const eval_report& report);

}  // namespace circllhist

#endif  // CIRCLLHIST_EVAL_HPP_
