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

#include "circllhist/eval.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>

#include "circllhist/codec.hpp"
#include "circllhist/histogram.hpp"
#include "circllhist/stats.hpp"

namespace circllhist {

namespace {

using clock_type = std::chrono::steady_clock;

constexpr int quantile_repetitions = 200;

double micros_since(clock_type::time_point start) {
  return std::chrono::duration<double, std::micro>(clock_type::now() - start).count();
}

std::vector<histogram> build_histograms(const batch_list& batches) {
  std::vector<histogram> out(batches.size());
  for (size_t i = 0; i < batches.size(); ++i) {
    for (double v : batches[i]) out[i].insert(v);
  }
  return out;
}

template <typename T>
T required(const nlohmann::ordered_json& doc, const char* key) {
  if (!doc.is_object() || !doc.contains(key)) throw std::invalid_argument(std::string("report is missing \"") + key + "\"");
  try {
    return doc.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw std::invalid_argument(std::string("report field \"") + key + "\" has the wrong type");
  }
}

}  // namespace

const std::vector<double>& default_quantiles() {
  static const std::vector<double> qs = {0, 0.25, 0.5, 0.75, 0.9, 0.95, 0.99, 0.995, 0.999, 0.9999, 0.99999, 1};
  return qs;
}

eval_report run_eval(const std::string& dataset, const batch_list& batches, const eval_options& options) {
  const size_t samples = sample_count(batches);
  if (samples > options.max_samples) {
    throw oracle_limit_error("raw dataset has " + std::to_string(samples) + " samples; the exact oracle is limited to " +
                             std::to_string(options.max_samples));
  }
  if (samples == 0) throw std::invalid_argument("dataset has no samples");
  const int runs = std::max(1, options.runs);

  eval_report report;
  report.dataset = dataset;
  report.samples = samples;
  report.batches = batches.size();
  report.timings.insert_per_sample = std::numeric_limits<double>::infinity();
  report.timings.merge_per_batch = std::numeric_limits<double>::infinity();
  report.timings.quantile_per_call = std::numeric_limits<double>::infinity();

  std::vector<histogram> parts;
  for (int run = 0; run < runs; ++run) {
    const auto start = clock_type::now();
    parts = build_histograms(batches);
    report.timings.insert_per_sample = std::min(report.timings.insert_per_sample, micros_since(start) / static_cast<double>(samples));
  }

  histogram merged;
  for (int run = 0; run < runs; ++run) {
    const auto start = clock_type::now();
    merged = merge_many(parts);
    report.timings.merge_per_batch =
        std::min(report.timings.merge_per_batch, micros_since(start) / static_cast<double>(std::max<size_t>(1, batches.size())));
  }

  const std::vector<double>& qs = options.quantiles;
  const std::vector<double> estimates = quantiles(merged, qs);
  if (!qs.empty()) {
    for (int run = 0; run < runs; ++run) {
      [[maybe_unused]] volatile double sink = 0.0;
      const auto start = clock_type::now();
      for (int rep = 0; rep < quantile_repetitions; ++rep) {
        for (double q : qs) sink = quantile(merged, q);
      }
      const double elapsed = micros_since(start);
      report.timings.quantile_per_call =
          std::min(report.timings.quantile_per_call, elapsed / (quantile_repetitions * static_cast<double>(qs.size())));
    }
  } else {
    report.timings.quantile_per_call = 0.0;
  }

  std::vector<double> raw;
  raw.reserve(samples);
  for (const auto& batch : batches) raw.insert(raw.end(), batch.begin(), batch.end());
  std::sort(raw.begin(), raw.end());

  for (size_t i = 0; i < qs.size(); ++i) {
    eval_row row;
    row.q = qs[i];
    row.exact = sorted_quantile(raw, qs[i], quantile_kind::type1_minimal);
    row.estimate = estimates[i];
    if (row.exact != 0.0) row.relative_error_pct = 100.0 * std::fabs(row.estimate - row.exact) / std::fabs(row.exact);
    report.rows.push_back(row);
  }
  report.serialized_bytes = encoded_size(merged);
  report.bin_count = merged.bin_count();
  return report;
}

nlohmann::ordered_json to_json(const eval_report& report) {
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const eval_row& row : report.rows) {
    nlohmann::ordered_json entry = {{"q", row.q}, {"exact", row.exact}, {"estimate", row.estimate}};
    if (row.relative_error_pct) {
      entry["relative_error_pct"] = *row.relative_error_pct;
    } else {
      entry["relative_error_pct"] = "exact-zero";
    }
    rows.push_back(std::move(entry));
  }
  nlohmann::ordered_json doc = {
      {"dataset", report.dataset},
      {"samples", report.samples},
      {"batches", report.batches},
      {"quantiles", std::move(rows)},
      {"serialized_bytes", report.serialized_bytes},
      {"bin_count", report.bin_count},
      {"timings_us",
       {{"insert_per_sample", report.timings.insert_per_sample},
        {"merge_per_batch", report.timings.merge_per_batch},
        {"quantile_per_call", report.timings.quantile_per_call}}},
  };
  return doc;
}

eval_report report_from_json(const nlohmann::ordered_json& doc) {
  eval_report report;
  report.dataset = required<std::string>(doc, "dataset");
  report.samples = required<uint64_t>(doc, "samples");
  report.batches = required<size_t>(doc, "batches");
  report.serialized_bytes = required<size_t>(doc, "serialized_bytes");
  report.bin_count = required<size_t>(doc, "bin_count");
  const auto timings = required<nlohmann::ordered_json>(doc, "timings_us");
  report.timings.insert_per_sample = required<double>(timings, "insert_per_sample");
  report.timings.merge_per_batch = required<double>(timings, "merge_per_batch");
  report.timings.quantile_per_call = required<double>(timings, "quantile_per_call");
  const auto rows = required<nlohmann::ordered_json>(doc, "quantiles");
  if (!rows.is_array()) throw std::invalid_argument("report field \"quantiles\" must be an array");
  for (const auto& entry : rows) {
    eval_row row;
    row.q = required<double>(entry, "q");
    row.exact = required<double>(entry, "exact");
    row.estimate = required<double>(entry, "estimate");
    const auto error = required<nlohmann::ordered_json>(entry, "relative_error_pct");
    if (error.is_number()) {
      row.relative_error_pct = error.get<double>();
    } else if (error != "exact-zero") {
      throw std::invalid_argument("relative_error_pct must be a number or \"exact-zero\"");
    }
    report.rows.push_back(row);
  }
  return report;
}

std::string format_report(const eval_report& report) {
  std::string out;
  char line[160];
  std::snprintf(line, sizeof(line), "dataset %s: %llu samples in %zu batches\n", report.dataset.c_str(),
                static_cast<unsigned long long>(report.samples), report.batches);
  out += line;
  std::snprintf(line, sizeof(line), "%10s %18s %18s %12s\n", "q", "exact", "estimate", "rel.err %");
  out += line;
  for (const eval_row& row : report.rows) {
    char error[32];
    if (row.relative_error_pct) {
      std::snprintf(error, sizeof(error), "%.4f", *row.relative_error_pct);
    } else {
      std::snprintf(error, sizeof(error), "exact-zero");
    }
    std::snprintf(line, sizeof(line), "%10g %18.10g %18.10g %12s\n", row.q, row.exact, row.estimate, error);
    out += line;
  }
  std::snprintf(line, sizeof(line), "size: %zu bytes, %zu bins\n", report.serialized_bytes, report.bin_count);
  out += line;
  std::snprintf(line, sizeof(line), "timings (us, min of runs): insert/sample %.4f, merge/batch %.4f, quantile/call %.4f\n",
                report.timings.insert_per_sample, report.timings.merge_per_batch, report.timings.quantile_per_call);
  out += line;
  return out;
}

}  // namespace circllhist
