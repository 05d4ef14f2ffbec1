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

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <system_error>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "circllhist/binning.hpp"
#include "circllhist/codec.hpp"
#include "circllhist/datagen.hpp"
#include "circllhist/eval.hpp"
#include "circllhist/histogram.hpp"
#include "circllhist/io.hpp"
#include "circllhist/stats.hpp"

namespace fs = std::filesystem;
using namespace circllhist;
using json = nlohmann::ordered_json;

namespace {

enum exit_code { exit_ok = 0, exit_usage = 1, exit_data = 2, exit_internal = 3 };

class usage_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class data_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

int fail(const char* code, const std::string& message, int status) {
  std::string line = message;
  std::replace(line.begin(), line.end(), '\n', ' ');
  std::cerr << "error[" << code << "]: " << line << '\n';
  return status;
}

std::optional<double> parse_double(std::string_view text) {
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  double value = 0.0;
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || ec != std::errc() || end != text.data() + text.size() || !std::isfinite(value)) return std::nullopt;
  return value;
}

std::vector<double> parse_quantile_list(const std::string& text) {
  std::vector<double> qs;
  if (text.empty()) return qs;
  size_t start = 0;
  while (true) {
    const size_t comma = text.find(',', start);
    std::string_view item(text.data() + start, (comma == std::string::npos ? text.size() : comma) - start);
    while (!item.empty() && item.front() == ' ') item.remove_prefix(1);
    while (!item.empty() && item.back() == ' ') item.remove_suffix(1);
    const std::optional<double> q = parse_double(item);
    if (!q || *q < 0.0 || *q > 1.0) throw usage_error("invalid quantile \"" + std::string(item) + "\"; expected numbers in [0, 1]");
    qs.push_back(*q);
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return qs;
}

// Nulls stand in for the undefined reals of an empty histogram.
json real_or_null(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

std::string fmt(double x) {
  if (!std::isfinite(x)) return "n/a";
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.10g", x);
  return buffer;
}

histogram load(const fs::path& path) {
  try {
    return read_histogram_file(path);
  } catch (const parse_error& e) {
    throw data_error(path.string() + ": " + e.what());
  }
}

void save(const histogram& h, const fs::path& path, bool text_form) {
  write_histogram_file(h, path, text_form ? histogram_format::text : histogram_format::binary);
}

// gen ------------------------------------------------------------------------

struct gen_options {
  std::string kind = "uniform";
  uint64_t seed = 1;
  size_t batches = 1000;
  std::optional<size_t> batch_size;
  std::string out;
  std::string format = "text";
};

int run_gen(const gen_options& o) {
  const std::optional<dataset_kind> kind = parse_dataset_kind(o.kind);
  if (!kind) throw usage_error("unknown dataset kind \"" + o.kind + "\"; expected uniform or simulated");
  gen_spec spec{*kind, o.seed, o.batches, o.batch_size.value_or(default_batch_size(*kind))};
  const batch_list batches = generate(spec);
  write_batches(batches, o.out);

  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (const auto& batch : batches) {
    for (double x : batch) {
      lo = std::min(lo, x);
      hi = std::max(hi, x);
    }
  }
  const size_t samples = sample_count(batches);
  if (o.format == "json") {
    std::cout << json{{"dataset", std::string(to_string(*kind))}, {"seed", o.seed},   {"batches", batches.size()},
                      {"samples", samples},                        {"min", real_or_null(lo)}, {"max", real_or_null(hi)},
                      {"out", o.out}}
                     .dump(2)
              << '\n';
  } else {
    std::cout << "generated " << samples << " " << to_string(*kind) << " samples in " << batches.size() << " batches under "
              << o.out << " (min " << fmt(lo) << ", max " << fmt(hi) << ")\n";
  }
  return exit_ok;
}

// ingest ---------------------------------------------------------------------

struct ingest_options {
  std::vector<std::string> inputs;
  std::string out;
  bool combine = false;
  bool text_form = false;
  std::string format = "text";
};

int run_ingest(const ingest_options& o) {
  json files = json::array();
  histogram combined;
  uint64_t accepted = 0;
  size_t rejected = 0;
  if (!o.combine) fs::create_directories(o.out);

  for (const std::string& input : o.inputs) {
    const value_file raw = read_value_file(input);
    histogram h;
    for (double x : raw.values) h.insert(x);
    fs::path target;
    if (o.combine) {
      combined.merge(h);
    } else {
      target = fs::path(o.out) / fs::path(input).filename().replace_extension(".cllh");
      save(h, target, o.text_form);
    }
    accepted += raw.values.size();
    rejected += raw.rejects.size();

    json rejects = json::array();
    for (const rejected_line& r : raw.rejects) rejects.push_back({{"line", r.line}, {"text", r.text}});
    json entry = {{"input", input}, {"accepted", raw.values.size()}, {"rejected", raw.rejects.size()}, {"rejects", rejects}};
    if (!o.combine) entry["output"] = target.string();
    files.push_back(std::move(entry));
  }
  if (o.combine) save(combined, o.out, o.text_form);

  if (o.format == "json") {
    std::cout << json{{"files", files}, {"accepted", accepted}, {"rejected", rejected}, {"out", o.out}}.dump(2) << '\n';
  } else {
    for (const auto& f : files) {
      std::cout << f["input"].get<std::string>() << ": " << f["accepted"].get<size_t>() << " values, "
                << f["rejected"].get<size_t>() << " rejected\n";
      for (const auto& r : f["rejects"]) {
        std::cout << "  line " << r["line"].get<size_t>() << ": " << r["text"].get<std::string>() << '\n';
      }
    }
    std::cout << "total: " << accepted << " values, " << rejected << " rejected -> " << o.out << '\n';
  }
  if (rejected > 0) return fail("data", std::to_string(rejected) + " unparsable line(s) skipped during ingest", exit_data);
  return exit_ok;
}

// merge ----------------------------------------------------------------------

struct merge_options {
  std::vector<std::string> inputs;
  std::string out;
  bool text_form = false;
};

int run_merge(const merge_options& o) {
  histogram merged;
  for (const std::string& input : o.inputs) merged.merge(load(input));
  save(merged, o.out, o.text_form);
  std::cout << "merged " << o.inputs.size() << " histogram(s): total " << merged.total() << ", " << merged.bin_count()
            << " bins -> " << o.out << '\n';
  return exit_ok;
}

// stats ----------------------------------------------------------------------

struct stats_options {
  std::string input;
  std::optional<std::string> quantiles;
  std::string format = "text";
};

int run_stats(const stats_options& o) {
  const histogram h = load(o.input);
  const std::vector<double> qs = o.quantiles ? parse_quantile_list(*o.quantiles) : default_quantiles();
  if (h.empty() && !qs.empty()) throw data_error("histogram " + o.input + " is empty; quantiles are undefined");
  const std::vector<double> values = quantiles(h, qs);
  const stats_summary s = summary(h);
  const size_t size = encoded_size(h);

  if (o.format == "json") {
    json moments = json::array();
    for (double m : s.moments) moments.push_back(real_or_null(m));
    json rows = json::array();
    for (size_t i = 0; i < qs.size(); ++i) rows.push_back({{"q", qs[i]}, {"value", values[i]}});
    std::cout << json{{"count", s.count},
                      {"sum", real_or_null(s.sum)},
                      {"mean", real_or_null(s.mean)},
                      {"stddev", real_or_null(s.stddev)},
                      {"moments", moments},
                      {"quantiles", rows},
                      {"bin_count", h.bin_count()},
                      {"serialized_bytes", size}}
                     .dump(2)
              << '\n';
  } else {
    std::cout << "count    " << s.count << '\n'
              << "sum      " << fmt(s.sum) << '\n'
              << "mean     " << fmt(s.mean) << '\n'
              << "stddev   " << fmt(s.stddev) << '\n';
    for (size_t i = 0; i < s.moments.size(); ++i) std::cout << "moment" << i + 1 << "  " << fmt(s.moments[i]) << '\n';
    for (size_t i = 0; i < qs.size(); ++i) std::cout << "q " << fmt(qs[i]) << "\t" << fmt(values[i]) << '\n';
    std::cout << "bins     " << h.bin_count() << '\n' << "bytes    " << size << '\n';
  }
  return exit_ok;
}

// count ----------------------------------------------------------------------

struct count_options {
  std::string input;
  std::string threshold;
  std::string format = "text";
};

json count_json(const threshold_count& c) {
  return {{"estimate", c.estimate}, {"lower", c.lower}, {"upper", c.upper}, {"exact", c.exact}};
}

int run_count(const count_options& o) {
  const std::optional<double> y = parse_double(o.threshold);
  if (!y) throw usage_error("malformed threshold \"" + o.threshold + "\"");
  const histogram h = load(o.input);
  const threshold_count below = count_below(h, *y);
  const threshold_count above = count_above(h, *y);
  if (o.format == "json") {
    std::cout << json{{"threshold", *y}, {"total", h.total()}, {"below", count_json(below)}, {"above", count_json(above)}}.dump(2)
              << '\n';
  } else {
    const auto line = [](const char* name, const threshold_count& c) {
      std::cout << name << c.estimate;
      if (c.exact) {
        std::cout << " (exact)\n";
      } else {
        std::cout << " (estimate, bounds [" << c.lower << ", " << c.upper << "])\n";
      }
    };
    std::cout << "threshold " << o.threshold << ", total " << h.total() << '\n';
    line("below  ", below);
    line("at/above ", above);
  }
  return exit_ok;
}

// eval -----------------------------------------------------------------------

struct eval_cli_options {
  std::string dataset = "uniform";
  std::vector<std::string> inputs;
  uint64_t seed = 1;
  size_t batches = 1000;
  std::optional<size_t> batch_size;
  int runs = 5;
  size_t max_samples = eval_options{}.max_samples;
  std::optional<std::string> quantiles;
  std::string format = "text";
};

int run_eval_cmd(const eval_cli_options& o) {
  eval_options options;
  options.runs = o.runs;
  options.max_samples = o.max_samples;
  if (o.quantiles) options.quantiles = parse_quantile_list(*o.quantiles);

  batch_list batches;
  std::string name;
  if (!o.inputs.empty()) {
    name = "files";
    for (const std::string& input : o.inputs) {
      value_file raw = read_value_file(input);
      if (!raw.rejects.empty()) {
        throw data_error(input + ": line " + std::to_string(raw.rejects.front().line) + " is not a value");
      }
      batches.push_back(std::move(raw.values));
    }
  } else {
    const std::optional<dataset_kind> kind = parse_dataset_kind(o.dataset);
    if (!kind) throw usage_error("unknown dataset \"" + o.dataset + "\"; expected uniform or simulated");
    name = std::string(to_string(*kind));
    batches = generate({*kind, o.seed, o.batches, o.batch_size.value_or(default_batch_size(*kind))});
  }

  const eval_report report = run_eval(name, batches, options);
  if (o.format == "json") {
    std::cout << to_json(report).dump(2) << '\n';
  } else {
    std::cout << format_report(report);
  }
  return exit_ok;
}

void add_format(CLI::App* cmd, std::string& format) {
  cmd->add_option("--format", format, "Report format")->check(CLI::IsMember({"text", "json"}));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"circllhist: log-linear latency histograms"};
  app.require_subcommand(1);

  gen_options gen;
  CLI::App* gen_cmd = app.add_subcommand("gen", "Generate a seeded dataset as batch files");
  gen_cmd->add_option("--kind", gen.kind, "uniform or simulated")->capture_default_str();
  gen_cmd->add_option("--seed", gen.seed, "Generator seed")->capture_default_str();
  gen_cmd->add_option("--batches", gen.batches, "Number of batches")->capture_default_str();
  gen_cmd->add_option("--batch-size", gen.batch_size, "Values per batch (mean batch size for simulated)");
  gen_cmd->add_option("--out", gen.out, "Output directory")->required();
  add_format(gen_cmd, gen.format);

  ingest_options ingest;
  CLI::App* ingest_cmd = app.add_subcommand("ingest", "Build histograms from raw value files");
  ingest_cmd->add_option("inputs", ingest.inputs, "Value files")->required()->check(CLI::ExistingFile);
  ingest_cmd->add_option("--out", ingest.out, "Output directory, or output file with --combine")->required();
  ingest_cmd->add_flag("--combine", ingest.combine, "Write one histogram for all inputs");
  ingest_cmd->add_flag("--text-form", ingest.text_form, "Write the JSON text form instead of binary");
  add_format(ingest_cmd, ingest.format);

  merge_options merge;
  CLI::App* merge_cmd = app.add_subcommand("merge", "Merge histogram files");
  merge_cmd->add_option("inputs", merge.inputs, "Histogram files")->required()->check(CLI::ExistingFile);
  merge_cmd->add_option("--out", merge.out, "Output file")->required();
  merge_cmd->add_flag("--text-form", merge.text_form, "Write the JSON text form instead of binary");

  stats_options stats;
  CLI::App* stats_cmd = app.add_subcommand("stats", "Summary statistics and quantiles of a histogram file");
  stats_cmd->add_option("input", stats.input, "Histogram file")->required()->check(CLI::ExistingFile);
  stats_cmd->add_option("--quantiles", stats.quantiles, "Comma separated quantiles in [0, 1]");
  add_format(stats_cmd, stats.format);

  count_options count;
  CLI::App* count_cmd = app.add_subcommand("count", "Count samples below and at/above a threshold");
  count_cmd->add_option("input", count.input, "Histogram file")->required()->check(CLI::ExistingFile);
  count_cmd->add_option("--threshold", count.threshold, "Decimal threshold")->required();
  add_format(count_cmd, count.format);

  eval_cli_options ev;
  CLI::App* eval_cmd = app.add_subcommand("eval", "Compare histogram quantiles against exact quantiles of the raw data");
  eval_cmd->add_option("--dataset", ev.dataset, "uniform or simulated (ignored with input files)")->capture_default_str();
  eval_cmd->add_option("inputs", ev.inputs, "Raw value files, one batch each")->check(CLI::ExistingFile);
  eval_cmd->add_option("--seed", ev.seed, "Generator seed")->capture_default_str();
  eval_cmd->add_option("--batches", ev.batches, "Number of batches")->capture_default_str();
  eval_cmd->add_option("--batch-size", ev.batch_size, "Values per batch (mean batch size for simulated)");
  eval_cmd->add_option("--runs", ev.runs, "Timing repetitions; the minimum is reported")->capture_default_str()->check(CLI::PositiveNumber);
  eval_cmd->add_option("--max-samples", ev.max_samples, "Largest raw dataset the exact oracle accepts")->capture_default_str();
  eval_cmd->add_option("--quantiles", ev.quantiles, "Comma separated quantiles in [0, 1]");
  add_format(eval_cmd, ev.format);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return fail("usage", e.what(), exit_usage);
  }

  try {
    if (*gen_cmd) return run_gen(gen);
    if (*ingest_cmd) return run_ingest(ingest);
    if (*merge_cmd) return run_merge(merge);
    if (*stats_cmd) return run_stats(stats);
    if (*count_cmd) return run_count(count);
    if (*eval_cmd) return run_eval_cmd(ev);
    return fail("usage", "no subcommand given", exit_usage);
  } catch (const usage_error& e) {
    return fail("usage", e.what(), exit_usage);
  } catch (const std::invalid_argument& e) {
    // Invalid generator specs and similar argument problems.
    return fail("usage", e.what(), exit_usage);
  } catch (const data_error& e) {
    return fail("data", e.what(), exit_data);
  } catch (const oracle_limit_error& e) {
    return fail("data", e.what(), exit_data);
  } catch (const io_error& e) {
    return fail("io", e.what(), exit_data);
  } catch (const fs::filesystem_error& e) {
    return fail("io", e.what(), exit_data);
  } catch (const std::exception& e) {
    return fail("internal", e.what(), exit_internal);
  }
}
