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

#include "circllhist/datagen.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <stdexcept>
#include <system_error>

namespace circllhist {

namespace {

constexpr double simulated_min = 1e-5;
constexpr double simulated_max = 1e10;

class variates {
 public:
  explicit variates(uint64_t seed) : engine_(seed) {}

  // [0, 1)
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  // (0, 1]
  double uniform_open_zero() { return 1.0 - uniform(); }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  size_t geometric(double mean) {
    if (mean <= 1.0) return 1;
    const double p = 1.0 / mean;
    return 1 + static_cast<size_t>(std::floor(std::log(uniform_open_zero()) / std::log1p(-p)));
  }

  double pareto(double alpha) { return std::pow(uniform_open_zero(), -1.0 / alpha); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace

std::string_view to_string(dataset_kind kind) {
  return kind == dataset_kind::uniform ? "uniform" : "simulated";
}

std::optional<dataset_kind> parse_dataset_kind(std::string_view name) {
  if (name == "uniform") return dataset_kind::uniform;
  if (name == "simulated" || name == "simulated_latencies") return dataset_kind::simulated_latencies;
  return std::nullopt;
}

size_t default_batch_size(dataset_kind kind) { return kind == dataset_kind::uniform ? 100 : 1000; }

batch_list generate(const gen_spec& spec) {
  if (spec.batches == 0) throw std::invalid_argument("need at least one batch");
  if (spec.batch_size == 0) throw std::invalid_argument("batch size must be positive");
  variates rng(spec.seed);
  batch_list out(spec.batches);
  for (auto& batch : out) {
    if (spec.kind == dataset_kind::uniform) {
      batch.resize(spec.batch_size);
      for (double& v : batch) v = rng.uniform(10.0, 100.0);
    } else {
      const size_t size = rng.geometric(static_cast<double>(spec.batch_size));
      const double shift = std::pow(10.0, rng.uniform(-5.0, 2.0));
      const double scale = std::pow(10.0, rng.uniform(-2.0, 6.0));
      batch.resize(size);
      for (double& v : batch) v = std::clamp(shift + scale * rng.pareto(2.0), simulated_min, simulated_max);
    }
  }
  return out;
}

std::vector<std::filesystem::path> write_batches(const batch_list& batches, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  std::vector<std::filesystem::path> paths;
  paths.reserve(batches.size());
  char name[32];
  char number[32];
  for (size_t i = 0; i < batches.size(); ++i) {
    std::snprintf(name, sizeof(name), "batch_%05zu.txt", i);
    const auto path = dir / name;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::filesystem::filesystem_error("cannot write batch file", path, std::make_error_code(std::errc::io_error));
    for (double v : batches[i]) {
      const auto result = std::to_chars(number, number + sizeof(number), v);
      out.write(number, result.ptr - number);
      out.put('\n');
    }
    if (!out) throw std::filesystem::filesystem_error("cannot write batch file", path, std::make_error_code(std::errc::io_error));
    paths.push_back(path);
  }
  return paths;
}

size_t sample_count(const batch_list& batches) {
  size_t n = 0;
  for (const auto& batch : batches) n += batch.size();
  return n;
}

}  // namespace circllhist
