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

#ifndef CIRCLLHIST_DATAGEN_HPP_
#define CIRCLLHIST_DATAGEN_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace circllhist {

enum class dataset_kind { uniform, simulated_latencies };

std::string_view to_string(dataset_kind kind);
std::optional<dataset_kind> parse_dataset_kind(std::string_view name);

/**
 * Synthetic latency datasets, reproducible from the seed.
 *
 * Randomness comes from std::mt19937_64 seeded with `seed`; uniform variates
 * are the top 53 bits scaled to [0, 1). The transforms below are written out
 * by hand so output does not depend on the standard library's distributions.
 *
 *   uniform              `batches` batches of exactly `batch_size` values,
 *                        each 10 + 90 u, so U[10, 100).
 *   simulated_latencies  `batches` batches whose sizes are geometric on
 *                        {1, 2, ...} with mean `batch_size`. Each batch draws
 *                        shift = 10^U[-5, 2] and scale = 10^U[-2, 6] once,
 *                        then values shift + scale * P with P Pareto(x_m = 1,
 *                        alpha = 2), clamped to [1e-5, 1e10].
 */
struct gen_spec {
  dataset_kind kind = dataset_kind::uniform;
  uint64_t seed = 1;
  size_t batches = 1000;
  size_t batch_size = 100;
};

/// Default per-batch size (uniform) or mean batch size (simulated).
size_t default_batch_size(dataset_kind kind);

using batch_list = std::vector<std::vector<double>>;

/// Throws std::invalid_argument for zero batches or a zero batch size.
batch_list generate(const gen_spec& spec);

/// Writes batch_00000.txt, batch_00001.txt, ... with one value per line
/// (shortest round-trip decimal). Returns the file paths in order.
std::vector<std::filesystem::path> write_batches(const batch_list& batches, const std::filesystem::path& dir);

size_t sample_count(const batch_list& batches);

}  // namespace circllhist

#endif  // CIRCLLHIST_DATAGEN_HPP_
