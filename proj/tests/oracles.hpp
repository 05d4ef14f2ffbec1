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

// Test-only reference implementations. None of these call into the code
// paths they are used to check, except for key construction.

#ifndef CIRCLLHIST_TESTS_ORACLES_HPP_
#define CIRCLLHIST_TESTS_ORACLES_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "circllhist/binning.hpp"

namespace oracle {

inline long double pow10l_by_multiplication(int k) {
  long double result = 1.0L;
  for (int i = 0; i < std::abs(k); ++i) result *= 10.0L;
  return k >= 0 ? result : 1.0L / result;
}

/// e = floor(log10 |x|), d = floor(|x| * 10^(1-e)) in extended precision,
/// with the same saturation rules as the library.
inline circllhist::bin_key log_formula_bin(double x) {
  if (x == 0.0) return circllhist::bin_key::zero();
  const int sign = x < 0 ? -1 : 1;
  const long double a = std::fabs(static_cast<long double>(x));
  if (a < 1e-127L) return circllhist::bin_key::zero();
  if (a >= 1e128L) return circllhist::bin_key::make(sign, 127, 99);
  int e = static_cast<int>(std::floor(std::log10(a)));
  int d = 0;
  // log10 may land on the wrong side of an integer near powers of ten.
  for (int attempt = 0; attempt < 3; ++attempt) {
    const long double scaled = e - 1 >= 0 ? a / pow10l_by_multiplication(e - 1) : a * pow10l_by_multiplication(1 - e);
    d = static_cast<int>(std::floor(scaled));
    if (d < 10) {
      --e;
    } else if (d > 99) {
      ++e;
    } else {
      break;
    }
  }
  return circllhist::bin_key::make(sign, e, d);
}

/// Whether d * 10^power is exactly representable as a double.
inline bool boundary_is_exact_double(int d, int power) {
  if (power >= 0) {
    unsigned __int128 v = static_cast<unsigned>(d);
    for (int i = 0; i < power; ++i) {
      v *= 5;  // the factor 2^power only moves the binary exponent
      if (v >= (static_cast<unsigned __int128>(1) << 53)) return false;
    }
    return true;
  }
  int fives = 1;
  for (int i = 0; i < -power; ++i) {
    fives *= 5;
    if (fives > 99) return false;
  }
  return d % fives == 0;
}

/// Smallest element x with #{y <= x} >= q n; the minimum at q = 0.
inline double brute_type1(const std::vector<double>& xs, double q) {
  const double n = static_cast<double>(xs.size());
  if (q == 0.0) return *std::min_element(xs.begin(), xs.end());
  std::vector<double> sorted = xs;
  std::sort(sorted.begin(), sorted.end());
  for (double x : sorted) {
    const auto at_most = std::upper_bound(sorted.begin(), sorted.end(), x) - sorted.begin();
    if (static_cast<double>(at_most) >= q * n) return x;
  }
  return sorted.back();
}

inline uint64_t brute_count_below(const std::vector<double>& xs, double y) {
  return static_cast<uint64_t>(std::count_if(xs.begin(), xs.end(), [y](double x) { return x < y; }));
}

/// Positive datasets from a mixture of uniform, lognormal and Pareto components.
inline std::vector<double> mixture_dataset(std::mt19937_64& rng, size_t n) {
  std::uniform_int_distribution<int> pick(0, 2);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double lo = std::pow(10.0, unit(rng) * 8.0 - 4.0);
  const double hi = lo * (1.0 + unit(rng) * 1000.0);
  std::lognormal_distribution<double> lognormal(unit(rng) * 6.0 - 3.0, 0.2 + unit(rng) * 2.0);
  const double pareto_scale = std::pow(10.0, unit(rng) * 6.0 - 3.0);
  const double pareto_alpha = 0.5 + unit(rng) * 3.0;
  const int components = 1 + static_cast<int>(unit(rng) * 3.0);
  const int first = pick(rng);

  std::vector<double> xs(n);
  for (double& x : xs) {
    const int c = (first + static_cast<int>(unit(rng) * components)) % 3;
    double v = 0.0;
    switch (c) {
      case 0: v = lo + (hi - lo) * unit(rng); break;
      case 1: v = lognormal(rng); break;
      default: v = pareto_scale * std::pow(1.0 - unit(rng), -1.0 / pareto_alpha); break;
    }
    x = std::clamp(v, 1e-100, 1e100);
  }
  return xs;
}

}  // namespace oracle

#endif  // CIRCLLHIST_TESTS_ORACLES_HPP_
