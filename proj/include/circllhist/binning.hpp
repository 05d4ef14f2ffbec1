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

#ifndef CIRCLLHIST_BINNING_HPP_
#define CIRCLLHIST_BINNING_HPP_

#include <compare>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

namespace circllhist {

/**
 * The circllhist binning: base-10, precision-2 log-linear bins on both half
 * axes plus a singleton bin for zero.
 *
 * A positive bin (+1, e, d) covers [d * 10^(e-1), (d+1) * 10^(e-1)) with
 * d in [10, 99] and e in [-128, 127]. A negative bin (-1, e, d) is the mirror
 * image: x belongs to it iff -x belongs to (+1, e, d), so it is half-open
 * towards larger magnitude. Every bin has a relative width between 1% and 10%.
 *
 * Inputs that fall outside the representable range saturate: magnitudes below
 * 10 * 10^-128 go to the zero bucket and magnitudes at or above 10^128 go to
 * the extreme bin (sign, 127, 99). Bins with exponent -128 are valid keys but
 * are never produced by bin_of().
 */

inline constexpr int min_exponent = -128;
inline constexpr int max_exponent = 127;
inline constexpr int min_mantissa = 10;
inline constexpr int max_mantissa = 99;
inline constexpr int mantissas_per_exponent = max_mantissa - min_mantissa + 1;
inline constexpr int exponent_count = max_exponent - min_exponent + 1;
/// Number of distinct keys: both half axes plus the zero bucket.
inline constexpr int key_space_size = 2 * exponent_count * mantissas_per_exponent + 1;

/// Raised when a NaN or infinity is offered for binning or insertion.
class invalid_value_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Strategies for reconstructing samples from bin counts.
enum class resampling_kind { fair, arithmetic_midpoint, paretro_midpoint };

/**
 * Identifies one bin. Stored packed in 16 bits: sign * mantissa in one signed
 * byte (0 for the zero bucket) and the exponent in the other.
 *
 * Keys compare in canonical real-line order: negative bins from the most
 * negative, then zero, then positive bins by increasing magnitude.
 */
class bin_key {
 public:
  /// The zero bucket.
  constexpr bin_key() = default;

  /// Throws std::invalid_argument unless the triple is a valid key.
  static bin_key make(int sign, int exponent, int mantissa);

  static constexpr bin_key zero() { return bin_key{}; }

  /// Rebuilds a key from its packed bytes; nullopt for invalid combinations.
  static std::optional<bin_key> from_packed(int8_t value, int8_t exponent) noexcept;

  /// Inverse of ordinal(); the argument must be below key_space_size.
  static bin_key from_ordinal(int ordinal);

  constexpr int sign() const { return (value_ > 0) - (value_ < 0); }
  constexpr int exponent() const { return exponent_; }
  constexpr int mantissa() const { return value_ < 0 ? -value_ : value_; }
  constexpr bool is_zero() const { return value_ == 0; }

  constexpr int8_t packed_value() const { return value_; }
  constexpr int8_t packed_exponent() const { return exponent_; }

  /// Position in canonical order, in [0, key_space_size).
  constexpr int ordinal() const {
    constexpr int half = exponent_count * mantissas_per_exponent;
    if (value_ == 0) return half;
    const int magnitude = (exponent_ - min_exponent) * mantissas_per_exponent + (mantissa() - min_mantissa);
    return value_ > 0 ? half + 1 + magnitude : half - 1 - magnitude;
  }

  friend constexpr bool operator==(bin_key a, bin_key b) = default;
  friend constexpr std::strong_ordering operator<=>(bin_key a, bin_key b) { return a.ordinal() <=> b.ordinal(); }

 private:
  constexpr bin_key(int8_t value, int8_t exponent) : value_(value), exponent_(exponent) {}

  int8_t value_ = 0;
  int8_t exponent_ = 0;
};

/**
 * Real interval of a bin, with the endpoints rounded up to the nearest double
 * so that comparisons against doubles are exact.
 *
 * Positive bins are [lower, upper), negative bins (lower, upper], and the zero
 * bucket has lower == upper == 0.
 */
struct bin_bounds {
  double lower = 0.0;
  double upper = 0.0;

  bool contains(double x) const {
    if (lower == 0.0 && upper == 0.0) return x == 0.0;
    if (upper <= 0.0) return lower < x && x <= upper;
    return lower <= x && x < upper;
  }

  friend bool operator==(const bin_bounds&, const bin_bounds&) = default;
};

/// Bin containing x, with saturation at the range ends. Throws invalid_value_error for NaN or infinity.
bin_key bin_of(double x);

/// Bin of m * 10^e10, computed with integer arithmetic only.
bin_key bin_of_scaled_integer(int64_t m, int64_t e10);

bin_bounds bounds_of(bin_key k);

/**
 * Smallest double not below the real boundary mantissa * 10^(exponent-1).
 * mantissa may be 100, which denotes the upper end of the decade.
 */
double boundary_value(int exponent, int mantissa);

/// Exact decimal rendering of mantissa * 10^(exponent-1), e.g. (0, 42) -> "4.2", (2, 11) -> "110".
std::string boundary_decimal(int exponent, int mantissa);

/**
 * If y denotes a bin boundary at or above zero, the key of the bin starting
 * there (the zero key for y == 0). A double one step below a boundary is
 * snapped up to it, so the literal 4.3 denotes the boundary 4.3.
 */
std::optional<bin_key> boundary_key(double y);

/// Position of a positive value in the base-b precision-p log-linear binning.
struct loglinear_index {
  int exponent = 0;
  int64_t offset = 0;  // d - b^(p-1), in [0, b^p - b^(p-1))

  friend bool operator==(const loglinear_index&, const loglinear_index&) = default;
};

/// Throws std::domain_error for x <= 0, non-finite x, or an unsupported (b, p).
loglinear_index loglinear_bin(int base, int precision, double x);

/// Boundary d * b^(e-p+1); throws std::domain_error unless b^(p-1) <= d < b^p.
double float_bp(int base, int precision, int exponent, int64_t digits);

/// 2ab / (a+b), the point of [a, b] with the smallest worst-case relative distance.
double paretro_midpoint(double lower, double upper);

/// Representative value of a bin. Throws std::invalid_argument for resampling_kind::fair.
double midpoint_of(bin_key k, resampling_kind kind);

/// Worst relative distance from a bin with this mantissa to its paretro midpoint: 1/(2d+1).
double relative_error_of_mantissa(int mantissa);

/// Largest relative_error_of_mantissa over all mantissas (1/21, at d = 10).
double max_relative_error_of_binning();

/// A base-10 precision-1 bin [digit * 10^exponent, (digit+1) * 10^exponent), mirrored for sign -1.
struct precision1_key {
  int sign = 1;
  int exponent = 0;
  int digit = 1;

  friend bool operator==(const precision1_key&, const precision1_key&) = default;
};

/// Precision-1 bin containing the given bin. Throws std::domain_error for the zero bucket.
precision1_key coarsen_key_to_precision1(bin_key k);

}  // namespace circllhist

#endif  // CIRCLLHIST_BINNING_HPP_
