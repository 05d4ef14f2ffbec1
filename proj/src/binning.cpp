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

#include "circllhist/binning.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace circllhist {

namespace {

using boost::multiprecision::cpp_int;

// One entry per (exponent, mantissa) plus the top of the range, 10^128.
constexpr int boundary_count = exponent_count * mantissas_per_exponent + 1;

// Smallest exponent bin_of() produces; everything below 10^-127 is flushed to zero.
constexpr int lowest_produced_exponent = min_exponent + 1;

constexpr int boundary_index(int exponent, int mantissa) {
  return (exponent - min_exponent) * mantissas_per_exponent + (mantissa - min_mantissa);
}

// True iff the double y is strictly below digits * 10^power, decided exactly.
bool below_decimal(double y, int64_t digits, int power) {
  int binary_exponent = 0;
  const double fraction = std::frexp(y, &binary_exponent);
  const auto significand = static_cast<int64_t>(std::ldexp(fraction, 53));
  binary_exponent -= 53;

  cpp_int lhs = significand;
  cpp_int rhs = digits;
  if (power >= 0) {
    rhs *= boost::multiprecision::pow(cpp_int(10), static_cast<unsigned>(power));
  } else {
    lhs *= boost::multiprecision::pow(cpp_int(10), static_cast<unsigned>(-power));
  }
  if (binary_exponent >= 0) {
    lhs <<= binary_exponent;
  } else {
    rhs <<= -binary_exponent;
  }
  return lhs < rhs;
}

double ceil_to_double(int64_t digits, int power) {
  const std::string text = std::to_string(digits) + "e" + std::to_string(power);
  double y = std::strtod(text.c_str(), nullptr);
  if (below_decimal(y, digits, power)) y = std::nextafter(y, std::numeric_limits<double>::infinity());
  return y;
}

struct tables {
  std::vector<double> lower;              // boundary_count entries
  std::array<double, exponent_count> scale;  // ~10^(1-e), used only for a first guess

  tables() : lower(boundary_count) {
    for (int e = min_exponent; e <= max_exponent; ++e) {
      for (int d = min_mantissa; d <= max_mantissa; ++d) {
        lower[boundary_index(e, d)] = ceil_to_double(d, e - 1);
      }
      scale[e - min_exponent] = std::strtod(("1e" + std::to_string(1 - e)).c_str(), nullptr);
    }
    lower[boundary_count - 1] = ceil_to_double(1, max_exponent + 1);
  }
};

const tables& table() {
  static const tables instance;
  return instance;
}

double lower_of(const tables& t, int exponent, int mantissa) {
  if (mantissa > max_mantissa) return t.lower[boundary_index(exponent, max_mantissa) + 1];
  return t.lower[boundary_index(exponent, mantissa)];
}

bin_key key_unchecked(int sign, int exponent, int mantissa) {
  return *bin_key::from_packed(static_cast<int8_t>(sign * mantissa), static_cast<int8_t>(exponent));
}

int64_t checked_power(int base, int exponent) {
  int64_t result = 1;
  for (int i = 0; i < exponent; ++i) {
    if (result > std::numeric_limits<int64_t>::max() / base) throw std::domain_error("log-linear binning parameters too large");
    result *= base;
  }
  return result;
}

long double power_ld(int base, int exponent) {
  long double result = 1.0L;
  const long double factor = exponent >= 0 ? static_cast<long double>(base) : 1.0L / base;
  for (int i = 0; i < std::abs(exponent); ++i) result *= factor;
  return result;
}

}  // namespace

bin_key bin_key::make(int sign, int exponent, int mantissa) {
  if (sign == 0) {
    if (exponent != 0 || mantissa != 0) throw std::invalid_argument("zero bucket must have exponent 0 and mantissa 0");
    return zero();
  }
  if (sign != 1 && sign != -1) throw std::invalid_argument("sign must be -1, 0 or +1");
  if (exponent < min_exponent || exponent > max_exponent) {
    throw std::invalid_argument("exponent " + std::to_string(exponent) + " outside [-128, 127]");
  }
  if (mantissa < min_mantissa || mantissa > max_mantissa) {
    throw std::invalid_argument("mantissa " + std::to_string(mantissa) + " outside [10, 99]");
  }
  return bin_key(static_cast<int8_t>(sign * mantissa), static_cast<int8_t>(exponent));
}

std::optional<bin_key> bin_key::from_packed(int8_t value, int8_t exponent) noexcept {
  if (value == 0) {
    if (exponent != 0) return std::nullopt;
    return zero();
  }
  const int magnitude = value < 0 ? -static_cast<int>(value) : value;
  if (magnitude < min_mantissa || magnitude > max_mantissa) return std::nullopt;
  return bin_key(value, exponent);
}

bin_key bin_key::from_ordinal(int ordinal) {
  constexpr int half = exponent_count * mantissas_per_exponent;
  if (ordinal < 0 || ordinal >= key_space_size) throw std::out_of_range("bin ordinal out of range");
  if (ordinal == half) return zero();
  const int sign = ordinal > half ? 1 : -1;
  const int magnitude = ordinal > half ? ordinal - half - 1 : half - 1 - ordinal;
  return make(sign, magnitude / mantissas_per_exponent + min_exponent, magnitude % mantissas_per_exponent + min_mantissa);
}

bin_key bin_of(double x) {
  if (!std::isfinite(x)) throw invalid_value_error("cannot bin a non-finite value");
  if (x == 0.0) return bin_key::zero();
  const int sign = x < 0.0 ? -1 : 1;
  const double magnitude = std::fabs(x);
  const tables& t = table();

  if (magnitude < lower_of(t, lowest_produced_exponent, min_mantissa)) return bin_key::zero();
  if (magnitude >= t.lower.back()) return key_unchecked(sign, max_exponent, max_mantissa);

  // magnitude is a normal double here; its binary exponent gives the decimal
  // exponent to within one: floor(log10(2^k)) ~ (k * 1233) >> 12.
  const int binary_exponent = static_cast<int>((std::bit_cast<uint64_t>(magnitude) >> 52) & 0x7ff) - 1023;
  int e = std::clamp((binary_exponent * 1233) >> 12, lowest_produced_exponent, max_exponent);
  while (e < max_exponent && magnitude >= lower_of(t, e + 1, min_mantissa)) ++e;
  while (magnitude < lower_of(t, e, min_mantissa)) --e;

  // Scale into [10, 100) and take the integer part, then settle exactly.
  int d = std::clamp(static_cast<int>(magnitude * t.scale[e - min_exponent]), min_mantissa, max_mantissa);
  while (d < max_mantissa && magnitude >= lower_of(t, e, d + 1)) ++d;
  while (magnitude < lower_of(t, e, d)) --d;
  return key_unchecked(sign, e, d);
}

bin_key bin_of_scaled_integer(int64_t m, int64_t e10) {
  if (m == 0) return bin_key::zero();
  const int sign = m < 0 ? -1 : 1;
  uint64_t magnitude = m < 0 ? uint64_t{0} - static_cast<uint64_t>(m) : static_cast<uint64_t>(m);

  int64_t e = 1;
  while (magnitude >= 100) {
    magnitude /= 10;
    ++e;
  }
  while (magnitude < 10) {
    magnitude *= 10;
    --e;
  }
  // e is within [0, 19] here, so saturation can be decided before adding.
  if (e10 > max_exponent - e) return key_unchecked(sign, max_exponent, max_mantissa);
  if (e10 < lowest_produced_exponent - e) return bin_key::zero();
  return key_unchecked(sign, static_cast<int>(e + e10), static_cast<int>(magnitude));
}

bin_bounds bounds_of(bin_key k) {
  if (k.is_zero()) return {};
  const tables& t = table();
  const double a = lower_of(t, k.exponent(), k.mantissa());
  const double b = lower_of(t, k.exponent(), k.mantissa() + 1);
  if (k.sign() > 0) return {a, b};
  return {-b, -a};
}

double boundary_value(int exponent, int mantissa) {
  if (exponent < min_exponent || exponent > max_exponent || mantissa < min_mantissa || mantissa > max_mantissa + 1) {
    throw std::domain_error("boundary out of range");
  }
  return lower_of(table(), exponent, mantissa);
}

std::string boundary_decimal(int exponent, int mantissa) {
  const int power = exponent - 1;
  std::string digits = std::to_string(mantissa);
  if (power >= 0) return digits + std::string(static_cast<size_t>(power), '0');
  const int point = static_cast<int>(digits.size()) + power;  // digits before the decimal point
  if (point > 0) return digits.substr(0, static_cast<size_t>(point)) + "." + digits.substr(static_cast<size_t>(point));
  return "0." + std::string(static_cast<size_t>(-point), '0') + digits;
}

std::optional<bin_key> boundary_key(double y) {
  if (!std::isfinite(y) || y < 0.0) return std::nullopt;
  if (y == 0.0) return bin_key::zero();
  const bin_key k = bin_of(y);
  if (k.is_zero()) return std::nullopt;
  const bin_bounds b = bounds_of(k);
  if (y == b.lower) return k;
  const bool top = k.exponent() == max_exponent && k.mantissa() == max_mantissa;
  if (!top && std::nextafter(y, std::numeric_limits<double>::infinity()) == b.upper) {
    return bin_key::from_ordinal(k.ordinal() + 1);
  }
  return std::nullopt;
}

loglinear_index loglinear_bin(int base, int precision, double x) {
  if (base < 2 || precision < 1) throw std::domain_error("log-linear binning needs base > 1 and precision >= 1");
  if (!std::isfinite(x) || x <= 0.0) throw std::domain_error("log-linear binning is defined for finite x > 0 only");
  const int64_t first_digit = checked_power(base, precision - 1);
  const int64_t span = checked_power(base, precision) - first_digit;

  const long double value = x;
  int e = static_cast<int>(std::floor(std::log(value) / std::log(static_cast<long double>(base))));
  while (value >= power_ld(base, e + 1)) ++e;
  while (value < power_ld(base, e)) --e;

  const int shift = precision - 1 - e;
  const long double scaled = shift >= 0 ? value * power_ld(base, shift) : value / power_ld(base, -shift);
  const int64_t offset = std::clamp(static_cast<int64_t>(std::floor(scaled)) - first_digit, int64_t{0}, span - 1);
  return {e, offset};
}

double float_bp(int base, int precision, int exponent, int64_t digits) {
  if (base < 2 || precision < 1) throw std::domain_error("float_bp needs base > 1 and precision >= 1");
  const int64_t first_digit = checked_power(base, precision - 1);
  const int64_t end_digit = checked_power(base, precision);
  if (digits < first_digit || digits >= end_digit) throw std::domain_error("digits outside [b^(p-1), b^p - 1]");
  const int power = exponent - precision + 1;
  const double d = static_cast<double>(digits);
  if (power >= 0) return d * std::pow(static_cast<double>(base), power);
  return d / std::pow(static_cast<double>(base), -power);
}

double paretro_midpoint(double lower, double upper) {
  if (!(lower > 0.0) || !(upper > lower) || !std::isfinite(upper)) {
    throw std::domain_error("paretro midpoint needs 0 < lower < upper");
  }
  const double product = 2.0 * lower * upper;
  if (std::isfinite(product)) return product / (lower + upper);
  return 2.0 * lower * (upper / (lower + upper));
}

double midpoint_of(bin_key k, resampling_kind kind) {
  if (kind == resampling_kind::fair) throw std::invalid_argument("fair resampling has no single midpoint");
  if (k.is_zero()) return 0.0;
  const tables& t = table();
  const double a = lower_of(t, k.exponent(), k.mantissa());
  const double b = lower_of(t, k.exponent(), k.mantissa() + 1);
  const double m = kind == resampling_kind::paretro_midpoint ? paretro_midpoint(a, b) : a + (b - a) / 2.0;
  return k.sign() > 0 ? m : -m;
}

double relative_error_of_mantissa(int mantissa) {
  if (mantissa < min_mantissa || mantissa > max_mantissa) throw std::domain_error("mantissa outside [10, 99]");
  // (b - a) / (a + b) for the bin [d, d+1), scale free.
  const double a = mantissa;
  const double b = mantissa + 1;
  return (b - a) / (a + b);
}

double max_relative_error_of_binning() {
  double worst = 0.0;
  for (int d = min_mantissa; d <= max_mantissa; ++d) worst = std::max(worst, relative_error_of_mantissa(d));
  return worst;
}

precision1_key coarsen_key_to_precision1(bin_key k) {
  if (k.is_zero()) throw std::domain_error("the zero bucket has no containing logarithmic bin");
  // [d * 10^(e-1), (d+1) * 10^(e-1)) lies in [floor(d/10) * 10^e, (floor(d/10)+1) * 10^e).
  return {k.sign(), k.exponent(), k.mantissa() / 10};
}

}  // namespace circllhist
