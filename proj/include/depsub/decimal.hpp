#ifndef DEPSUB_DECIMAL_HPP
#define DEPSUB_DECIMAL_HPP

// Fixed-point helpers shared by Money and Rate.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace depsub::detail {

using int128 = __int128;

// Rounds num/den to the nearest integer, ties to even. den must be > 0.
constexpr int128 div_round_half_even(int128 num, int128 den) {
  int128 q = num / den;
  int128 r = num % den;
  // Normalise to floor division so the remainder is non-negative.
  if (r < 0) {
    q -= 1;
    r += den;
  }
  const int128 twice = 2 * r;
  if (twice > den || (twice == den && (q % 2 != 0))) q += 1;
  return q;
}

constexpr int128 pow10(int exp) {
  int128 v = 1;
  for (int i = 0; i < exp; ++i) v *= 10;
  return v;
}

// Parses "[-+]digits[.digits]" into an integer scaled by 10^scale.
// Returns nullopt on malformed text, more than `scale` fractional digits,
// or a magnitude that does not fit in int64.
inline std::optional<std::int64_t> parse_scaled(std::string_view text, int scale) {
  if (text.empty()) return std::nullopt;
  bool negative = false;
  if (text.front() == '-' || text.front() == '+') {
    negative = text.front() == '-';
    text.remove_prefix(1);
  }
  const auto dot = text.find('.');
  const std::string_view int_part = text.substr(0, dot);
  const std::string_view frac_part =
      dot == std::string_view::npos ? std::string_view{} : text.substr(dot + 1);
  if (int_part.empty()) return std::nullopt;
  if (dot != std::string_view::npos && frac_part.empty()) return std::nullopt;
  if (static_cast<int>(frac_part.size()) > scale) return std::nullopt;

  constexpr int128 kLimit = static_cast<int128>(INT64_MAX);
  int128 value = 0;
  for (char c : int_part) {
    if (c < '0' || c > '9') return std::nullopt;
    value = value * 10 + (c - '0');
    if (value * pow10(scale) > kLimit) return std::nullopt;
  }
  int128 frac = 0;
  for (char c : frac_part) {
    if (c < '0' || c > '9') return std::nullopt;
    frac = frac * 10 + (c - '0');
  }
  frac *= pow10(scale - static_cast<int>(frac_part.size()));
  const int128 scaled = value * pow10(scale) + frac;
  if (scaled > kLimit) return std::nullopt;
  return static_cast<std::int64_t>(negative ? -scaled : scaled);
}

// Renders an integer scaled by 10^scale with at least `min_frac` and at most
// `scale` fractional digits (trailing zeros beyond min_frac are trimmed).
inline std::string format_scaled(std::int64_t raw, int scale, int min_frac) {
  const bool negative = raw < 0;
  const int128 mag = negative ? -static_cast<int128>(raw) : static_cast<int128>(raw);
  const int128 unit = pow10(scale);
  std::string int_digits = std::to_string(static_cast<unsigned long long>(mag / unit));
  std::string frac = std::to_string(static_cast<unsigned long long>(mag % unit));
  frac.insert(0, static_cast<std::size_t>(scale) - frac.size(), '0');
  while (static_cast<int>(frac.size()) > min_frac && frac.back() == '0') frac.pop_back();
  std::string out = negative ? "-" : "";
  out += int_digits;
  if (!frac.empty()) out += "." + frac;
  return out;
}

}  // namespace depsub::detail

#endif  // DEPSUB_DECIMAL_HPP
