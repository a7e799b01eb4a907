#ifndef DEPSUB_RATE_HPP
#define DEPSUB_RATE_HPP

#include <cmath>
#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

#include "depsub/decimal.hpp"
#include "depsub/error.hpp"
#include "depsub/money.hpp"

namespace depsub {

/// Annual nominal interest rate as an exact decimal fraction with 15
/// fractional digits (0.1275 is 12.75%). Always greater than -1.
class Rate {
 public:
  static constexpr int kDigits = 15;
  static constexpr std::int64_t kScale = 1'000'000'000'000'000;

  constexpr Rate() = default;

  static Rate from_raw(std::int64_t raw) {
    if (raw <= -kScale) throw DomainError("rate must be greater than -1");
    return Rate{raw};
  }

  /// Parses a decimal fraction such as "0.1275".
  static Rate parse(std::string_view text) {
    const auto raw = detail::parse_scaled(text, kDigits);
    if (!raw) throw DomainError("invalid rate '" + std::string(text) + "'");
    return from_raw(*raw);
  }

  /// Exact rate of `basis_points` hundredths of a percent (1275 -> 12.75%).
  static Rate from_basis_points(std::int64_t basis_points) { return from_raw(basis_points * (kScale / 10'000)); }

  /// Nearest representable rate to a binary value.
  static Rate from_double(long double value) {
    if (!std::isfinite(value)) throw DomainError("rate is not finite");
    return from_raw(std::llround(value * static_cast<long double>(kScale)));
  }

  /// Rounded half-even to `fractional_digits` decimal places.
  Rate rounded(int fractional_digits) const {
    if (fractional_digits >= kDigits) return *this;
    const auto unit = detail::pow10(kDigits - fractional_digits);
    return from_raw(static_cast<std::int64_t>(detail::div_round_half_even(raw_, unit) * unit));
  }

  constexpr std::int64_t raw() const { return raw_; }
  long double value() const { return static_cast<long double>(raw_) / static_cast<long double>(kScale); }
  constexpr bool is_negative() const { return raw_ < 0; }
  constexpr bool is_zero() const { return raw_ == 0; }

  /// "0.1275"
  std::string to_string() const { return detail::format_scaled(raw_, kDigits, 1); }

  /// "12.75%"
  std::string to_percent_string() const {
    return detail::format_scaled(raw_, kDigits - 2, 0) + "%";
  }

  constexpr auto operator<=>(const Rate&) const = default;

 private:
  constexpr explicit Rate(std::int64_t raw) : raw_(raw) {}
  std::int64_t raw_ = 0;
};

/// rate x amount rounded half-even to the centavo, computed exactly.
inline Money apply_rate(Money amount, Rate rate) {
  const detail::int128 product = static_cast<detail::int128>(amount.centavos()) * rate.raw();
  const detail::int128 rounded = detail::div_round_half_even(product, Rate::kScale);
  if (rounded > INT64_MAX || rounded < INT64_MIN) throw DomainError("money overflow");
  return Money::from_centavos(static_cast<std::int64_t>(rounded));
}

}  // namespace depsub

#endif  // DEPSUB_RATE_HPP
