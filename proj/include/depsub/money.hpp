#ifndef DEPSUB_MONEY_HPP
#define DEPSUB_MONEY_HPP

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

#include "depsub/decimal.hpp"
#include "depsub/error.hpp"

namespace depsub {

/// Signed amount of Philippine pesos held as an exact count of centavos.
class Money {
 public:
  constexpr Money() = default;

  static constexpr Money from_centavos(std::int64_t centavos) { return Money{centavos}; }

  /// Parses a decimal peso amount with at most two fractional digits.
  /// Extra precision is rejected rather than rounded.
  static Money from_pesos(std::string_view pesos) {
    const auto raw = detail::parse_scaled(pesos, 2);
    if (!raw) throw DomainError("invalid peso amount '" + std::string(pesos) + "'");
    return Money{*raw};
  }

  constexpr std::int64_t centavos() const { return centavos_; }

  /// Plain rendering used by CSV and JSON: "11566298682.89".
  std::string to_string() const { return detail::format_scaled(centavos_, 2, 2); }

  /// Report rendering with thousands separators: "11,566,298,682.89".
  std::string to_grouped_string() const {
    std::string plain = to_string();
    const std::size_t sign = plain.front() == '-' ? 1 : 0;
    const std::size_t dot = plain.find('.');
    for (std::size_t pos = dot; pos > sign + 3;) {
      pos -= 3;
      plain.insert(pos, 1, ',');
    }
    return plain;
  }

  Money operator-() const {
    if (centavos_ == INT64_MIN) throw DomainError("money overflow on negation");
    return Money{-centavos_};
  }
  Money operator+(Money other) const {
    std::int64_t out = 0;
    if (__builtin_add_overflow(centavos_, other.centavos_, &out)) throw DomainError("money overflow");
    return Money{out};
  }
  Money operator-(Money other) const {
    std::int64_t out = 0;
    if (__builtin_sub_overflow(centavos_, other.centavos_, &out)) throw DomainError("money overflow");
    return Money{out};
  }
  Money& operator+=(Money other) { return *this = *this + other; }
  Money& operator-=(Money other) { return *this = *this - other; }

  constexpr auto operator<=>(const Money&) const = default;

 private:
  constexpr explicit Money(std::int64_t centavos) : centavos_(centavos) {}
  std::int64_t centavos_ = 0;
};

inline Money money_from_pesos(std::string_view pesos) { return Money::from_pesos(pesos); }

}  // namespace depsub

#endif  // DEPSUB_MONEY_HPP
