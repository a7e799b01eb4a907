#ifndef DEPSUB_CORE_HPP
#define DEPSUB_CORE_HPP

#include <cmath>
#include <compare>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "depsub/error.hpp"
#include "depsub/money.hpp"
#include "depsub/rate.hpp"

namespace depsub {

/// Time to maturity in whole or half years.
class Tenor {
 public:
  constexpr Tenor() = default;

  static Tenor years(int whole_years) { return half_years(2 * whole_years); }

  static Tenor half_years(int count) {
    if (count < 0) throw DomainError("tenor must be non-negative");
    return Tenor{count};
  }

  /// Accepts 10 or 10.5; anything else is rejected.
  static Tenor from_years(double value) {
    const double doubled = value * 2.0;
    if (!std::isfinite(value) || value < 0 || doubled != std::floor(doubled) || doubled > 2'000'000) {
      throw DomainError("tenor must be a non-negative whole or half number of years");
    }
    return Tenor{static_cast<int>(doubled)};
  }

  constexpr int in_half_years() const { return half_years_; }
  constexpr bool is_whole_years() const { return half_years_ % 2 == 0; }
  constexpr int whole_years() const { return half_years_ / 2; }
  constexpr double in_years() const { return half_years_ / 2.0; }
  constexpr bool is_zero() const { return half_years_ == 0; }

  std::string to_string() const {
    return std::to_string(half_years_ / 2) + (is_whole_years() ? "" : ".5");
  }

  constexpr auto operator<=>(const Tenor&) const = default;

 private:
  constexpr explicit Tenor(int half_years) : half_years_(half_years) {}
  int half_years_ = 0;
};

enum class Compounding { Annual, Semiannual };

constexpr int periods_per_year(Compounding c) { return c == Compounding::Annual ? 1 : 2; }

/// Number of compounding periods in `tenor`; rejects half years under
/// annual compounding.
inline int compounding_periods(Tenor tenor, Compounding c) {
  if (c == Compounding::Annual) {
    if (!tenor.is_whole_years()) throw DomainError("half-year tenor requires semiannual compounding");
    return tenor.whole_years();
  }
  return tenor.in_half_years();
}

enum class InstrumentKind {
  TreasuryBond,
  TreasuryNote,
  Repo,
  PromissoryNote,
  CertAssignmentWithRecourse,
  CertParticipationWithRecourse,
  Deposit,
  Other,
};

/// A debt instrument. Construct through make() so the invariants hold.
struct Instrument {
  Money face_value;
  Rate contractual_rate;
  Tenor tenor;
  Compounding compounding = Compounding::Annual;
  Rate coupon_rate;
  InstrumentKind kind = InstrumentKind::Other;
  std::string issuer;

  static Instrument make(Money face_value, Rate contractual_rate, Tenor tenor, Compounding compounding,
                         Rate coupon_rate = Rate{}, InstrumentKind kind = InstrumentKind::Other,
                         std::string issuer = {}) {
    Instrument out{face_value, contractual_rate, tenor, compounding, coupon_rate, kind, std::move(issuer)};
    out.validate();
    return out;
  }

  void validate() const {
    if (face_value <= Money{}) throw DomainError("face_value must be positive");
    if (tenor.is_zero()) throw DomainError("tenor must be positive");
    if (compounding == Compounding::Annual && !tenor.is_whole_years()) {
      throw DomainError("half-year tenor requires semiannual compounding");
    }
    if (coupon_rate.is_negative()) throw DomainError("coupon_rate must be non-negative");
  }

  bool is_zero_coupon() const { return coupon_rate.is_zero(); }

  bool operator==(const Instrument&) const = default;
};

struct ScenarioPoint {
  int year = 0;
  Rate market_rate;
  bool operator==(const ScenarioPoint&) const = default;
};

/// Market rates by 1-based year, contiguous and non-negative.
class RateScenario {
 public:
  RateScenario() = default;

  explicit RateScenario(std::vector<ScenarioPoint> points) : points_(std::move(points)) {
    for (std::size_t i = 0; i < points_.size(); ++i) {
      const int expected = static_cast<int>(i) + 1;
      if (points_[i].year < expected) {
        throw DomainError("scenario years must be strictly increasing from 1 (got year " +
                          std::to_string(points_[i].year) + " at position " + std::to_string(expected) + ")");
      }
      if (points_[i].year > expected) {
        throw DomainError("scenario missing year " + std::to_string(expected));
      }
      if (points_[i].market_rate.is_negative()) {
        throw DomainError("scenario rate for year " + std::to_string(expected) + " is negative");
      }
    }
  }

  /// Scenario from rates listed for years 1, 2, ...
  static RateScenario from_rates(const std::vector<Rate>& rates) {
    std::vector<ScenarioPoint> points;
    points.reserve(rates.size());
    for (std::size_t i = 0; i < rates.size(); ++i) points.push_back({static_cast<int>(i) + 1, rates[i]});
    return RateScenario(std::move(points));
  }

  const std::vector<ScenarioPoint>& points() const { return points_; }
  int last_year() const { return static_cast<int>(points_.size()); }
  bool covers(int year) const { return year >= 1 && year <= last_year(); }
  Rate rate_for(int year) const {
    if (!covers(year)) throw DomainError("scenario missing year " + std::to_string(year));
    return points_[static_cast<std::size_t>(year - 1)].market_rate;
  }

  bool operator==(const RateScenario&) const = default;

 private:
  std::vector<ScenarioPoint> points_;
};

}  // namespace depsub

#endif  // DEPSUB_CORE_HPP
