#ifndef DEPSUB_VALUATION_HPP
#define DEPSUB_VALUATION_HPP

// Closed-form bond pricing, yield inversion, scenario price paths and the
// capital-preservation / liquidity test applied to a price path.
//
// Prices are evaluated in extended precision on centavo amounts and rounded
// half-even to the centavo exactly once per call.

#include <cfenv>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "depsub/core.hpp"
#include "depsub/error.hpp"

namespace depsub {

namespace detail {

inline Money round_centavos(long double centavos) {
  if (!std::isfinite(centavos) || std::fabs(centavos) > 9.0e18L) throw DomainError("price out of range");
  // llrintl honours the current rounding mode; force ties-to-even.
  const int saved = std::fegetround();
  std::fesetround(FE_TONEAREST);
  const long long rounded = std::llrintl(centavos);
  std::fesetround(saved);
  return Money::from_centavos(rounded);
}

inline long double growth_factor(Rate rate, int periods, Compounding c) {
  const long double per_period = rate.value() / static_cast<long double>(periods_per_year(c));
  return std::pow(1.0L + per_period, static_cast<long double>(periods));
}

inline void require_nonnegative(Rate rate, const char* what) {
  if (rate.is_negative()) throw DomainError(std::string(what) + " must be non-negative");
}

}  // namespace detail

/// face / (1 + rate/m)^(m*n), rounded to the centavo. Returns face when n = 0.
inline Money zero_coupon_price(Money face, Rate rate, Tenor time_to_maturity, Compounding compounding) {
  if (face <= Money{}) throw DomainError("face value must be positive");
  detail::require_nonnegative(rate, "rate");
  const int periods = compounding_periods(time_to_maturity, compounding);
  if (periods == 0) return face;
  const long double factor = detail::growth_factor(rate, periods, compounding);
  return detail::round_centavos(static_cast<long double>(face.centavos()) / factor);
}

/// Present value of the remaining coupons plus face at `market_rate`,
/// discounted per the instrument's compounding. Coupons are
/// coupon_rate * face / m per period; zero-coupon instruments price
/// identically to zero_coupon_price.
inline Money coupon_bond_price(const Instrument& instrument, Rate market_rate, Tenor time_to_maturity) {
  if (time_to_maturity > instrument.tenor) throw DomainError("time to maturity exceeds instrument tenor");
  if (instrument.is_zero_coupon()) {
    return zero_coupon_price(instrument.face_value, market_rate, time_to_maturity, instrument.compounding);
  }
  detail::require_nonnegative(market_rate, "market rate");
  const int periods = compounding_periods(time_to_maturity, instrument.compounding);
  const auto m = static_cast<long double>(periods_per_year(instrument.compounding));
  const auto face = static_cast<long double>(instrument.face_value.centavos());
  const long double coupon = instrument.coupon_rate.value() * face / m;
  const long double step = 1.0L + market_rate.value() / m;

  long double pv = 0.0L;
  long double factor = 1.0L;
  for (int k = 1; k <= periods; ++k) {
    factor *= step;
    pv += coupon / factor;
  }
  pv += face / factor;
  return detail::round_centavos(pv);
}

/// Zero-coupon yield implied by `price`: m * ((face/price)^(1/(m*n)) - 1).
inline Rate yield_from_price(Money face, Money price, Tenor time_to_maturity, Compounding compounding) {
  if (price <= Money{}) throw DomainError("price must be positive");
  if (price > face) throw DomainError("price above face implies a negative yield");
  if (time_to_maturity.is_zero()) throw DomainError("time to maturity must be positive");
  const int periods = compounding_periods(time_to_maturity, compounding);
  const auto m = static_cast<long double>(periods_per_year(compounding));
  const long double ratio =
      static_cast<long double>(face.centavos()) / static_cast<long double>(price.centavos());
  return Rate::from_double(m * (std::pow(ratio, 1.0L / static_cast<long double>(periods)) - 1.0L));
}

/// Yield of a coupon instrument by bisection on [0, 1] to 1e-10.
inline Rate coupon_yield_from_price(const Instrument& instrument, Money price, Tenor time_to_maturity) {
  if (instrument.is_zero_coupon()) {
    return yield_from_price(instrument.face_value, price, time_to_maturity, instrument.compounding);
  }
  if (price <= Money{}) throw DomainError("price must be positive");
  if (time_to_maturity.is_zero()) throw DomainError("time to maturity must be positive");
  if (price > coupon_bond_price(instrument, Rate{}, time_to_maturity)) {
    throw DomainError("price above undiscounted cash flows implies a negative yield");
  }
  const Rate upper = Rate::from_raw(Rate::kScale);
  if (price < coupon_bond_price(instrument, upper, time_to_maturity)) {
    throw DomainError("price implies a yield above 100%");
  }
  std::int64_t lo = 0;
  std::int64_t hi = upper.raw();
  constexpr std::int64_t kTolerance = Rate::kScale / 10'000'000'000;  // 1e-10
  while (hi - lo > kTolerance) {
    const std::int64_t mid = lo + (hi - lo) / 2;
    if (coupon_bond_price(instrument, Rate::from_raw(mid), time_to_maturity) > price) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return Rate::from_raw(lo + (hi - lo) / 2);
}

/// face - price; negative when bought above par.
inline Money discount(Money face, Money price) { return face - price; }

/// sell - buy, signed.
inline Money holding_gain(Money buy_price, Money sell_price) { return sell_price - buy_price; }

struct PricePathRow {
  int year = 0;
  // Absent on the maturity row when the scenario stops at the tenor.
  std::optional<Rate> market_rate;
  Tenor time_to_maturity;
  Money price;
  bool operator==(const PricePathRow&) const = default;
};

struct PricePath {
  std::vector<PricePathRow> rows;
  bool operator==(const PricePath&) const = default;
};

/// Beginning-of-year prices: year k is priced at the scenario rate for year k
/// with tenor - k + 1 years remaining, followed by the maturity row
/// (year tenor + 1, nothing remaining, price = face).
inline PricePath price_path(const Instrument& instrument, const RateScenario& scenario) {
  instrument.validate();
  if (!instrument.tenor.is_whole_years()) throw DomainError("price path requires a whole-year tenor");
  const int tenor_years = instrument.tenor.whole_years();
  for (int year = 1; year <= tenor_years; ++year) {
    if (!scenario.covers(year)) throw DomainError("scenario missing year " + std::to_string(year));
  }
  if (scenario.last_year() > tenor_years + 1) {
    throw DomainError("scenario extends past maturity (year " + std::to_string(scenario.last_year()) + ")");
  }

  PricePath path;
  path.rows.reserve(static_cast<std::size_t>(tenor_years) + 1);
  for (int year = 1; year <= tenor_years; ++year) {
    const Tenor remaining = Tenor::years(tenor_years - year + 1);
    const Rate rate = scenario.rate_for(year);
    path.rows.push_back({year, rate, remaining, coupon_bond_price(instrument, rate, remaining)});
  }
  const int maturity_year = tenor_years + 1;
  std::optional<Rate> maturity_rate;
  if (scenario.covers(maturity_year)) maturity_rate = scenario.rate_for(maturity_year);
  path.rows.push_back({maturity_year, maturity_rate, Tenor{}, instrument.face_value});
  return path;
}

/// First year from year 2 onwards whose price recovers `initial_investment`.
/// The maturity row counts.
inline std::optional<int> breakeven_year(const PricePath& path, Money initial_investment) {
  if (path.rows.empty()) throw DomainError("price path is empty");
  for (const auto& row : path.rows) {
    if (row.year >= 2 && row.price >= initial_investment) return row.year;
  }
  return std::nullopt;
}

enum class FitnessVerdict { ReplicatesDeposit, FailsDepositFeatures };

/// Thresholds for treating a price path as deposit-like: capital never dips
/// below the initial investment, it is recovered by `max_breakeven_year`, and
/// the instrument matures within `max_tenor`.
struct FitnessPolicy {
  int max_breakeven_year = 2;
  Tenor max_tenor = Tenor::years(1);
};

struct FitnessReport {
  Money initial_investment;
  std::optional<int> breakeven_year;
  bool capital_preservation_breached = false;
  Money max_drawdown;
  FitnessVerdict verdict = FitnessVerdict::FailsDepositFeatures;
  bool operator==(const FitnessReport&) const = default;
};

inline FitnessReport assess_fitness(const Instrument& instrument, const PricePath& path,
                                    const FitnessPolicy& policy = {}) {
  if (path.rows.empty()) throw DomainError("price path is empty");
  FitnessReport report;
  report.initial_investment = path.rows.front().price;
  const int tenor_years = instrument.tenor.whole_years();
  Money lowest = report.initial_investment;
  for (const auto& row : path.rows) {
    if (row.year < 2) continue;
    if (row.year <= tenor_years && row.price < report.initial_investment) {
      report.capital_preservation_breached = true;
    }
    if (row.price < lowest) lowest = row.price;
  }
  report.max_drawdown = report.initial_investment - lowest;
  report.breakeven_year = breakeven_year(path, report.initial_investment);
  const bool recovers_quickly = report.breakeven_year && *report.breakeven_year <= policy.max_breakeven_year;
  const bool short_tenor = instrument.tenor <= policy.max_tenor;
  report.verdict = (!report.capital_preservation_breached && recovers_quickly && short_tenor)
                       ? FitnessVerdict::ReplicatesDeposit
                       : FitnessVerdict::FailsDepositFeatures;
  return report;
}

inline FitnessReport deposit_fitness(const Instrument& instrument, const RateScenario& scenario,
                                     const FitnessPolicy& policy = {}) {
  return assess_fitness(instrument, price_path(instrument, scenario), policy);
}

inline const char* to_string(FitnessVerdict v) {
  return v == FitnessVerdict::ReplicatesDeposit ? "replicates_deposit" : "fails_deposit_features";
}

}  // namespace depsub

#endif  // DEPSUB_VALUATION_HPP
