#ifndef DEPSUB_CURVE_HPP
#define DEPSUB_CURVE_HPP

// Yield curves and maturity-transformation spread arithmetic.

#include <string>
#include <utility>
#include <vector>

#include "depsub/core.hpp"
#include "depsub/decimal.hpp"
#include "depsub/error.hpp"

namespace depsub {

struct CurvePoint {
  Tenor tenor;
  Rate yield;
  bool operator==(const CurvePoint&) const = default;
};

class YieldCurve {
 public:
  explicit YieldCurve(std::vector<CurvePoint> points) : points_(std::move(points)) {
    if (points_.size() < 2) throw DomainError("yield curve needs at least 2 points");
    for (std::size_t i = 0; i < points_.size(); ++i) {
      if (points_[i].tenor.is_zero()) throw DomainError("curve tenor must be positive");
      if (i > 0 && !(points_[i - 1].tenor < points_[i].tenor)) {
        throw DomainError("curve tenors must be strictly increasing");
      }
    }
  }

  const std::vector<CurvePoint>& points() const { return points_; }
  bool operator==(const YieldCurve&) const = default;

 private:
  std::vector<CurvePoint> points_;
};

/// Linear interpolation between adjacent nodes, exact at nodes, rounded
/// half-even to the rate grid. No extrapolation.
inline Rate interpolate(const YieldCurve& curve, Tenor tenor) {
  const auto& pts = curve.points();
  if (tenor < pts.front().tenor || tenor > pts.back().tenor) {
    throw DomainError("tenor " + tenor.to_string() + "y outside curve range [" + pts.front().tenor.to_string() +
                      "y, " + pts.back().tenor.to_string() + "y]");
  }
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    const auto& lo = pts[i];
    const auto& hi = pts[i + 1];
    if (tenor == lo.tenor) return lo.yield;
    if (tenor == hi.tenor) return hi.yield;
    if (tenor < hi.tenor) {
      using detail::int128;
      const int128 offset = tenor.in_half_years() - lo.tenor.in_half_years();
      const int128 width = hi.tenor.in_half_years() - lo.tenor.in_half_years();
      const int128 rise = static_cast<int128>(hi.yield.raw()) - lo.yield.raw();
      const int128 step = detail::div_round_half_even(rise * offset, width);
      return Rate::from_raw(static_cast<std::int64_t>(lo.yield.raw() + step));
    }
  }
  return pts.back().yield;
}

/// True iff yields strictly increase with tenor.
inline bool is_upward_sloping(const YieldCurve& curve) {
  const auto& pts = curve.points();
  for (std::size_t i = 1; i < pts.size(); ++i) {
    if (!(pts[i - 1].yield < pts[i].yield)) return false;
  }
  return true;
}

inline Rate spread(Rate lending_rate, Rate deposit_rate) {
  return Rate::from_raw(lending_rate.raw() - deposit_rate.raw());
}

/// assets * lending_rate - liabilities * deposit_rate, computed exactly and
/// rounded half-even to the centavo once.
inline Money net_interest_income(Money assets, Rate lending_rate, Money liabilities, Rate deposit_rate) {
  if (assets < Money{} || liabilities < Money{}) throw DomainError("balances must be non-negative");
  using detail::int128;
  const int128 exact = static_cast<int128>(assets.centavos()) * lending_rate.raw() -
                       static_cast<int128>(liabilities.centavos()) * deposit_rate.raw();
  const int128 rounded = detail::div_round_half_even(exact, Rate::kScale);
  if (rounded > INT64_MAX || rounded < INT64_MIN) throw DomainError("money overflow");
  return Money::from_centavos(static_cast<std::int64_t>(rounded));
}

struct DatedRate {
  Rate rate;
  int year = 0;
};

struct RateSeriesStats {
  std::string label;
  int first_year = 0;
  int last_year = 0;
  Rate average;
  DatedRate high;
  DatedRate low;
};

/// Philippine bank rate history (annual series).
namespace historical {

inline RateSeriesStats deposit_rates() {
  return {"deposit", 1980, 2015, Rate::from_basis_points(913), {Rate::from_basis_points(2117), 1984},
          {Rate::from_basis_points(123), 2014}};
}

inline RateSeriesStats lending_rates() {
  return {"lending", 1976, 2016, Rate::from_basis_points(1345), {Rate::from_basis_points(3973), 1984},
          {Rate::from_basis_points(509), 2015}};
}

inline DatedRate deposit_rate_2015() { return {Rate::from_basis_points(160), 2015}; }

}  // namespace historical

}  // namespace depsub

#endif  // DEPSUB_CURVE_HPP
