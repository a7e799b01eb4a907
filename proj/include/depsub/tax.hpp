#ifndef DEPSUB_TAX_HPP
#define DEPSUB_TAX_HPP

// Income-tax treatment of trading gains and interest income on debt
// instruments under the NIRC of 1997.

#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "depsub/classification.hpp"
#include "depsub/core.hpp"
#include "depsub/error.hpp"

namespace depsub {

/// Pre-termination rate for holdings in [min_years, max_years).
/// An absent max is open-ended; an absent rate means exempt.
struct PretermBracket {
  double min_years = 0;
  std::optional<double> max_years;
  std::optional<Rate> rate;
  bool operator==(const PretermBracket&) const = default;
};

struct TaxRuleSet {
  Rate fwt_rate = Rate::from_basis_points(2000);
  // Mandatory for any branch that falls to the regular rate.
  std::optional<Rate> regular_rate;
  Tenor ltdic_min_tenor = Tenor::years(5);
  // Trading gains are excluded only when the tenor is strictly greater.
  Tenor trading_gain_exclusion_min_tenor = Tenor::years(5);
  Money ltdic_min_denomination = Money::from_centavos(1'000'000);
  std::vector<PretermBracket> preterm_brackets = default_brackets();

  static std::vector<PretermBracket> default_brackets() {
    return {
        {0, 3, Rate::from_basis_points(2000)},
        {3, 4, Rate::from_basis_points(1200)},
        {4, 5, Rate::from_basis_points(500)},
        {5, std::nullopt, std::nullopt},
    };
  }

  void validate() const {
    auto check_rate = [](Rate r, const std::string& what) {
      if (r.is_negative() || r.raw() > Rate::kScale) throw DomainError(what + " must lie in [0, 1]");
    };
    check_rate(fwt_rate, "fwt_rate");
    if (regular_rate) check_rate(*regular_rate, "regular_rate");
    if (preterm_brackets.empty()) throw DomainError("preterm_brackets is empty");
    double expected_min = 0;
    for (std::size_t i = 0; i < preterm_brackets.size(); ++i) {
      const auto& b = preterm_brackets[i];
      const std::string label = "preterm bracket " + std::to_string(i);
      if (b.min_years != expected_min) throw DomainError(label + " leaves a gap or overlap at " + std::to_string(expected_min));
      if (b.rate) check_rate(*b.rate, label + " rate");
      const bool last = i + 1 == preterm_brackets.size();
      if (last != !b.max_years) throw DomainError(label + ": only the last bracket is open-ended");
      if (b.max_years) {
        if (!(*b.max_years > b.min_years)) throw DomainError(label + " is empty");
        expected_min = *b.max_years;
      }
    }
  }

  Rate require_regular_rate() const {
    if (!regular_rate) throw DomainError("regular_rate is not configured");
    return *regular_rate;
  }

  const PretermBracket& bracket_for(double holding_years) const {
    for (const auto& b : preterm_brackets) {
      if (holding_years >= b.min_years && (!b.max_years || holding_years < *b.max_years)) return b;
    }
    throw DomainError("no pre-termination bracket for holding period");
  }
};

enum class TaxCategory { ExcludedFromGrossIncome, FinalWithholding, Exempt, PretermFinal, RegularIncome };

inline const char* to_string(TaxCategory c) {
  switch (c) {
    case TaxCategory::ExcludedFromGrossIncome: return "excluded_from_gross_income";
    case TaxCategory::FinalWithholding: return "final_withholding";
    case TaxCategory::Exempt: return "exempt";
    case TaxCategory::PretermFinal: return "preterm_final";
    case TaxCategory::RegularIncome: return "regular_income";
  }
  return "?";
}

struct TaxTreatment {
  TaxCategory category = TaxCategory::RegularIncome;
  Rate applied_rate;
  Money tax_due;
  std::string statutory_basis;
  bool operator==(const TaxTreatment&) const = default;
};

/// rate x base, rounded half-even to the centavo.
inline Money withholding_amount(Money base, Rate rate) {
  if (base < Money{}) throw DomainError("withholding base must be non-negative");
  if (rate.is_negative()) throw DomainError("withholding rate must be non-negative");
  return apply_rate(base, rate);
}

inline TaxTreatment trading_gain_treatment(const Instrument& instrument, Money gain, const TaxRuleSet& rules) {
  rules.validate();
  if (instrument.tenor > rules.trading_gain_exclusion_min_tenor) {
    return {TaxCategory::ExcludedFromGrossIncome, Rate{}, Money{},
            "NIRC Sec. 32(B)(7)(g): gain on indebtedness with maturity of more than " +
                rules.trading_gain_exclusion_min_tenor.to_string() + " years"};
  }
  const Rate rate = rules.require_regular_rate();
  const Money base = gain > Money{} ? gain : Money{};
  return {TaxCategory::RegularIncome, rate, withholding_amount(base, rate),
          "included in gross income at the regular rate; maturity not more than " +
              rules.trading_gain_exclusion_min_tenor.to_string() + " years"};
}

/// Sec. 22(FF) long-term deposit or investment certificate: bank issuer,
/// individual holder, minimum denomination and minimum tenor.
inline bool ltdic_eligible(const Instrument& instrument, bool holder_is_individual, bool issuer_is_bank,
                           const TaxRuleSet& rules) {
  return issuer_is_bank && holder_is_individual && instrument.face_value >= rules.ltdic_min_denomination &&
         instrument.tenor >= rules.ltdic_min_tenor;
}

inline TaxTreatment interest_income_treatment(const Instrument& instrument, const Classification& classification,
                                              bool holder_is_individual, bool issuer_is_bank, double holding_years,
                                              Money interest_income, const TaxRuleSet& rules) {
  rules.validate();
  if (interest_income < Money{}) throw DomainError("interest income must be non-negative");
  if (!std::isfinite(holding_years) || holding_years < 0) throw DomainError("holding_years must be non-negative");

  if (ltdic_eligible(instrument, holder_is_individual, issuer_is_bank, rules)) {
    const auto& bracket = rules.bracket_for(holding_years);
    if (!bracket.rate) {
      return {TaxCategory::Exempt, Rate{}, Money{},
              "NIRC Sec. 22(FF): long-term deposit or investment certificate held to term"};
    }
    return {TaxCategory::PretermFinal, *bracket.rate, withholding_amount(interest_income, *bracket.rate),
            "NIRC Sec. 22(FF): long-term certificate pre-terminated; final tax by holding period"};
  }
  if (classification.is_deposit_substitute) {
    return {TaxCategory::FinalWithholding, rules.fwt_rate, withholding_amount(interest_income, rules.fwt_rate),
            "NIRC Secs. 24(B)(1), 25(A)(2), 27(D)(1), 28(A)(7)(a): final withholding on deposit substitute "
            "interest"};
  }
  const Rate rate = rules.require_regular_rate();
  return {TaxCategory::RegularIncome, rate, withholding_amount(interest_income, rate),
          "regular income tax rate; not a deposit substitute (creditable withholding under RR 14-2012 "
          "not computed)"};
}

}  // namespace depsub

#endif  // DEPSUB_TAX_HPP
