#include <gtest/gtest.h>

#include "depsub/classification.hpp"
#include "support/properties.hpp"

using namespace depsub;

namespace {

Instrument bond(int years) {
  return Instrument::make(money_from_pesos("35000000000.00"), Rate::parse("0.1275"), Tenor::years(years),
                          Compounding::Semiannual, Rate{}, InstrumentKind::TreasuryBond, "Bureau of the Treasury");
}

std::vector<std::string> names(const std::string& prefix, int n) {
  std::vector<std::string> out;
  for (int i = 1; i <= n; ++i) out.push_back(prefix + std::to_string(i));
  return out;
}

TransactionLedger peace_ledger() {
  return TransactionLedger(
      bond(10), {{"auction", 0, TransactionKind::Origination, 1, std::vector<std::string>{"RCBC Capital"}},
                 {"resale", 1, TransactionKind::SecondarySale, 8,
                  std::vector<std::string>{"Banco de Oro", "Bank of Commerce", "China Banking Corporation",
                                           "Metropolitan Bank & Trust Company", "Philippine Bank of Communications",
                                           "Philippine National Bank", "Philippine Veterans Bank",
                                           "Planters Development Bank"}}});
}

TransactionLedger synthetic(int years, int resale_lenders) {
  return TransactionLedger(bond(years), {{"orig", 0, TransactionKind::Origination, 1, std::nullopt},
                                         {"resale", 1, TransactionKind::SecondarySale, resale_lenders,
                                          names("investor-", resale_lenders)}});
}

}  // namespace

TEST(LenderCount, ReadsPerTransaction) {
  const auto ledger = peace_ledger();
  EXPECT_EQ(lender_count_at(ledger, "auction"), 1);
  EXPECT_EQ(lender_count_at(ledger, "resale"), 8);
  EXPECT_EQ(lender_count_at(synthetic(10, 20), "resale"), 20);
  EXPECT_THROW(lender_count_at(ledger, "nope"), DomainError);
}

TEST(Ledger, Validation) {
  const Instrument in = bond(10);
  EXPECT_THROW(TransactionLedger(in, {}), DomainError);
  EXPECT_THROW(TransactionLedger(in, {{"a", 0, TransactionKind::SecondarySale, 1, std::nullopt}}), DomainError);
  EXPECT_THROW(TransactionLedger(in, {{"a", 0, TransactionKind::Origination, 1, std::nullopt},
                                      {"b", 1, TransactionKind::Origination, 1, std::nullopt}}),
               DomainError);
  EXPECT_THROW(TransactionLedger(in, {{"a", 0, TransactionKind::Origination, 0, std::nullopt}}), DomainError);
  EXPECT_THROW(TransactionLedger(in, {{"a", 0, TransactionKind::Origination, 2, std::vector<std::string>{"x"}}}),
               DomainError);
  EXPECT_THROW(TransactionLedger(in, {{"a", 0, TransactionKind::Origination, 1, std::nullopt},
                                      {"a", 1, TransactionKind::SecondarySale, 1, std::nullopt}}),
               DomainError);
  EXPECT_THROW(TransactionLedger(in, {{"a", 3, TransactionKind::Origination, 1, std::nullopt},
                                      {"b", 3, TransactionKind::SecondarySale, 1, std::nullopt}}),
               DomainError);
}

TEST(RuleSetTest, Defaults) {
  EXPECT_EQ(RuleSet::proposed_short_term().max_tenor, Tenor::years(1));
  EXPECT_EQ(RuleSet::statutory_any_transaction().lender_threshold, 20);
  EXPECT_FALSE(RuleSet::statutory_origination().max_tenor.has_value());
  EXPECT_THROW(RuleSet::make(RuleSetId::StatutoryOrigination, 1), DomainError);
}

TEST(Classify, SingleEntityOriginationIsNotPublicBorrowing) {
  const Classification c = classify(peace_ledger(), RuleSet::statutory_origination());
  EXPECT_FALSE(c.is_deposit_substitute);
  EXPECT_FALSE(c.triggering_transaction.has_value());
  ASSERT_EQ(c.rationale.size(), 4u);
  EXPECT_EQ(c.rationale[0].element, Element::PublicBorrowing);
  EXPECT_FALSE(c.rationale[0].passed);
  // Eight secondary buyers are still short of twenty.
  EXPECT_FALSE(classify(peace_ledger(), RuleSet::statutory_any_transaction()).is_deposit_substitute);
}

TEST(Classify, TwentyLenderResaleTriggersUnderAnyTransaction) {
  const Classification c = classify(synthetic(10, 20), RuleSet::statutory_any_transaction());
  EXPECT_TRUE(c.is_deposit_substitute);
  EXPECT_EQ(c.triggering_transaction, "resale");
  EXPECT_FALSE(classify(synthetic(10, 20), RuleSet::statutory_origination()).is_deposit_substitute);
}

TEST(Classify, ProposedRuleExcludesLongTenor) {
  const Classification c = classify(synthetic(10, 20), RuleSet::proposed_short_term());
  EXPECT_FALSE(c.is_deposit_substitute);
  EXPECT_EQ(c.rationale[3].element, Element::Maturity);
  EXPECT_FALSE(c.rationale[3].passed);
  EXPECT_TRUE(c.rationale[0].passed);

  const Classification short_term = classify(synthetic(1, 20), RuleSet::proposed_short_term());
  EXPECT_TRUE(short_term.is_deposit_substitute);
  EXPECT_EQ(short_term.triggering_transaction, "resale");
}

TEST(Classify, NineteenBuyersNeverQualify) {
  for (const auto& rules : {RuleSet::statutory_origination(), RuleSet::statutory_any_transaction(),
                            RuleSet::proposed_short_term()}) {
    EXPECT_FALSE(classify(synthetic(1, 19), rules).is_deposit_substitute);
  }
}

TEST(Classify, ThresholdSharpness) {
  const Instrument in = bond(1);
  for (std::size_t raised = 0; raised < 4; ++raised) {
    std::vector<Transaction> txs;
    for (std::size_t i = 0; i < 4; ++i) {
      txs.push_back({"t" + std::to_string(i), static_cast<int>(i),
                     i == 0 ? TransactionKind::Origination : TransactionKind::SecondarySale, 19, std::nullopt});
    }
    const TransactionLedger all19(in, txs);
    for (const auto& rules : {RuleSet::statutory_origination(), RuleSet::statutory_any_transaction(),
                              RuleSet::proposed_short_term()}) {
      EXPECT_FALSE(classify(all19, rules).is_deposit_substitute);
    }
    txs[raised].lender_count = 20;
    const TransactionLedger one20(in, txs);
    const auto any = classify(one20, RuleSet::statutory_any_transaction());
    EXPECT_TRUE(any.is_deposit_substitute);
    EXPECT_EQ(any.triggering_transaction, "t" + std::to_string(raised));
    EXPECT_EQ(classify(one20, RuleSet::statutory_origination()).is_deposit_substitute, raised == 0);
  }
}

TEST(Classify, ElementFactsCanDefeatClassification) {
  const Instrument in = bond(1);
  const std::vector<Transaction> txs{{"o", 0, TransactionKind::Origination, 25, std::nullopt}};
  EXPECT_TRUE(classify(TransactionLedger(in, txs), RuleSet::statutory_origination()).is_deposit_substitute);
  EXPECT_FALSE(
      classify(TransactionLedger(in, txs, false, true), RuleSet::statutory_origination()).is_deposit_substitute);
  EXPECT_FALSE(
      classify(TransactionLedger(in, txs, true, false), RuleSet::statutory_origination()).is_deposit_substitute);
}

TEST(Classify, CustomThreshold) {
  EXPECT_TRUE(classify(peace_ledger(), RuleSet::make(RuleSetId::StatutoryAnyTransaction, 8)).is_deposit_substitute);
  EXPECT_FALSE(classify(peace_ledger(), RuleSet::make(RuleSetId::StatutoryAnyTransaction, 9)).is_deposit_substitute);
}

TEST(Classify, Deterministic) {
  const auto ledger = synthetic(10, 25);
  for (const auto& rules : {RuleSet::statutory_origination(), RuleSet::statutory_any_transaction(),
                            RuleSet::proposed_short_term()}) {
    EXPECT_EQ(classify(ledger, rules), classify(ledger, rules));
  }
}

TEST(ClassifyProperty, ProposedImpliesAnyTransaction) {
  const props::Result r = props::run("proposed => any", [](props::Gen& g, std::ostream& why) {
    std::vector<Transaction> txs;
    const auto n = g.int_in(1, 10);
    for (int i = 0; i < n; ++i) {
      txs.push_back({"t" + std::to_string(i), i, i == 0 ? TransactionKind::Origination : TransactionKind::SecondarySale,
                     static_cast<int>(g.int_in(1, 40)), std::nullopt});
    }
    const TransactionLedger ledger(bond(static_cast<int>(g.int_in(1, 3))), txs);
    const bool proposed = classify(ledger, RuleSet::proposed_short_term()).is_deposit_substitute;
    const bool any = classify(ledger, RuleSet::statutory_any_transaction()).is_deposit_substitute;
    why << "proposed=" << proposed << " any=" << any;
    return !proposed || any;
  });
  EXPECT_TRUE(r.ok()) << r.first_failure;
}

TEST(ClassifyProperty, MatchesExhaustiveScan) {
  const props::Result r = props::classification_oracle();
  EXPECT_TRUE(r.ok()) << r.failures << " failures; " << r.first_failure;
}
