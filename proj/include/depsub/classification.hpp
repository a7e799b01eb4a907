#ifndef DEPSUB_CLASSIFICATION_HPP
#define DEPSUB_CLASSIFICATION_HPP

// Deposit-substitute test over a ledger of borrowing and transfer events.
//
// The statutory definition has four elements: funds are borrowed from the
// public (20 or more lenders at any one time), through debt instruments, for
// relending or own financing needs, plus (under the proposed rule only) a
// maturity of not more than one year from origination. Lender counts are
// taken per transaction; the rule set decides which transactions count.

#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "depsub/core.hpp"
#include "depsub/error.hpp"

namespace depsub {

enum class TransactionKind { Origination, SecondarySale };

struct Transaction {
  std::string id;
  int sequence = 0;
  TransactionKind kind = TransactionKind::SecondarySale;
  int lender_count = 1;
  std::optional<std::vector<std::string>> counterparties;
  bool operator==(const Transaction&) const = default;
};

class TransactionLedger {
 public:
  TransactionLedger(Instrument instrument, std::vector<Transaction> transactions,
                    bool issued_as_debt_instrument = true, bool for_qualifying_purpose = true)
      : instrument_(std::move(instrument)),
        transactions_(std::move(transactions)),
        issued_as_debt_instrument_(issued_as_debt_instrument),
        for_qualifying_purpose_(for_qualifying_purpose) {
    instrument_.validate();
    if (transactions_.empty()) throw DomainError("ledger has no transactions");
    std::set<std::string> ids;
    for (std::size_t i = 0; i < transactions_.size(); ++i) {
      const auto& tx = transactions_[i];
      const std::string label = "transaction '" + tx.id + "'";
      if (tx.id.empty()) throw DomainError("transaction " + std::to_string(i) + " has an empty id");
      if (!ids.insert(tx.id).second) throw DomainError("duplicate " + label);
      if (tx.lender_count < 1) throw DomainError(label + ": lender_count must be at least 1");
      if (tx.counterparties && static_cast<int>(tx.counterparties->size()) != tx.lender_count) {
        throw DomainError(label + ": counterparties length differs from lender_count");
      }
      const bool is_origination = tx.kind == TransactionKind::Origination;
      if (i == 0 && !is_origination) throw DomainError("first transaction must be the origination");
      if (i > 0 && is_origination) throw DomainError(label + ": only the first transaction may be an origination");
      if (i > 0 && tx.sequence <= transactions_[i - 1].sequence) {
        throw DomainError(label + ": sequence must be strictly increasing");
      }
    }
  }

  const Instrument& instrument() const { return instrument_; }
  const std::vector<Transaction>& transactions() const { return transactions_; }
  const Transaction& origination() const { return transactions_.front(); }
  bool issued_as_debt_instrument() const { return issued_as_debt_instrument_; }
  bool for_qualifying_purpose() const { return for_qualifying_purpose_; }

  const Transaction& find(const std::string& id) const {
    for (const auto& tx : transactions_) {
      if (tx.id == id) return tx;
    }
    throw DomainError("unknown transaction '" + id + "'");
  }

  bool operator==(const TransactionLedger&) const = default;

 private:
  Instrument instrument_;
  std::vector<Transaction> transactions_;
  bool issued_as_debt_instrument_ = true;
  bool for_qualifying_purpose_ = true;
};

inline int lender_count_at(const TransactionLedger& ledger, const std::string& transaction_id) {
  return ledger.find(transaction_id).lender_count;
}

enum class RuleSetId { StatutoryOrigination, StatutoryAnyTransaction, ProposedShortTerm };

struct RuleSet {
  RuleSetId id = RuleSetId::StatutoryOrigination;
  int lender_threshold = 20;
  std::optional<Tenor> max_tenor;

  static RuleSet make(RuleSetId id, int lender_threshold = 20, std::optional<Tenor> max_tenor = std::nullopt) {
    if (lender_threshold < 2) throw DomainError("lender_threshold must be at least 2");
    if (id == RuleSetId::ProposedShortTerm && !max_tenor) max_tenor = Tenor::years(1);
    return RuleSet{id, lender_threshold, max_tenor};
  }
  static RuleSet statutory_origination() { return make(RuleSetId::StatutoryOrigination); }
  static RuleSet statutory_any_transaction() { return make(RuleSetId::StatutoryAnyTransaction); }
  static RuleSet proposed_short_term() { return make(RuleSetId::ProposedShortTerm); }
};

inline const char* to_string(RuleSetId id) {
  switch (id) {
    case RuleSetId::StatutoryOrigination: return "statutory-origination";
    case RuleSetId::StatutoryAnyTransaction: return "statutory-any";
    case RuleSetId::ProposedShortTerm: return "proposed";
  }
  return "?";
}

enum class Element { PublicBorrowing, InstrumentForm, Purpose, Maturity };

inline const char* to_string(Element e) {
  switch (e) {
    case Element::PublicBorrowing: return "public_borrowing";
    case Element::InstrumentForm: return "instrument_form";
    case Element::Purpose: return "purpose";
    case Element::Maturity: return "maturity";
  }
  return "?";
}

struct ElementCheck {
  Element element = Element::PublicBorrowing;
  bool passed = false;
  std::string detail;
  bool operator==(const ElementCheck&) const = default;
};

struct Classification {
  bool is_deposit_substitute = false;
  std::optional<std::string> triggering_transaction;
  std::vector<ElementCheck> rationale;
  bool operator==(const Classification&) const = default;
};

inline Classification classify(const TransactionLedger& ledger, const RuleSet& rules) {
  if (rules.lender_threshold < 2) throw DomainError("lender_threshold must be at least 2");
  const std::string threshold = std::to_string(rules.lender_threshold);

  // Origination mode reads the count fixed at original issuance; the other
  // modes scan every transaction in ledger order.
  const Transaction* trigger = nullptr;
  if (rules.id == RuleSetId::StatutoryOrigination) {
    if (ledger.origination().lender_count >= rules.lender_threshold) trigger = &ledger.origination();
  } else {
    for (const auto& tx : ledger.transactions()) {
      if (tx.lender_count >= rules.lender_threshold) {
        trigger = &tx;
        break;
      }
    }
  }

  Classification out;
  if (trigger) {
    out.rationale.push_back({Element::PublicBorrowing, true,
                             "transaction '" + trigger->id + "' has " + std::to_string(trigger->lender_count) +
                                 " lenders (threshold " + threshold + ")"});
  } else {
    const std::string scope =
        rules.id == RuleSetId::StatutoryOrigination ? "at origination" : "in any transaction";
    out.rationale.push_back(
        {Element::PublicBorrowing, false, "fewer than " + threshold + " lenders " + scope});
  }
  out.rationale.push_back({Element::InstrumentForm, ledger.issued_as_debt_instrument(),
                           ledger.issued_as_debt_instrument() ? "issued through a debt instrument"
                                                              : "not issued through a debt instrument"});
  out.rationale.push_back({Element::Purpose, ledger.for_qualifying_purpose(),
                           ledger.for_qualifying_purpose() ? "funds used for relending or own financing"
                                                           : "funds not used for a qualifying purpose"});

  bool maturity_ok = true;
  if (rules.max_tenor) {
    const Tenor tenor = ledger.instrument().tenor;
    maturity_ok = tenor <= *rules.max_tenor;
    out.rationale.push_back({Element::Maturity, maturity_ok,
                             "tenor " + tenor.to_string() + "y " + (maturity_ok ? "within" : "exceeds") +
                                 " limit of " + rules.max_tenor->to_string() + "y"});
  } else {
    out.rationale.push_back({Element::Maturity, true, "no maturity limit"});
  }

  out.is_deposit_substitute =
      trigger != nullptr && ledger.issued_as_debt_instrument() && ledger.for_qualifying_purpose() && maturity_ok;
  if (out.is_deposit_substitute) out.triggering_transaction = trigger->id;
  return out;
}

}  // namespace depsub

#endif  // DEPSUB_CLASSIFICATION_HPP
