#ifndef DEPSUB_IO_DOCUMENTS_HPP
#define DEPSUB_IO_DOCUMENTS_HPP

// Reading and writing the JSON and CSV input documents. Schema violations
// raise DocumentError carrying a JSON pointer (or file:line for syntax
// errors) to the offending field. Money and rates travel as decimal strings.

#include <algorithm>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "depsub/classification.hpp"
#include "depsub/core.hpp"
#include "depsub/curve.hpp"
#include "depsub/error.hpp"
#include "depsub/tax.hpp"

namespace depsub::io {

using Json = nlohmann::ordered_json;

inline std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DocumentError(path, "cannot open file");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

inline Json parse_json_text(const std::string& text, const std::string& source) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    const std::size_t offset = std::min<std::size_t>(e.byte, text.size());
    const std::size_t line = 1 + static_cast<std::size_t>(
                                     std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(offset), '\n'));
    throw DocumentError(source + ":" + std::to_string(line), "malformed JSON");
  }
}

inline Json load_json_file(const std::string& path) { return parse_json_text(read_text_file(path), path); }

/// Cursor over a JSON value that remembers its pointer for error messages.
class Node {
 public:
  Node(const Json& value, std::string pointer) : value_(&value), pointer_(std::move(pointer)) {}

  const Json& json() const { return *value_; }
  const std::string& pointer() const { return pointer_; }
  std::string where() const { return pointer_.empty() ? "/" : pointer_; }

  [[noreturn]] void fail(const std::string& what) const { throw DocumentError(where(), what); }

  bool has(const std::string& key) const {
    return value_->is_object() && value_->contains(key) && !(*value_)[key].is_null();
  }

  Node at(const std::string& key) const {
    if (!value_->is_object()) fail("expected an object");
    if (!value_->contains(key)) throw DocumentError(pointer_ + "/" + key, "missing required field");
    return Node((*value_)[key], pointer_ + "/" + key);
  }

  std::vector<Node> elements() const {
    if (!value_->is_array()) fail("expected an array");
    std::vector<Node> out;
    for (std::size_t i = 0; i < value_->size(); ++i) out.emplace_back((*value_)[i], pointer_ + "/" + std::to_string(i));
    return out;
  }

  std::string as_string() const {
    if (!value_->is_string()) fail("expected a string");
    return value_->get<std::string>();
  }
  bool as_bool() const {
    if (!value_->is_boolean()) fail("expected a boolean");
    return value_->get<bool>();
  }
  int as_int() const {
    if (!value_->is_number_integer()) fail("expected an integer");
    return value_->get<int>();
  }
  double as_number() const {
    if (value_->is_number()) return value_->get<double>();
    if (value_->is_string()) {
      const std::string text = value_->get<std::string>();
      try {
        std::size_t used = 0;
        const double v = std::stod(text, &used);
        if (used == text.size()) return v;
      } catch (const std::exception&) {
      }
    }
    fail("expected a number");
  }

  template <class F>
  auto convert(F&& f) const -> decltype(f()) {
    try {
      return f();
    } catch (const DomainError& e) {
      fail(e.what());
    }
  }

  Money as_money() const {
    const std::string text = as_string();
    return convert([&] { return Money::from_pesos(text); });
  }
  Rate as_rate() const {
    const std::string text = as_string();
    return convert([&] { return Rate::parse(text); });
  }

 private:
  const Json* value_;
  std::string pointer_;
};

// ---- enums ----------------------------------------------------------------

inline const char* to_string(Compounding c) { return c == Compounding::Annual ? "annual" : "semiannual"; }

inline constexpr std::pair<InstrumentKind, const char*> kKindNames[] = {
    {InstrumentKind::TreasuryBond, "treasury_bond"},
    {InstrumentKind::TreasuryNote, "treasury_note"},
    {InstrumentKind::Repo, "repo"},
    {InstrumentKind::PromissoryNote, "promissory_note"},
    {InstrumentKind::CertAssignmentWithRecourse, "cert_assignment_with_recourse"},
    {InstrumentKind::CertParticipationWithRecourse, "cert_participation_with_recourse"},
    {InstrumentKind::Deposit, "deposit"},
    {InstrumentKind::Other, "other"},
};

inline const char* to_string(InstrumentKind kind) {
  for (const auto& [k, name] : kKindNames) {
    if (k == kind) return name;
  }
  return "other";
}

inline const char* to_string(TransactionKind k) {
  return k == TransactionKind::Origination ? "origination" : "secondary_sale";
}

inline std::optional<RuleSetId> parse_rule_set_id(std::string_view text) {
  if (text == "statutory-origination") return RuleSetId::StatutoryOrigination;
  if (text == "statutory-any") return RuleSetId::StatutoryAnyTransaction;
  if (text == "proposed") return RuleSetId::ProposedShortTerm;
  return std::nullopt;
}

// ---- instrument -------------------------------------------------------------

inline Instrument parse_instrument(const Node& node) {
  Instrument out;
  out.face_value = node.at("face_value").as_money();
  out.contractual_rate = node.at("contractual_rate").as_rate();
  const Node tenor = node.at("tenor");
  out.tenor = tenor.convert([&] { return Tenor::from_years(tenor.as_number()); });

  const Node comp = node.at("compounding");
  const std::string comp_name = comp.as_string();
  if (comp_name == "annual") {
    out.compounding = Compounding::Annual;
  } else if (comp_name == "semiannual") {
    out.compounding = Compounding::Semiannual;
  } else {
    comp.fail("expected \"annual\" or \"semiannual\"");
  }

  if (node.has("coupon_rate")) out.coupon_rate = node.at("coupon_rate").as_rate();
  if (node.has("kind")) {
    const Node kind = node.at("kind");
    const std::string name = kind.as_string();
    bool found = false;
    for (const auto& [k, label] : kKindNames) {
      if (name == label) {
        out.kind = k;
        found = true;
      }
    }
    if (!found) kind.fail("unknown instrument kind '" + name + "'");
  }
  if (node.has("issuer")) out.issuer = node.at("issuer").as_string();

  if (out.face_value <= Money{}) node.at("face_value").fail("face_value must be positive");
  if (out.tenor.is_zero()) tenor.fail("tenor must be positive");
  if (out.compounding == Compounding::Annual && !out.tenor.is_whole_years()) {
    tenor.fail("half-year tenor requires semiannual compounding");
  }
  if (out.coupon_rate.is_negative()) node.at("coupon_rate").fail("coupon_rate must be non-negative");
  return out;
}

inline Instrument parse_instrument(std::string_view json_text) {
  const Json doc = parse_json_text(std::string(json_text), "<instrument>");
  return parse_instrument(Node(doc, ""));
}

inline Json to_json(const Instrument& in) {
  Json j;
  j["face_value"] = in.face_value.to_string();
  j["contractual_rate"] = in.contractual_rate.to_string();
  if (in.tenor.is_whole_years()) {
    j["tenor"] = in.tenor.whole_years();
  } else {
    j["tenor"] = in.tenor.in_years();
  }
  j["compounding"] = to_string(in.compounding);
  j["coupon_rate"] = in.coupon_rate.to_string();
  j["kind"] = to_string(in.kind);
  j["issuer"] = in.issuer;
  return j;
}

// ---- scenario ---------------------------------------------------------------

struct ScenarioDocument {
  Instrument instrument;
  RateScenario scenario;
  bool operator==(const ScenarioDocument&) const = default;
};

inline RateScenario parse_scenario(const Node& node) {
  std::vector<ScenarioPoint> points;
  for (const Node& row : node.elements()) {
    points.push_back({row.at("year").as_int(), row.at("market_rate").as_rate()});
  }
  return node.convert([&] { return RateScenario(std::move(points)); });
}

inline ScenarioDocument parse_scenario_document(const Node& node) {
  return {parse_instrument(node.at("instrument")), parse_scenario(node.at("scenario"))};
}

inline Json to_json(const RateScenario& scenario) {
  Json rows = Json::array();
  for (const auto& p : scenario.points()) rows.push_back({{"year", p.year}, {"market_rate", p.market_rate.to_string()}});
  return rows;
}

inline Json to_json(const ScenarioDocument& doc) {
  return {{"instrument", to_json(doc.instrument)}, {"scenario", to_json(doc.scenario)}};
}

// ---- ledger -----------------------------------------------------------------

inline std::vector<Transaction> parse_transactions(const Node& node) {
  std::vector<Transaction> out;
  int index = 0;
  for (const Node& row : node.elements()) {
    Transaction tx;
    tx.id = row.at("id").as_string();
    tx.sequence = row.has("sequence") ? row.at("sequence").as_int() : index;
    const Node kind = row.at("kind");
    const std::string kind_name = kind.as_string();
    if (kind_name == "origination") {
      tx.kind = TransactionKind::Origination;
    } else if (kind_name == "secondary_sale") {
      tx.kind = TransactionKind::SecondarySale;
    } else {
      kind.fail("expected \"origination\" or \"secondary_sale\"");
    }
    if (row.has("counterparties")) {
      std::vector<std::string> names;
      for (const Node& name : row.at("counterparties").elements()) names.push_back(name.as_string());
      tx.counterparties = std::move(names);
    }
    if (row.has("lender_count")) {
      tx.lender_count = row.at("lender_count").as_int();
      if (tx.lender_count < 1) row.at("lender_count").fail("lender_count must be at least 1");
      if (tx.counterparties && static_cast<int>(tx.counterparties->size()) != tx.lender_count) {
        row.at("counterparties").fail("length differs from lender_count");
      }
    } else if (tx.counterparties) {
      tx.lender_count = static_cast<int>(tx.counterparties->size());
      if (tx.lender_count < 1) row.at("counterparties").fail("at least one counterparty required");
    } else {
      throw DocumentError(row.pointer() + "/lender_count", "missing required field");
    }
    out.push_back(std::move(tx));
    ++index;
  }
  return out;
}

inline TransactionLedger parse_ledger(const Node& node) {
  Instrument instrument = parse_instrument(node.at("instrument"));
  auto transactions = parse_transactions(node.at("transactions"));
  const bool form = node.has("issued_as_debt_instrument") ? node.at("issued_as_debt_instrument").as_bool() : true;
  const bool purpose = node.has("for_qualifying_purpose") ? node.at("for_qualifying_purpose").as_bool() : true;
  return node.at("transactions").convert(
      [&] { return TransactionLedger(std::move(instrument), std::move(transactions), form, purpose); });
}

inline Json to_json(const TransactionLedger& ledger) {
  Json txs = Json::array();
  for (const auto& tx : ledger.transactions()) {
    Json j;
    j["id"] = tx.id;
    j["sequence"] = tx.sequence;
    j["kind"] = to_string(tx.kind);
    j["lender_count"] = tx.lender_count;
    if (tx.counterparties) j["counterparties"] = *tx.counterparties;
    txs.push_back(std::move(j));
  }
  Json out;
  out["instrument"] = to_json(ledger.instrument());
  out["issued_as_debt_instrument"] = ledger.issued_as_debt_instrument();
  out["for_qualifying_purpose"] = ledger.for_qualifying_purpose();
  out["transactions"] = std::move(txs);
  return out;
}

// ---- tax rules --------------------------------------------------------------

inline TaxRuleSet parse_tax_rules(const Node& node) {
  TaxRuleSet rules;
  if (node.has("fwt_rate")) rules.fwt_rate = node.at("fwt_rate").as_rate();
  if (node.has("regular_rate")) rules.regular_rate = node.at("regular_rate").as_rate();
  auto tenor_field = [&](const char* key, Tenor& target) {
    if (!node.has(key)) return;
    const Node n = node.at(key);
    target = n.convert([&] { return Tenor::from_years(n.as_number()); });
  };
  tenor_field("ltdic_min_tenor_years", rules.ltdic_min_tenor);
  tenor_field("trading_gain_exclusion_min_tenor_years", rules.trading_gain_exclusion_min_tenor);
  if (node.has("ltdic_min_denomination")) rules.ltdic_min_denomination = node.at("ltdic_min_denomination").as_money();
  if (node.has("preterm_brackets")) {
    rules.preterm_brackets.clear();
    for (const Node& row : node.at("preterm_brackets").elements()) {
      PretermBracket b;
      b.min_years = row.at("min_years").as_number();
      if (row.has("max_years")) b.max_years = row.at("max_years").as_number();
      if (row.has("rate")) b.rate = row.at("rate").as_rate();
      rules.preterm_brackets.push_back(b);
    }
  }
  node.convert([&] {
    rules.validate();
    return 0;
  });
  return rules;
}

inline Json to_json(const TaxRuleSet& rules) {
  Json j;
  j["fwt_rate"] = rules.fwt_rate.to_string();
  j["regular_rate"] = rules.regular_rate ? Json(rules.regular_rate->to_string()) : Json(nullptr);
  j["ltdic_min_tenor_years"] = rules.ltdic_min_tenor.in_years();
  j["trading_gain_exclusion_min_tenor_years"] = rules.trading_gain_exclusion_min_tenor.in_years();
  j["ltdic_min_denomination"] = rules.ltdic_min_denomination.to_string();
  Json brackets = Json::array();
  for (const auto& b : rules.preterm_brackets) {
    brackets.push_back({{"min_years", b.min_years},
                        {"max_years", b.max_years ? Json(*b.max_years) : Json(nullptr)},
                        {"rate", b.rate ? Json(b.rate->to_string()) : Json(nullptr)}});
  }
  j["preterm_brackets"] = std::move(brackets);
  return j;
}

// ---- curve ------------------------------------------------------------------

inline YieldCurve parse_curve_json(const Node& node) {
  std::vector<CurvePoint> points;
  for (const Node& row : node.elements()) {
    const Node tenor = row.at("tenor_years");
    points.push_back({tenor.convert([&] { return Tenor::from_years(tenor.as_number()); }), row.at("yield").as_rate()});
  }
  return node.convert([&] { return YieldCurve(std::move(points)); });
}

/// `tenor_years,yield` rows; a header line and blank lines are skipped.
inline YieldCurve parse_curve_csv(const std::string& text, const std::string& source) {
  std::vector<CurvePoint> points;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    const std::string where = source + ":" + std::to_string(line_no);
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw DocumentError(where, "expected 'tenor_years,yield'");
    auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t");
      const auto e = s.find_last_not_of(" \t");
      return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
    };
    const std::string tenor_text = trim(line.substr(0, comma));
    const std::string yield_text = trim(line.substr(comma + 1));
    if (tenor_text == "tenor_years") continue;
    try {
      std::size_t used = 0;
      const double years = std::stod(tenor_text, &used);
      if (used != tenor_text.size()) throw DomainError("invalid tenor '" + tenor_text + "'");
      points.push_back({Tenor::from_years(years), Rate::parse(yield_text)});
    } catch (const DomainError& e) {
      throw DocumentError(where, e.what());
    } catch (const std::exception&) {
      throw DocumentError(where, "invalid tenor '" + tenor_text + "'");
    }
  }
  try {
    return YieldCurve(std::move(points));
  } catch (const DomainError& e) {
    throw DocumentError(source, e.what());
  }
}

inline YieldCurve load_curve_file(const std::string& path) {
  const std::string text = read_text_file(path);
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '[') {
    const Json doc = parse_json_text(text, path);
    return parse_curve_json(Node(doc, ""));
  }
  return parse_curve_csv(text, path);
}

inline Json to_json(const YieldCurve& curve) {
  Json rows = Json::array();
  for (const auto& p : curve.points()) {
    rows.push_back({{"tenor_years", p.tenor.in_years()}, {"yield", p.yield.to_string()}});
  }
  return rows;
}

// ---- tax request ------------------------------------------------------------

/// Facts for resolving the tax on one holding. Either a ledger (classified
/// under the chosen rule set) or an asserted deposit_substitute flag.
struct TaxRequest {
  Instrument instrument;
  std::optional<TransactionLedger> ledger;
  std::optional<bool> deposit_substitute;
  bool holder_is_individual = false;
  bool issuer_is_bank = false;
  double holding_years = 0;
  Money interest_income;
  std::optional<Money> trading_gain;
};

inline TaxRequest parse_tax_request(const Node& node) {
  TaxRequest req;
  req.instrument = parse_instrument(node.at("instrument"));
  if (node.has("transactions")) req.ledger = parse_ledger(node);
  if (node.has("deposit_substitute")) req.deposit_substitute = node.at("deposit_substitute").as_bool();
  if (!req.ledger && !req.deposit_substitute) {
    throw DocumentError(node.pointer() + "/deposit_substitute", "need either transactions or deposit_substitute");
  }
  if (node.has("holder_is_individual")) req.holder_is_individual = node.at("holder_is_individual").as_bool();
  if (node.has("issuer_is_bank")) req.issuer_is_bank = node.at("issuer_is_bank").as_bool();
  const Node holding = node.at("holding_years");
  req.holding_years = holding.as_number();
  if (!(req.holding_years >= 0)) holding.fail("holding_years must be non-negative");
  const Node income = node.at("interest_income");
  req.interest_income = income.as_money();
  if (req.interest_income < Money{}) income.fail("interest_income must be non-negative");
  if (node.has("trading_gain")) req.trading_gain = node.at("trading_gain").as_money();
  return req;
}

// ---- PEACe-style case file --------------------------------------------------

/// One holding period: bought at the end of `buy_year` at `buy_rate`, sold at
/// the end of `sell_year` at `sell_rate` (year 0 is origination).
struct Holding {
  std::string holder;
  int buy_year = 0;
  Rate buy_rate;
  int sell_year = 0;
  Rate sell_rate;
};

struct CaseDocument {
  TransactionLedger ledger;
  std::vector<Holding> holdings;
  bool holder_is_individual = false;
  bool issuer_is_bank = false;
};

inline CaseDocument parse_case_document(const Node& node) {
  CaseDocument doc{parse_ledger(node), {}};
  const int tenor_years = doc.ledger.instrument().tenor.whole_years();
  for (const Node& row : node.at("holdings").elements()) {
    Holding h;
    h.holder = row.at("holder").as_string();
    h.buy_year = row.at("buy_year").as_int();
    h.buy_rate = row.at("buy_rate").as_rate();
    h.sell_year = row.at("sell_year").as_int();
    h.sell_rate = row.at("sell_rate").as_rate();
    if (h.buy_year < 0) row.at("buy_year").fail("buy_year must be non-negative");
    if (h.sell_year <= h.buy_year) row.at("sell_year").fail("sell_year must follow buy_year");
    if (h.sell_year > tenor_years) row.at("sell_year").fail("sell_year is past maturity");
    doc.holdings.push_back(std::move(h));
  }
  if (node.has("holder_is_individual")) doc.holder_is_individual = node.at("holder_is_individual").as_bool();
  if (node.has("issuer_is_bank")) doc.issuer_is_bank = node.at("issuer_is_bank").as_bool();
  return doc;
}

}  // namespace depsub::io

#endif  // DEPSUB_IO_DOCUMENTS_HPP
