#ifndef DEPSUB_CLI_APP_HPP
#define DEPSUB_CLI_APP_HPP

// Command-line front end. run() parses arguments, loads every input
// document, then computes and renders a single report.
//
// Exit status: 0 success, 1 domain error, 2 usage or input-document error.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "depsub/classification.hpp"
#include "depsub/curve.hpp"
#include "depsub/io/documents.hpp"
#include "depsub/io/report.hpp"
#include "depsub/tax.hpp"
#include "depsub/valuation.hpp"

#ifndef DEPSUB_FIXTURE_DIR
#define DEPSUB_FIXTURE_DIR "fixtures"
#endif

namespace depsub::cli {

enum ExitCode : int { kOk = 0, kDomainError = 1, kUsageError = 2 };

enum class Command { Price, Yield, Path, Fitness, Classify, Tax, Curve, Peace };

struct RunConfig {
  Command command = Command::Price;
  std::string input;
  io::Format format = io::Format::Table;
  std::optional<std::string> out;
  std::vector<RuleSetId> rule_sets;
  std::optional<int> lender_threshold;

  // price / yield
  std::string rate;
  std::string price;
  std::optional<double> ttm;

  // fitness
  std::optional<int> max_breakeven_year;
  std::optional<double> max_tenor;

  // tax / peace
  std::optional<std::string> tax_rules;
  std::optional<std::string> regular_rate;

  // curve
  std::vector<double> at;
  std::optional<std::string> lending_rate;
  std::optional<std::string> deposit_rate;
  std::optional<std::string> assets;
  std::optional<std::string> liabilities;
};

inline std::string default_fixture(const std::string& name) { return std::string(DEPSUB_FIXTURE_DIR) + "/" + name; }

namespace detail {

using io::Cell;
using io::Report;
using io::Section;

// Inverted yields carry float noise below 1e-10.
inline constexpr int kReportedYieldDigits = 10;

inline Cell maybe(const std::optional<int>& v) {
  return v ? Cell{static_cast<long long>(*v)} : Cell{};
}

// Flag values are usage errors when malformed.
inline Rate flag_rate(const std::string& flag, const std::string& text) {
  try {
    return Rate::parse(text);
  } catch (const DomainError& e) {
    throw DocumentError(flag, e.what());
  }
}
inline Money flag_money(const std::string& flag, const std::string& text) {
  try {
    return Money::from_pesos(text);
  } catch (const DomainError& e) {
    throw DocumentError(flag, e.what());
  }
}
inline Tenor flag_tenor(const std::string& flag, double years) {
  try {
    return Tenor::from_years(years);
  } catch (const DomainError& e) {
    throw DocumentError(flag, e.what());
  }
}

inline Section instrument_section(const Instrument& in) {
  Section s = Section::fields("instrument");
  s.add("face_value", in.face_value)
      .add("contractual_rate", in.contractual_rate)
      .add("tenor_years", in.tenor)
      .add("compounding", std::string(io::to_string(in.compounding)))
      .add("coupon_rate", in.coupon_rate)
      .add("kind", std::string(io::to_string(in.kind)))
      .add("issuer", in.issuer);
  return s;
}

inline Section path_section(const PricePath& path) {
  Section s = Section::table("price_path", {"year", "market_rate", "time_to_maturity", "price"});
  for (const auto& row : path.rows) {
    s.add_row({static_cast<long long>(row.year), row.market_rate ? Cell{*row.market_rate} : Cell{},
               row.time_to_maturity, row.price});
  }
  return s;
}

inline Section fitness_section(const FitnessReport& f) {
  Section s = Section::fields("fitness");
  s.add("initial_investment", f.initial_investment)
      .add("breakeven_year", maybe(f.breakeven_year))
      .add("capital_preservation_breached", f.capital_preservation_breached)
      .add("max_drawdown", f.max_drawdown)
      .add("verdict", std::string(to_string(f.verdict)));
  return s;
}

inline RuleSet make_rules(RuleSetId id, const RunConfig& cfg) {
  return RuleSet::make(id, cfg.lender_threshold.value_or(20));
}

inline std::vector<RuleSetId> selected_rule_sets(const RunConfig& cfg) {
  if (!cfg.rule_sets.empty()) return cfg.rule_sets;
  return {RuleSetId::StatutoryOrigination, RuleSetId::StatutoryAnyTransaction, RuleSetId::ProposedShortTerm};
}

inline void add_classifications(Report& report, const TransactionLedger& ledger,
                                const std::vector<std::pair<RuleSetId, Classification>>& results) {
  Section& tx = report.add(Section::table("transactions", {"id", "sequence", "kind", "lender_count"}));
  for (const auto& t : ledger.transactions()) {
    tx.add_row({t.id, static_cast<long long>(t.sequence), std::string(io::to_string(t.kind)),
                static_cast<long long>(t.lender_count)});
  }
  Section& summary =
      report.add(Section::table("classification", {"rule_set", "deposit_substitute", "triggering_transaction"}));
  Section& why = report.add(Section::table("rationale", {"rule_set", "element", "passed", "detail"}));
  for (const auto& [id, c] : results) {
    summary.add_row({std::string(to_string(id)), c.is_deposit_substitute,
                     c.triggering_transaction ? Cell{*c.triggering_transaction} : Cell{}});
    for (const auto& check : c.rationale) {
      why.add_row({std::string(to_string(id)), std::string(to_string(check.element)), check.passed, check.detail});
    }
  }
}

inline TaxRuleSet load_tax_rules(const RunConfig& cfg, const std::optional<std::string>& fallback_file) {
  TaxRuleSet rules;
  const auto file = cfg.tax_rules ? cfg.tax_rules : fallback_file;
  if (file) {
    const io::Json doc = io::load_json_file(*file);
    try {
      rules = io::parse_tax_rules(io::Node(doc, ""));
    } catch (const DocumentError& e) {
      throw DocumentError(*file + ":" + e.where(), e.message());
    }
  }
  if (cfg.regular_rate) rules.regular_rate = flag_rate("--regular-rate", *cfg.regular_rate);
  return rules;
}

// Wraps a document parse so errors name the file as well as the pointer.
template <class F>
auto load_document(const std::string& path, F&& parse) {
  const io::Json doc = io::load_json_file(path);
  try {
    return parse(io::Node(doc, ""));
  } catch (const DocumentError& e) {
    throw DocumentError(path + ":" + e.where(), e.message());
  }
}

// Accepts an instrument document or any document with an "instrument" field.
inline Instrument parse_bare_or_nested_instrument(const io::Node& n) {
  return n.has("instrument") ? io::parse_instrument(n.at("instrument")) : io::parse_instrument(n);
}

inline Report run_price(const RunConfig& cfg) {
  const Instrument in = load_document(cfg.input, parse_bare_or_nested_instrument);
  const Rate market = flag_rate("--rate", cfg.rate);
  const Tenor ttm = cfg.ttm ? flag_tenor("--ttm", *cfg.ttm) : in.tenor;
  const Money price = coupon_bond_price(in, market, ttm);
  Report r{"price", {}};
  r.add(instrument_section(in));
  r.add(Section::fields("valuation"))
      .add("market_rate", market)
      .add("time_to_maturity", ttm)
      .add("price", price)
      .add("discount", discount(in.face_value, price));
  return r;
}

inline Report run_yield(const RunConfig& cfg) {
  const Instrument in = load_document(cfg.input, parse_bare_or_nested_instrument);
  const Money price = flag_money("--price", cfg.price);
  const Tenor ttm = cfg.ttm ? flag_tenor("--ttm", *cfg.ttm) : in.tenor;
  if (ttm > in.tenor) throw DomainError("time to maturity exceeds instrument tenor");
  const Rate y = coupon_yield_from_price(in, price, ttm);
  Report r{"yield", {}};
  r.add(instrument_section(in));
  r.add(Section::fields("valuation"))
      .add("price", price)
      .add("time_to_maturity", ttm)
      .add("yield", y.rounded(kReportedYieldDigits))
      .add("method", std::string(in.is_zero_coupon() ? "closed_form" : "bisection"));
  return r;
}

inline Report run_path(const RunConfig& cfg, bool with_fitness) {
  const auto doc = load_document(cfg.input, [](const io::Node& n) { return io::parse_scenario_document(n); });
  const PricePath path = price_path(doc.instrument, doc.scenario);
  Report r{with_fitness ? "fitness" : "path", {}};
  r.add(instrument_section(doc.instrument));
  r.add(path_section(path));
  if (with_fitness) {
    FitnessPolicy policy;
    if (cfg.max_breakeven_year) policy.max_breakeven_year = *cfg.max_breakeven_year;
    if (cfg.max_tenor) policy.max_tenor = flag_tenor("--max-tenor", *cfg.max_tenor);
    r.add(fitness_section(assess_fitness(doc.instrument, path, policy)));
  }
  return r;
}

inline Report run_classify(const RunConfig& cfg) {
  const auto ledger = load_document(cfg.input, [](const io::Node& n) { return io::parse_ledger(n); });
  std::vector<std::pair<RuleSetId, Classification>> results;
  for (RuleSetId id : selected_rule_sets(cfg)) results.emplace_back(id, classify(ledger, make_rules(id, cfg)));
  Report r{"classify", {}};
  r.add(instrument_section(ledger.instrument()));
  add_classifications(r, ledger, results);
  return r;
}

inline Section treatment_section(const std::string& name, const TaxTreatment& t, Money base) {
  Section s = Section::fields(name);
  s.add("category", std::string(to_string(t.category)))
      .add("applied_rate", t.applied_rate)
      .add("base", base)
      .add("tax_due", t.tax_due)
      .add("statutory_basis", t.statutory_basis);
  return s;
}

inline Report run_tax(const RunConfig& cfg) {
  const auto req = load_document(cfg.input, [](const io::Node& n) { return io::parse_tax_request(n); });
  const TaxRuleSet rules = load_tax_rules(cfg, std::nullopt);
  if (cfg.rule_sets.size() > 1) throw DocumentError("--rules", "tax accepts a single rule set");

  Report r{"tax", {}};
  r.add(instrument_section(req.instrument));
  Classification classification;
  if (req.ledger) {
    const RuleSetId id = cfg.rule_sets.empty() ? RuleSetId::StatutoryAnyTransaction : cfg.rule_sets.front();
    classification = classify(*req.ledger, make_rules(id, cfg));
    add_classifications(r, *req.ledger, {{id, classification}});
  } else {
    classification.is_deposit_substitute = *req.deposit_substitute;
    if (classification.is_deposit_substitute) classification.triggering_transaction = "asserted";
    classification.rationale.push_back({Element::PublicBorrowing, classification.is_deposit_substitute, "asserted"});
  }
  const TaxTreatment interest =
      interest_income_treatment(req.instrument, classification, req.holder_is_individual, req.issuer_is_bank,
                                req.holding_years, req.interest_income, rules);
  r.add(treatment_section("interest_income", interest, req.interest_income));
  if (req.trading_gain) {
    const TaxTreatment gain = trading_gain_treatment(req.instrument, *req.trading_gain, rules);
    r.add(treatment_section("trading_gain", gain, *req.trading_gain));
  }
  return r;
}

inline Report run_curve(const RunConfig& cfg) {
  std::optional<YieldCurve> curve;
  if (!cfg.input.empty()) curve = io::load_curve_file(cfg.input);
  const auto deposit_stats = historical::deposit_rates();
  const auto lending_stats = historical::lending_rates();
  const Rate lending = cfg.lending_rate ? flag_rate("--lending-rate", *cfg.lending_rate) : lending_stats.average;
  const Rate deposit = cfg.deposit_rate ? flag_rate("--deposit-rate", *cfg.deposit_rate) : deposit_stats.average;
  std::optional<Money> assets;
  std::optional<Money> liabilities;
  if (cfg.assets) assets = flag_money("--assets", *cfg.assets);
  if (cfg.liabilities) liabilities = flag_money("--liabilities", *cfg.liabilities);
  std::vector<Tenor> queries;
  for (double t : cfg.at) queries.push_back(flag_tenor("--at", t));

  Report r{"curve", {}};
  if (curve) {
    Section& pts = r.add(Section::table("curve", {"tenor_years", "yield"}));
    for (const auto& p : curve->points()) pts.add_row({p.tenor, p.yield});
    r.add(Section::fields("shape")).add("upward_sloping", is_upward_sloping(*curve));
    if (!queries.empty()) {
      Section& interp = r.add(Section::table("interpolated", {"tenor_years", "yield"}));
      for (Tenor t : queries) interp.add_row({t, interpolate(*curve, t)});
    }
  } else if (!queries.empty()) {
    throw DocumentError("--at", "interpolation requires --input");
  }

  Section& hist =
      r.add(Section::table("historical_rates", {"series", "from", "to", "average", "high", "high_year", "low", "low_year"}));
  for (const auto& s : {deposit_stats, lending_stats}) {
    hist.add_row({s.label, static_cast<long long>(s.first_year), static_cast<long long>(s.last_year), s.average,
                  s.high.rate, static_cast<long long>(s.high.year), s.low.rate, static_cast<long long>(s.low.year)});
  }
  Section& mt = r.add(Section::fields("maturity_transformation"));
  mt.add("lending_rate", lending).add("deposit_rate", deposit).add("spread", spread(lending, deposit));
  mt.add("spread_at_1984_highs", spread(lending_stats.high.rate, deposit_stats.high.rate));
  if (assets || liabilities) {
    mt.add("assets", assets.value_or(Money{}))
        .add("liabilities", liabilities.value_or(Money{}))
        .add("net_interest_income",
             net_interest_income(assets.value_or(Money{}), lending, liabilities.value_or(Money{}), deposit));
  }
  return r;
}

/// End-of-year price of a zero-coupon holding: `year` years after origination.
inline Money end_of_year_price(const Instrument& in, int year, Rate rate) {
  return coupon_bond_price(in, rate, Tenor::years(in.tenor.whole_years() - year));
}

inline Report run_peace(const RunConfig& cfg) {
  const std::string input = cfg.input.empty() ? default_fixture("peace.json") : cfg.input;
  const auto doc = load_document(input, [](const io::Node& n) { return io::parse_case_document(n); });
  const TaxRuleSet rules = load_tax_rules(cfg, default_fixture("tax_rules.json"));
  const Instrument& in = doc.ledger.instrument();
  if (!in.tenor.is_whole_years()) throw DomainError("case instrument must have a whole-year tenor");

  const Money origination_price = coupon_bond_price(in, in.contractual_rate, in.tenor);
  const Money origination_discount = discount(in.face_value, origination_price);

  Report r{"peace", {}};
  r.add(instrument_section(in));
  r.add(Section::fields("origination"))
      .add("price", origination_price)
      .add("discount", origination_discount)
      .add("implied_yield", yield_from_price(in.face_value, origination_price, in.tenor, in.compounding)
                                .rounded(kReportedYieldDigits));

  Section& holds = r.add(Section::table(
      "holdings", {"holder", "buy_year", "buy_rate", "buy_price", "sell_year", "sell_rate", "sell_price", "gain"}));
  for (const auto& h : doc.holdings) {
    const Money buy = end_of_year_price(in, h.buy_year, h.buy_rate);
    const Money sell = end_of_year_price(in, h.sell_year, h.sell_rate);
    holds.add_row({h.holder, static_cast<long long>(h.buy_year), h.buy_rate, buy, static_cast<long long>(h.sell_year),
                   h.sell_rate, sell, holding_gain(buy, sell)});
  }

  std::vector<std::pair<RuleSetId, Classification>> results;
  for (RuleSetId id : selected_rule_sets(cfg)) results.emplace_back(id, classify(doc.ledger, make_rules(id, cfg)));
  add_classifications(r, doc.ledger, results);

  const double held_to_maturity = in.tenor.in_years();
  Section& tax = r.add(Section::table("interest_tax", {"rule_set", "category", "applied_rate", "base", "tax_due"}));
  for (const auto& [id, c] : results) {
    const TaxTreatment t = interest_income_treatment(in, c, doc.holder_is_individual, doc.issuer_is_bank,
                                                     held_to_maturity, origination_discount, rules);
    tax.add_row({std::string(to_string(id)), std::string(to_string(t.category)), t.applied_rate,
                 origination_discount, t.tax_due});
  }
  Classification as_deposit_substitute;
  as_deposit_substitute.is_deposit_substitute = true;
  as_deposit_substitute.triggering_transaction = "asserted";
  const TaxTreatment fwt = interest_income_treatment(in, as_deposit_substitute, doc.holder_is_individual,
                                                     doc.issuer_is_bank, held_to_maturity, origination_discount, rules);
  r.add(treatment_section("deposit_substitute_branch", fwt, origination_discount));
  r.add(Section::fields("trading_gain"))
      .add("category", std::string(to_string(trading_gain_treatment(in, Money{}, rules).category)));
  return r;
}

inline Report execute(const RunConfig& cfg) {
  switch (cfg.command) {
    case Command::Price: return run_price(cfg);
    case Command::Yield: return run_yield(cfg);
    case Command::Path: return run_path(cfg, false);
    case Command::Fitness: return run_path(cfg, true);
    case Command::Classify: return run_classify(cfg);
    case Command::Tax: return run_tax(cfg);
    case Command::Curve: return run_curve(cfg);
    case Command::Peace: return run_peace(cfg);
  }
  throw DomainError("unknown command");
}

}  // namespace detail

/// Runs one command line. `args` excludes the program name.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  CLI::App app{"Fixed-income pricing, deposit-substitute classification and tax treatment", "depsub"};
  app.require_subcommand(1);

  std::string format = "table";
  std::vector<std::string> rules;

  auto common = [&](CLI::App* sub, bool input_required) {
    auto* opt = sub->add_option("--input", cfg.input, "Input document");
    if (input_required) opt->required();
    sub->add_option("--format", format, "table|csv|json")->check(CLI::IsMember({"table", "csv", "json"}));
    sub->add_option("--out", cfg.out, "Write the report to a file instead of stdout");
  };
  auto with_rules = [&](CLI::App* sub) {
    sub->add_option("--rules", rules, "statutory-origination|statutory-any|proposed")
        ->check(CLI::IsMember({"statutory-origination", "statutory-any", "proposed"}));
    sub->add_option("--threshold", cfg.lender_threshold, "Lender threshold override")->check(CLI::Range(2, 1 << 30));
  };

  auto* price = app.add_subcommand("price", "Price an instrument at a market rate");
  common(price, true);
  price->add_option("--rate", cfg.rate, "Market rate as a decimal fraction")->required();
  price->add_option("--ttm", cfg.ttm, "Time to maturity in years (default: tenor)");

  auto* yld = app.add_subcommand("yield", "Yield implied by a price");
  common(yld, true);
  yld->add_option("--price", cfg.price, "Price in pesos")->required();
  yld->add_option("--ttm", cfg.ttm, "Time to maturity in years (default: tenor)");

  auto* path = app.add_subcommand("path", "Beginning-of-year prices under a rate scenario");
  common(path, true);

  auto* fitness = app.add_subcommand("fitness", "Capital-preservation and liquidity test of a price path");
  common(fitness, true);
  fitness->add_option("--max-breakeven-year", cfg.max_breakeven_year, "Latest acceptable recovery year");
  fitness->add_option("--max-tenor", cfg.max_tenor, "Longest tenor that can replicate a deposit, in years");

  auto* cls = app.add_subcommand("classify", "Deposit-substitute classification of a ledger");
  common(cls, true);
  with_rules(cls);

  auto* tax = app.add_subcommand("tax", "Tax treatment of interest income and trading gain");
  common(tax, true);
  with_rules(tax);
  tax->add_option("--tax-rules", cfg.tax_rules, "Tax rule set document");
  tax->add_option("--regular-rate", cfg.regular_rate, "Regular income tax rate override");

  auto* curve = app.add_subcommand("curve", "Yield curve shape, interpolation and bank spread");
  common(curve, false);
  curve->add_option("--at", cfg.at, "Tenor(s) to interpolate, in years");
  curve->add_option("--lending-rate", cfg.lending_rate, "Lending rate (default: historical average)");
  curve->add_option("--deposit-rate", cfg.deposit_rate, "Deposit rate (default: historical average)");
  curve->add_option("--assets", cfg.assets, "Loan book in pesos");
  curve->add_option("--liabilities", cfg.liabilities, "Deposit base in pesos");

  auto* peace = app.add_subcommand("peace", "End-to-end PEACe Bonds case report");
  common(peace, false);
  with_rules(peace);
  peace->add_option("--tax-rules", cfg.tax_rules, "Tax rule set document (default: bundled)");
  peace->add_option("--regular-rate", cfg.regular_rate, "Regular income tax rate override");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    err << "run 'depsub --help' for usage\n";
    return kUsageError;
  }

  const std::pair<CLI::App*, Command> commands[] = {
      {price, Command::Price},      {yld, Command::Yield}, {path, Command::Path},   {fitness, Command::Fitness},
      {cls, Command::Classify},     {tax, Command::Tax},   {curve, Command::Curve}, {peace, Command::Peace},
  };
  for (const auto& [sub, command] : commands) {
    if (sub->parsed()) cfg.command = command;
  }
  cfg.format = format == "csv" ? io::Format::Csv : format == "json" ? io::Format::Json : io::Format::Table;
  for (const auto& name : rules) cfg.rule_sets.push_back(*io::parse_rule_set_id(name));

  try {
    const io::Report report = detail::execute(cfg);
    const std::string text = io::render_to_string(report, cfg.format);
    if (cfg.out) {
      std::ofstream file(*cfg.out, std::ios::binary);
      if (!file) throw DocumentError(*cfg.out, "cannot open output file");
      file << text;
    } else {
      out << text;
    }
    return kOk;
  } catch (const DocumentError& e) {
    err << "usage error: " << e.what() << "\n";
    return kUsageError;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << "\n";
    return kDomainError;
  }
}

}  // namespace depsub::cli

#endif  // DEPSUB_CLI_APP_HPP
