#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

#include "depsub/cli/app.hpp"

using namespace depsub;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome run(std::vector<std::string> args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string fixture(const std::string& name) { return cli::default_fixture(name); }

io::Json run_json(std::vector<std::string> args) {
  args.push_back("--format");
  args.push_back("json");
  const Outcome o = run(args);
  EXPECT_EQ(o.code, 0) << o.err;
  return io::Json::parse(o.out);
}

std::string field(const io::Json& report, const std::string& sec, const std::string& key) {
  const io::Json& v = report.at(sec).at(key);
  return v.is_string() ? v.get<std::string>() : v.dump();
}

std::string temp_path(const std::string& leaf) {
  return (std::filesystem::temp_directory_path() / ("depsub_cli_test_" + leaf)).string();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  f << text;
}

const std::vector<std::vector<std::string>>& goldens() {
  static const std::vector<std::vector<std::string>> all = {
      {"path", "--input", fixture("rising_rate_scenario.json")},
      {"fitness", "--input", fixture("rising_rate_scenario.json")},
      {"price", "--input", fixture("peace.json"), "--rate", "0.1275"},
      {"yield", "--input", fixture("peace.json"), "--price", "10168961017.94"},
      {"classify", "--input", fixture("peace.json")},
      {"classify", "--input", fixture("synthetic_ledger_20.json")},
      {"classify", "--input", fixture("synthetic_short_ledger_20.json")},
      {"tax", "--input", fixture("peace_tax_request.json"), "--tax-rules", fixture("tax_rules.json")},
      {"curve", "--input", fixture("sample_curve.csv"), "--at", "4", "--assets", "100000000.00"},
      {"peace"},
  };
  return all;
}

}  // namespace

TEST(Cli, PathReproducesRisingRateTable) {
  const Outcome o = run({"path", "--input", fixture("rising_rate_scenario.json")});
  ASSERT_EQ(o.code, 0) << o.err;
  for (const char* price : {"11,566,298,682.89", "10,818,300,749.45", "10,516,771,645.52", "10,614,885,896.57",
                            "12,313,267,640.02", "14,283,390,462.43", "16,568,732,936.41", "19,219,730,206.24",
                            "22,294,887,039.24", "25,862,068,965.52", "30,000,000,000.00"}) {
    EXPECT_NE(o.out.find(price), std::string::npos) << price;
  }
}

TEST(Cli, FitnessReportsYearFive) {
  const io::Json j = run_json({"fitness", "--input", fixture("rising_rate_scenario.json")});
  EXPECT_EQ(field(j, "fitness", "breakeven_year"), "5");
  EXPECT_EQ(field(j, "fitness", "verdict"), "fails_deposit_features");
}

TEST(Cli, PeaceReport) {
  const io::Json j = run_json({"peace"});
  EXPECT_EQ(field(j, "origination", "price"), "10168961017.94");
  EXPECT_EQ(field(j, "origination", "discount"), "24831038982.06");
  const auto& cls = j.at("classification");
  ASSERT_EQ(cls.size(), 3u);
  for (const auto& row : cls) EXPECT_EQ(row["deposit_substitute"], false) << row["rule_set"];
  EXPECT_EQ(field(j, "deposit_substitute_branch", "category"), "final_withholding");
  const auto& holdings = j.at("holdings");
  ASSERT_EQ(holdings.size(), 3u);
  EXPECT_EQ(holdings[0]["sell_price"], "9521726172.96");
  EXPECT_EQ(holdings[1]["sell_price"], "11003544808.63");
  EXPECT_EQ(holdings[2]["sell_price"], "10473626276.10");
}

TEST(Cli, ClassifySyntheticLedger) {
  const io::Json j = run_json({"classify", "--input", fixture("synthetic_ledger_20.json")});
  const auto& rows = j.at("classification");
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_EQ(rows[0]["rule_set"], "statutory-origination");
  EXPECT_EQ(rows[0]["deposit_substitute"], false);
  EXPECT_EQ(rows[1]["rule_set"], "statutory-any");
  EXPECT_EQ(rows[1]["deposit_substitute"], true);
  EXPECT_EQ(rows[1]["triggering_transaction"], "resale-1");
  EXPECT_EQ(rows[2]["rule_set"], "proposed");
  EXPECT_EQ(rows[2]["deposit_substitute"], false);
}

TEST(Cli, RuleSelectionAndThreshold) {
  const io::Json j =
      run_json({"classify", "--input", fixture("peace.json"), "--rules", "statutory-any", "--threshold", "8"});
  const auto& rows = j.at("classification");
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_EQ(rows[0]["deposit_substitute"], true);
  EXPECT_EQ(rows[0]["triggering_transaction"], "secondary-sale-rcbc");
}

TEST(Cli, TaxRequest) {
  const io::Json j =
      run_json({"tax", "--input", fixture("peace_tax_request.json"), "--tax-rules", fixture("tax_rules.json")});
  EXPECT_EQ(field(j, "interest_income", "tax_due"), "4966000000.00");
  EXPECT_EQ(field(j, "trading_gain", "category"), "excluded_from_gross_income");
}

TEST(Cli, CurveDefaultsToHistoricalSpread) {
  const io::Json j = run_json({"curve"});
  EXPECT_NE(j.dump().find("0.0432"), std::string::npos);
}

TEST(Cli, MissingRequiredFlagIsUsageError) {
  const Outcome o = run({"price", "--input", fixture("peace.json")});
  EXPECT_EQ(o.code, cli::kUsageError);
  EXPECT_NE(o.err.find("--rate"), std::string::npos);
  EXPECT_EQ(run({}).code, cli::kUsageError);
  EXPECT_EQ(run({"bogus"}).code, cli::kUsageError);
  EXPECT_EQ(run({"path", "--input", fixture("rising_rate_scenario.json"), "--format", "xml"}).code, cli::kUsageError);
  EXPECT_EQ(run({"price", "--input", fixture("peace.json"), "--rate", "abc"}).code, cli::kUsageError);
}

TEST(Cli, HelpSucceeds) {
  const Outcome o = run({"--help"});
  EXPECT_EQ(o.code, 0);
  EXPECT_NE(o.out.find("peace"), std::string::npos);
}

TEST(Cli, DomainErrorExitsOne) {
  const Outcome o = run({"price", "--input", fixture("peace.json"), "--rate", "0.1", "--ttm", "11"});
  EXPECT_EQ(o.code, cli::kDomainError);
  EXPECT_NE(o.err.find("error:"), std::string::npos);
  EXPECT_EQ(run({"yield", "--input", fixture("peace.json"), "--price", "40000000000.00"}).code, cli::kDomainError);
}

TEST(Cli, MalformedDocumentNamesFileAndLine) {
  const std::string path = temp_path("bad.json");
  write_file(path, "{\n  \"instrument\": {\n    \"face_value\": ,\n  }\n}\n");
  const Outcome o = run({"price", "--input", path, "--rate", "0.1"});
  EXPECT_EQ(o.code, cli::kUsageError);
  EXPECT_NE(o.err.find(path + ":3"), std::string::npos) << o.err;
  std::filesystem::remove(path);
}

TEST(Cli, InvalidFieldNamesFileAndPointer) {
  io::Json j = io::load_json_file(fixture("peace.json"));
  j["instrument"]["face_value"] = "0.00";
  const std::string path = temp_path("zero_face.json");
  write_file(path, j.dump(2));
  const Outcome o = run({"peace", "--input", path});
  EXPECT_EQ(o.code, cli::kUsageError);
  EXPECT_NE(o.err.find(path + ":/instrument/face_value"), std::string::npos) << o.err;
  std::filesystem::remove(path);
}

TEST(Cli, MissingFileIsUsageError) {
  EXPECT_EQ(run({"path", "--input", "/nonexistent/doc.json"}).code, cli::kUsageError);
}

TEST(Cli, CsvAndJsonAgree) {
  const std::vector<std::string> base = {"path", "--input", fixture("rising_rate_scenario.json")};
  auto csv_args = base;
  csv_args.insert(csv_args.end(), {"--format", "csv"});
  const Outcome csv = run(csv_args);
  ASSERT_EQ(csv.code, 0);
  const io::Json j = run_json(base);
  const auto& rows = j.at("price_path");

  std::istringstream lines(csv.out);
  std::string line;
  std::vector<std::string> prices;
  bool in_path = false;
  while (std::getline(lines, line)) {
    if (line.rfind("# ", 0) == 0) {
      in_path = line == "# price_path";
      continue;
    }
    if (!in_path || line.empty() || line.rfind("year,", 0) == 0) continue;
    prices.push_back(line.substr(line.rfind(',') + 1));
  }
  ASSERT_EQ(prices.size(), rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    EXPECT_EQ(Money::from_pesos(prices[i]), Money::from_pesos(rows[i]["price"].get<std::string>()));
  }
}

TEST(Cli, OutputFileAndInputsUntouched) {
  const std::string input = fixture("rising_rate_scenario.json");
  const std::string before = io::read_text_file(input);
  const std::string out = temp_path("path_out.json");
  const Outcome o = run({"path", "--input", input, "--format", "json", "--out", out});
  ASSERT_EQ(o.code, 0);
  EXPECT_TRUE(o.out.empty());
  EXPECT_EQ(io::read_text_file(out), run({"path", "--input", input, "--format", "json"}).out);
  EXPECT_EQ(io::read_text_file(input), before);
  std::filesystem::remove(out);
}

TEST(Cli, GoldensAreDeterministic) {
  for (const auto& args : goldens()) {
    for (const char* format : {"table", "csv", "json"}) {
      auto a = args;
      a.insert(a.end(), {"--format", format});
      const Outcome first = run(a);
      const Outcome second = run(a);
      ASSERT_EQ(first.code, 0) << args[0] << ": " << first.err;
      EXPECT_EQ(first.out, second.out) << args[0] << " " << format;
    }
  }
}

TEST(CliBinary, ExitCodes) {
  auto status = [](const std::string& args) {
    const std::string command = std::string(DEPSUB_CLI_BINARY) + " " + args + " >/dev/null 2>&1";
    FILE* p = popen(command.c_str(), "r");
    if (p == nullptr) return -1;
    const int raw = pclose(p);
    return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  };
  EXPECT_EQ(status("path --input " + fixture("rising_rate_scenario.json")), 0);
  EXPECT_EQ(status("price --input " + fixture("peace.json")), 2);
  EXPECT_EQ(status("price --input " + fixture("peace.json") + " --rate 0.1 --ttm 11"), 1);
  EXPECT_EQ(status("path --input /nonexistent.json"), 2);
}
