#ifndef DEPSUB_IO_REPORT_HPP
#define DEPSUB_IO_REPORT_HPP

// One report model, three renderers: aligned text tables, CSV and JSON.

#include <algorithm>
#include <ostream>
#include <sstream>
#include <string>
#include <type_traits>
#include <utility>
#include <variant>
#include <vector>

#include <json.hpp>

#include "depsub/core.hpp"

namespace depsub::io {

using Cell = std::variant<std::monostate, std::string, Money, Rate, Tenor, long long, bool>;

enum class Format { Table, Csv, Json };

struct Section {
  enum class Kind { Fields, Table };

  std::string name;
  Kind kind = Kind::Fields;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  static Section fields(std::string name) { return Section{std::move(name), Kind::Fields, {"field", "value"}, {}}; }
  static Section table(std::string name, std::vector<std::string> columns) {
    return Section{std::move(name), Kind::Table, std::move(columns), {}};
  }

  Section& add(std::string key, Cell value) {
    rows.push_back({Cell{std::move(key)}, std::move(value)});
    return *this;
  }
  Section& add_row(std::vector<Cell> row) {
    rows.push_back(std::move(row));
    return *this;
  }
};

struct Report {
  std::string title;
  std::vector<Section> sections;

  Section& add(Section s) {
    sections.push_back(std::move(s));
    return sections.back();
  }
};

namespace detail {

inline bool is_numeric(const Cell& c) {
  return std::holds_alternative<Money>(c) || std::holds_alternative<Rate>(c) || std::holds_alternative<Tenor>(c) ||
         std::holds_alternative<long long>(c);
}

// Text table form: grouped money, rates in percent.
inline std::string display(const Cell& c) {
  return std::visit(
      [](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, std::monostate>) return "-";
        else if constexpr (std::is_same_v<T, std::string>) return v;
        else if constexpr (std::is_same_v<T, Money>) return v.to_grouped_string();
        else if constexpr (std::is_same_v<T, Rate>) return v.to_percent_string();
        else if constexpr (std::is_same_v<T, Tenor>) return v.to_string();
        else if constexpr (std::is_same_v<T, long long>) return std::to_string(v);
        else return v ? "yes" : "no";
      },
      c);
}

// Machine form shared by CSV and JSON strings.
inline std::string plain(const Cell& c) {
  return std::visit(
      [](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, std::monostate>) return "";
        else if constexpr (std::is_same_v<T, std::string>) return v;
        else if constexpr (std::is_same_v<T, Money>) return v.to_string();
        else if constexpr (std::is_same_v<T, Rate>) return v.to_string();
        else if constexpr (std::is_same_v<T, Tenor>) return v.to_string();
        else if constexpr (std::is_same_v<T, long long>) return std::to_string(v);
        else return v ? "true" : "false";
      },
      c);
}

inline nlohmann::ordered_json to_json_value(const Cell& c) {
  using J = nlohmann::ordered_json;
  return std::visit(
      [](const auto& v) -> J {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, std::monostate>) return nullptr;
        else if constexpr (std::is_same_v<T, std::string>) return v;
        else if constexpr (std::is_same_v<T, Money> || std::is_same_v<T, Rate>) return v.to_string();
        else if constexpr (std::is_same_v<T, Tenor>) {
          return v.is_whole_years() ? J(v.whole_years()) : J(v.in_years());
        } else return v;
      },
      c);
}

inline std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

}  // namespace detail

inline void render_table(const Report& report, std::ostream& out) {
  out << report.title << "\n";
  for (const auto& section : report.sections) {
    out << "\n[" << section.name << "]\n";
    if (section.kind == Section::Kind::Fields) {
      std::size_t key_width = 0;
      for (const auto& row : section.rows) key_width = std::max(key_width, detail::display(row[0]).size());
      for (const auto& row : section.rows) {
        const std::string key = detail::display(row[0]);
        out << "  " << key << std::string(key_width - key.size(), ' ') << "  " << detail::display(row[1]) << "\n";
      }
      continue;
    }
    std::vector<std::size_t> widths;
    for (const auto& col : section.columns) widths.push_back(col.size());
    for (const auto& row : section.rows) {
      for (std::size_t i = 0; i < row.size() && i < widths.size(); ++i) {
        widths[i] = std::max(widths[i], detail::display(row[i]).size());
      }
    }
    auto emit = [&](const std::vector<std::string>& texts, const std::vector<bool>& right) {
      std::string line = " ";
      for (std::size_t i = 0; i < texts.size(); ++i) {
        const std::string pad(widths[i] - texts[i].size(), ' ');
        line += " ";
        line += right[i] ? pad + texts[i] : texts[i] + pad;
      }
      while (!line.empty() && line.back() == ' ') line.pop_back();
      out << line << "\n";
    };
    std::vector<bool> right(section.columns.size(), false);
    for (std::size_t i = 0; i < right.size(); ++i) {
      right[i] = std::any_of(section.rows.begin(), section.rows.end(),
                             [&](const auto& row) { return i < row.size() && detail::is_numeric(row[i]); });
    }
    emit(section.columns, right);
    std::vector<std::string> rule;
    for (auto w : widths) rule.emplace_back(w, '-');
    emit(rule, std::vector<bool>(widths.size(), false));
    for (const auto& row : section.rows) {
      std::vector<std::string> texts;
      for (const auto& cell : row) texts.push_back(detail::display(cell));
      emit(texts, right);
    }
  }
}

inline void render_csv(const Report& report, std::ostream& out) {
  bool first = true;
  for (const auto& section : report.sections) {
    if (!first) out << "\n";
    first = false;
    out << "# " << section.name << "\n";
    for (std::size_t i = 0; i < section.columns.size(); ++i) {
      out << (i ? "," : "") << detail::csv_escape(section.columns[i]);
    }
    out << "\n";
    for (const auto& row : section.rows) {
      for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << detail::csv_escape(detail::plain(row[i]));
      out << "\n";
    }
  }
}

inline nlohmann::ordered_json report_to_json(const Report& report) {
  nlohmann::ordered_json doc;
  doc["report"] = report.title;
  for (const auto& section : report.sections) {
    if (section.kind == Section::Kind::Fields) {
      nlohmann::ordered_json obj = nlohmann::ordered_json::object();
      for (const auto& row : section.rows) obj[detail::plain(row[0])] = detail::to_json_value(row[1]);
      doc[section.name] = std::move(obj);
    } else {
      nlohmann::ordered_json rows = nlohmann::ordered_json::array();
      for (const auto& row : section.rows) {
        nlohmann::ordered_json obj = nlohmann::ordered_json::object();
        for (std::size_t i = 0; i < row.size() && i < section.columns.size(); ++i) {
          obj[section.columns[i]] = detail::to_json_value(row[i]);
        }
        rows.push_back(std::move(obj));
      }
      doc[section.name] = std::move(rows);
    }
  }
  return doc;
}

inline void render_json(const Report& report, std::ostream& out) { out << report_to_json(report).dump(2) << "\n"; }

inline void render(const Report& report, Format format, std::ostream& out) {
  switch (format) {
    case Format::Table: render_table(report, out); break;
    case Format::Csv: render_csv(report, out); break;
    case Format::Json: render_json(report, out); break;
  }
}

inline std::string render_to_string(const Report& report, Format format) {
  std::ostringstream out;
  render(report, format, out);
  return out.str();
}

}  // namespace depsub::io

#endif  // DEPSUB_IO_REPORT_HPP
