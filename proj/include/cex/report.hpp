#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "cex/rational.hpp"

namespace cex {

inline constexpr const char* kToolVersion = "0.1.0";

/// One verified claim. `status` is pass/fail/inconclusive; pass means the
/// recorded comparison holds at the recorded tolerance.
struct Verdict {
  std::string claim;
  std::string status;
  double lhs = 0.0;
  double rhs = 0.0;
  double tolerance = 0.0;
  std::string notes;

  static Verdict make(std::string claim, bool pass, double lhs, double rhs, double tol,
                      std::string notes = "") {
    return Verdict{std::move(claim), pass ? "pass" : "fail", lhs, rhs, tol, std::move(notes)};
  }
};

/// Table cell: number, integer, exact rational, or text.
using Cell = std::variant<double, std::int64_t, Rational, std::string>;

struct Table {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

struct Report {
  std::vector<std::pair<std::string, Cell>> config;  // echoed run configuration, insertion order
  std::vector<Verdict> verdicts;
  std::vector<Table> tables;

  bool all_pass() const {
    for (const auto& v : verdicts)
      if (v.status != "pass") return false;
    return true;
  }
};

namespace detail {

/// Numbers rendered with up to 17 significant digits (round-trip exact).
inline std::string format_double(double v) {
  if (v != v) return "\"nan\"";
  if (v == HUGE_VAL) return "\"inf\"";
  if (v == -HUGE_VAL) return "\"-inf\"";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

inline std::string json_escape(const std::string& s) {
  std::string out;
  out.reserve(s.size() + 2);
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\r': out += "\\r"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof(buf), "\\u%04x", static_cast<unsigned>(static_cast<unsigned char>(c)));
          out += buf;
        } else {
          out.push_back(c);
        }
    }
  }
  return out;
}

inline std::string cell_to_json(const Cell& c) {
  if (std::holds_alternative<double>(c)) return format_double(std::get<double>(c));
  if (std::holds_alternative<std::int64_t>(c)) return std::to_string(std::get<std::int64_t>(c));
  if (std::holds_alternative<Rational>(c)) {
    const Rational& r = std::get<Rational>(c);
    return "{\"num\": " + int128_to_string(r.num()) + ", \"den\": " + int128_to_string(r.den()) + "}";
  }
  return "\"" + json_escape(std::get<std::string>(c)) + "\"";
}

inline std::string cell_to_csv(const Cell& c) {
  std::string raw;
  if (std::holds_alternative<double>(c)) {
    raw = format_double(std::get<double>(c));
    if (!raw.empty() && raw.front() == '"') raw = raw.substr(1, raw.size() - 2);
  } else if (std::holds_alternative<std::int64_t>(c)) {
    raw = std::to_string(std::get<std::int64_t>(c));
  } else if (std::holds_alternative<Rational>(c)) {
    raw = std::get<Rational>(c).str();
  } else {
    raw = std::get<std::string>(c);
  }
  bool quote = raw.find_first_of(",\"\n\r") != std::string::npos;
  if (!quote) return raw;
  std::string out = "\"";
  for (char ch : raw) {
    if (ch == '"') out += "\"\"";
    else out.push_back(ch);
  }
  out += "\"";
  return out;
}

}  // namespace detail

/// Deterministic JSON: insertion-ordered keys, 17-significant-digit numbers,
/// exact rationals as {"num": ..., "den": ...}.
inline std::string render_json(const Report& rep) {
  std::string out = "{\n  \"tool_version\": \"";
  out += kToolVersion;
  out += "\",\n  \"config\": {";
  for (std::size_t i = 0; i < rep.config.size(); ++i) {
    out += (i == 0 ? "\n" : ",\n");
    out += "    \"" + detail::json_escape(rep.config[i].first) + "\": " + detail::cell_to_json(rep.config[i].second);
  }
  out += "\n  },\n  \"verdicts\": [";
  for (std::size_t i = 0; i < rep.verdicts.size(); ++i) {
    const Verdict& v = rep.verdicts[i];
    out += (i == 0 ? "\n" : ",\n");
    out += "    {\"claim\": \"" + detail::json_escape(v.claim) + "\", \"status\": \"" + v.status +
           "\", \"lhs\": " + detail::format_double(v.lhs) + ", \"rhs\": " + detail::format_double(v.rhs) +
           ", \"tolerance\": " + detail::format_double(v.tolerance) + ", \"notes\": \"" +
           detail::json_escape(v.notes) + "\"}";
  }
  out += "\n  ],\n  \"tables\": [";
  for (std::size_t t = 0; t < rep.tables.size(); ++t) {
    const Table& tb = rep.tables[t];
    out += (t == 0 ? "\n" : ",\n");
    out += "    {\"name\": \"" + detail::json_escape(tb.name) + "\", \"columns\": [";
    for (std::size_t i = 0; i < tb.columns.size(); ++i) {
      if (i) out += ", ";
      out += "\"" + detail::json_escape(tb.columns[i]) + "\"";
    }
    out += "], \"rows\": [";
    for (std::size_t r = 0; r < tb.rows.size(); ++r) {
      if (r) out += ", ";
      out += "[";
      for (std::size_t c = 0; c < tb.rows[r].size(); ++c) {
        if (c) out += ", ";
        out += detail::cell_to_json(tb.rows[r][c]);
      }
      out += "]";
    }
    out += "]}";
  }
  out += "\n  ]\n}\n";
  return out;
}

/// RFC-4180-style CSV, one table per rendered unit; the verdicts come first
/// as a synthetic table.
inline std::vector<std::pair<std::string, std::string>> render_csv(const Report& rep) {
  std::vector<std::pair<std::string, std::string>> files;
  {
    std::string csv = "claim,status,lhs,rhs,tolerance,notes\r\n";
    for (const auto& v : rep.verdicts) {
      std::vector<Cell> row{v.claim, v.status, v.lhs, v.rhs, v.tolerance, v.notes};
      for (std::size_t i = 0; i < row.size(); ++i) {
        if (i) csv += ",";
        csv += detail::cell_to_csv(row[i]);
      }
      csv += "\r\n";
    }
    files.emplace_back("verdicts", std::move(csv));
  }
  for (const auto& tb : rep.tables) {
    std::string csv;
    for (std::size_t i = 0; i < tb.columns.size(); ++i) {
      if (i) csv += ",";
      csv += detail::cell_to_csv(Cell{tb.columns[i]});
    }
    csv += "\r\n";
    for (const auto& row : tb.rows) {
      for (std::size_t i = 0; i < row.size(); ++i) {
        if (i) csv += ",";
        csv += detail::cell_to_csv(row[i]);
      }
      csv += "\r\n";
    }
    files.emplace_back(tb.name, std::move(csv));
  }
  return files;
}

}  // namespace cex
