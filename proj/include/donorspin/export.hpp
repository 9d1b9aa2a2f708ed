#pragma once

// CSV and JSON serialization of SweepTable. Numbers are written with 12
// significant digits; reading either format back gives a table equal to the
// original at that precision.

#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "donorspin/sweep.hpp"

namespace donorspin {

enum class Format { Csv, Json };

inline Format format_by_name(std::string_view name) {
  if (name == "csv") return Format::Csv;
  if (name == "json") return Format::Json;
  throw SpecError("unknown format '" + std::string(name) + "' (expected csv or json)");
}

inline std::string format_value(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

/// Value as it survives a round trip through the text formats.
inline double round_to_precision(double v) {
  if (!std::isfinite(v)) return v;
  return std::strtod(format_value(v).c_str(), nullptr);
}

inline void write_csv(const SweepTable& table, std::ostream& out) {
  for (std::size_t c = 0; c < table.columns.size(); ++c) {
    out << (c ? "," : "") << table.columns[c].name;
  }
  out << "\n";
  for (std::size_t r = 0; r < table.rows(); ++r) {
    for (std::size_t c = 0; c < table.columns.size(); ++c) {
      out << (c ? "," : "") << format_value(table.columns[c].values[r]);
    }
    out << "\n";
  }
}

inline nlohmann::ordered_json to_json(const SweepTable& table) {
  nlohmann::ordered_json meta;
  meta["spec"] = table.meta.spec;
  meta["constant_set"] = table.meta.constant_set;
  meta["version"] = table.meta.version;
  auto flags = nlohmann::ordered_json::array();
  for (const auto& [row, message] : table.meta.flags) {
    flags.push_back({{"row", row}, {"message", message}});
  }
  meta["flags"] = flags;

  nlohmann::ordered_json columns = nlohmann::ordered_json::object();
  for (const auto& col : table.columns) {
    auto values = nlohmann::ordered_json::array();
    for (double v : col.values) {
      if (std::isfinite(v)) {
        values.push_back(round_to_precision(v));
      } else {
        values.push_back(nullptr);
      }
    }
    columns[col.name] = values;
  }
  return {{"meta", meta}, {"columns", columns}};
}

inline void write_json(const SweepTable& table, std::ostream& out) {
  out << to_json(table).dump(2) << "\n";
}

inline void write_table(const SweepTable& table, Format format, std::ostream& out) {
  if (format == Format::Csv) {
    write_csv(table, out);
  } else {
    write_json(table, out);
  }
}

/// Writes to path; throws IoError when the file cannot be written.
inline void export_table(const SweepTable& table, Format format, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  write_table(table, format, out);
  out.flush();
  if (!out) throw IoError("failed writing '" + path + "'");
}

inline SweepTable read_json(std::istream& in) {
  nlohmann::ordered_json doc;
  try {
    doc = nlohmann::ordered_json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw IoError(std::string("malformed JSON table: ") + e.what());
  }
  SweepTable table;
  try {
    const auto& meta = doc.at("meta");
    table.meta.spec = meta.at("spec").get<std::string>();
    table.meta.constant_set = meta.at("constant_set").get<std::string>();
    table.meta.version = meta.at("version").get<std::string>();
    if (meta.contains("flags")) {
      for (const auto& f : meta["flags"]) {
        table.meta.flags[f.at("row").get<std::size_t>()] = f.at("message").get<std::string>();
      }
    }
    for (const auto& [name, values] : doc.at("columns").items()) {
      SweepColumn col{name, {}};
      for (const auto& v : values) col.values.push_back(v.is_null() ? NAN : v.get<double>());
      table.columns.push_back(std::move(col));
    }
  } catch (const nlohmann::json::exception& e) {
    throw IoError(std::string("JSON table has the wrong shape: ") + e.what());
  }
  return table;
}

/// Reads a CSV table. CSV carries no meta block, so meta stays empty.
inline SweepTable read_csv(std::istream& in) {
  SweepTable table;
  std::string line;
  if (!std::getline(in, line)) throw IoError("empty CSV table");
  {
    std::istringstream header(line);
    std::string name;
    while (std::getline(header, name, ',')) table.columns.push_back({name, {}});
  }
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string cell;
    std::size_t c = 0;
    while (std::getline(row, cell, ',')) {
      if (c >= table.columns.size()) throw IoError("CSV row wider than header");
      char* end = nullptr;
      const double v = std::strtod(cell.c_str(), &end);
      if (cell.empty() || *end != '\0') throw IoError("bad CSV number '" + cell + "'");
      table.columns[c++].values.push_back(v);
    }
    if (c != table.columns.size()) throw IoError("CSV row narrower than header");
  }
  return table;
}

/// Equality at the exported precision; NaN equals NaN.
inline bool tables_equal(const SweepTable& a, const SweepTable& b) {
  if (a.columns.size() != b.columns.size()) return false;
  for (std::size_t c = 0; c < a.columns.size(); ++c) {
    const auto& x = a.columns[c];
    const auto& y = b.columns[c];
    if (x.name != y.name || x.values.size() != y.values.size()) return false;
    for (std::size_t r = 0; r < x.values.size(); ++r) {
      if (format_value(x.values[r]) != format_value(y.values[r])) return false;
    }
  }
  return true;
}

}  // namespace donorspin
