#include "fracdelay/dataset.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

#include "fracdelay/errors.hpp"

namespace fracdelay {

void EmittedDataset::add_row(std::vector<Cell> row) {
  if (row.size() != columns.size()) {
    throw ComputationError("row has " + std::to_string(row.size()) + " cells, dataset '" + name + "' has " +
                           std::to_string(columns.size()) + " columns");
  }
  rows.push_back(std::move(row));
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string cell_text(const Cell& c) {
  struct {
    std::string operator()(std::monostate) const { return ""; }
    std::string operator()(double v) const { return format_double(v); }
    std::string operator()(std::int64_t v) const { return std::to_string(v); }
    std::string operator()(bool v) const { return v ? "true" : "false"; }
    std::string operator()(const std::string& v) const { return csv_field(v); }
  } visit;
  return std::visit(visit, c);
}

// JSON has no inf/nan; those travel as strings.
nlohmann::json cell_json(const Cell& c) {
  struct {
    nlohmann::json operator()(std::monostate) const { return nullptr; }
    nlohmann::json operator()(double v) const {
      if (!std::isfinite(v)) return format_double(v);
      return v;
    }
    nlohmann::json operator()(std::int64_t v) const { return v; }
    nlohmann::json operator()(bool v) const { return v; }
    nlohmann::json operator()(const std::string& v) const { return v; }
  } visit;
  return std::visit(visit, c);
}

}  // namespace

void write_csv(std::ostream& os, const EmittedDataset& ds) {
  for (std::size_t i = 0; i < ds.columns.size(); ++i) os << (i ? "," : "") << csv_field(ds.columns[i]);
  os << '\n';
  for (const auto& row : ds.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << cell_text(row[i]);
    os << '\n';
  }
}

nlohmann::json to_json(const EmittedDataset& ds) {
  nlohmann::json j;
  j["schema_version"] = ds.schema_version;
  j["name"] = ds.name;
  j["metadata"] = ds.metadata;
  j["columns"] = ds.columns;
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : ds.rows) {
    nlohmann::json r = nlohmann::json::array();
    for (const auto& c : row) r.push_back(cell_json(c));
    rows.push_back(std::move(r));
  }
  j["rows"] = std::move(rows);
  return j;
}

void write_json(std::ostream& os, const EmittedDataset& ds) { os << to_json(ds).dump(2) << '\n'; }

EmittedDataset dataset_from_json(const nlohmann::json& j) {
  EmittedDataset ds;
  try {
    ds.schema_version = j.at("schema_version").get<int>();
    ds.name = j.at("name").get<std::string>();
    ds.metadata = j.at("metadata");
    ds.columns = j.at("columns").get<std::vector<std::string>>();
    for (const auto& r : j.at("rows")) {
      std::vector<Cell> row;
      for (const auto& c : r) {
        if (c.is_null()) row.emplace_back(std::monostate{});
        else if (c.is_boolean()) row.emplace_back(c.get<bool>());
        else if (c.is_number_integer()) row.emplace_back(c.get<std::int64_t>());
        else if (c.is_number()) row.emplace_back(c.get<double>());
        else if (c.is_string()) {
          const auto s = c.get<std::string>();
          if (s == "nan") row.emplace_back(std::nan(""));
          else if (s == "inf") row.emplace_back(HUGE_VAL);
          else if (s == "-inf") row.emplace_back(-HUGE_VAL);
          else row.emplace_back(s);
        } else {
          throw DomainError("unsupported JSON cell");
        }
      }
      ds.rows.push_back(std::move(row));
    }
  } catch (const nlohmann::json::exception& e) {
    throw DomainError(std::string("malformed dataset JSON: ") + e.what());
  }
  return ds;
}

}  // namespace fracdelay
