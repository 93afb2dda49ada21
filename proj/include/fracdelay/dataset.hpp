#pragma once

// Tabular output shared by every command: a header row plus typed cells,
// with a JSON metadata block.  Doubles are written with 17 significant
// digits so a CSV or JSON file reproduces the in-memory values exactly.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"

namespace fracdelay {

/// monostate is an empty cell (a branch gap, an absent derivative).
using Cell = std::variant<std::monostate, double, std::int64_t, bool, std::string>;

struct EmittedDataset {
  static constexpr int kSchemaVersion = 1;

  int schema_version = kSchemaVersion;
  /// Name used for the output file when a command emits several datasets.
  std::string name;
  nlohmann::json metadata = nlohmann::json::object();
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  void add_row(std::vector<Cell> row);

  bool operator==(const EmittedDataset&) const = default;
};

/// "%.17g"; inf and nan as "inf", "-inf", "nan".  JSON numbers use the
/// shortest form that parses back to the same double.
std::string format_double(double v);

void write_csv(std::ostream& os, const EmittedDataset& ds);
void write_json(std::ostream& os, const EmittedDataset& ds);

nlohmann::json to_json(const EmittedDataset& ds);
/// Inverse of to_json.  Integers come back as int64, other numbers as double.
EmittedDataset dataset_from_json(const nlohmann::json& j);

}  // namespace fracdelay
