#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "fpp/weights.hpp"

namespace fpp {

/// Shortest-round-trip-safe text for a double: 17 significant digits, '.'
/// decimal point, independent of the global locale.
std::string format_double(double v);
std::string format_optional(const std::optional<double>& v);
/// Locale-independent parse; IoError on malformed input.
double parse_double(std::string_view text);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::size_t column(std::string_view name) const;  // IoError if absent
  double number(std::size_t row, std::string_view name) const;
};

std::string to_csv(const CsvTable& table);
/// Reads what to_csv writes (no quoting; fields never contain ',' or newlines).
CsvTable parse_csv(std::string_view text);

/// Writes through a temporary sibling and renames it into place, so readers
/// see either the old file or the complete new one.
void write_atomic(const std::filesystem::path& path, std::string_view content);
std::string read_file(const std::filesystem::path& path);

/// {"family":"exp","a":1.0} | {"family":"uniform","a":1.0} |
/// {"family":"table","points":[[y,x],...]}, with an optional "seed".
WeightModel model_from_json(const nlohmann::json& j);
nlohmann::json model_to_json(const WeightModel& model);

}  // namespace fpp
