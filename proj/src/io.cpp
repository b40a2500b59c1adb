#include "fpp/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <system_error>
#include <unistd.h>

#include "fpp/errors.hpp"

namespace fpp {

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

std::string format_optional(const std::optional<double>& v) { return v ? format_double(*v) : std::string(); }

double parse_double(std::string_view text) {
  double v = 0.0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size())
    throw IoError("not a number: '" + std::string(text) + "'");
  return v;
}

std::size_t CsvTable::column(std::string_view name) const {
  for (std::size_t c = 0; c < header.size(); ++c)
    if (header[c] == name) return c;
  throw IoError("CSV has no column '" + std::string(name) + "'");
}

double CsvTable::number(std::size_t row, std::string_view name) const {
  return parse_double(rows.at(row).at(column(name)));
}

namespace {

std::vector<std::string> split_line(std::string_view line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t comma = line.find(',', start);
    out.emplace_back(line.substr(start, comma == std::string_view::npos ? line.npos : comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

}  // namespace

std::string to_csv(const CsvTable& table) {
  std::string out;
  auto line = [&](const std::vector<std::string>& fields) {
    for (std::size_t c = 0; c < fields.size(); ++c) {
      if (c) out += ',';
      out += fields[c];
    }
    out += '\n';
  };
  line(table.header);
  for (const auto& row : table.rows) line(row);
  return out;
}

CsvTable parse_csv(std::string_view text) {
  CsvTable table;
  std::size_t start = 0;
  bool first = true;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    start = end + 1;
    if (line.empty()) continue;
    auto fields = split_line(line);
    if (first) {
      table.header = std::move(fields);
      first = false;
    } else {
      if (fields.size() != table.header.size()) throw IoError("CSV row width does not match header");
      table.rows.push_back(std::move(fields));
    }
  }
  if (first) throw IoError("CSV is empty");
  return table;
}

void write_atomic(const std::filesystem::path& path, std::string_view content) {
  auto tmp = path;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + tmp.string() + " for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) {
      std::error_code ec;
      std::filesystem::remove(tmp, ec);
      throw IoError("write to " + tmp.string() + " failed");
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw IoError("cannot move output into " + path.string());
  }
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

WeightModel model_from_json(const nlohmann::json& j) {
  WeightModel model;
  try {
    const std::string family = j.value("family", std::string("exp"));
    if (family == "exp") {
      model.family = Exponential{j.value("a", 1.0)};
    } else if (family == "uniform") {
      model.family = UniformDensity{j.value("a", 1.0)};
    } else if (family == "table") {
      if (!j.contains("points")) throw ConfigError("table model needs \"points\"");
      std::vector<std::pair<double, double>> points;
      for (const auto& p : j.at("points")) {
        if (!p.is_array() || p.size() != 2) throw ConfigError("table points must be [y, x] pairs");
        points.emplace_back(p[0].get<double>(), p[1].get<double>());
      }
      model.family = QuantileTable(std::move(points));
    } else {
      throw ConfigError("unknown weight family '" + family + "'");
    }
    if (j.contains("seed")) model.root_seed = j.at("seed").get<std::uint64_t>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("bad weight model: ") + e.what());
  } catch (const DomainError& e) {
    throw ConfigError(std::string("bad weight model: ") + e.what());
  }
  if (const auto* f = std::get_if<Exponential>(&model.family); f && !(f->a > 0.0))
    throw ConfigError("rate a must be positive");
  if (const auto* f = std::get_if<UniformDensity>(&model.family); f && !(f->a > 0.0))
    throw ConfigError("rate a must be positive");
  return model;
}

nlohmann::json model_to_json(const WeightModel& model) {
  nlohmann::json j;
  j["family"] = family_name(model.family);
  if (const auto* f = std::get_if<Exponential>(&model.family)) j["a"] = f->a;
  if (const auto* f = std::get_if<UniformDensity>(&model.family)) j["a"] = f->a;
  if (const auto* f = std::get_if<QuantileTable>(&model.family)) {
    j["points"] = nlohmann::json::array();
    for (const auto& [y, x] : f->points()) j["points"].push_back({y, x});
  }
  j["seed"] = model.root_seed;
  return j;
}

}  // namespace fpp
