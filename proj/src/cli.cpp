#include "fpp/cli.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <variant>

#include <CLI11.hpp>

#include "fpp/bounds.hpp"
#include "fpp/errors.hpp"
#include "fpp/experiments.hpp"
#include "fpp/io.hpp"

namespace fpp {

using nlohmann::json;

namespace {

enum class KeyType { IntList, Real, Count, Seed, Text, Points };

const std::map<std::string, KeyType>& key_types() {
  static const std::map<std::string, KeyType> types = {
      {"d", KeyType::IntList},   {"a", KeyType::Real},      {"N", KeyType::Count},
      {"family", KeyType::Text}, {"points", KeyType::Points}, {"seed", KeyType::Seed},
      {"reps", KeyType::Count},  {"box", KeyType::Count},   {"cap", KeyType::Count},
      {"mode", KeyType::Text},   {"eta", KeyType::Real},    {"M", KeyType::Real},
      {"n", KeyType::Count},     {"grid", KeyType::Count},  {"threads", KeyType::Count},
      {"out", KeyType::Text},    {"format", KeyType::Text},
  };
  return types;
}

const std::map<std::string, std::vector<std::string>>& command_table() {
  static const std::map<std::string, std::vector<std::string>> table = {
      {"bounds", {"d", "a", "N"}},
      {"sample-slab", {"d", "family", "a", "points", "seed", "reps", "cap", "mode", "threads"}},
      {"sample-eden", {"d", "family", "a", "seed", "reps", "mode", "threads"}},
      {"concentration", {"d", "family", "a", "points", "seed", "reps", "eta", "cap", "threads"}},
      {"subadd", {"d", "family", "a", "points", "seed", "reps", "n", "box", "cap", "threads"}},
      {"search-cross", {"d", "family", "a", "points", "seed", "reps", "cap", "threads"}},
      {"ui-tail", {"d", "family", "a", "points", "seed", "reps", "M", "cap", "threads"}},
      {"couple-check", {"family", "a", "points", "grid"}},
  };
  return table;
}

json parse_int_list(const std::string& text) {
  json out = json::array();
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    long v = 0;
    try {
      v = std::stol(item, &used);
    } catch (const std::exception&) {
      throw ConfigError("'" + text + "' is not a list of integers");
    }
    if (used != item.size()) throw ConfigError("'" + text + "' is not a list of integers");
    out.push_back(v);
  }
  if (out.empty()) throw ConfigError("empty integer list");
  return out;
}

// Coerces a flag string or a config-file value to the key's JSON type.
json coerce(const std::string& key, const json& raw) {
  const auto it = key_types().find(key);
  if (it == key_types().end()) throw ConfigError("unknown parameter '" + key + "'");
  try {
    switch (it->second) {
      case KeyType::IntList:
        if (raw.is_string()) return parse_int_list(raw.get<std::string>());
        if (raw.is_number_integer()) return json::array({raw});
        if (raw.is_array()) {
          for (const auto& v : raw)
            if (!v.is_number_integer()) throw ConfigError("'" + key + "' must hold integers");
          return raw;
        }
        break;
      case KeyType::Real:
        if (raw.is_string()) return parse_double(raw.get<std::string>());
        if (raw.is_number()) return raw.get<double>();
        break;
      case KeyType::Count:
      case KeyType::Seed:
        if (raw.is_string()) {
          const std::string s = raw.get<std::string>();
          std::size_t used = 0;
          const unsigned long long v = std::stoull(s, &used);
          if (used != s.size() || s.front() == '-') break;
          return v;
        }
        if (raw.is_number_unsigned()) return raw;
        if (raw.is_number_integer() && raw.get<long long>() >= 0) return raw.get<unsigned long long>();
        break;
      case KeyType::Text:
        if (raw.is_string()) return raw;
        break;
      case KeyType::Points:
        if (raw.is_string()) return json::parse(raw.get<std::string>());
        if (raw.is_array()) return raw;
        break;
    }
  } catch (const Error&) {
    throw ConfigError("bad value for '" + key + "': " + raw.dump());
  } catch (const std::exception&) {
    throw ConfigError("bad value for '" + key + "': " + raw.dump());
  }
  throw ConfigError("bad value for '" + key + "': " + raw.dump());
}

// ---------------------------------------------------------------------------
// Output tables: one header, typed cells, rendered to CSV or JSON.

using Cell = std::variant<std::monostate, double, long long, unsigned long long, std::string>;

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<Cell>> rows;
};

Cell opt(const std::optional<double>& v) { return v ? Cell{*v} : Cell{}; }
Cell count(std::size_t v) { return Cell{static_cast<unsigned long long>(v)}; }

std::string render_csv(const Table& t) {
  CsvTable csv;
  csv.header = t.header;
  for (const auto& row : t.rows) {
    std::vector<std::string> fields;
    for (const auto& c : row) {
      fields.push_back(std::visit(
          [](const auto& v) -> std::string {
            using V = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<V, std::monostate>) return "";
            else if constexpr (std::is_same_v<V, double>) return format_double(v);
            else if constexpr (std::is_same_v<V, std::string>) return v;
            else return std::to_string(v);
          },
          c));
    }
    csv.rows.push_back(std::move(fields));
  }
  return to_csv(csv);
}

json render_json(const RunConfig& config, const Table& t) {
  json rows = json::array();
  for (const auto& row : t.rows) {
    json obj = json::object();
    for (std::size_t c = 0; c < row.size(); ++c) {
      std::visit(
          [&](const auto& v) {
            using V = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<V, std::monostate>) obj[t.header[c]] = nullptr;
            else obj[t.header[c]] = v;
          },
          row[c]);
    }
    rows.push_back(std::move(obj));
  }
  json params = config.params;
  params.erase("threads");
  return json{{"command", config.command}, {"params", params}, {"results", rows}};
}

// ---------------------------------------------------------------------------

struct Params {
  const json& p;

  bool has(const char* key) const { return p.contains(key); }
  double real(const char* key, double fallback) const { return has(key) ? p.at(key).get<double>() : fallback; }
  unsigned long long count(const char* key, unsigned long long fallback) const {
    return has(key) ? p.at(key).get<unsigned long long>() : fallback;
  }
  std::string text(const char* key, const std::string& fallback) const {
    return has(key) ? p.at(key).get<std::string>() : fallback;
  }
  std::vector<int> dims() const {
    if (!has("d")) throw ConfigError("missing required parameter 'd'");
    std::vector<int> out;
    for (const auto& v : p.at("d")) {
      const long long d = v.get<long long>();
      if (d < 2 || d > 100'000'000) throw ConfigError("dimensions must lie in [2, 1e8]");
      out.push_back(static_cast<int>(d));
    }
    return out;
  }
  WeightModel model() const {
    json m = json::object();
    m["family"] = text("family", "exp");
    if (has("a")) m["a"] = p.at("a");
    if (has("points")) m["points"] = p.at("points");
    if (has("seed")) m["seed"] = p.at("seed");
    return model_from_json(m);
  }
  ExperimentConfig experiment() const {
    ExperimentConfig c;
    c.d_grid = dims();
    c.model = model();
    c.root_seed = c.model.root_seed;
    c.replicates = count("reps", 1000);
    c.box_radius = static_cast<int>(count("box", 8));
    c.budget_cap = count("cap", 10'000'000);
    c.threads = static_cast<unsigned>(count("threads", default_threads()));
    if (c.replicates < 1) throw ConfigError("reps must be at least 1");
    return c;
  }
};

Table bounds_table(const Params& p) {
  const double a = p.real("a", 1.0);
  if (!(a > 0.0)) throw ConfigError("a must be positive");
  Table t{{"d", "a", "N", "ub1", "ub1Tail", "ub2", "ub2Tail", "ratio1", "ratio2", "asymptote"}, {}};
  for (int d : p.dims()) {
    const std::size_t n = p.has("N") ? p.count("N", 0) : default_truncation(d);
    if (n < 2) throw ConfigError("N must be at least 2");
    const BoundReport r = bound_report(d, a, n);
    t.rows.push_back({Cell{static_cast<long long>(d)}, a, count(n), r.ub1, r.ub1_tail, r.ub2, r.ub2_tail,
                      r.ratio1, r.ratio2, r.asymptote});
  }
  return t;
}

Table sample_table(const Params& p, Sampler sampler) {
  const ExperimentConfig c = p.experiment();
  const std::string mode = p.text("mode", "summary");
  if (mode != "summary" && mode != "raw") throw ConfigError("mode must be summary or raw");
  const double a = density_at_zero(c.model.family);
  if (mode == "raw") {
    Table t{{"d", "replicate", "seed", "value", "settled", "exitVertex"}, {}};
    for (int d : c.d_grid) {
      const auto samples = collect_samples(c, d, sampler);
      for (std::size_t r = 0; r < samples.size(); ++r) {
        std::string exit;
        for (auto x : samples[r].exit_vertex.coords()) exit += (exit.empty() ? "" : ";") + std::to_string(x);
        t.rows.push_back({Cell{static_cast<long long>(d)}, count(r), Cell{static_cast<unsigned long long>(samples[r].seed_used)},
                          samples[r].value, count(samples[r].settled_count), exit});
      }
    }
    return t;
  }
  Table t{{"d", "n", "mean", "variance", "ci95Lo", "ci95Hi", "se", "normalizedMean", "normalizedVar"}, {}};
  for (int d : c.d_grid) {
    const auto s = summarize(sample_values(c, d, sampler), d, a);
    t.rows.push_back({Cell{static_cast<long long>(d)}, count(s.n), s.mean, opt(s.variance),
                      s.ci95 ? Cell{s.ci95->first} : Cell{}, s.ci95 ? Cell{s.ci95->second} : Cell{},
                      s.variance ? Cell{s.standard_error} : Cell{}, s.normalized_mean, opt(s.normalized_var)});
  }
  return t;
}

Table concentration_table(const Params& p) {
  const double eta = p.real("eta", 0.5);
  if (!(eta > 0.0)) throw ConfigError("eta must be positive");
  Table t{{"d", "n", "exceed", "estimate", "lo", "hi"}, {}};
  for (const auto& c : concentration_curve(p.experiment(), eta))
    t.rows.push_back({Cell{static_cast<long long>(c.d)}, count(c.n), count(c.exceed), c.estimate, c.lo, c.hi});
  return t;
}

Table subadd_table(const Params& p) {
  const auto n = p.count("n", 5);
  if (n < 1 || n > 1000) throw ConfigError("n must lie in [1, 1000]");
  Table t{{"d", "n", "replicates", "lhs", "lhsSe", "rhs", "rhsSe", "pathwiseViolations", "meanOk"}, {}};
  for (const auto& r : subadditivity_check(p.experiment(), static_cast<int>(n)))
    t.rows.push_back({Cell{static_cast<long long>(r.d)}, count(static_cast<std::size_t>(r.n)), count(r.replicates),
                      r.lhs, r.lhs_se, r.rhs, r.rhs_se, count(r.pathwise_violations),
                      Cell{static_cast<long long>(r.mean_ok ? 1 : 0)}});
  return t;
}

Table search_cross_table(const Params& p) {
  const ExperimentConfig c = p.experiment();
  const std::size_t cap = p.count("cap", 1'000'000);
  Table t{{"d", "replicates", "p", "n", "x", "y", "tauHits", "pathHits", "fjHits", "capped", "pTauHat", "Fy",
           "pTauSe", "pPathHat", "pFjHat", "pFjLo", "pFjHi", "target"},
          {}};
  for (int d : c.d_grid) {
    const auto r = search_cross_probe(d, c.model, c.replicates, c.root_seed, c.threads, cap);
    t.rows.push_back({Cell{static_cast<long long>(d)}, count(r.replicates),
                      Cell{static_cast<long long>(r.params.p)}, Cell{static_cast<long long>(r.params.n)},
                      r.params.x_threshold, r.params.y_threshold, count(r.tau_hits), count(r.path_hits),
                      count(r.fj_hits), count(r.capped), r.p_tau_hat, r.cdf_y, r.p_tau_se, r.p_path_hat,
                      r.p_fj_hat, r.p_fj_lo, r.p_fj_hi, r.target});
  }
  return t;
}

Table ui_tail_table(const Params& p) {
  const double m = p.real("M", 100.0);
  if (!(m > 0.0)) throw ConfigError("M must be positive");
  Table t{{"d", "n", "M", "estimate", "se"}, {}};
  for (const auto& u : ui_tail(p.experiment(), m))
    t.rows.push_back({Cell{static_cast<long long>(u.d)}, count(u.n), u.M, u.estimate, u.standard_error});
  return t;
}

}  // namespace

// ---------------------------------------------------------------------------

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const auto& [name, keys] : command_table()) out.push_back(name);
    return out;
  }();
  return names;
}

const std::vector<std::string>& command_keys(const std::string& command) {
  const auto it = command_table().find(command);
  if (it == command_table().end()) throw ConfigError("unknown command '" + command + "'");
  return it->second;
}

RunConfig make_run_config(const std::string& command, const json& params) {
  const auto& keys = command_keys(command);
  if (!params.is_object()) throw ConfigError("parameters must be a JSON object");
  RunConfig config;
  config.command = command;
  for (const auto& [key, value] : params.items()) {
    if (key == "out") {
      if (!value.is_string()) throw ConfigError("'out' must be a path");
      config.out_path = value.get<std::string>();
      continue;
    }
    if (key == "format") {
      if (!value.is_string()) throw ConfigError("'format' must be csv or json");
      config.format = value.get<std::string>();
      continue;
    }
    if (key == "command") continue;
    if (std::find(keys.begin(), keys.end(), key) == keys.end())
      throw ConfigError("'" + key + "' is not a parameter of " + command);
    config.params[key] = coerce(key, value);
  }
  if (!params.contains("format") && config.out_path.extension() == ".json") config.format = "json";
  if (config.format != "csv" && config.format != "json") throw ConfigError("format must be csv or json");
  return config;
}

CoupleCheckReport couple_check(const WeightModel& model, int grid) {
  if (grid < 2) throw DomainError("grid needs at least two points");
  if (cdf(model.family, 0.0) > 0.0) throw UnsupportedModel("F has an atom at 0");
  const double rate = density_at_zero(model.family);
  if (!(rate > 0.0) || !std::isfinite(rate))
    throw UnsupportedModel("coupling needs a finite positive density at 0");
  CoupleCheckReport rep;
  rep.rate = rate;
  const CouplingMap map{model.family, rate};
  for (int k = 0; k < grid; ++k) {
    const double t = std::pow(10.0, -8.0 + 8.0 * k / (grid - 1));
    const double h = couple(map, t);
    rep.rows.push_back({t, h, h / t});
    rep.sup_deviation = std::max(rep.sup_deviation, std::abs(h / t - 1.0));
    if (k > 0 && h < rep.rows[static_cast<std::size_t>(k) - 1].h) ++rep.monotonicity_violations;
  }
  return rep;
}

RunOutput execute(const RunConfig& config) {
  const Params p{config.params};
  Table table;
  std::string note;
  if (config.command == "bounds") {
    table = bounds_table(p);
  } else if (config.command == "sample-slab") {
    table = sample_table(p, Sampler::Slab);
  } else if (config.command == "sample-eden") {
    if (p.text("family", "exp") != "exp") throw ConfigError("sample-eden needs the exp family");
    table = sample_table(p, Sampler::Eden);
  } else if (config.command == "concentration") {
    table = concentration_table(p);
  } else if (config.command == "subadd") {
    table = subadd_table(p);
  } else if (config.command == "search-cross") {
    table = search_cross_table(p);
  } else if (config.command == "ui-tail") {
    table = ui_tail_table(p);
  } else if (config.command == "couple-check") {
    const auto rep = couple_check(p.model(), static_cast<int>(p.count("grid", 50)));
    table.header = {"t", "h", "ratio"};
    for (const auto& r : rep.rows) table.rows.push_back({r.t, r.h, r.ratio});
    note = " supDeviation=" + format_double(rep.sup_deviation) +
           " monotonicityViolations=" + std::to_string(rep.monotonicity_violations);
  } else {
    throw ConfigError("unknown command '" + config.command + "'");
  }

  RunOutput out;
  out.content = config.format == "json" ? render_json(config, table).dump(2) + "\n" : render_csv(table);
  out.summary = config.command + ": " + std::to_string(table.rows.size()) + " rows" + note;
  return out;
}

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  try {
    const RunOutput result = execute(config);
    if (config.out_path.empty()) {
      out << result.content;
    } else {
      write_atomic(config.out_path, result.content);
      out << result.summary << " -> " << config.out_path.string() << "\n";
    }
    return 0;
  } catch (const Error& e) {
    err << json{{"error", e.kind()}, {"message", e.what()}}.dump() << "\n";
    return e.kind() == "ConfigError" ? 2 : 1;
  } catch (const std::exception& e) {
    err << json{{"error", "InternalError"}, {"message", e.what()}}.dump() << "\n";
    return 1;
  }
}

int main_entry(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"First-passage percolation slab crossings: sampling, exact search and moment bounds", "fpp"};
  app.require_subcommand(1);

  std::map<std::string, std::map<std::string, std::string>> values;
  std::map<std::string, std::map<std::string, CLI::Option*>> options;
  std::map<std::string, std::string> config_paths;
  for (const auto& name : command_names()) {
    CLI::App* sub = app.add_subcommand(name);
    auto keys = command_keys(name);
    keys.push_back("out");
    keys.push_back("format");
    for (const auto& key : keys) options[name][key] = sub->add_option("--" + key, values[name][key]);
    sub->add_option("--config", config_paths[name], "JSON file with parameters; flags override it");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << json{{"error", "ConfigError"}, {"message", e.what()}}.dump() << "\n";
    return 2;
  }

  try {
    const std::string command = app.get_subcommands().front()->get_name();
    json params = json::object();
    if (!config_paths[command].empty()) {
      try {
        params = json::parse(read_file(config_paths[command]));
      } catch (const json::exception& e) {
        throw ConfigError(std::string("config file is not valid JSON: ") + e.what());
      } catch (const IoError& e) {
        throw ConfigError(e.what());
      }
      if (!params.is_object()) throw ConfigError("config file must hold a JSON object");
      if (params.contains("command") && params["command"] != command)
        throw ConfigError("config file is for command " + params["command"].dump());
    }
    for (const auto& [key, opt] : options[command])
      if (opt->count() > 0) params[key] = values[command][key];
    return run(make_run_config(command, params), out, err);
  } catch (const Error& e) {
    err << json{{"error", e.kind()}, {"message", e.what()}}.dump() << "\n";
    return e.kind() == "ConfigError" ? 2 : 1;
  }
}

}  // namespace fpp
