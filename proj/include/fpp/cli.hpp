#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "fpp/weights.hpp"

namespace fpp {

/// A validated command invocation. `params` holds the command's keys (flag
/// names without dashes) after merging the --config file under the flags.
struct RunConfig {
  std::string command;
  nlohmann::json params = nlohmann::json::object();
  std::filesystem::path out_path;  // empty: write to stdout
  std::string format = "csv";      // csv | json
};

const std::vector<std::string>& command_names();
/// Keys accepted by a command (ConfigError for an unknown command).
const std::vector<std::string>& command_keys(const std::string& command);

/// Builds a RunConfig from a command name plus parameters; checks keys and
/// types. Throws ConfigError.
RunConfig make_run_config(const std::string& command, const nlohmann::json& params);

struct RunOutput {
  std::string content;  // CSV or JSON document
  std::string summary;  // one line for the terminal
};

/// Computes the artifact for a config without touching the filesystem.
RunOutput execute(const RunConfig& config);

/// Executes, writes the artifact atomically (or to `out` when no path is set)
/// and prints the summary. Returns the process exit status: 0 on success, 2 on
/// ConfigError, 1 on any other failure; failures print a JSON error record to `err`.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Full command-line entry point.
int main_entry(int argc, char** argv, std::ostream& out, std::ostream& err);

struct CoupleCheckRow {
  double t = 0.0;
  double h = 0.0;
  double ratio = 0.0;  // h(t) / t
};

struct CoupleCheckReport {
  double rate = 0.0;
  double sup_deviation = 0.0;  // max |h(t)/t - 1| on the grid
  std::size_t monotonicity_violations = 0;
  std::vector<CoupleCheckRow> rows;
};

/// Tabulates h(t)/t on a log grid t in [1e-8, 1]. The coupling rate is the
/// model's density at 0; UnsupportedModel if that is not finite and positive.
CoupleCheckReport couple_check(const WeightModel& model, int grid);

}  // namespace fpp
