#pragma once

#include <iosfwd>
#include <map>
#include <string>

#include "hdperm/csvio.hpp"
#include "hdperm/methods.hpp"
#include "hdperm/simlab.hpp"

namespace hdperm {

enum class OutputFormat { Tsv, Json };

/// Everything the `test` subcommand needs: input file, column roles, method
/// flags and output format.
struct RunConfig {
  std::string input_path;
  ColumnRoles roles;
  MethodSpec spec;
  bool standardize = false;
  OutputFormat format = OutputFormat::Json;
};

/// Runs one test on a CSV file and emits a single record.
/// Exit codes: 0 success, 2 input error, 3 degenerate statistic.
int cmd_test(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Runs a scenario preset or scenario file with overrides and emits the
/// rejection table as TSV. Overrides are `key=value` pairs mirroring the
/// scenario file format.
struct SimulateConfig {
  std::string preset_or_file;
  ScenarioMode mode = ScenarioMode::Level;
  std::map<std::string, std::string> overrides;
};

int cmd_simulate(const SimulateConfig& config, std::ostream& out, std::ostream& err);

/// Lists scenario presets with their registry note.
int cmd_presets(std::ostream& out);

/// Parses a flat `key = value` scenario file (lists comma-separated).
Scenario scenario_from_file(const std::string& path);

/// Applies one key=value override to a scenario.
void apply_override(Scenario& s, const std::string& key, const std::string& value);

} // namespace hdperm
