#pragma once

#include "braggsim/config.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace braggsim {

enum class Subcommand { Spectrum, Design, StimSweep, SpontRate, ContrastSweep, Jsd, Report };

std::optional<Subcommand> parse_subcommand(std::string_view name);
std::string subcommand_name(Subcommand sub);

// Command-line overrides of the config.
struct RunOptions {
  std::optional<OutputFormat> format;
  std::optional<std::size_t> points;  // sweep points or JSD grid points per axis
  std::optional<double> rejection_db; // design target
};

struct OutputFile {
  std::string name;
  std::string content;
};

struct ScenarioOutput {
  std::vector<OutputFile> files; // deterministic data files
  std::vector<std::string> messages;
  std::vector<std::string> warnings;
};

// Pure computation: identical inputs give byte-identical files. Bragg-only
// subcommands throw DomainError for a ring structure.
ScenarioOutput run_scenario(const ScenarioConfig& config, Subcommand sub, const RunOptions& options = {});

enum ExitCode : int { kExitOk = 0, kExitConfig = 2, kExitDomain = 3, kExitIo = 4 };

struct RunRequest {
  std::string config_path;
  Subcommand subcommand = Subcommand::Report;
  RunOptions options;
  std::optional<std::string> out_dir; // default <output.dir>/<subcommand>
  bool force = false;
};

struct RunStatus {
  int exit_code = kExitOk;
  std::string error;
  std::string out_dir;
  std::vector<std::string> written;
  std::vector<std::string> messages;
  std::vector<std::string> warnings;
};

// Loads the config, runs, and writes the data files plus a metadata.json
// sidecar (timestamps live only there). Refuses to overwrite existing
// files unless `force`. Never throws for config, domain or I/O failures.
RunStatus run_scenario_files(const RunRequest& request);

} // namespace braggsim
