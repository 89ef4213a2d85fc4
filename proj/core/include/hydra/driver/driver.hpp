#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>

#include <nlohmann/json.hpp>

#include "hydra/history/history.hpp"
#include "hydra/minilang/program.hpp"
#include "hydra/repair/repair.hpp"

namespace hydra::driver {

namespace fs = std::filesystem;

enum ExitCode : int {
  kPlausible = 0,
  kFailure = 1,
  kConfigError = 2,
  kProjectError = 3,
  kExhausted = 4,
  kTimeout = 5,
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Parse or type error in the project under repair.
class ProjectError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  fs::path project_dir;
  fs::path tests_dir;
  std::optional<fs::path> history_dir;
  std::optional<fs::path> config_file;
  std::optional<fs::path> out_dir;
  std::optional<double> timeout_seconds;
  std::optional<long long> seed;
  // localize
  bool fl_only = false;
  bool show_context = false;
  std::optional<std::string> location;
  // ablate
  std::string variant = "full";
};

/// Every `.mini` file below the project directory plus the test files.
/// Throws ConfigError for missing directories, ProjectError for parse and
/// type errors.
minilang::Program load_project(const fs::path& project_dir, const fs::path& tests_dir);

/// Defaults overridden by a JSON config object; unknown keys are errors.
repair::RepairConfig repair_config_from_json(const nlohmann::json& j);
repair::RepairConfig load_repair_config(const RunConfig& rc);

/// Project, config and (optional) history loaded together.
struct Workspace {
  minilang::Program project;
  repair::RepairConfig config;
  std::optional<history::HistoryBundle> bundle;
  std::optional<history::Lineage> lineage;

  const history::Lineage* lineage_ptr() const { return lineage ? &*lineage : nullptr; }
};

Workspace open_workspace(const RunConfig& rc);

int exit_code(repair::RunStatus status);

/// Runs the repair (or an ablation variant) and writes patch.json, patch.diff
/// and report.json to the output directory.
int cmd_repair(const RunConfig& rc, std::ostream& out, std::ostream& err);
int cmd_ablate(const RunConfig& rc, std::ostream& out, std::ostream& err);

/// Sibling group of the top-ranked (or `--location`) reference as JSON, or
/// the Ochiai list with fl_only.
int cmd_localize(const RunConfig& rc, std::ostream& out, std::ostream& err);

/// Groups as emitted by cmd_localize, without I/O.
nlohmann::json localize(const Workspace& ws, const RunConfig& rc);

/// `file#function:index` on both sides; prints zeta, edit script and mapping.
int cmd_diffast(const std::string& left, const std::string& right, std::ostream& out, std::ostream& err);

}  // namespace hydra::driver
