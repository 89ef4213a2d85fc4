#include <cstdlib>
#include <iostream>
#include <string>

#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "CLI11.hpp"
#include "hydra/driver/driver.hpp"

namespace {

void setup_logging() {
  auto logger = spdlog::stderr_color_mt("hydra");
  spdlog::set_default_logger(logger);
  spdlog::set_pattern("[%l] %v");
  const char* env = std::getenv("HYDRA_LOG");
  const std::string level = env != nullptr ? env : "error";
  if (level == "debug") spdlog::set_level(spdlog::level::debug);
  else if (level == "info") spdlog::set_level(spdlog::level::info);
  else spdlog::set_level(spdlog::level::err);
}

void common_options(CLI::App* cmd, hydra::driver::RunConfig& rc, bool with_out) {
  cmd->add_option("--project", rc.project_dir, "source directory")->required();
  cmd->add_option("--tests", rc.tests_dir, "test directory")->required();
  cmd->add_option("--history", rc.history_dir, "history bundle directory");
  cmd->add_option("--config", rc.config_file, "JSON config");
  cmd->add_option("--timeout", rc.timeout_seconds, "wall-clock budget in seconds");
  cmd->add_option("--seed", rc.seed, "recorded in the report");
  if (with_out) cmd->add_option("--out", rc.out_dir, "output directory");
}

}  // namespace

int main(int argc, char** argv) {
  setup_logging();
  CLI::App app{"hydra: multi-hunk repair for MiniLang"};
  app.require_subcommand(1);

  hydra::driver::RunConfig rc;
  auto* repair = app.add_subcommand("repair", "search for a plausible patch");
  common_options(repair, rc, true);

  auto* localize = app.add_subcommand("localize", "print the sibling group of the top location");
  common_options(localize, rc, true);
  localize->add_flag("--show-context", rc.show_context, "include context lines");
  localize->add_flag("--fl-only", rc.fl_only, "print the Ochiai ranking only");
  localize->add_option("--location", rc.location, "reference statement file:function:index");

  auto* ablate = app.add_subcommand("ablate", "run one ablation variant");
  common_options(ablate, rc, true);
  ablate->add_option("--variant", rc.variant,
                     "full | sh | fixed-context:<w> | minus-history | incremental")
      ->required();

  std::string left, right;
  auto* diffast = app.add_subcommand("diffast", "tree edit distance between two statements");
  diffast->add_option("left", left, "file#function:index")->required();
  diffast->add_option("right", right, "file#function:index")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : hydra::driver::kConfigError;
  }

  if (*repair) return hydra::driver::cmd_repair(rc, std::cout, std::cerr);
  if (*localize) return hydra::driver::cmd_localize(rc, std::cout, std::cerr);
  if (*ablate) return hydra::driver::cmd_ablate(rc, std::cout, std::cerr);
  if (*diffast) return hydra::driver::cmd_diffast(left, right, std::cout, std::cerr);
  return hydra::driver::kConfigError;
}
