#pragma once

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "hydra/driver/driver.hpp"
#include "hydra/minilang/parser.hpp"
#include "hydra/minilang/program.hpp"

namespace hydra::testing {

namespace fs = std::filesystem;

inline fs::path corpus_dir() { return fs::path(HYDRA_CORPUS_DIR); }

inline std::vector<std::string> corpus_cases() {
  std::vector<std::string> names;
  for (const auto& e : fs::directory_iterator(corpus_dir())) {
    if (e.is_directory() && fs::exists(e.path() / "case.json")) {
      names.push_back(e.path().filename().string());
    }
  }
  std::sort(names.begin(), names.end());
  return names;
}

inline std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline nlohmann::json case_json(const std::string& name) {
  return nlohmann::json::parse(slurp(corpus_dir() / name / "case.json"));
}

inline driver::RunConfig run_config(const std::string& name, bool with_history = true) {
  driver::RunConfig rc;
  const fs::path dir = corpus_dir() / name;
  rc.project_dir = dir / "src";
  rc.tests_dir = dir / "tests";
  if (with_history && fs::is_directory(dir / "history")) rc.history_dir = dir / "history";
  return rc;
}

inline minilang::Program load_case(const std::string& name) {
  const fs::path dir = corpus_dir() / name;
  return driver::load_project(dir / "src", dir / "tests");
}

/// Every `.mini` file of the corpus, project, tests and history snapshots.
inline std::vector<fs::path> corpus_sources() {
  std::vector<fs::path> out;
  for (const auto& e : fs::recursive_directory_iterator(corpus_dir())) {
    if (e.is_regular_file() && e.path().extension() == ".mini") out.push_back(e.path());
  }
  std::sort(out.begin(), out.end());
  return out;
}

/// Program built from in-memory sources: `src` is the project file, `tests`
/// the test file.
inline minilang::Program program_of(const std::string& src, const std::string& tests = "") {
  std::vector<minilang::SourceFile> files{{"main.mini", src, false}};
  if (!tests.empty()) files.push_back({"main_test.mini", tests, true});
  return minilang::load_program(files);
}

}  // namespace hydra::testing
