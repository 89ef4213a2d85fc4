#include "hydra/driver/driver.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <sstream>

#include <spdlog/spdlog.h>

#include "hydra/minilang/parser.hpp"
#include "hydra/minilang/unparse.hpp"
#include "hydra/sibling/sibling.hpp"

namespace hydra::driver {

using nlohmann::json;

namespace {

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw ConfigError("cannot read " + p.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + p.string());
  out << text;
}

std::vector<fs::path> mini_files(const fs::path& root, const std::optional<fs::path>& skip) {
  std::vector<fs::path> out;
  for (const auto& e : fs::recursive_directory_iterator(root)) {
    if (!e.is_regular_file() || e.path().extension() != ".mini") continue;
    if (skip) {
      const auto rel = fs::relative(e.path(), *skip);
      if (!rel.empty() && rel.native().rfind("..", 0) != 0) continue;
    }
    out.push_back(e.path());
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

minilang::Program load_project(const fs::path& project_dir, const fs::path& tests_dir) {
  if (!fs::is_directory(project_dir)) throw ConfigError("project directory not found: " + project_dir.string());
  if (!fs::is_directory(tests_dir)) throw ConfigError("tests directory not found: " + tests_dir.string());
  std::vector<minilang::SourceFile> sources;
  const auto tests_abs = fs::weakly_canonical(tests_dir);
  std::set<std::string> names;
  for (const auto& p : mini_files(project_dir, tests_abs)) {
    const auto rel = fs::relative(p, project_dir).generic_string();
    names.insert(rel);
    sources.push_back({rel, read_file(p), false});
  }
  for (const auto& p : mini_files(tests_dir, std::nullopt)) {
    const auto rel = fs::relative(p, tests_dir).generic_string();
    if (!names.insert(rel).second) throw ConfigError("test file shadows project file: " + rel);
    sources.push_back({rel, read_file(p), true});
  }
  if (sources.empty()) throw ConfigError("no .mini sources in " + project_dir.string());
  minilang::Program program;
  try {
    program = minilang::Program::parse_sources(sources);
  } catch (const minilang::SyntaxError& e) {
    throw ProjectError(e.what());
  }
  const auto errors = minilang::type_check(program);
  if (!errors.empty()) {
    std::string msg;
    for (const auto& e : errors) msg += e.to_string() + "\n";
    throw ProjectError(msg);
  }
  return program;
}

repair::RepairConfig repair_config_from_json(const json& j) {
  repair::RepairConfig c;
  if (j.is_null()) return c;
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  auto positive = [](const char* key, double v) {
    if (!(v > 0)) throw ConfigError(std::string(key) + " must be positive");
  };
  auto unit = [](const char* key, double v) {
    if (!(v >= 0 && v <= 1)) throw ConfigError(std::string(key) + " must lie in [0,1]");
  };
  try {
    for (const auto& [key, value] : j.items()) {
      if (key == "max_locations") {
        positive("max_locations", value.get<double>());
        c.max_locations = value.get<std::size_t>();
      } else if (key == "candidates_per_schema") {
        positive("candidates_per_schema", value.get<double>());
        c.candidates_per_schema = value.get<std::size_t>();
      } else if (key == "timeout_seconds") {
        positive("timeout_seconds", value.get<double>());
        c.timeout_seconds = value.get<double>();
      } else if (key == "max_steps") {
        positive("max_steps", value.get<double>());
        c.max_steps = value.get<std::int64_t>();
      } else if (key == "t1") {
        unit("t1", value.get<double>());
        c.similarity.t1 = value.get<double>();
      } else if (key == "t2") {
        unit("t2", value.get<double>());
        c.similarity.t2 = value.get<double>();
      } else if (key == "name_sim_threshold") {
        unit("name_sim_threshold", value.get<double>());
        c.similarity.name_sim_threshold = value.get<double>();
      } else if (key == "accessor_prefixes") {
        c.similarity.accessor_prefixes = value.get<std::vector<std::string>>();
      } else if (key == "weights") {
        for (const auto& [wk, wv] : value.items()) {
          if (wk == "prior") c.weights.prior = wv.get<double>();
          else if (wk == "affinity") c.weights.affinity = wv.get<double>();
          else if (wk == "flscore") c.weights.flscore = wv.get<double>();
          else throw ConfigError("unknown weight " + wk);
        }
      } else if (key == "check_invariants") {
        c.check_invariants = value.get<bool>();
      } else {
        throw ConfigError("unknown config key " + key);
      }
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad config value: ") + e.what());
  }
  return c;
}

repair::RepairConfig load_repair_config(const RunConfig& rc) {
  json j;
  if (rc.config_file) {
    try {
      j = json::parse(read_file(*rc.config_file));
    } catch (const json::exception& e) {
      throw ConfigError(std::string("malformed config: ") + e.what());
    }
  }
  auto c = repair_config_from_json(j);
  if (rc.timeout_seconds) {
    if (!(*rc.timeout_seconds > 0)) throw ConfigError("timeout must be positive");
    c.timeout_seconds = *rc.timeout_seconds;
  }
  return c;
}

Workspace open_workspace(const RunConfig& rc) {
  Workspace ws{load_project(rc.project_dir, rc.tests_dir), load_repair_config(rc), std::nullopt,
               std::nullopt};
  ws.config.similarity.records = &ws.project.records();
  if (rc.history_dir) {
    try {
      ws.bundle = history::load_history(*rc.history_dir);
    } catch (const history::BundleFormatError& e) {
      throw ConfigError(e.what());
    } catch (const history::SnapshotParseError& e) {
      throw ConfigError(e.what());
    }
    if (!ws.bundle->empty()) {
      const auto& last = ws.bundle->final_snapshot();
      for (const auto& f : ws.project.files()) {
        if (f.is_test) continue;
        const auto* g = last.file(f.source_file);
        if (g == nullptr || !minilang::same_tree(*g->root, *f.root)) {
          spdlog::warn("final history snapshot differs from the project in {}", f.source_file);
        }
      }
    }
    ws.lineage = history::track_lineage(*ws.bundle, ws.config.similarity);
  }
  return ws;
}

int exit_code(repair::RunStatus status) {
  switch (status) {
    case repair::RunStatus::Plausible: return kPlausible;
    case repair::RunStatus::Exhausted: return kExhausted;
    case repair::RunStatus::Timeout: return kTimeout;
    case repair::RunStatus::NoFailingTest: return kConfigError;
  }
  return kFailure;
}

namespace {

fs::path output_dir(const RunConfig& rc) {
  fs::path dir = rc.out_dir.value_or(fs::path("hydra-out"));
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw ConfigError("cannot create output directory " + dir.string());
  return dir;
}

int run_variant(const RunConfig& rc, const repair::VariantSpec& variant, std::ostream& out,
                std::ostream& err) {
  try {
    const fs::path dir = output_dir(rc);
    Workspace ws = open_workspace(rc);
    auto result = repair::repair_loop(ws.project, ws.lineage_ptr(), ws.config, variant);
    if (rc.seed) result.report["seed"] = *rc.seed;
    result.report["history"] = ws.bundle ? json(ws.bundle->commits.size()) : json(nullptr);
    write_file(dir / "report.json", result.report.dump(2) + "\n");
    std::error_code ec;
    fs::remove(dir / "patch.json", ec);
    fs::remove(dir / "patch.diff", ec);
    if (result.patch) {
      write_file(dir / "patch.json", repair::patch_json(*result.patch).dump(2) + "\n");
      write_file(dir / "patch.diff", repair::patch_diff(*result.patch));
      out << repair::patch_diff(*result.patch);
    }
    out << "status: " << repair::status_name(result.status) << "\n";
    return exit_code(result.status);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const ProjectError& e) {
    err << "project error: " << e.what() << "\n";
    return kProjectError;
  }
}

std::string node_label(const minilang::Node* n) {
  if (n == nullptr) return "<root>";
  std::string s(minilang::kind_name(n->kind));
  if (!n->name.empty()) s += "(" + n->name + ")";
  if (!n->op.empty()) s += "(" + n->op + ")";
  if (!n->literal.empty()) s += "(" + n->literal + ")";
  return s + "@" + std::to_string(n->line);
}

}  // namespace

int cmd_repair(const RunConfig& rc, std::ostream& out, std::ostream& err) {
  return run_variant(rc, repair::VariantSpec{}, out, err);
}

int cmd_ablate(const RunConfig& rc, std::ostream& out, std::ostream& err) {
  const auto v = repair::parse_variant(rc.variant);
  if (!v) {
    err << "config error: unknown variant " << rc.variant << "\n";
    return kConfigError;
  }
  return run_variant(rc, *v, out, err);
}

json localize(const Workspace& ws, const RunConfig& rc) {
  minilang::TestRunOptions opts;
  opts.with_coverage = true;
  opts.max_steps = ws.config.max_steps;
  const auto run = minilang::run_tests(ws.project, opts);
  const auto spectrum = faultloc::build_spectrum(ws.project, run);
  const auto ranked = faultloc::ochiai_rank(spectrum, ws.config.max_locations);
  if (rc.fl_only) {
    json a = json::array();
    for (const auto& r : ranked) a.push_back({{"stmt", r.stmt.to_string()}, {"score", r.score}, {"rank", r.rank}});
    return a;
  }
  minilang::StmtRef ref;
  if (rc.location) {
    ref = minilang::StmtRef::parse(*rc.location);
    if (ws.project.statement(ref) == nullptr) throw ConfigError("unknown statement " + *rc.location);
  } else if (!ranked.empty() && ranked.front().score > 0.0) {
    ref = ranked.front().stmt;
  } else {
    throw ConfigError("no suspicious statement");
  }
  const auto group = sibling::identify_siblings(ref, spectrum, ws.project, ws.lineage_ptr(),
                                                ws.config.similarity);
  json members = json::array();
  for (const auto& m : group.members) {
    json j = {{"stmt", m.stmt.to_string()},
              {"provenance", std::string(sibling::provenance_name(m.provenance))},
              {"zeta", m.zeta},
              {"xi", m.xi},
              {"line", m.node->line}};
    if (rc.show_context) j["context"] = m.context.lines();
    members.push_back(std::move(j));
  }
  return {{"reference", ref.to_string()}, {"members", members}};
}

int cmd_localize(const RunConfig& rc, std::ostream& out, std::ostream& err) {
  try {
    Workspace ws = open_workspace(rc);
    const json j = localize(ws, rc);
    const std::string text = j.dump(2) + "\n";
    if (rc.out_dir) {
      write_file(output_dir(rc) / (rc.fl_only ? "ranking.json" : "localize.json"), text);
    }
    out << text;
    return kPlausible;
  } catch (const faultloc::NoFailingTest& e) {
    err << e.what() << "\n";
    return kConfigError;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const ProjectError& e) {
    err << "project error: " << e.what() << "\n";
    return kProjectError;
  }
}

int cmd_diffast(const std::string& left, const std::string& right, std::ostream& out, std::ostream& err) {
  struct Side {
    minilang::Program program;
    const minilang::Node* stmt = nullptr;
  };
  auto open = [&](const std::string& spec) -> Side {
    const auto hash = spec.find('#');
    if (hash == std::string::npos) throw ConfigError("expected <file>#<function>:<index>, got " + spec);
    const fs::path file = spec.substr(0, hash);
    const std::string where = spec.substr(hash + 1);
    const auto colon = where.rfind(':');
    if (colon == std::string::npos) throw ConfigError("expected <function>:<index> after '#'");
    Side s;
    try {
      s.program = minilang::Program::parse_sources({{file.filename().string(), read_file(file), false}});
    } catch (const minilang::SyntaxError& e) {
      throw ProjectError(e.what());
    }
    const auto errors = minilang::type_check(s.program);
    if (!errors.empty()) spdlog::warn("{}: continuing without full types ({})", file.string(), errors.front().to_string());
    minilang::StmtRef ref{file.filename().string(), where.substr(0, colon), -1};
    try {
      ref.index = std::stoi(where.substr(colon + 1));
    } catch (const std::exception&) {
      throw ConfigError("bad statement index in " + spec);
    }
    s.stmt = s.program.statement(ref);
    if (s.stmt == nullptr) throw ConfigError("no statement " + where + " in " + file.string());
    return s;
  };
  try {
    Side a = open(left);
    Side b = open(right);
    treesim::SimilarityConfig cfg;
    const auto va = treesim::TreeView::statement(*a.stmt);
    const auto vb = treesim::TreeView::statement(*b.stmt);
    int distance = 0;
    const auto script = treesim::edit_script(va, vb, cfg, &distance);
    const auto match = treesim::tree_similarity(va, vb, cfg);
    json ops = json::array();
    for (const auto& op : script) {
      json o = {{"op", std::string(treesim::edit_kind_name(op.kind))}};
      if (op.left != nullptr) o["left"] = node_label(op.left);
      if (op.right != nullptr) o["right"] = node_label(op.right);
      ops.push_back(std::move(o));
    }
    json mapping = json::array();
    for (const auto& [l, r] : treesim::optimal_mapping(va, vb, cfg).pairs) {
      mapping.push_back({node_label(l), node_label(r)});
    }
    const json j = {{"left", minilang::statement_header(*a.stmt)},
                    {"right", minilang::statement_header(*b.stmt)},
                    {"distance", distance},
                    {"zeta", match.zeta},
                    {"similar", match.zeta > cfg.t1},
                    {"edit_script", ops},
                    {"mapping", mapping}};
    out << j.dump(2) << "\n";
    return kPlausible;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const ProjectError& e) {
    err << "parse error: " << e.what() << "\n";
    return kProjectError;
  }
}

}  // namespace hydra::driver
