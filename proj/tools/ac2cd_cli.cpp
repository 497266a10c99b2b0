#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ac2cd/harness.hpp"
#include "ac2cd/io.hpp"
#include "ac2cd/reference.hpp"
#include "ac2cd/solver.hpp"
#include "ac2cd/zoo.hpp"

namespace fs = std::filesystem;
using namespace ac2cd;

namespace {

constexpr int kExitError = 1;
constexpr int kExitCap = 2;
constexpr int kExitLineSearch = 3;
constexpr int kExitViolations = 4;

struct CommonOptions {
  std::string config_path;
  std::vector<std::string> overrides;  // key=value
  std::optional<std::uint64_t> seed;
  std::string out_dir;
};

std::optional<std::uint64_t> env_seed() {
  const char* s = std::getenv("AC2CD_SEED");
  if (s == nullptr || *s == '\0') return std::nullopt;
  try {
    return static_cast<std::uint64_t>(std::stoull(s));
  } catch (const std::exception&) {
    throw FormatError(std::string("AC2CD_SEED is not an integer: ") + s);
  }
}

SolverConfig build_config(const CommonOptions& o) {
  SolverConfig config;
  std::map<std::string, std::string> values;
  if (!o.config_path.empty()) values = load_config_file(o.config_path);
  for (const auto& kv : o.overrides) {
    for (const auto& [k, v] : parse_config_text(kv)) values[k] = v;
  }
  if (!values.count("seed")) {
    if (auto s = o.seed ? o.seed : env_seed()) values["seed"] = std::to_string(*s);
  } else if (o.seed) {
    values["seed"] = std::to_string(*o.seed);
  }
  apply_config(config, values);
  return config;
}

void add_common(CLI::App* cmd, CommonOptions& o) {
  cmd->add_option("-c,--config", o.config_path, "key=value config file");
  cmd->add_option("-s,--set", o.overrides, "override a config key (key=value), repeatable");
  cmd->add_option("--seed", o.seed, "seed (falls back to AC2CD_SEED)");
  cmd->add_option("-o,--out", o.out_dir, "output directory");
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) throw FormatError("cannot write " + path.string());
  out << content;
}

std::optional<double> known_fstar(const Instance& inst) {
  if (inst.certificate) return inst.certificate->f_star;
  return std::nullopt;
}

int cmd_solve(const std::string& path, const CommonOptions& o) {
  const Instance inst = load_instance(path);
  const SolverConfig config = build_config(o);
  const Vector x0 = inst.x0 ? *inst.x0 : default_start(inst.problem);
  const SolveResult res = solve(inst.problem, x0, config);
  const auto fstar = known_fstar(inst);

  Json report;
  report["instance"] = inst.name;
  report["status"] = to_string(res.status);
  report["outer_iterations"] = static_cast<long>(res.trace.records.size()) - 1;
  report["x"] = vector_to_json(res.final_x());
  report["f"] = number_to_json(res.trace.records.back().f);
  if (fstar) report["gap"] = number_to_json(res.trace.records.back().f - *fstar);
  report["kkt"] = {{"lambda", number_to_json(res.final_kkt.lambda)},
                   {"residual", number_to_json(res.final_kkt.residual)}};
  const ActiveSets sets = active_sets(inst.problem, res.final_x(), res.final_kkt.lambda,
                                      config.active_tol);
  report["active"] = sets.active;
  report["strict_active"] = sets.strict_active;
  report["vertex_stall"] = res.trace.vertex_stall;
  if (!res.diagnostic.empty()) report["diagnostic"] = res.diagnostic;

  if (!o.out_dir.empty()) {
    fs::create_directories(o.out_dir);
    std::ostringstream trace, csv;
    write_trace_jsonl(trace, res.trace, fstar);
    write_summary_csv(csv, res.trace, fstar);
    write_file(fs::path(o.out_dir) / "trace.jsonl", trace.str());
    write_file(fs::path(o.out_dir) / "summary.csv", csv.str());
    write_file(fs::path(o.out_dir) / "report.json", report.dump(2) + "\n");
  }
  std::cout << report.dump(2) << '\n';
  if (!res.diagnostic.empty()) std::cerr << res.diagnostic << '\n';

  switch (res.status) {
    case SolveStatus::Converged: return 0;
    case SolveStatus::IterationCap: return kExitCap;
    case SolveStatus::LineSearchFailure: return kExitLineSearch;
  }
  return kExitError;
}

int cmd_verify(const std::string& suite, int trials, bool corrupt, unsigned workers,
               const CommonOptions& o) {
  SuiteOptions so;
  so.solver = build_config(o);
  so.seed = o.seed ? *o.seed : env_seed().value_or(1);
  so.trials = trials;
  so.corrupt_lipschitz = corrupt;
  so.workers = workers;
  const SuiteReport r = run_suite(suite, so);
  const std::string text = r.report.dump(2) + "\n";
  if (!o.out_dir.empty()) {
    fs::create_directories(o.out_dir);
    write_file(fs::path(o.out_dir) / "report.json", text);
  } else {
    std::cout << text;
  }
  std::cerr << suite << ": " << r.violations << " violation(s)\n";
  return r.violations == 0 ? 0 : kExitViolations;
}

int cmd_complexity(const std::string& path, const CommonOptions& o) {
  const Instance inst = load_instance(path);
  const Json report = complexity_report(inst, build_config(o));
  const std::string text = report.dump(2) + "\n";
  if (!o.out_dir.empty()) {
    fs::create_directories(o.out_dir);
    write_file(fs::path(o.out_dir) / "report.json", text);
  }
  std::cout << text;
  return 0;
}

int cmd_sweep(const std::string& path, const std::string& param,
              const std::vector<std::string>& values, const CommonOptions& o) {
  const Instance inst = load_instance(path);
  const Vector x0 = inst.x0 ? *inst.x0 : default_start(inst.problem);
  const auto fstar = known_fstar(inst);
  Json rows = Json::array();
  std::ostringstream csv;
  csv << param << ",status,outer_iterations,residual,gap\n";
  for (const auto& value : values) {
    CommonOptions oo = o;
    oo.overrides.push_back(param + "=" + value);
    SolverConfig config = build_config(oo);
    config.trace_level = TraceLevel::Summary;
    const SolveResult res = solve(inst.problem, x0, config);
    const long iters = static_cast<long>(res.trace.records.size()) - 1;
    const double f = res.trace.records.back().f;
    Json row = {{param, value},
                {"status", to_string(res.status)},
                {"outer_iterations", iters},
                {"residual", number_to_json(res.final_kkt.residual)}};
    csv << value << ',' << to_string(res.status) << ',' << iters << ','
        << number_to_json(res.final_kkt.residual).dump() << ',';
    if (fstar) {
      row["gap"] = number_to_json(f - *fstar);
      csv << number_to_json(f - *fstar).dump();
    }
    csv << '\n';
    rows.push_back(std::move(row));
  }
  Json report = {{"instance", inst.name}, {"parameter", param}, {"runs", rows}};
  if (!o.out_dir.empty()) {
    fs::create_directories(o.out_dir);
    write_file(fs::path(o.out_dir) / "report.json", report.dump(2) + "\n");
    write_file(fs::path(o.out_dir) / "summary.csv", csv.str());
  }
  std::cout << csv.str();
  return 0;
}

int cmd_generate(const std::string& kind, Index n, Index m, std::uint64_t seed,
                 const std::vector<double>& c, const std::string& out) {
  Instance inst = [&]() -> Instance {
    if (kind == "e1") return gen_e1();
    if (kind == "simplex") {
      require(!c.empty(), "generate simplex needs --c");
      return gen_simplex_projection(Eigen::Map<const Vector>(c.data(), static_cast<Index>(c.size())));
    }
    if (kind == "designed") return gen_random_designed(n, seed);
    if (kind == "interior") return gen_interior_optimum(n, seed);
    if (kind == "degenerate") return gen_degenerate(n, seed);
    if (kind == "svm") return gen_svm_like(m, n, seed);
    throw FormatError("unknown instance kind \"" + kind + "\"");
  }();
  const std::string text = instance_to_json(inst).dump(2) + "\n";
  if (out.empty()) std::cout << text;
  else write_file(out, text);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Almost cyclic 2-coordinate descent: solver and verification harness"};
  app.require_subcommand(1);

  CommonOptions common;
  std::string instance_path;

  auto* solve_cmd = app.add_subcommand("solve", "solve an instance");
  solve_cmd->add_option("instance", instance_path, "instance JSON")->required();
  add_common(solve_cmd, common);

  std::string suite;
  int trials = 0;
  bool corrupt = false;
  unsigned workers = 0;
  auto* verify_cmd = app.add_subcommand("verify", "run a property suite");
  verify_cmd->add_option("suite", suite, "seminorm, lemmas, descent, stepsize, interiority, rate, identification")
      ->required();
  verify_cmd->add_option("--trials", trials, "trials or instance count (0: suite default)");
  verify_cmd->add_flag("--corrupt-lipschitz", corrupt, "halve the Lipschitz table (negative control)");
  verify_cmd->add_option("--workers", workers, "worker threads (0: all cores)");
  add_common(verify_cmd, common);

  auto* complexity_cmd = app.add_subcommand("complexity", "identification bounds vs empirical counts");
  complexity_cmd->add_option("instance", instance_path, "instance JSON")->required();
  add_common(complexity_cmd, common);

  std::string param;
  std::vector<std::string> values;
  auto* sweep_cmd = app.add_subcommand("sweep", "solve once per parameter value");
  sweep_cmd->add_option("instance", instance_path, "instance JSON")->required();
  sweep_cmd->add_option("--param", param, "config key to vary")->required();
  sweep_cmd->add_option("--values", values, "values to try")->required()->delimiter(',');
  add_common(sweep_cmd, common);

  std::string kind;
  Index gen_n = 5;
  Index gen_m = 20;
  std::uint64_t gen_seed = 0;
  std::vector<double> gen_c;
  std::string gen_out;
  auto* gen_cmd = app.add_subcommand("generate", "write a zoo instance as JSON");
  gen_cmd->add_option("kind", kind, "e1, simplex, designed, interior, degenerate, svm")->required();
  gen_cmd->add_option("--n", gen_n, "dimension");
  gen_cmd->add_option("--m", gen_m, "feature count (svm)");
  gen_cmd->add_option("--seed", gen_seed, "seed");
  gen_cmd->add_option("--c", gen_c, "center (simplex)")->delimiter(',');
  gen_cmd->add_option("-o,--out", gen_out, "output file (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitError;
  }

  try {
    if (*solve_cmd) return cmd_solve(instance_path, common);
    if (*verify_cmd) return cmd_verify(suite, trials, corrupt, workers, common);
    if (*complexity_cmd) return cmd_complexity(instance_path, common);
    if (*sweep_cmd) return cmd_sweep(instance_path, param, values, common);
    if (*gen_cmd) return cmd_generate(kind, gen_n, gen_m, gen_seed, gen_c, gen_out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitError;
  }
  return kExitError;
}
