#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "ac2cd/io.hpp"
#include "ac2cd/solver.hpp"
#include "ac2cd/theory.hpp"

namespace ac2cd {

/// Runs fn(0) .. fn(count - 1) on up to `workers` threads. fn must only
/// write to its own slot of any shared output. Exceptions are rethrown in
/// index order after all workers finish.
void parallel_for(std::size_t count, unsigned workers, const std::function<void(std::size_t)>& fn);

/// Every property check applied to one Full-trace run of a quadratic
/// instance with a certificate.
struct AuditReport {
  std::string name;
  Index n = 0;
  SolveStatus status = SolveStatus::IterationCap;
  long outer_iterations = 0;
  double final_gap = 0.0;
  RateConstants rate;
  std::map<std::string, long> violations;  // check name -> count
  Json details;                            // measured quantities, deterministic

  long violation_count(const std::vector<std::string>& checks) const;
  long total_violations() const;
};

/// table_factor scales the exact Lipschitz table (0.5 gives the corrupted
/// negative control). Throws ContractError if the instance lacks a Hessian,
/// a certificate or a start point.
AuditReport audit_instance(const Instance& inst, const SolverConfig& config,
                           double table_factor = 1.0);

Json audit_to_json(const AuditReport& a, const std::vector<std::string>& checks);

struct SuiteOptions {
  std::uint64_t seed = 1;
  int trials = 0;            // 0 picks the suite default
  bool corrupt_lipschitz = false;
  unsigned workers = 0;      // 0 picks hardware concurrency
  SolverConfig solver;
};

struct SuiteReport {
  Json report;
  long violations = 0;
};

const std::vector<std::string>& suite_names();

/// Runs one named suite. Throws ContractError on an unknown name.
SuiteReport run_suite(const std::string& name, const SuiteOptions& options);

/// Checks that feed each audit suite.
const std::vector<std::string>& suite_checks(const std::string& name);

/// Bound vs empirical identification report. Throws ContractError with
/// "bounds require strong convexity" when mu is missing or not positive.
Json complexity_report(const Instance& inst, const SolverConfig& config);

}  // namespace ac2cd
