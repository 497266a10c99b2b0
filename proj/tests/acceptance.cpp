// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "ac2cd/harness.hpp"
#include "ac2cd/line_search.hpp"
#include "ac2cd/reference.hpp"
#include "ac2cd/solver.hpp"
#include "ac2cd/theory.hpp"
#include "ac2cd/zoo.hpp"

using namespace ac2cd;

namespace {

int failures = 0;

void report(int id, bool ok, const std::string& what, const std::string& detail) {
  std::printf("criterion %2d %s  %s: %s\n", id, ok ? "PASS" : "FAIL", what.c_str(), detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

bool close(double a, double b, double tol = 1e-9) { return std::abs(a - b) <= tol; }

}  // namespace

int main() {
  const std::uint64_t family_seed = 2024;
  std::vector<Instance> family = acceptance_family(50, family_seed);
  // f* and the certificate come from the enumeration oracle, not the design.
  for (Instance& inst : family) inst.certificate = solve_qp_enumerate(inst.problem);

  const auto start = std::chrono::steady_clock::now();
  std::vector<AuditReport> audits(family.size());
  parallel_for(family.size(), 0,
               [&](std::size_t i) { audits[i] = audit_instance(family[i], SolverConfig{}); });
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  auto total = [&](const std::vector<std::string>& checks) {
    long s = 0;
    for (const auto& a : audits) s += a.violation_count(checks);
    return s;
  };
  long max_outer = 0;
  double worst_gap = 0.0;
  for (const auto& a : audits) {
    max_outer = std::max(max_outer, a.outer_iterations);
    worst_gap = std::max(worst_gap, a.final_gap);
  }

  // 1
  const long c1 = total({"status", "gap"});
  report(1, c1 == 0 && seconds < 60.0, "oracle convergence on 50 instances",
         std::to_string(c1) + " failures, worst gap " + fmt("%.2e", worst_gap) + ", max outer " +
             std::to_string(max_outer) + ", " + fmt("%.2f s", seconds));

  // 2
  const long c2 = total({"decrease"});
  report(2, c2 == 0, "per-iteration decrease", std::to_string(c2) + " violations");

  // 3
  const long c3 = total({"stepsize"});
  report(3, c3 == 0, "stepsize floor", std::to_string(c3) + " violations");

  // 4
  const long c4a = total({"interiority"});
  const long c4b = total({"req_A_D"});
  report(4, c4a + c4b == 0, "interiority",
         std::to_string(c4a) + " ratio violations, " + std::to_string(c4b) + " j-coordinate exits");

  // 5
  SuiteOptions so;
  so.seed = 7;
  so.trials = 1000;
  const SuiteReport sem = run_suite("seminorm", so);
  const SuiteReport lem = run_suite("lemmas", so);
  report(5, sem.violations + lem.violations == 0, "seminorm identities and Lipschitz lemmas",
         std::to_string(sem.violations) + " seminorm + " + std::to_string(lem.violations) +
             " lemma violations, worst identity error " +
             fmt("%.1e", sem.report["worst_identity_relative_error"].get<double>()));

  // 6
  const long c6 = total({"rate"});
  double worst_ratio = 0.0;
  for (const auto& a : audits) worst_ratio = std::max(worst_ratio, a.details["worst_rate_ratio"].get<double>());
  report(6, c6 == 0, "sublinear rate", std::to_string(c6) + " violations, max k(f-f*)/C " + fmt("%.2e", worst_ratio));
  if (c6 != 0) {
    for (const auto& a : audits) {
      if (a.violation_count({"rate"}) == 0) continue;
      std::printf("    %s: %s\n", a.name.c_str(), a.details["constants"].dump().c_str());
    }
  }

  // 7
  const long c7 = total({"identification_finite", "identification_exact", "kA_bound", "kN_bound"});
  double min_ratio_A = kInf, min_ratio_N = kInf;
  for (const auto& a : audits) {
    const Json& id = a.details["identification"];
    if (id["kA_emp"].is_number() && id["kA_bound"].is_number()) {
      min_ratio_A = std::min(min_ratio_A, id["kA_bound"].get<double>() / std::max(1.0, id["kA_emp"].get<double>()));
    }
    if (id["kN_emp"].is_number() && id["kN_bound"].is_number()) {
      min_ratio_N = std::min(min_ratio_N, id["kN_bound"].get<double>() / std::max(1.0, id["kN_emp"].get<double>()));
    }
  }
  report(7, c7 == 0, "identification",
         std::to_string(c7) + " violations, min bound/empirical kA " + fmt("%.1e", min_ratio_A) +
             ", kN " + fmt("%.1e", min_ratio_N));

  // 8
  const long c8 = total({"radius_j", "radius_dmin", "radius_A"});
  report(8, c8 == 0, "radius checks", std::to_string(c8) + " violations");

  // 9
  {
    const Instance e1 = gen_e1();
    const BoxSimplexProblem& p = e1.problem;
    const SolutionCertificate c = solve_qp_enumerate(p);
    const LipschitzTable t = lipschitz_table_quadratic(*p.objective().hessian());
    const Vector x0 = *e1.x0;
    const InnerStep w1 = inner_step(p, x0, 1, 0, ArmijoParams{});
    std::vector<std::string> bad;
    auto expect = [&](const char* name, double got, double want) {
      if (!close(got, want)) bad.push_back(std::string(name) + "=" + fmt("%.12g", got));
    };
    expect("x*_1", c.x_star[0], 0.4);
    expect("x*_2", c.x_star[1], 0.6);
    expect("x*_3", c.x_star[2], 0.0);
    expect("lambda*", c.lambda_star, -0.1);
    expect("zeta", c.zeta.value_or(kInf), 0.3);
    expect("D*max", c.dmax_star, 0.6);
    expect("D*min", c.dmin_star.value_or(kInf), 0.4);
    expect("Lmax", t.Lmax, 2.0);
    expect("Lbar", t.Lbar, 4.0);
    expect("r_j", radius_j(c, 1.0), 0.3);
    expect("g", w1.record.g, 1.2);
    expect("alpha_bar", w1.record.alpha_bar, 1.0 / 1.2);
    expect("alpha_hat", interiority_cap(p, x0, 0, 1.2, 0.5), 0.5 / 1.2);
    expect("alpha", w1.record.alpha, 0.5 / 1.2);
    expect("z'_1", w1.z_next[0], 0.5);
    expect("z'_2", w1.z_next[1], 0.5);
    expect("z'_3", w1.z_next[2], 0.0);
    std::string detail = bad.empty() ? "all 17 values within 1e-9" : "";
    for (const auto& b : bad) detail += b + " ";
    report(9, bad.empty(), "E1 golden values", detail);
  }

  // 10
  {
    std::vector<std::string> differing;
    for (const auto& name : suite_names()) {
      SuiteOptions o;
      o.seed = 11;
      o.trials = name == "seminorm" || name == "lemmas" ? 200 : 10;
      o.workers = 1;
      const std::string a = run_suite(name, o).report.dump();
      o.workers = 0;
      const std::string b = run_suite(name, o).report.dump();
      if (a != b) differing.push_back(name);
    }
    std::string detail = differing.empty() ? "7 suites byte-identical across two runs" : "differs:";
    for (const auto& d : differing) detail += " " + d;
    report(10, differing.empty(), "determinism", detail);
  }

  std::printf("%d criterion(s) failed\n", failures);
  return failures == 0 ? 0 : 1;
}
