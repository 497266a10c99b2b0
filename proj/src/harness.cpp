#include "ac2cd/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <random>
#include <thread>

#include "ac2cd/reference.hpp"
#include "ac2cd/seminorm.hpp"
#include "ac2cd/zoo.hpp"

namespace ac2cd {

void parallel_for(std::size_t count, unsigned workers,
                  const std::function<void(std::size_t)>& fn) {
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, std::max<std::size_t>(count, 1)));
  std::vector<std::exception_ptr> errors(count);
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned w = 1; w < workers; ++w) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

long AuditReport::violation_count(const std::vector<std::string>& checks) const {
  long total = 0;
  for (const auto& c : checks) {
    if (auto it = violations.find(c); it != violations.end()) total += it->second;
  }
  return total;
}

long AuditReport::total_violations() const {
  long total = 0;
  for (const auto& [name, count] : violations) total += count;
  return total;
}

namespace {

Json optional_number(const std::optional<double>& v) {
  return v ? number_to_json(*v) : Json(nullptr);
}

Json optional_long(const std::optional<long>& v) { return v ? Json(*v) : Json(nullptr); }

double inf_norm(const Vector& v) { return v.lpNorm<Eigen::Infinity>(); }

const char* kChecks[] = {"status",       "gap",          "feasibility",   "monotone",
                         "decrease",     "obj_decrease", "prop_1",        "stepsize",
                         "A_floor",      "interiority",  "req_A_D",       "rate",
                         "identification_finite", "identification_exact", "kA_bound",
                         "kN_bound",     "radius_j",     "radius_dmin",   "radius_A"};

}  // namespace

AuditReport audit_instance(const Instance& inst, const SolverConfig& config, double table_factor) {
  const BoxSimplexProblem& p = inst.problem;
  const Matrix* H = p.objective().hessian();
  require(H != nullptr, "audit_instance: objective has no Hessian");
  require(inst.certificate.has_value(), "audit_instance: instance has no certificate");
  require(inst.x0.has_value(), "audit_instance: instance has no start point");
  const SolutionCertificate& cert = *inst.certificate;
  const ArmijoParams& ap = config.armijo;
  const Index n = p.n();

  SolverConfig cfg = config;
  cfg.trace_level = TraceLevel::Full;
  const SolveResult res = solve(p, *inst.x0, cfg);
  const auto& recs = res.trace.records;

  LipschitzTable table = lipschitz_table_quadratic(*H);
  if (table_factor != 1.0) table = scaled_table(table, table_factor);

  AuditReport a;
  a.name = inst.name;
  a.n = n;
  a.status = res.status;
  a.outer_iterations = static_cast<long>(recs.size()) - 1;
  for (const char* c : kChecks) a.violations[c] = 0;
  auto& v = a.violations;

  const double fstar = cert.f_star;
  a.final_gap = recs.back().f - fstar;
  if (res.status != SolveStatus::Converged) ++v["status"];
  if (a.final_gap > 1e-6 * (1.0 + std::abs(fstar))) ++v["gap"];

  const double mu = inst.mu.value_or(0.0);
  RateOptions ropts;
  if (mu <= 0.0) ropts.level_set_samples = 2000;
  a.rate = rate_constants(p, table, cert, p.value(*inst.x0), ap, mu, ropts, &*inst.x0);
  const RateConstants& rc = a.rate;

  double min_A = kInf;
  double min_alpha = kInf;
  double worst_rate_ratio = 0.0;
  int max_bt = 0;
  const bool interiority = ap.strategy == StepStrategy::InteriorityPreserving;

  for (std::size_t r = 0; r < recs.size(); ++r) {
    const OuterRecord& rec = recs[r];
    if (!is_feasible(p, rec.x, 1e-9)) ++v["feasibility"];
    if (rec.k >= 1) {
      const double gap = rec.f - fstar;
      if (gap > rc.C / static_cast<double>(rec.k) + 1e-9) ++v["rate"];
      if (rc.C > 0.0) worst_rate_ratio = std::max(worst_rate_ratio, gap * rec.k / rc.C);
    }
    if (!rec.iterated() || r + 1 >= recs.size()) continue;

    const Vector& x = rec.x;
    const Vector& xn = recs[r + 1].x;
    const double fk = rec.f;
    const double fn = recs[r + 1].f;
    const Index j = rec.j;
    const double tol = 1e-10 * (1.0 + std::abs(fk));
    if (fn > fk + 1e-12 * (1.0 + std::abs(fk))) ++v["monotone"];
    const double moved = seminorm_j(xn - x, j);
    if (fk - fn < ap.gamma / ap.A_u * moved * moved - tol) ++v["decrease"];
    const double excess = fn - fstar;
    if (fk - fn < ap.gamma * excess * excess / (ap.A_u * (n - 1) * rc.fdec * rc.fdec) - tol) {
      ++v["obj_decrease"];
    }

    // The permutation must visit every coordinate once.
    std::vector<Index> sorted = rec.permutation;
    std::sort(sorted.begin(), sorted.end());
    for (Index i = 0; i < n; ++i) {
      if (sorted[static_cast<std::size_t>(i)] != i) {
        ++v["prop_1"];
        break;
      }
    }

    const double Dx = distance_to_bound(p, x, j);
    double eps_pow = 1.0;
    for (std::size_t i = 0; i < rec.steps.size(); ++i) {
      const StepRecord& s = rec.steps[i];
      const Vector& z = rec.inner_points[i];
      const Vector& zn = rec.inner_points[i + 1];
      eps_pow *= ap.epsilon;
      max_bt = std::max(max_bt, s.backtracks);

      if (s.p != j) {
        if (z[s.p] != x[s.p] || xn[s.p] != zn[s.p]) ++v["prop_1"];
      }
      if (s.Delta > 0.0) {
        min_alpha = std::min(min_alpha, s.alpha);
        const double floor = std::min(s.Delta, 2.0 * ap.delta * (1.0 - ap.gamma) / table.Lij(s.p, j));
        if (s.alpha < floor - 1e-12) ++v["stepsize"];
      }
      if (s.g != 0.0) {
        min_A = std::min(min_A, s.A);
        if (s.A < ap.A_l) ++v["A_floor"];
      }
      if (interiority) {
        const double D = distance_to_bound(p, zn, j);
        if (D < eps_pow * Dx - 1e-14 * std::max(1.0, Dx)) ++v["interiority"];
      }
    }
    if (interiority) {
      for (const Vector& z : rec.inner_points) {
        if (!(p.lower(j) < z[j] && z[j] < p.upper(j))) ++v["req_A_D"];
      }
    }
  }

  // Identification.
  std::vector<bool> active(static_cast<std::size_t>(n), false);
  for (Index i : cert.active) active[static_cast<std::size_t>(i)] = true;
  const bool degenerate = cert.active.size() != cert.strict_active.size();
  std::optional<long> kA, kN;
  bool detected = false;
  try {
    const IdentificationResult id = identification_detector(p, res.trace, cert, 1e-6);
    kA = id.kA;
    kN = id.kN;
    detected = true;
  } catch (const ContractError&) {
  }
  if (!kA || !kN) ++v["identification_finite"];
  if (kA && kN && !degenerate) {
    const long from = std::max(*kA, *kN);
    for (const OuterRecord& rec : recs) {
      if (rec.k > from && rec.at_bound != cert.active) ++v["identification_exact"];
    }
  }

  std::optional<double> kA_bound, kN_bound, r_A;
  const double r_j = radius_j(cert, config.tau);
  if (!cert.strict_active.empty()) r_A = radius_A(cert, table, ap);
  if (mu > 0.0 && cert.dmin_star) {
    kN_bound = kN_bound_value(rc, *cert.dmin_star);
    if (r_A) kA_bound = complexity_bounds(rc, {r_j, *r_A}, *cert.dmin_star).kA_bound;
  }
  if (kA && kA_bound && static_cast<double>(*kA) > *kA_bound) ++v["kA_bound"];
  if (kN && kN_bound && static_cast<double>(*kN) > *kN_bound) ++v["kN_bound"];

  for (const OuterRecord& rec : recs) {
    const double dist = inf_norm(rec.x - cert.x_star);
    if (rec.iterated() && dist < r_j && active[static_cast<std::size_t>(rec.j)]) ++v["radius_j"];
    if (cert.dmin_star && dist < *cert.dmin_star) {
      for (Index h = 0; h < n; ++h) {
        if (active[static_cast<std::size_t>(h)]) continue;
        if (!(p.lower(h) < rec.x[h] && rec.x[h] < p.upper(h))) ++v["radius_dmin"];
      }
    }
  }
  if (r_A) {
    // Earliest k_bar after which every iterated record keeps all inner points
    // inside the r_A ball with j(k) off the active set.
    std::optional<long> k_bar;
    for (std::size_t r = recs.size(); r-- > 0;) {
      const OuterRecord& rec = recs[r];
      if (!rec.iterated()) continue;
      bool inside = !active[static_cast<std::size_t>(rec.j)];
      for (const Vector& z : rec.inner_points) inside = inside && (z - cert.x_star).norm() < *r_A;
      if (!inside) break;
      k_bar = rec.k;
    }
    if (k_bar) {
      for (const OuterRecord& rec : recs) {
        if (rec.k <= *k_bar) continue;
        for (Index h : cert.strict_active) {
          if (rec.x[h] != cert.x_star[h]) ++v["radius_A"];
        }
      }
    }
  }

  Json& d = a.details;
  d["status"] = to_string(res.status);
  d["outer_iterations"] = a.outer_iterations;
  d["final_gap"] = number_to_json(a.final_gap);
  d["final_kkt_residual"] = number_to_json(res.final_kkt.residual);
  d["constants"] = {{"T", number_to_json(rc.T)},       {"R0", number_to_json(rc.R0)},
                    {"Gstar", number_to_json(rc.Gstar)}, {"fdec", number_to_json(rc.fdec)},
                    {"C", number_to_json(rc.C)},       {"mu", number_to_json(rc.mu)},
                    {"Lmax", number_to_json(table.Lmax)}, {"Lbar", number_to_json(table.Lbar)},
                    {"L", number_to_json(table.L)}};
  d["worst_rate_ratio"] = number_to_json(worst_rate_ratio);
  d["min_alpha"] = number_to_json(min_alpha);
  d["min_A"] = number_to_json(min_A);
  d["max_backtracks"] = max_bt;
  d["identification"] = {{"detected", detected},          {"kA_emp", optional_long(kA)},
                         {"kN_emp", optional_long(kN)},   {"kA_bound", optional_number(kA_bound)},
                         {"kN_bound", optional_number(kN_bound)}, {"r_j", number_to_json(r_j)},
                         {"r_A", optional_number(r_A)},   {"degenerate", degenerate}};
  return a;
}

Json audit_to_json(const AuditReport& a, const std::vector<std::string>& checks) {
  Json j;
  j["name"] = a.name;
  j["n"] = a.n;
  Json viol = Json::object();
  for (const auto& c : checks) {
    auto it = a.violations.find(c);
    viol[c] = it == a.violations.end() ? 0 : it->second;
  }
  j["violations"] = std::move(viol);
  j["details"] = a.details;
  return j;
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = {"seminorm", "lemmas",      "descent",
                                                 "stepsize", "interiority", "rate",
                                                 "identification"};
  return names;
}

const std::vector<std::string>& suite_checks(const std::string& name) {
  static const std::map<std::string, std::vector<std::string>> table = {
      {"descent", {"feasibility", "monotone", "decrease", "obj_decrease", "prop_1"}},
      {"stepsize", {"stepsize", "A_floor"}},
      {"interiority", {"interiority", "req_A_D"}},
      {"rate", {"status", "gap", "rate"}},
      {"identification",
       {"identification_finite", "identification_exact", "kA_bound", "kN_bound", "radius_j",
        "radius_dmin", "radius_A"}},
  };
  auto it = table.find(name);
  if (it == table.end()) throw ContractError("no audit checks for suite \"" + name + "\"");
  return it->second;
}

namespace {

SuiteReport seminorm_suite(const SuiteOptions& o) {
  const int trials = o.trials > 0 ? o.trials : 1000;
  std::mt19937_64 rng(o.seed);
  std::uniform_int_distribution<Index> dim(2, 10);
  std::normal_distribution<double> normal(0.0, 1.0);
  long v_identity = 0, v_cauchy = 0, v_abs = 0, v_sum_abs = 0, v_le_norm = 0;
  double worst_identity = 0.0;
  for (int t = 0; t < trials; ++t) {
    const Index n = dim(rng);
    const Index j = std::uniform_int_distribution<Index>(0, n - 1)(rng);
    Vector x(n), y(n), vv(n), xp(n), w(n);
    for (Index i = 0; i < n; ++i) {
      x[i] = normal(rng);
      y[i] = normal(rng);
      vv[i] = normal(rng);
      xp[i] = normal(rng);
      w[i] = normal(rng);
    }
    w.array() -= w.mean();
    const Vector xpp = xp + w;
    const IdentitySides s = reduced_product_identity(vv, xp, xpp, j);
    const double rel = std::abs(s.lhs - s.rhs) / (1.0 + std::abs(s.lhs));
    worst_identity = std::max(worst_identity, rel);
    if (rel > 1e-12) ++v_identity;

    const double nx = seminorm_j(x, j);
    const double ny = seminorm_j(y, j);
    const double slack = 1e-12 * (1.0 + nx * ny);
    if (inner_j(x, y, j) > nx * ny + slack) ++v_cauchy;
    double sum_abs = 0.0;
    for (Index i = 0; i < n; ++i) {
      if (i == j) continue;
      if (std::abs(x[i]) > nx * (1.0 + 1e-12)) ++v_abs;
      sum_abs += std::abs(x[i]);
    }
    if (sum_abs > std::sqrt(static_cast<double>(n - 1)) * nx * (1.0 + 1e-12)) ++v_sum_abs;
    if (nx > x.norm() * (1.0 + 1e-12)) ++v_le_norm;
  }
  SuiteReport out;
  out.violations = v_identity + v_cauchy + v_abs + v_sum_abs + v_le_norm;
  out.report["trials"] = trials;
  out.report["worst_identity_relative_error"] = worst_identity;
  out.report["violations_by_check"] = {{"identity", v_identity},     {"cauchy", v_cauchy},
                                       {"abs_vs_seminorm", v_abs}, {"sum_abs_vs_seminorm", v_sum_abs},
                                       {"seminorm_le_norm", v_le_norm}};
  return out;
}

std::vector<Instance> lemma_instances(std::uint64_t seed, int count) {
  std::vector<Instance> insts;
  insts.push_back(gen_e1());
  for (auto& inst : acceptance_family(count - 1, seed)) insts.push_back(std::move(inst));
  return insts;
}

SuiteReport lemmas_suite(const SuiteOptions& o) {
  const int trials = o.trials > 0 ? o.trials : 1000;
  const std::vector<Instance> insts = lemma_instances(o.seed, 10);
  std::vector<LemmaReport> reports(insts.size());
  parallel_for(insts.size(), o.workers, [&](std::size_t i) {
    LipschitzTable table = lipschitz_table_quadratic(*insts[i].problem.objective().hessian());
    if (o.corrupt_lipschitz) table = scaled_table(table, 0.5);
    reports[i] = lemma_suite(insts[i].problem, table, trials, o.seed + i);
  });
  SuiteReport out;
  Json arr = Json::array();
  for (std::size_t i = 0; i < insts.size(); ++i) {
    const LemmaReport& r = reports[i];
    out.violations += r.violations();
    arr.push_back({{"name", insts[i].name},
                   {"worst_slack", {{"lips_const", r.worst_lips_const},
                                    {"corollary", r.worst_corollary},
                                    {"descent", r.worst_descent}}},
                   {"violations", {{"lips_const", r.violations_lips_const},
                                   {"corollary", r.violations_corollary},
                                   {"descent", r.violations_descent}}}});
  }
  out.report["trials_per_instance"] = trials;
  out.report["instances"] = std::move(arr);
  return out;
}

SuiteReport audit_suite(const std::string& name, const SuiteOptions& o) {
  const int count = o.trials > 0 ? o.trials : 20;
  const std::vector<Instance> insts = acceptance_family(count, o.seed);
  const double factor = o.corrupt_lipschitz ? 0.5 : 1.0;
  std::vector<AuditReport> audits(insts.size());
  parallel_for(insts.size(), o.workers,
               [&](std::size_t i) { audits[i] = audit_instance(insts[i], o.solver, factor); });
  const auto& checks = suite_checks(name);
  SuiteReport out;
  Json arr = Json::array();
  for (const AuditReport& a : audits) {
    out.violations += a.violation_count(checks);
    arr.push_back(audit_to_json(a, checks));
  }
  out.report["instance_count"] = count;
  out.report["checks"] = checks;
  out.report["instances"] = std::move(arr);
  return out;
}

}  // namespace

SuiteReport run_suite(const std::string& name, const SuiteOptions& options) {
  const auto& names = suite_names();
  if (std::find(names.begin(), names.end(), name) == names.end()) {
    throw ContractError("unknown suite \"" + name + "\"");
  }
  SuiteReport out;
  if (name == "seminorm") out = seminorm_suite(options);
  else if (name == "lemmas") out = lemmas_suite(options);
  else out = audit_suite(name, options);
  out.report["suite"] = name;
  out.report["seed"] = options.seed;
  out.report["corrupt_lipschitz"] = options.corrupt_lipschitz;
  out.report["violations"] = out.violations;
  out.report["passed"] = out.violations == 0;
  return out;
}

Json complexity_report(const Instance& inst, const SolverConfig& config) {
  if (!inst.mu || !(*inst.mu > 0.0)) {
    throw ContractError("bounds require strong convexity (mu > 0)");
  }
  const BoxSimplexProblem& p = inst.problem;
  const Matrix* H = p.objective().hessian();
  require(H != nullptr, "complexity_report: objective has no Hessian");
  const SolutionCertificate cert = inst.certificate ? *inst.certificate : solve_qp_enumerate(p);
  const Vector x0 = inst.x0 ? *inst.x0 : default_start(p);

  SolverConfig cfg = config;
  cfg.trace_level = TraceLevel::Summary;
  const SolveResult res = solve(p, x0, cfg);

  const LipschitzTable table = lipschitz_table_quadratic(*H);
  const RateConstants rc = rate_constants(p, table, cert, p.value(x0), config.armijo, *inst.mu);
  const double r_j = radius_j(cert, config.tau);
  std::optional<double> r_A;
  if (!cert.strict_active.empty()) r_A = radius_A(cert, table, config.armijo);

  Json notes = Json::array();
  std::optional<double> kA_bound, kN_bound;
  if (cert.dmin_star) {
    kN_bound = kN_bound_value(rc, *cert.dmin_star);
    if (r_A) kA_bound = complexity_bounds(rc, {r_j, *r_A}, *cert.dmin_star).kA_bound;
  } else {
    notes.push_back("D*min undefined: every index is active");
  }
  if (!r_A) notes.push_back("r_A undefined: no strictly active index; only the kN path is reported");
  if (cert.active.size() != cert.strict_active.size()) {
    Json unclassified = Json::array();
    for (Index i : cert.active) {
      if (std::find(cert.strict_active.begin(), cert.strict_active.end(), i) ==
          cert.strict_active.end()) {
        unclassified.push_back(i);
      }
    }
    notes.push_back("degenerate: active coordinates with zero gradient gap are not classified: " +
                    unclassified.dump());
  }

  std::optional<long> kA, kN;
  std::string detector = "ok";
  try {
    const IdentificationResult id = identification_detector(p, res.trace, cert, 1e-6);
    kA = id.kA;
    kN = id.kN;
  } catch (const ContractError& e) {
    detector = e.what();
  }

  auto ratio = [](const std::optional<double>& bound, const std::optional<long>& emp) -> Json {
    if (!bound || !emp) return nullptr;
    return number_to_json(*bound / std::max(1.0, static_cast<double>(*emp)));
  };
  auto within = [](const std::optional<double>& bound, const std::optional<long>& emp) -> Json {
    if (!bound || !emp) return nullptr;
    return static_cast<double>(*emp) <= *bound;
  };

  Json j;
  j["instance"] = inst.name;
  j["status"] = to_string(res.status);
  j["outer_iterations"] = static_cast<long>(res.trace.records.size()) - 1;
  j["constants"] = {{"T", number_to_json(rc.T)},         {"R0", number_to_json(rc.R0)},
                    {"Gstar", number_to_json(rc.Gstar)},   {"fdec", number_to_json(rc.fdec)},
                    {"C", number_to_json(rc.C)},           {"mu", number_to_json(rc.mu)},
                    {"Lmax", number_to_json(table.Lmax)},  {"Lbar", number_to_json(table.Lbar)},
                    {"L", number_to_json(table.L)}};
  j["r_j"] = number_to_json(r_j);
  j["r_A"] = r_A ? number_to_json(*r_A) : Json("undefined");
  j["kA_bound"] = optional_number(kA_bound);
  j["kN_bound"] = optional_number(kN_bound);
  j["kA_emp"] = r_A ? optional_long(kA) : Json(0);
  j["kN_emp"] = optional_long(kN);
  j["ratio_kA"] = ratio(kA_bound, kA);
  j["ratio_kN"] = ratio(kN_bound, kN);
  j["kA_within_bound"] = within(kA_bound, kA);
  j["kN_within_bound"] = within(kN_bound, kN);
  j["detector"] = detector;
  j["notes"] = std::move(notes);
  return j;
}

}  // namespace ac2cd
