#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "ac2cd/line_search.hpp"
#include "ac2cd/problem.hpp"

namespace ac2cd {

enum class PermutationStrategy { Identity, FixedShuffle, ReshufflePerOuter };
enum class TraceLevel { Summary, Full };

struct SolverConfig {
  double tau = 0.5;
  PermutationStrategy permutation = PermutationStrategy::ReshufflePerOuter;
  std::uint64_t seed = 0;
  ArmijoParams armijo;
  long max_outer = 100000;
  double kkt_tol = 1e-8;
  double active_tol = kDefaultActiveTol;
  TraceLevel trace_level = TraceLevel::Full;

  void validate() const;
};

/// One outer iterate x^k and, unless it is the last record, the cycle of
/// inner steps that produced x^{k+1}.
struct OuterRecord {
  long k = 0;
  Vector x;
  double f = 0.0;
  double kkt_residual = 0.0;
  double lambda = 0.0;
  double Dk = 0.0;
  std::vector<Index> at_bound;  // {i : x_i == l_i or x_i == u_i}

  Index j = -1;
  std::vector<Index> permutation;
  std::vector<StepRecord> steps;     // Full only, one per inner iteration
  std::vector<Vector> inner_points;  // Full only, z^{k,1} .. z^{k,n+1}
  double min_alpha = kInf;           // over steps with Delta > 0
  double min_A = kInf;               // over steps with g != 0
  int max_backtracks = 0;

  bool iterated() const { return j >= 0; }
};

struct Trace {
  TraceLevel level = TraceLevel::Full;
  std::vector<OuterRecord> records;
  bool vertex_stall = false;  // some x^k had D^k = 0
};

enum class SolveStatus { Converged, IterationCap, LineSearchFailure };

struct SolveResult {
  Trace trace;
  KKTCertificate final_kkt;
  SolveStatus status = SolveStatus::IterationCap;
  std::string diagnostic;

  const Vector& final_x() const { return trace.records.back().x; }
};

/// Produces p^k_1..p^k_n for successive outer iterations.
class PermutationSource {
 public:
  PermutationSource(PermutationStrategy strategy, Index n, std::uint64_t seed);
  const std::vector<Index>& next();

 private:
  PermutationStrategy strategy_;
  std::mt19937_64 rng_;
  std::vector<Index> current_;
  bool first_ = true;
};

/// argmax_h D_h(x), lowest index on ties. Satisfies D_j >= tau D^k for every
/// tau in (0,1].
Index select_j(const BoxSimplexProblem& p, const Vector& x, double tau);

struct InnerStep {
  Vector z_next;
  StepRecord record;
};

/// Moves (z_pk, z_j) along g (e_pk - e_j) with an Armijo step. When the full
/// feasible step is taken the binding coordinate is set exactly on its bound.
InnerStep inner_step(const BoxSimplexProblem& p, const Vector& z, Index pk, Index j,
                     const ArmijoParams& armijo);

struct OuterStep {
  Vector x_next;
  OuterRecord record;
};

OuterStep outer_iteration(const BoxSimplexProblem& p, const Vector& x, Index j,
                          const std::vector<Index>& permutation, const SolverConfig& config);

SolveResult solve(const BoxSimplexProblem& p, const Vector& x0, const SolverConfig& config);

struct IdentificationResult {
  std::optional<long> kA;  // empty: strictly active set not identified on the trace tail
  std::optional<long> kN;
};

/// Smallest k after which every recorded iterate has x_h == x*_h on the strictly
/// active set (kA) and l_h < x_h < u_h off the active set (kN).
IdentificationResult identification_detector(const BoxSimplexProblem& p, const Trace& trace,
                                             const SolutionCertificate& cert, double tol);

std::string to_string(SolveStatus status);

}  // namespace ac2cd
