#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <string>

#include <json.hpp>

#include "ac2cd/problem.hpp"
#include "ac2cd/solver.hpp"

namespace ac2cd {

using Json = nlohmann::json;

/// Doubles as JSON; +-inf become "inf" / "-inf" and NaN becomes "nan".
Json number_to_json(double v);
double number_from_json(const Json& j);

Json vector_to_json(const Vector& v);
Vector vector_from_json(const Json& j);

Json certificate_to_json(const SolutionCertificate& cert);
SolutionCertificate certificate_from_json(const Json& j);

/// {name, n, b, l, u, objective, mu?, x0?, certificate?}. The objective is
/// {"kind": "quadratic", "H": rows, "q": [...], "constant": c} or
/// {"kind": "factored", "Q": rows, "q": [...]}.
Json instance_to_json(const Instance& inst);
Instance instance_from_json(const Json& j);

/// Throws FormatError on unreadable files or malformed content.
Instance load_instance(const std::string& path);
void save_instance(const std::string& path, const Instance& inst);

/// One JSON object per outer iteration, inner steps included when traced.
Json record_to_json(const OuterRecord& rec, std::optional<double> f_star);
void write_trace_jsonl(std::ostream& out, const Trace& trace, std::optional<double> f_star);

/// Columns: k, f, gap, residual, j, Dk, n_active, min_alpha, max_backtracks.
/// gap is left empty without f*, j is empty on the final record.
void write_summary_csv(std::ostream& out, const Trace& trace, std::optional<double> f_star);

/// Flat key=value text; '#' starts a comment, blank lines are ignored.
std::map<std::string, std::string> parse_config_text(const std::string& text);
std::map<std::string, std::string> load_config_file(const std::string& path);

/// Applies known keys (tau, gamma, delta, A_l, A_u, epsilon, strategy,
/// permutation, seed, kkt_tol, active_tol, max_outer, max_backtracks,
/// trace_level). Unknown keys and bad values throw FormatError.
void apply_config(SolverConfig& config, const std::map<std::string, std::string>& values);

std::string to_string(StepStrategy s);
std::string to_string(PermutationStrategy s);

}  // namespace ac2cd
