#include "ac2cd/io.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

namespace ac2cd {

Json number_to_json(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

double number_from_json(const Json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf" || s == "+inf") return kInf;
    if (s == "-inf") return -kInf;
    if (s == "nan") return std::nan("");
  }
  throw FormatError("expected a number or \"inf\"/\"-inf\", got " + j.dump());
}

Json vector_to_json(const Vector& v) {
  Json arr = Json::array();
  for (Index i = 0; i < v.size(); ++i) arr.push_back(number_to_json(v[i]));
  return arr;
}

Vector vector_from_json(const Json& j) {
  if (!j.is_array()) throw FormatError("expected an array, got " + j.dump());
  Vector v(static_cast<Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v[static_cast<Index>(i)] = number_from_json(j[i]);
  return v;
}

namespace {

Json matrix_to_json(const Matrix& M) {
  Json rows = Json::array();
  for (Index i = 0; i < M.rows(); ++i) rows.push_back(vector_to_json(M.row(i).transpose()));
  return rows;
}

Matrix matrix_from_json(const Json& j, Index cols) {
  if (!j.is_array()) throw FormatError("expected a matrix as an array of rows");
  Matrix M(static_cast<Index>(j.size()), cols);
  for (std::size_t r = 0; r < j.size(); ++r) {
    const Vector row = vector_from_json(j[r]);
    if (row.size() != cols) throw FormatError("matrix row has wrong length");
    M.row(static_cast<Index>(r)) = row.transpose();
  }
  return M;
}

Json index_list(const std::vector<Index>& v) {
  Json arr = Json::array();
  for (Index i : v) arr.push_back(i);
  return arr;
}

std::vector<Index> index_list_from(const Json& j) {
  if (!j.is_array()) throw FormatError("expected an index array");
  std::vector<Index> v;
  for (const auto& e : j) v.push_back(e.get<Index>());
  return v;
}

const Json& field(const Json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end()) throw FormatError(std::string("missing field \"") + key + "\"");
  return *it;
}

}  // namespace

Json certificate_to_json(const SolutionCertificate& cert) {
  Json j;
  j["x_star"] = vector_to_json(cert.x_star);
  j["lambda_star"] = number_to_json(cert.lambda_star);
  j["f_star"] = number_to_json(cert.f_star);
  j["active"] = index_list(cert.active);
  j["strict_active"] = index_list(cert.strict_active);
  if (cert.zeta) j["zeta"] = number_to_json(*cert.zeta);
  j["dmax_star"] = number_to_json(cert.dmax_star);
  if (cert.dmin_star) j["dmin_star"] = number_to_json(*cert.dmin_star);
  if (cert.condition_estimate) j["condition_estimate"] = number_to_json(*cert.condition_estimate);
  return j;
}

SolutionCertificate certificate_from_json(const Json& j) {
  try {
    SolutionCertificate c;
    c.x_star = vector_from_json(field(j, "x_star"));
    c.lambda_star = number_from_json(field(j, "lambda_star"));
    c.f_star = number_from_json(field(j, "f_star"));
    c.active = index_list_from(field(j, "active"));
    c.strict_active = index_list_from(field(j, "strict_active"));
    if (j.contains("zeta")) c.zeta = number_from_json(j["zeta"]);
    c.dmax_star = number_from_json(field(j, "dmax_star"));
    if (j.contains("dmin_star")) c.dmin_star = number_from_json(j["dmin_star"]);
    if (j.contains("condition_estimate")) {
      c.condition_estimate = number_from_json(j["condition_estimate"]);
    }
    return c;
  } catch (const Json::exception& e) {
    throw FormatError(std::string("bad certificate: ") + e.what());
  }
}

Json instance_to_json(const Instance& inst) {
  const BoxSimplexProblem& p = inst.problem;
  Json j;
  j["name"] = inst.name;
  j["n"] = p.n();
  j["b"] = number_to_json(p.b());
  j["l"] = vector_to_json(p.lower());
  j["u"] = vector_to_json(p.upper());
  const Objective& f = p.objective();
  if (auto* quad = dynamic_cast<const QuadraticObjective*>(&f)) {
    j["objective"] = {{"kind", "quadratic"},
                      {"H", matrix_to_json(*quad->hessian())},
                      {"q", vector_to_json(quad->linear())},
                      {"constant", number_to_json(quad->constant())}};
  } else if (auto* fac = dynamic_cast<const FactoredObjective*>(&f)) {
    j["objective"] = {{"kind", "factored"},
                      {"Q", matrix_to_json(fac->factor())},
                      {"q", vector_to_json(fac->linear())}};
  } else {
    throw ContractError("instance_to_json: objective kind cannot be serialized");
  }
  if (inst.mu) j["mu"] = number_to_json(*inst.mu);
  if (inst.x0) j["x0"] = vector_to_json(*inst.x0);
  if (inst.certificate) j["certificate"] = certificate_to_json(*inst.certificate);
  return j;
}

Instance instance_from_json(const Json& j) {
  try {
    if (!j.is_object()) throw FormatError("instance must be a JSON object");
    const Index n = field(j, "n").get<Index>();
    if (n < 1) throw FormatError("n must be positive");
    const Vector l = vector_from_json(field(j, "l"));
    const Vector u = vector_from_json(field(j, "u"));
    if (l.size() != n || u.size() != n) throw FormatError("bounds do not match n");
    const double b = number_from_json(field(j, "b"));

    const Json& obj = field(j, "objective");
    const std::string kind = field(obj, "kind").get<std::string>();
    std::shared_ptr<const Objective> f;
    if (kind == "quadratic") {
      const Matrix H = matrix_from_json(field(obj, "H"), n);
      if (H.rows() != n) throw FormatError("H must be n x n");
      const Vector q = obj.contains("q") ? vector_from_json(obj["q"]) : Vector::Zero(n);
      if (q.size() != n) throw FormatError("q does not match n");
      const double c = obj.contains("constant") ? number_from_json(obj["constant"]) : 0.0;
      f = std::make_shared<QuadraticObjective>(H, q, c);
    } else if (kind == "factored") {
      const Matrix Q = matrix_from_json(field(obj, "Q"), n);
      const Vector q = vector_from_json(field(obj, "q"));
      if (q.size() != n) throw FormatError("q does not match n");
      f = std::make_shared<FactoredObjective>(Q, q);
    } else {
      throw FormatError("unknown objective kind \"" + kind + "\"");
    }

    Instance inst{j.value("name", std::string("instance")), BoxSimplexProblem(l, u, b, f),
                  std::nullopt, std::nullopt, std::nullopt};
    if (j.contains("mu")) inst.mu = number_from_json(j["mu"]);
    if (j.contains("x0")) {
      inst.x0 = vector_from_json(j["x0"]);
      if (inst.x0->size() != n) throw FormatError("x0 does not match n");
    }
    if (j.contains("certificate")) {
      inst.certificate = certificate_from_json(j["certificate"]);
      if (inst.certificate->x_star.size() != n) throw FormatError("certificate does not match n");
    }
    return inst;
  } catch (const Json::exception& e) {
    throw FormatError(std::string("bad instance: ") + e.what());
  } catch (const ContractError& e) {
    throw FormatError(std::string("bad instance: ") + e.what());
  }
}

Instance load_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open " + path);
  Json j;
  try {
    in >> j;
  } catch (const Json::exception& e) {
    throw FormatError(path + ": " + e.what());
  }
  return instance_from_json(j);
}

void save_instance(const std::string& path, const Instance& inst) {
  std::ofstream out(path);
  if (!out) throw FormatError("cannot write " + path);
  out << instance_to_json(inst).dump(2) << '\n';
}

Json record_to_json(const OuterRecord& rec, std::optional<double> f_star) {
  Json j;
  j["k"] = rec.k;
  j["x"] = vector_to_json(rec.x);
  j["f"] = number_to_json(rec.f);
  if (f_star) j["gap"] = number_to_json(rec.f - *f_star);
  j["kkt_residual"] = number_to_json(rec.kkt_residual);
  j["lambda"] = number_to_json(rec.lambda);
  j["Dk"] = number_to_json(rec.Dk);
  j["at_bound"] = index_list(rec.at_bound);
  if (rec.iterated()) {
    j["j"] = rec.j;
    j["permutation"] = index_list(rec.permutation);
    j["min_alpha"] = number_to_json(rec.min_alpha);
    j["min_A"] = number_to_json(rec.min_A);
    j["max_backtracks"] = rec.max_backtracks;
    if (!rec.steps.empty()) {
      Json steps = Json::array();
      for (const StepRecord& s : rec.steps) {
        steps.push_back({{"p", s.p},
                         {"g", number_to_json(s.g)},
                         {"alpha_bar", number_to_json(s.alpha_bar)},
                         {"A", number_to_json(s.A)},
                         {"Delta", number_to_json(s.Delta)},
                         {"alpha", number_to_json(s.alpha)},
                         {"backtracks", s.backtracks},
                         {"hit_boundary", s.hit_boundary}});
      }
      j["steps"] = std::move(steps);
    }
  }
  return j;
}

void write_trace_jsonl(std::ostream& out, const Trace& trace, std::optional<double> f_star) {
  for (const OuterRecord& rec : trace.records) out << record_to_json(rec, f_star).dump() << '\n';
}

namespace {

std::string csv_number(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  std::ostringstream s;
  s << std::setprecision(17) << v;
  return s.str();
}

}  // namespace

void write_summary_csv(std::ostream& out, const Trace& trace, std::optional<double> f_star) {
  out << "k,f,gap,residual,j,Dk,n_active,min_alpha,max_backtracks\n";
  for (const OuterRecord& r : trace.records) {
    out << r.k << ',' << csv_number(r.f) << ',';
    if (f_star) out << csv_number(r.f - *f_star);
    out << ',' << csv_number(r.kkt_residual) << ',';
    if (r.iterated()) out << r.j;
    out << ',' << csv_number(r.Dk) << ',' << r.at_bound.size() << ',';
    if (r.iterated()) out << csv_number(r.min_alpha) << ',' << r.max_backtracks;
    else out << ',';
    out << '\n';
  }
}

std::map<std::string, std::string> parse_config_text(const std::string& text) {
  std::map<std::string, std::string> values;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  auto trim = [](std::string s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return std::string();
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
  };
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw FormatError("config line " + std::to_string(lineno) + ": expected key=value");
    }
    const std::string key = trim(line.substr(0, eq));
    if (key.empty()) throw FormatError("config line " + std::to_string(lineno) + ": empty key");
    values[key] = trim(line.substr(eq + 1));
  }
  return values;
}

std::map<std::string, std::string> load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

namespace {

double parse_double(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    const double d = std::stod(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw FormatError("config " + key + ": not a number: " + v);
  }
}

long parse_long(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    const long d = std::stol(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw FormatError("config " + key + ": not an integer: " + v);
  }
}

}  // namespace

void apply_config(SolverConfig& c, const std::map<std::string, std::string>& values) {
  for (const auto& [key, v] : values) {
    if (key == "tau") c.tau = parse_double(key, v);
    else if (key == "gamma") c.armijo.gamma = parse_double(key, v);
    else if (key == "delta") c.armijo.delta = parse_double(key, v);
    else if (key == "A_l") c.armijo.A_l = parse_double(key, v);
    else if (key == "A_u") c.armijo.A_u = parse_double(key, v);
    else if (key == "epsilon") c.armijo.epsilon = parse_double(key, v);
    else if (key == "kkt_tol") c.kkt_tol = parse_double(key, v);
    else if (key == "active_tol") c.active_tol = parse_double(key, v);
    else if (key == "max_outer") c.max_outer = parse_long(key, v);
    else if (key == "max_backtracks") c.armijo.max_backtracks = static_cast<int>(parse_long(key, v));
    else if (key == "seed") c.seed = static_cast<std::uint64_t>(parse_long(key, v));
    else if (key == "strategy") {
      if (v == "fixed_clamp") c.armijo.strategy = StepStrategy::FixedClamp;
      else if (v == "interiority") c.armijo.strategy = StepStrategy::InteriorityPreserving;
      else throw FormatError("config strategy: expected fixed_clamp or interiority, got " + v);
    } else if (key == "permutation") {
      if (v == "identity") c.permutation = PermutationStrategy::Identity;
      else if (v == "fixed_shuffle") c.permutation = PermutationStrategy::FixedShuffle;
      else if (v == "reshuffle") c.permutation = PermutationStrategy::ReshufflePerOuter;
      else throw FormatError("config permutation: expected identity, fixed_shuffle or reshuffle");
    } else if (key == "trace_level") {
      if (v == "summary") c.trace_level = TraceLevel::Summary;
      else if (v == "full") c.trace_level = TraceLevel::Full;
      else throw FormatError("config trace_level: expected summary or full");
    } else {
      throw FormatError("unknown config key \"" + key + "\"");
    }
  }
  try {
    c.validate();
  } catch (const ContractError& e) {
    throw FormatError(std::string("config: ") + e.what());
  }
}

std::string to_string(StepStrategy s) {
  return s == StepStrategy::FixedClamp ? "fixed_clamp" : "interiority";
}

std::string to_string(PermutationStrategy s) {
  switch (s) {
    case PermutationStrategy::Identity: return "identity";
    case PermutationStrategy::FixedShuffle: return "fixed_shuffle";
    case PermutationStrategy::ReshufflePerOuter: return "reshuffle";
  }
  return "unknown";
}

}  // namespace ac2cd
