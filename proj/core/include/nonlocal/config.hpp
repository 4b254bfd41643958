#pragma once

#include <iosfwd>
#include <optional>
#include <string>

#include "nonlocal/certifier.hpp"
#include "nonlocal/coincidence.hpp"
#include "nonlocal/degree.hpp"
#include "nonlocal/solver.hpp"

namespace nonlocal {

/// A problem plus run parameters, as read from a JSON config document:
/// {"k": int, "f": [exprs], "g": [components], "h": [exprs], "R": number,
///  "solver": {...overrides...}, "certify_r": optional number}.
/// Component schema: {"jump0": number, "atoms": [[t, w], ...],
///                    "jump1": number, "density": "expr"} (all optional).
struct LoadedProblem {
  Problem problem;
  double R = 1.0;
  SolverConfig solver;
  std::optional<double> certify_r;
};

/// Throws ConfigError with the JSON path of the offending field.
LoadedProblem load_problem_config(const std::string& json_text);

/// Degree config: {"k": int, "h": [exprs], "r": number} or the product form
/// {"k": int, "h1": [exprs], "h2": [exprs], "r": number}.
struct DegreeRequest {
  std::optional<BoundaryMap> h;
  std::optional<BoundaryMap> h1, h2;
  std::optional<double> r;
};
DegreeRequest load_degree_config(const std::string& json_text);

/// Integration config: {"k": int, "f": [exprs], "c": [numbers], "lambda": 1.0}.
struct IntegrateRequest {
  VectorField f;
  std::vector<double> c;
  double lambda = 1.0;
};
IntegrateRequest load_integrate_config(const std::string& json_text);

/// Reduction config, dispatched on "reduction":
///   "second_order" (default): k, f2, h1, h2, g1, g2
///   "resonance": k, f2, g
///   "problem_p": k, f2, g
///   "periodic": k, f
/// Optional passthrough: R, solver, certify_r.
struct ReducedConfig {
  Problem problem;
  std::optional<double> R;
  std::optional<double> certify_r;
  std::string solver_overrides_json;  // verbatim passthrough, empty if absent
};
ReducedConfig load_and_reduce(const std::string& json_text);

// --- serialization (stable key order) --------------------------------------

std::string certificate_to_json(const ExistenceCertificate& cert, int indent = 2);
std::string solution_to_json(const Solution& s, int indent = 2);
std::string degree_to_json(const DegreeResult& d, int indent = 2);
std::string diagnostics_to_json(const SolveDiagnostics& d, int indent = 2);

/// First-order problem config document (the output of "reduce").
std::string problem_config_to_json(const Problem& p, std::optional<double> R,
                                   std::optional<double> certify_r,
                                   const std::string& solver_overrides_json,
                                   int indent = 2);

/// Parse-back helpers (stable round trip of the JSON records).
ExistenceCertificate certificate_from_json(const std::string& json_text);
Solution solution_from_json(const std::string& json_text);
DegreeResult degree_from_json(const std::string& json_text);

/// CSV with header "t,x1,...,xk", one row per node, 17 significant digits.
void write_trajectory_csv(const Trajectory& t, std::ostream& out);

}  // namespace nonlocal
