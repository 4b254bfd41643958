#include "nonlocal/config.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>

#include "json_internal.hpp"
#include "nonlocal/errors.hpp"
#include "nonlocal/problems.hpp"

namespace nonlocal {
namespace {

using detail::ordered_json;

ordered_json parse_document(const std::string& text) {
  try {
    return ordered_json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("$", e.what());
  }
}

const ordered_json& require(const ordered_json& obj, const char* key, const std::string& path) {
  if (!obj.is_object()) throw ConfigError(path, "expected an object");
  const auto it = obj.find(key);
  if (it == obj.end()) throw ConfigError(path + "." + key, "missing required field");
  return *it;
}

double as_number(const ordered_json& v, const std::string& path) {
  if (!v.is_number()) throw ConfigError(path, "expected a number");
  return v.get<double>();
}

std::size_t as_count(const ordered_json& v, const std::string& path) {
  if (!v.is_number_integer() || v.get<long long>() < 0)
    throw ConfigError(path, "expected a non-negative integer");
  return v.get<std::size_t>();
}

std::string as_string(const ordered_json& v, const std::string& path) {
  if (!v.is_string()) throw ConfigError(path, "expected a string");
  return v.get<std::string>();
}

expr::Expression expr_field(const ordered_json& v, const std::string& path) {
  const std::string text = as_string(v, path);
  try {
    return expr::parse(text);
  } catch (const ParseError& e) {
    throw ConfigError(path, e.what());
  }
}

std::vector<expr::Expression> expr_array(const ordered_json& v, std::size_t k,
                                         const std::string& path) {
  if (!v.is_array() || v.size() != k)
    throw ConfigError(path, "expected an array of " + std::to_string(k) +
                                " expression strings");
  std::vector<expr::Expression> out;
  out.reserve(k);
  for (std::size_t i = 0; i < k; ++i)
    out.push_back(expr_field(v[i], path + "[" + std::to_string(i) + "]"));
  return out;
}

BVComponent component_from_json(const ordered_json& v, const std::string& path) {
  if (!v.is_object()) throw ConfigError(path, "expected a component object");
  BVComponent c;
  if (v.contains("jump0")) c.jump_at_zero = as_number(v["jump0"], path + ".jump0");
  if (v.contains("jump1")) c.jump_at_one = as_number(v["jump1"], path + ".jump1");
  if (v.contains("atoms")) {
    const auto& atoms = v["atoms"];
    if (!atoms.is_array()) throw ConfigError(path + ".atoms", "expected an array of [t, w] pairs");
    for (std::size_t i = 0; i < atoms.size(); ++i) {
      const std::string apath = path + ".atoms[" + std::to_string(i) + "]";
      if (!atoms[i].is_array() || atoms[i].size() != 2)
        throw ConfigError(apath, "expected a [t, w] pair");
      c.interior_atoms.push_back(
          {as_number(atoms[i][0], apath + "[0]"), as_number(atoms[i][1], apath + "[1]")});
    }
  }
  if (v.contains("density")) c.density = expr_field(v["density"], path + ".density");
  return c;
}

std::vector<BVComponent> component_array(const ordered_json& v, std::size_t k,
                                         const std::string& path) {
  if (!v.is_array() || v.size() != k)
    throw ConfigError(path, "expected an array of " + std::to_string(k) + " components");
  std::vector<BVComponent> out;
  out.reserve(k);
  for (std::size_t i = 0; i < k; ++i)
    out.push_back(component_from_json(v[i], path + "[" + std::to_string(i) + "]"));
  return out;
}

SolverConfig solver_from_json(const ordered_json& v, const std::string& path) {
  SolverConfig cfg;
  if (v.is_null()) return cfg;
  if (!v.is_object()) throw ConfigError(path, "expected an object of solver overrides");
  if (v.contains("steps")) cfg.steps = as_count(v["steps"], path + ".steps");
  if (v.contains("seed_grid_per_axis"))
    cfg.seed_grid_per_axis = as_count(v["seed_grid_per_axis"], path + ".seed_grid_per_axis");
  if (v.contains("newton_max_iter"))
    cfg.newton_max_iter = as_count(v["newton_max_iter"], path + ".newton_max_iter");
  if (v.contains("newton_tol")) cfg.newton_tol = as_number(v["newton_tol"], path + ".newton_tol");
  if (v.contains("cauchy_tol")) cfg.cauchy_tol = as_number(v["cauchy_tol"], path + ".cauchy_tol");
  if (v.contains("threads")) cfg.threads = as_count(v["threads"], path + ".threads");
  if (v.contains("lambda_schedule")) {
    const auto& s = v["lambda_schedule"];
    if (!s.is_array() || s.empty())
      throw ConfigError(path + ".lambda_schedule", "expected a non-empty array");
    cfg.lambda_schedule.clear();
    for (std::size_t i = 0; i < s.size(); ++i)
      cfg.lambda_schedule.push_back(
          as_number(s[i], path + ".lambda_schedule[" + std::to_string(i) + "]"));
  }
  if (v.contains("reg_schedule")) {
    const auto& s = v["reg_schedule"];
    if (!s.is_array() || s.empty())
      throw ConfigError(path + ".reg_schedule", "expected a non-empty array");
    cfg.reg_schedule.clear();
    for (std::size_t i = 0; i < s.size(); ++i)
      cfg.reg_schedule.push_back(static_cast<int>(
          as_count(s[i], path + ".reg_schedule[" + std::to_string(i) + "]")));
  }
  try {
    cfg.validate();
  } catch (const InvalidArgument& e) {
    throw ConfigError(path, e.what());
  }
  return cfg;
}

VectorField build_field(std::size_t k, std::vector<expr::Expression> f, const std::string& path) {
  try {
    return VectorField(k, std::move(f));
  } catch (const Error& e) {
    throw ConfigError(path, e.what());
  }
}

BVFunction build_integrator(std::vector<BVComponent> g, const std::string& path) {
  try {
    return BVFunction(std::move(g));
  } catch (const Error& e) {
    throw ConfigError(path, e.what());
  }
}

BoundaryMap build_map(std::size_t k, std::vector<expr::Expression> h, const std::string& path) {
  try {
    return BoundaryMap(k, std::move(h));
  } catch (const Error& e) {
    throw ConfigError(path, e.what());
  }
}

}  // namespace

LoadedProblem load_problem_config(const std::string& json_text) {
  const ordered_json doc = parse_document(json_text);
  const std::size_t k = as_count(require(doc, "k", "$"), "$.k");
  if (k < 1) throw ConfigError("$.k", "dimension must be >= 1");

  auto f = expr_array(require(doc, "f", "$"), k, "$.f");
  auto g = component_array(require(doc, "g", "$"), k, "$.g");
  auto h = expr_array(require(doc, "h", "$"), k, "$.h");
  const double R = as_number(require(doc, "R", "$"), "$.R");
  if (!(R > 0.0)) throw ConfigError("$.R", "radius must be positive");

  LoadedProblem out{
      Problem(k, build_field(k, std::move(f), "$.f"),
              build_integrator(std::move(g), "$.g"), build_map(k, std::move(h), "$.h")),
      R,
      doc.contains("solver") ? solver_from_json(doc["solver"], "$.solver") : SolverConfig{},
      std::nullopt};
  if (doc.contains("certify_r"))
    out.certify_r = as_number(doc["certify_r"], "$.certify_r");
  return out;
}

DegreeRequest load_degree_config(const std::string& json_text) {
  const ordered_json doc = parse_document(json_text);
  const std::size_t k = as_count(require(doc, "k", "$"), "$.k");
  if (k < 1) throw ConfigError("$.k", "dimension must be >= 1");
  DegreeRequest out;
  if (doc.contains("h")) {
    out.h = build_map(k, expr_array(doc["h"], k, "$.h"), "$.h");
  } else if (doc.contains("h1") && doc.contains("h2")) {
    out.h1 = build_map(k, expr_array(doc["h1"], k, "$.h1"), "$.h1");
    out.h2 = build_map(k, expr_array(doc["h2"], k, "$.h2"), "$.h2");
  } else {
    throw ConfigError("$", "expected either \"h\" or both \"h1\" and \"h2\"");
  }
  if (doc.contains("r")) out.r = as_number(doc["r"], "$.r");
  return out;
}

IntegrateRequest load_integrate_config(const std::string& json_text) {
  const ordered_json doc = parse_document(json_text);
  const std::size_t k = as_count(require(doc, "k", "$"), "$.k");
  if (k < 1) throw ConfigError("$.k", "dimension must be >= 1");
  auto f = build_field(k, expr_array(require(doc, "f", "$"), k, "$.f"), "$.f");
  const auto& c = require(doc, "c", "$");
  if (!c.is_array() || c.size() != k)
    throw ConfigError("$.c", "expected an array of " + std::to_string(k) + " numbers");
  IntegrateRequest out{std::move(f), {}, 1.0};
  for (std::size_t i = 0; i < k; ++i)
    out.c.push_back(as_number(c[i], "$.c[" + std::to_string(i) + "]"));
  if (doc.contains("lambda")) out.lambda = as_number(doc["lambda"], "$.lambda");
  if (!(out.lambda >= 0.0 && out.lambda <= 1.0))
    throw ConfigError("$.lambda", "lambda must lie in [0,1]");
  return out;
}

ReducedConfig load_and_reduce(const std::string& json_text) {
  const ordered_json doc = parse_document(json_text);
  const std::string kind =
      doc.contains("reduction") ? as_string(doc["reduction"], "$.reduction") : "second_order";
  const std::size_t k = as_count(require(doc, "k", "$"), "$.k");
  if (k < 1) throw ConfigError("$.k", "dimension must be >= 1");

  auto wrap = [&](auto&& make) -> Problem {
    try {
      return make();
    } catch (const ConfigError&) {
      throw;
    } catch (const Error& e) {
      throw ConfigError("$", e.what());
    }
  };

  std::optional<Problem> problem;
  if (kind == "second_order") {
    SecondOrderSpec s;
    s.k = k;
    s.f2 = expr_array(require(doc, "f2", "$"), k, "$.f2");
    s.h1 = expr_array(require(doc, "h1", "$"), k, "$.h1");
    s.h2 = expr_array(require(doc, "h2", "$"), k, "$.h2");
    s.g1 = component_array(require(doc, "g1", "$"), k, "$.g1");
    s.g2 = component_array(require(doc, "g2", "$"), k, "$.g2");
    problem = wrap([&] { return reduce_second_order(s); });
  } else if (kind == "resonance" || kind == "problem_p") {
    auto f2 = expr_array(require(doc, "f2", "$"), k, "$.f2");
    const auto& graw = require(doc, "g", "$");
    if (!graw.is_array() || graw.empty())
      throw ConfigError("$.g", "expected a non-empty component array");
    auto comps = component_array(graw, graw.size(), "$.g");
    const BVFunction g = build_integrator(std::move(comps), "$.g");
    problem = wrap([&] {
      return kind == "resonance" ? resonance_problem(k, std::move(f2), g)
                                 : problem_P(k, std::move(f2), g);
    });
  } else if (kind == "periodic") {
    auto f = build_field(k, expr_array(require(doc, "f", "$"), k, "$.f"), "$.f");
    problem = wrap([&] { return periodic_problem(std::move(f)); });
  } else {
    throw ConfigError("$.reduction", "unknown reduction '" + kind + "'");
  }

  ReducedConfig out{std::move(*problem), std::nullopt, std::nullopt, ""};
  if (doc.contains("R")) out.R = as_number(doc["R"], "$.R");
  if (doc.contains("certify_r")) out.certify_r = as_number(doc["certify_r"], "$.certify_r");
  if (doc.contains("solver")) {
    solver_from_json(doc["solver"], "$.solver");  // validate now, pass through verbatim
    out.solver_overrides_json = doc["solver"].dump();
  }
  return out;
}

// --- serialization ----------------------------------------------------------

namespace detail {

std::string dump(const ordered_json& doc, int indent) {
  return indent > 0 ? doc.dump(indent) : doc.dump();
}

ordered_json build_degree(const DegreeResult& d) {
  return ordered_json{{"value", d.value},
                      {"method", to_string(d.method)},
                      {"certified", d.certified},
                      {"min_boundary_norm", d.min_boundary_norm}};
}

ordered_json build_certificate(const ExistenceCertificate& cert) {
  ordered_json j;
  j["variant"] = cert.variant;
  j["R"] = cert.R;
  j["r_minus"] = cert.bounds.r_minus;
  j["r_plus"] = cert.bounds.r_plus;
  j["chosen_r"] = cert.chosen_r;
  j["standing"] = ordered_json{{"ok", cert.standing.ok},
                               {"strict", cert.standing.strict},
                               {"min_component_jump", cert.standing.min_component_jump},
                               {"tail_variation", cert.standing.tail_variation}};
  j["cond_i"] = ordered_json{{"samples", cert.cond_i.samples},
                             {"max_inner_product", cert.cond_i.max_inner_product},
                             {"strict", cert.cond_i.strict},
                             {"pass", cert.cond_i.pass},
                             {"witness_t", cert.cond_i.witness_t},
                             {"witness_x", cert.cond_i.witness_x}};
  // min_h_norm serializes as null when the annulus is empty (+inf).
  j["cond_ii"] = ordered_json{{"samples", cert.cond_ii.samples},
                              {"vacuous", cert.cond_ii.vacuous},
                              {"min_h_norm", cert.cond_ii.min_h_norm},
                              {"pass", cert.cond_ii.pass},
                              {"witness_u", cert.cond_ii.witness_u}};
  ordered_json degree = build_degree(cert.degree);
  degree["defined"] = cert.degree_defined;
  if (!cert.degree_defined) degree["error"] = cert.degree_error;
  j["degree"] = std::move(degree);
  j["regime"] = to_string(cert.regime);
  j["status"] = to_string(cert.status);
  j["failure"] = cert.failure;
  return j;
}

ordered_json build_solution(const Solution& s) {
  ordered_json j;
  j["c"] = s.c;
  j["lambda"] = s.lambda;
  j["residuals"] = ordered_json{{"ode", s.residuals.ode_residual},
                                {"boundary", s.residuals.boundary_residual_norm},
                                {"coincidence", s.residuals.coincidence_residual},
                                {"sup_norm", s.residuals.sup_norm}};
  j["cauchy_gaps"] = s.cauchy_gaps;
  j["regularization_path"] = s.regularization_path;
  return j;
}

ordered_json build_diagnostics(const SolveDiagnostics& d) {
  return ordered_json{{"seeds_tried", d.seeds_tried},
                      {"escaped", d.escaped},
                      {"discarded_outside", d.discarded_outside},
                      {"discarded_invalid", d.discarded_invalid},
                      {"used_continuation", d.used_continuation},
                      {"best_residual", d.best_residual},
                      {"best_seed", d.best_seed}};
}

}  // namespace detail

std::string certificate_to_json(const ExistenceCertificate& cert, int indent) {
  return detail::dump(detail::build_certificate(cert), indent);
}

std::string solution_to_json(const Solution& s, int indent) {
  return detail::dump(detail::build_solution(s), indent);
}

std::string degree_to_json(const DegreeResult& d, int indent) {
  return detail::dump(detail::build_degree(d), indent);
}

std::string diagnostics_to_json(const SolveDiagnostics& d, int indent) {
  return detail::dump(detail::build_diagnostics(d), indent);
}

std::string problem_config_to_json(const Problem& p, std::optional<double> R,
                                   std::optional<double> certify_r,
                                   const std::string& solver_overrides_json, int indent) {
  ordered_json j;
  j["k"] = p.k;
  ordered_json f = ordered_json::array();
  for (const auto& e : p.f.components()) f.push_back(e.to_string());
  j["f"] = std::move(f);
  ordered_json g = ordered_json::array();
  for (const auto& c : p.g.components()) {
    ordered_json atoms = ordered_json::array();
    for (const Atom& a : c.interior_atoms)
      atoms.push_back(ordered_json::array({a.location, a.weight}));
    g.push_back(ordered_json{{"jump0", c.jump_at_zero},
                             {"atoms", std::move(atoms)},
                             {"jump1", c.jump_at_one},
                             {"density", c.density.to_string()}});
  }
  j["g"] = std::move(g);
  ordered_json h = ordered_json::array();
  for (const auto& e : p.h.components()) h.push_back(e.to_string());
  j["h"] = std::move(h);
  if (R) j["R"] = *R;
  if (certify_r) j["certify_r"] = *certify_r;
  if (!solver_overrides_json.empty())
    j["solver"] = ordered_json::parse(solver_overrides_json);
  return detail::dump(j, indent);
}

// --- parse-back -------------------------------------------------------------

namespace {

DegreeMethod method_from_string(const std::string& s) {
  if (s == "sign-1d") return DegreeMethod::Sign1D;
  if (s == "winding-2d") return DegreeMethod::Winding2D;
  if (s == "root-count-nd") return DegreeMethod::RootCountND;
  if (s == "product") return DegreeMethod::Product;
  throw ConfigError("$.method", "unknown degree method '" + s + "'");
}

DegreeResult degree_from(const ordered_json& j) {
  DegreeResult d;
  d.value = j.at("value").get<int>();
  d.method = method_from_string(j.at("method").get<std::string>());
  d.certified = j.at("certified").get<bool>();
  d.min_boundary_norm = j.at("min_boundary_norm").is_null()
                            ? std::numeric_limits<double>::infinity()
                            : j.at("min_boundary_norm").get<double>();
  return d;
}

}  // namespace

ExistenceCertificate certificate_from_json(const std::string& json_text) {
  const ordered_json j = parse_document(json_text);
  ExistenceCertificate cert;
  try {
    cert.variant = j.at("variant").get<std::string>();
    cert.R = j.at("R").get<double>();
    cert.bounds.r_minus = j.at("r_minus").get<double>();
    cert.bounds.r_plus = j.at("r_plus").get<double>();
    cert.chosen_r = j.at("chosen_r").get<double>();
    const auto& st = j.at("standing");
    cert.standing.ok = st.at("ok").get<bool>();
    cert.standing.strict = st.at("strict").get<bool>();
    cert.standing.min_component_jump = st.at("min_component_jump").get<double>();
    cert.standing.tail_variation = st.at("tail_variation").get<double>();
    const auto& ci = j.at("cond_i");
    cert.cond_i.samples = ci.at("samples").get<std::size_t>();
    cert.cond_i.max_inner_product = ci.at("max_inner_product").get<double>();
    cert.cond_i.strict = ci.at("strict").get<bool>();
    cert.cond_i.pass = ci.at("pass").get<bool>();
    cert.cond_i.witness_t = ci.at("witness_t").get<double>();
    cert.cond_i.witness_x = ci.at("witness_x").get<std::vector<double>>();
    const auto& cii = j.at("cond_ii");
    cert.cond_ii.samples = cii.at("samples").get<std::size_t>();
    cert.cond_ii.vacuous = cii.at("vacuous").get<bool>();
    cert.cond_ii.min_h_norm = cii.at("min_h_norm").is_null()
                                  ? std::numeric_limits<double>::infinity()
                                  : cii.at("min_h_norm").get<double>();
    cert.cond_ii.pass = cii.at("pass").get<bool>();
    cert.cond_ii.witness_u = cii.at("witness_u").get<std::vector<double>>();
    const auto& deg = j.at("degree");
    cert.degree_defined = deg.at("defined").get<bool>();
    cert.degree = degree_from(deg);
    if (deg.contains("error")) cert.degree_error = deg.at("error").get<std::string>();
    cert.regime = j.at("regime").get<std::string>() == "strict" ? Regime::Strict
                                                                : Regime::Boundary;
    cert.status = j.at("status").get<std::string>() == "certified-by-sampling"
                      ? CertStatus::Certified
                      : CertStatus::Failed;
    cert.failure = j.at("failure").get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("$", e.what());
  }
  return cert;
}

Solution solution_from_json(const std::string& json_text) {
  const ordered_json j = parse_document(json_text);
  Solution s;
  try {
    s.c = j.at("c").get<std::vector<double>>();
    s.lambda = j.at("lambda").get<double>();
    const auto& r = j.at("residuals");
    s.residuals.ode_residual = r.at("ode").get<double>();
    s.residuals.boundary_residual_norm = r.at("boundary").get<double>();
    s.residuals.coincidence_residual = r.at("coincidence").get<double>();
    s.residuals.sup_norm = r.at("sup_norm").get<double>();
    s.cauchy_gaps = j.at("cauchy_gaps").get<std::vector<double>>();
    s.regularization_path = j.at("regularization_path").get<std::vector<int>>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("$", e.what());
  }
  return s;
}

DegreeResult degree_from_json(const std::string& json_text) {
  const ordered_json j = parse_document(json_text);
  try {
    return degree_from(j);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("$", e.what());
  }
}

void write_trajectory_csv(const Trajectory& t, std::ostream& out) {
  out << "t";
  for (std::size_t j = 1; j <= t.dim; ++j) out << ",x" << j;
  out << "\n";
  char buf[32];
  for (std::size_t i = 0; i < t.nodes(); ++i) {
    std::snprintf(buf, sizeof(buf), "%.17g", t.times[i]);
    out << buf;
    for (std::size_t j = 0; j < t.dim; ++j) {
      std::snprintf(buf, sizeof(buf), "%.17g", t.values[i * t.dim + j]);
      out << ',' << buf;
    }
    out << "\n";
  }
}

}  // namespace nonlocal
