#pragma once

// Internal JSON builders shared by config.cpp and cli.cpp; not installed.

#include <json.hpp>

#include "nonlocal/certifier.hpp"
#include "nonlocal/config.hpp"
#include "nonlocal/degree.hpp"
#include "nonlocal/solver.hpp"

namespace nonlocal::detail {

using ordered_json = nlohmann::ordered_json;

ordered_json build_certificate(const ExistenceCertificate& cert);
ordered_json build_solution(const Solution& s);
ordered_json build_degree(const DegreeResult& d);
ordered_json build_diagnostics(const SolveDiagnostics& d);

std::string dump(const ordered_json& doc, int indent);

}  // namespace nonlocal::detail
