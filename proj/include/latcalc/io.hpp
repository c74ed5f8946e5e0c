#pragma once

#include "latcalc/calculus.hpp"
#include "latcalc/solvers.hpp"

#include <json.hpp>

#include <optional>
#include <string>

namespace latcalc {

using nlohmann::json;

// Literal forms: model {"kind":"atomic","dim":4} / {"kind":"dyadic","maxDepth":5};
// element [1, 0.5, 2] / {"pieces":[{"i":[0.0,0.5],"v":1.0}, ...]} (dyadic
// endpoints required); band {"atoms":[0,2]} / {"intervals":[[0.0,0.25],[0.5,1.0]]};
// complex {"re":...,"im":...}.

json modelToJson(const ModelSpec& model);
ModelSpec modelFromJson(const json& j);
ModelSpec modelFromString(const std::string& text);  // "atomic:N" | "dyadic:DEPTH"

json elementToJson(const Element& x);
Element elementFromJson(const json& j, const ModelSpec& model);

json bandToJson(const Band& b);
Band bandFromJson(const json& j, const ModelSpec& model);

json complexToJson(const ComplexElement& z);
ComplexElement complexFromJson(const json& j, const ModelSpec& model);

json reportToJson(const SolveReport& report);
json lbpReportToJson(const LbpReport& report);
json continuityReportToJson(const ContinuityReport& report);
json diffReportToJson(const DiffReport& report);

/// A solver problem file:
/// {"model":..., "function":{"dsl":"x*x"}|{"builtin":"first_square"}|{"cpoly":[...]},
///  "interval":{"a":...,"b":...}, "segment":{"c":...,"d":...} (mvt corollary),
///  "csegment":{"a":{...},"b":{...}} (cmvt), "target":..., "tol":1e-8, "seed":42}
struct Problem {
    ModelSpec model;
    std::optional<FunctionHandle> function;
    std::optional<ComplexPoly> cpoly;
    std::optional<OrderInterval> interval;
    std::optional<Element> target;
    std::optional<Element> segC, segD;
    std::optional<ComplexElement> complexA, complexB;
    SolverOptions opts;
};

Problem problemFromJson(const json& j);
Problem problemFromFile(const std::string& path);

/// Deterministic dump (sorted keys, shortest round-trip doubles).
std::string dumpReport(const json& j);

}  // namespace latcalc
