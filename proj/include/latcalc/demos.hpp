#pragma once

#include "latcalc/io.hpp"

#include <functional>
#include <string>
#include <vector>

namespace latcalc {

/// One gallery entry: a runnable demonstration with the report fragment it
/// is expected to reproduce. Negative outcomes (hypothesis violations,
/// infeasible targets) are successful demonstrations here.
struct DemoEntry {
    std::string name;
    std::string description;
    json expected;  // fragment that must be contained in the fresh report
    std::function<json()> run;
};

const std::vector<DemoEntry>& demoRegistry();

struct DemoOutcome {
    json report;
    bool matched = false;   // fresh report contains the expected fragment
    int exitCode = 1;       // 0 pass, 2 expected-negative, 1 mismatch
};

DemoOutcome runDemo(const std::string& name);

/// Recursive containment: every key/element of fragment must appear equal
/// in the report.
bool fragmentMatches(const json& fragment, const json& report);

}  // namespace latcalc
