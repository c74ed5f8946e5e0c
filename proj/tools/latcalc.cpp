#include "latcalc/demos.hpp"
#include "latcalc/io.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <string>

namespace {

using namespace latcalc;

struct CommonArgs {
    std::string problemFile;
    std::string modelText;
    std::string exprText;
    std::string builtinName;
    std::string atText, aText, bText, targetText;
    double tol = -1.0;        // <0: model default
    std::int64_t seed = -1;   // <0: problem-file seed, else 42
    bool jsonOut = false;
    int trials = 400;
    int grid = 9;
};

void addCommon(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("--problem", args.problemFile, "problem file (JSON)");
    cmd->add_option("--model", args.modelText, "model: atomic:N or dyadic:DEPTH");
    cmd->add_option("--expr", args.exprText, "DSL expression");
    cmd->add_option("--builtin", args.builtinName, "builtin function name");
    cmd->add_option("--at", args.atText, "point element literal");
    cmd->add_option("--a", args.aText, "interval lower endpoint literal");
    cmd->add_option("--b", args.bText, "interval upper endpoint literal");
    cmd->add_option("--target", args.targetText, "target element literal");
    cmd->add_option("--tol", args.tol, "solver tolerance");
    cmd->add_option("--seed", args.seed, "deterministic seed");
    cmd->add_option("--trials", args.trials, "randomized check trials");
    cmd->add_option("--grid", args.grid, "probe grid size");
    cmd->add_flag("--json", args.jsonOut, "machine-readable output only");
}

Problem buildProblem(const CommonArgs& args) {
    if (!args.problemFile.empty()) {
        Problem p = problemFromFile(args.problemFile);
        if (args.tol > 0) p.opts.tol = args.tol;
        if (args.seed >= 0) p.opts.seed = static_cast<std::uint64_t>(args.seed);
        return p;
    }
    if (args.modelText.empty())
        throw DomainViolation("need --problem or --model");
    Problem p;
    p.model = modelFromString(args.modelText);
    p.opts = SolverOptions::forModel(p.model);
    if (args.tol > 0) p.opts.tol = args.tol;
    if (args.seed >= 0) p.opts.seed = static_cast<std::uint64_t>(args.seed);
    if (!args.exprText.empty())
        p.function = FunctionHandle::dslText(args.exprText, p.model);
    else if (!args.builtinName.empty())
        p.function = FunctionHandle::builtin(args.builtinName, p.model);
    if (!args.aText.empty() && !args.bText.empty()) {
        p.interval = OrderInterval::closedInterval(
            elementFromJson(json::parse(args.aText), p.model),
            elementFromJson(json::parse(args.bText), p.model));
    }
    if (!args.targetText.empty())
        p.target = elementFromJson(json::parse(args.targetText), p.model);
    return p;
}

Element pointArg(const CommonArgs& args, const ModelSpec& model) {
    if (args.atText.empty()) throw DomainViolation("need --at POINT");
    return elementFromJson(json::parse(args.atText), model);
}

int emitReport(const json& j, bool jsonOut, const std::string& headline) {
    if (jsonOut) {
        std::cout << dumpReport(j) << "\n";
    } else {
        if (!headline.empty()) std::cout << headline << "\n";
        std::cout << dumpReport(j) << "\n";
    }
    std::string cert = j.value("certificate", "feasible");
    if (cert == "feasible" || cert == "pass" || cert == "narrative") return 0;
    return 2;
}

const FunctionHandle& requireFunction(const Problem& p) {
    if (!p.function) throw DomainViolation("problem needs a dsl or builtin function");
    return *p.function;
}

const OrderInterval& requireInterval(const Problem& p) {
    if (!p.interval) throw DomainViolation("problem needs an interval");
    return *p.interval;
}

int runSolve(const std::string& which, const CommonArgs& args) {
    Problem p = buildProblem(args);
    SolveReport rep;
    if (which == "ivt") {
        if (!p.target) throw DomainViolation("ivt needs a target");
        rep = solveIvt(requireFunction(p), requireInterval(p), *p.target, p.opts);
    } else if (which == "evt") {
        rep = solveEvt(requireFunction(p), requireInterval(p), p.opts);
    } else if (which == "rolle") {
        rep = solveRolle(requireFunction(p), requireInterval(p), p.opts);
    } else if (which == "mvt") {
        if (p.segC && p.segD)
            rep = solveMvtSegment(requireFunction(p), *p.segC, *p.segD, p.opts);
        else
            rep = solveMvt(requireFunction(p), requireInterval(p), p.opts);
    } else {  // cmvt
        if (!p.cpoly) throw DomainViolation("cmvt needs a cpoly function");
        if (!p.complexA || !p.complexB) throw DomainViolation("cmvt needs a csegment");
        rep = solveComplexMvt(*p.cpoly, *p.complexA, *p.complexB, p.opts);
    }
    return emitReport(reportToJson(rep), args.jsonOut, "solve " + which);
}

int runBound(const CommonArgs& args) {
    Problem p = buildProblem(args);
    try {
        Element bound = orderBound(requireFunction(p), requireInterval(p), p.opts);
        json j{{"certificate", "feasible"}, {"bound", elementToJson(bound)}};
        return emitReport(j, args.jsonOut, "order bound");
    } catch (const HypothesisViolatedError& e) {
        json j{{"certificate", "hypothesisViolated"}, {"detail", e.reason}};
        return emitReport(j, args.jsonOut, "order bound");
    }
}

int runCheck(const std::string& which, const CommonArgs& args) {
    Problem p = buildProblem(args);
    if (which == "lbp") {
        LbpReport rep = checkLbp(requireFunction(p), requireInterval(p), args.trials,
                                 p.opts.seed);
        json j = lbpReportToJson(rep);
        j["certificate"] = rep.pass ? "pass" : "hypothesisViolated";
        return emitReport(j, args.jsonOut, "lbp check");
    }
    if (which == "continuity") {
        ContinuityReport rep = continuityProbe(requireFunction(p), requireInterval(p),
                                               args.grid, p.opts.seed);
        json j = continuityReportToJson(rep);
        j["certificate"] = rep.continuous ? "pass" : "hypothesisViolated";
        return emitReport(j, args.jsonOut, "continuity probe");
    }
    // which == "diff": classify at --at with radius r = 0.25 e
    const FunctionHandle& f = requireFunction(p);
    Element c = pointArg(args, p.model);
    Element r = Element::constant(p.model, 0.25);
    Classification cls = classify(f, c, r, p.opts.seed);
    json j{{"classification", classificationName(cls)}, {"certificate", "pass"}};
    try {
        j["derivative"] = elementToJson(estimateDerivative(f, c));
    } catch (const NoConvergence& e) {
        j["derivative"] = nullptr;
        j["note"] = e.what();
    }
    return emitReport(j, args.jsonOut, "differentiability check");
}

int runDiff(const CommonArgs& args) {
    Problem p = buildProblem(args);
    const FunctionHandle& f = requireFunction(p);
    if (!f.isDsl()) throw DomainViolation("symbolic differentiation needs --expr");
    Element c = pointArg(args, p.model);
    ExprPtr df = differentiate(f.expr());
    Element value = evalExpr(*df, c);
    json j{{"derivative", elementToJson(value)},
           {"expression", prettyPrint(*df)},
           {"certificate", "feasible"}};
    if (!args.jsonOut) {
        std::cout << "d/dx " << prettyPrint(*f.expr()) << " = " << prettyPrint(*df) << "\n";
        std::cout << "at " << c.describe() << " -> " << value.describe() << "\n";
        return 0;
    }
    return emitReport(j, true, "");
}

int runEval(const CommonArgs& args) {
    Problem p = buildProblem(args);
    Element c = pointArg(args, p.model);
    Element value = evaluate(requireFunction(p), c);
    if (!args.jsonOut) {
        std::cout << value.describe() << "\n";
        return 0;
    }
    json j{{"value", elementToJson(value)}, {"certificate", "feasible"}};
    return emitReport(j, true, "");
}

int runDemoCmd(const std::string& name, bool jsonOut) {
    DemoOutcome out = runDemo(name);
    if (!jsonOut) std::cout << "demo " << name << (out.matched ? " [expected]" : " [MISMATCH]")
                            << "\n";
    std::cout << dumpReport(out.report) << "\n";
    return out.exitCode;
}

int runDemos() {
    for (const auto& entry : demoRegistry())
        std::cout << entry.name << "  -  " << entry.description << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"order-theoretic calculus on Dedekind complete Phi-algebra models"};
    app.require_subcommand(1);

    CommonArgs args;

    CLI::App* solve = app.add_subcommand("solve", "run a solver");
    solve->require_subcommand(1);
    std::string solveKind;
    for (const char* kind : {"ivt", "evt", "rolle", "mvt", "cmvt"}) {
        CLI::App* sub = solve->add_subcommand(kind);
        addCommon(sub, args);
        sub->callback([&solveKind, kind] { solveKind = kind; });
    }

    CLI::App* bound = app.add_subcommand("bound", "order bound of an LBP function");
    addCommon(bound, args);

    CLI::App* check = app.add_subcommand("check", "hypothesis checks");
    check->require_subcommand(1);
    std::string checkKind;
    for (const char* kind : {"lbp", "continuity", "diff"}) {
        CLI::App* sub = check->add_subcommand(kind);
        addCommon(sub, args);
        sub->callback([&checkKind, kind] { checkKind = kind; });
    }

    CLI::App* diff = app.add_subcommand("diff", "symbolic derivative at a point");
    addCommon(diff, args);

    CLI::App* eval = app.add_subcommand("eval", "evaluate a function at a point");
    addCommon(eval, args);

    CLI::App* demo = app.add_subcommand("demo", "run a gallery demo");
    std::string demoName;
    bool demoJson = false;
    demo->add_option("name", demoName, "demo name")->required();
    demo->add_flag("--json", demoJson, "machine-readable output only");

    CLI::App* demos = app.add_subcommand("demos", "list gallery demos");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        std::cerr << e.what() << "\n";
        return 64;
    }

    try {
        if (solve->parsed()) return runSolve(solveKind, args);
        if (bound->parsed()) return runBound(args);
        if (check->parsed()) return runCheck(checkKind, args);
        if (diff->parsed()) return runDiff(args);
        if (eval->parsed()) return runEval(args);
        if (demo->parsed()) return runDemoCmd(demoName, demoJson);
        if (demos->parsed()) return runDemos();
    } catch (const LatError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 64;
}
