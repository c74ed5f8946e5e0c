// End-to-end checks of the command-line surface: exit codes, literal forms,
// problem files, and byte-identical output under one seed.

#include <array>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

namespace {

int failures = 0;

struct RunResult {
    int exitCode = -1;
    std::string out;
};

RunResult run(const std::string& cmd) {
    RunResult r;
    FILE* pipe = popen((cmd + " 2>/dev/null").c_str(), "r");
    if (!pipe) return r;
    std::array<char, 4096> buf;
    size_t n;
    while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), n);
    int status = pclose(pipe);
    if (WIFEXITED(status)) r.exitCode = WEXITSTATUS(status);
    return r;
}

void check(bool cond, const std::string& what) {
    std::printf("[%s] %s\n", cond ? "ok" : "FAIL", what.c_str());
    if (!cond) ++failures;
}

bool contains(const std::string& hay, const std::string& needle) {
    return hay.find(needle) != std::string::npos;
}

}  // namespace

int main(int argc, char** argv) {
    if (argc < 2) {
        std::cerr << "usage: cli_tests <path-to-latcalc>\n";
        return 2;
    }
    std::string bin = argv[1];

    // symbolic differentiation at a point
    RunResult diff = run(bin + " diff --model atomic:2 --expr \"x*x\" --at \"[3,1]\"");
    check(diff.exitCode == 0 && contains(diff.out, "[6, 2]"), "diff prints [6, 2], exit 0");

    // evaluation, including a dyadic literal
    RunResult ev = run(bin + " eval --model atomic:2 --expr \"x*x - e\" --at \"[2,3]\"");
    check(ev.exitCode == 0 && contains(ev.out, "[3, 8]"), "eval prints [3, 8]");
    RunResult evd = run(bin +
                        " eval --model dyadic:3 --expr \"sup(x, 0.25)\" --at "
                        "'{\"pieces\":[{\"i\":[0.0,0.5],\"v\":1.0},{\"i\":[0.5,1.0],\"v\":0.0}]}'");
    check(evd.exitCode == 0 && contains(evd.out, "0.25"), "eval accepts dyadic literals");

    // demo gallery: listing and per-demo execution
    RunResult demos = run(bin + " demos");
    check(demos.exitCode == 0, "demos lists the gallery");
    std::vector<std::string> names;
    {
        std::string line;
        for (size_t pos = 0; pos < demos.out.size();) {
            size_t end = demos.out.find('\n', pos);
            if (end == std::string::npos) end = demos.out.size();
            line = demos.out.substr(pos, end - pos);
            size_t sep = line.find("  -  ");
            if (sep != std::string::npos) names.push_back(line.substr(0, sep));
            pos = end + 1;
        }
    }
    check(names.size() >= 4, "at least four demos registered");
    for (const char* need : {"ivt-fail", "evt-fail", "kn-threshold", "thin-sqrt-classify"}) {
        bool found = false;
        for (const auto& n : names) found = found || n == need;
        check(found, std::string("gallery contains ") + need);
    }
    for (const auto& name : names) {
        RunResult d = run(bin + " demo " + name);
        check((d.exitCode == 0 || d.exitCode == 2), "demo " + name + " runs clean");
    }

    // negative results use exit code 2
    RunResult ivtFail = run(bin + " demo ivt-fail");
    check(ivtFail.exitCode == 2 && contains(ivtFail.out, "hypothesisViolated"),
          "demo ivt-fail exits 2 with hypothesisViolated");

    // usage errors use exit 64; missing inputs use exit 1
    check(run(bin + " bogus").exitCode == 64, "unknown subcommand exits 64");
    check(run(bin + " solve").exitCode == 64, "missing solve subcommand exits 64");
    check(run(bin + " solve ivt").exitCode == 1, "solve without a problem exits 1");
    check(run(bin + " demo no-such-demo").exitCode == 1, "unknown demo exits 1");

    // problem file: feasible solve, determinism byte for byte
    namespace fs = std::filesystem;
    fs::path problem = fs::temp_directory_path() / "latcalc_cli_ivt.json";
    {
        std::ofstream out(problem);
        out << R"({"model":{"kind":"atomic","dim":2},
                   "function":{"dsl":"x*x"},
                   "interval":{"a":[0,0],"b":[2,2]},
                   "target":[2.25,0.25],
                   "tol":1e-8,
                   "seed":42})";
    }
    std::string solveCmd = bin + " solve ivt --problem " + problem.string() + " --json";
    RunResult s1 = run(solveCmd);
    RunResult s2 = run(solveCmd);
    check(s1.exitCode == 0 && contains(s1.out, "\"feasible\""), "solve ivt feasible via file");
    check(contains(s1.out, "1.5") && contains(s1.out, "0.5"), "witness near [1.5, 0.5]");
    check(s1.out == s2.out, "two runs with one seed are byte-identical");

    // infeasible target exits 2
    fs::path infeasible = fs::temp_directory_path() / "latcalc_cli_infeasible.json";
    {
        std::ofstream out(infeasible);
        out << R"({"model":{"kind":"atomic","dim":2},
                   "function":{"dsl":"x*x"},
                   "interval":{"a":[0,0],"b":[1,1]},
                   "target":[9,9]})";
    }
    RunResult inf = run(bin + " solve ivt --problem " + infeasible.string() + " --json");
    check(inf.exitCode == 2 && contains(inf.out, "infeasible"), "infeasible target exits 2");

    // hypothesis violation through the solver surface
    fs::path notlbp = fs::temp_directory_path() / "latcalc_cli_notlbp.json";
    {
        std::ofstream out(notlbp);
        out << R"({"model":{"kind":"atomic","dim":2},
                   "function":{"builtin":"first_square"},
                   "interval":{"a":[0,0],"b":[1,1]},
                   "target":[0.5,0.5]})";
    }
    RunResult h = run(bin + " solve ivt --problem " + notlbp.string() + " --json");
    check(h.exitCode == 2 && contains(h.out, "notLbp"), "non-LBP builtin is refused, exit 2");

    // bound and checks over ad-hoc flags
    RunResult bound = run(bin + " bound --model atomic:2 --expr \"x*x\" --a \"[0,0]\" --b \"[2,2]\" --json");
    check(bound.exitCode == 0 && contains(bound.out, "4.0"), "bound reports 4e on [0,2e]");
    RunResult lbp = run(bin + " check lbp --model atomic:2 --builtin swizzle_affine --a \"[0,0]\" --b \"[1,1]\" --json");
    check(lbp.exitCode == 2 && contains(lbp.out, "\"pass\": false"), "lbp check catches swizzle");
    RunResult cls = run(bin + " check diff --model atomic:2 --builtin thin_sqrt --at \"[0,0]\" --json");
    check(cls.exitCode == 0 && contains(cls.out, "orderOnly"), "check diff classifies thin_sqrt");

    // mvt via flags-only interval
    fs::path mvt = fs::temp_directory_path() / "latcalc_cli_mvt.json";
    {
        std::ofstream out(mvt);
        out << R"({"model":{"kind":"atomic","dim":3},
                   "function":{"dsl":"x^3"},
                   "interval":{"a":[0,0,0],"b":[1,1,1]}})";
    }
    RunResult m = run(bin + " solve mvt --problem " + mvt.string() + " --json");
    check(m.exitCode == 0 && contains(m.out, "0.57735"), "mvt witness near 1/sqrt(3)");

    // cmvt through a problem file
    fs::path cmvt = fs::temp_directory_path() / "latcalc_cli_cmvt.json";
    {
        std::ofstream out(cmvt);
        out << R"({"model":{"kind":"atomic","dim":2},
                   "function":{"cpoly":[0,0,1]},
                   "csegment":{"a":0,"b":{"re":[1,1],"im":[1,1]}}})";
    }
    RunResult cm = run(bin + " solve cmvt --problem " + cmvt.string() + " --json");
    check(cm.exitCode == 0 && contains(cm.out, "witnessV"), "cmvt produces both witnesses");

    if (failures == 0) std::printf("cli: all checks passed\n");
    else std::printf("cli: %d check(s) failed\n", failures);
    return failures;
}
