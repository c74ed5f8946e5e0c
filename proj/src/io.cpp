#include "latcalc/io.hpp"

#include "partition.hpp"

#include <cmath>
#include <fstream>

namespace latcalc {

json modelToJson(const ModelSpec& model) {
    if (model.kind == ModelKind::Atomic) return {{"kind", "atomic"}, {"dim", model.dim}};
    return {{"kind", "dyadic"}, {"maxDepth", model.maxDepth}};
}

ModelSpec modelFromJson(const json& j) {
    std::string kind = j.at("kind").get<std::string>();
    if (kind == "atomic") return ModelSpec::atomic(j.at("dim").get<int>());
    if (kind == "dyadic") return ModelSpec::dyadic(j.at("maxDepth").get<int>());
    throw DomainViolation("unknown model kind '" + kind + "'");
}

ModelSpec modelFromString(const std::string& text) {
    auto colon = text.find(':');
    if (colon == std::string::npos) throw DomainViolation("model must be atomic:N or dyadic:DEPTH");
    std::string kind = text.substr(0, colon);
    int arg = std::stoi(text.substr(colon + 1));
    if (kind == "atomic") return ModelSpec::atomic(arg);
    if (kind == "dyadic") return ModelSpec::dyadic(arg);
    throw DomainViolation("model must be atomic:N or dyadic:DEPTH");
}

namespace {

// Dyadic endpoint to tick index; rejects anything not on the grid.
std::uint32_t tickOf(double endpoint, const ModelSpec& model) {
    double scaled = endpoint * static_cast<double>(model.ticks());
    double rounded = std::nearbyint(scaled);
    if (scaled != rounded || rounded < 0.0 || rounded > static_cast<double>(model.ticks()))
        throw DepthExceeded("endpoint is not dyadic at depth <= maxDepth");
    return static_cast<std::uint32_t>(rounded);
}

}  // namespace

json elementToJson(const Element& x) {
    if (x.model().kind == ModelKind::Atomic) return json(x.values());
    json pieces = json::array();
    double scale = 1.0 / static_cast<double>(x.model().ticks());
    for (int i = 0; i < x.pieceCount(); ++i) {
        pieces.push_back({{"i", {x.pieceStart(i) * scale, x.pieceEnd(i) * scale}},
                          {"v", x.values()[static_cast<size_t>(i)]}});
    }
    return {{"pieces", pieces}};
}

Element elementFromJson(const json& j, const ModelSpec& model) {
    if (model.kind == ModelKind::Atomic) {
        if (!j.is_array()) throw DomainViolation("atomic element literal must be an array");
        std::vector<double> vals = j.get<std::vector<double>>();
        if (static_cast<int>(vals.size()) != model.dim)
            throw DomainViolation("element literal has wrong dimension");
        for (double v : vals)
            if (!std::isfinite(v)) throw DomainViolation("element values must be finite");
        return Element::atomic(std::move(vals));
    }
    if (!j.is_object() || !j.contains("pieces"))
        throw DomainViolation("dyadic element literal must be {\"pieces\":[...]}");
    // A literal range with on-grid endpoints may span several dyadic
    // intervals; split it canonically rather than reject it.
    detail::PartitionBuilder b;
    std::uint32_t prev = 0;
    for (const auto& piece : j.at("pieces")) {
        const auto& iv = piece.at("i");
        std::uint32_t lo = tickOf(iv.at(0).get<double>(), model);
        std::uint32_t hi = tickOf(iv.at(1).get<double>(), model);
        if (lo != prev || hi <= lo)
            throw DomainViolation("pieces must be sorted and cover [0,1)");
        double v = piece.at("v").get<double>();
        if (!std::isfinite(v)) throw DomainViolation("element values must be finite");
        b.pushRange(lo, hi, v);
        prev = hi;
    }
    return Element::dyadicStep(model, std::move(b.ends), std::move(b.values));
}

json bandToJson(const Band& b) {
    if (b.model().kind == ModelKind::Atomic) return {{"atoms", b.atoms()}};
    json intervals = json::array();
    double scale = 1.0 / static_cast<double>(b.model().ticks());
    for (const auto& run : b.runs())
        intervals.push_back({run.first * scale, run.second * scale});
    return {{"intervals", intervals}};
}

Band bandFromJson(const json& j, const ModelSpec& model) {
    if (model.kind == ModelKind::Atomic) {
        return Band::ofAtoms(model, j.at("atoms").get<std::vector<std::int32_t>>());
    }
    std::vector<std::pair<std::uint32_t, std::uint32_t>> runs;
    for (const auto& iv : j.at("intervals"))
        runs.emplace_back(tickOf(iv.at(0).get<double>(), model), tickOf(iv.at(1).get<double>(), model));
    if (runs.empty()) return Band::empty(model);
    return Band::ofTicks(model, std::move(runs));
}

json complexToJson(const ComplexElement& z) {
    return {{"re", elementToJson(z.re)}, {"im", elementToJson(z.im)}};
}

ComplexElement complexFromJson(const json& j, const ModelSpec& model) {
    if (j.is_number()) {
        double t = j.get<double>();
        return {Element::constant(model, t), Element::zero(model)};
    }
    return {elementFromJson(j.at("re"), model), elementFromJson(j.at("im"), model)};
}

json reportToJson(const SolveReport& report) {
    json j;
    j["certificate"] = certificateName(report.certificate);
    if (!report.detail.empty()) j["detail"] = report.detail;
    if (report.witness) j["witness"] = elementToJson(*report.witness);
    if (report.witness2) j["witness2"] = elementToJson(*report.witness2);
    if (report.witnessU) j["witnessU"] = complexToJson(*report.witnessU);
    if (report.witnessV) j["witnessV"] = complexToJson(*report.witnessV);
    if (report.residual) j["residual"] = elementToJson(*report.residual);
    if (report.residualIm) j["residualIm"] = elementToJson(*report.residualIm);
    json trace = json::array();
    for (const auto& ev : report.trace)
        trace.push_back({{"event", ev.kind}, {"band", ev.band}, {"lo", ev.lo}, {"hi", ev.hi},
                         {"iter", ev.iter}});
    j["trace"] = trace;
    j["bandSplits"] = report.bandSplits;
    j["maxBisections"] = report.maxBisections;
    return j;
}

json lbpReportToJson(const LbpReport& report) {
    json j;
    j["pass"] = report.pass;
    j["trials"] = report.trials;
    j["violations"] = report.violations;
    if (report.witness) {
        j["witness"] = {{"x", elementToJson(report.witness->x)},
                        {"y", elementToJson(report.witness->y)},
                        {"band", bandToJson(report.witness->band)},
                        {"gap", report.witness->gap}};
    }
    return j;
}

json continuityReportToJson(const ContinuityReport& report) {
    json j;
    j["continuous"] = report.continuous;
    j["suspect"] = bandToJson(report.suspect);
    j["oscByLevel"] = report.oscByLevel;
    return j;
}

json diffReportToJson(const DiffReport& report) {
    json j;
    j["derivative"] = elementToJson(report.derivative);
    j["mode"] = report.mode == DiffMode::Order ? "order" : "super";
    j["maxScaledResidual"] = report.maxScaledResidual;
    j["thinSetResidual"] = report.thinSetResidual;
    j["verdict"] = report.pass ? "pass" : "fail";
    if (report.witness) j["witness"] = elementToJson(*report.witness);
    return j;
}

Problem problemFromJson(const json& j) {
    Problem p;
    p.model = modelFromJson(j.at("model"));
    p.opts = SolverOptions::forModel(p.model);
    if (j.contains("tol")) p.opts.tol = j.at("tol").get<double>();
    if (j.contains("seed")) p.opts.seed = j.at("seed").get<std::uint64_t>();

    if (j.contains("function")) {
        const json& fn = j.at("function");
        if (fn.contains("dsl"))
            p.function = FunctionHandle::dslText(fn.at("dsl").get<std::string>(), p.model);
        else if (fn.contains("builtin"))
            p.function = FunctionHandle::builtin(fn.at("builtin").get<std::string>(), p.model);
        else if (fn.contains("cpoly")) {
            ComplexPoly poly;
            for (const auto& coeff : fn.at("cpoly"))
                poly.coeffs.push_back(complexFromJson(coeff, p.model));
            if (poly.coeffs.empty()) throw DomainViolation("cpoly needs coefficients");
            p.cpoly = std::move(poly);
        } else {
            throw DomainViolation("function must be dsl, builtin, or cpoly");
        }
    }
    if (j.contains("interval")) {
        p.interval = OrderInterval::closedInterval(
            elementFromJson(j.at("interval").at("a"), p.model),
            elementFromJson(j.at("interval").at("b"), p.model));
    }
    if (j.contains("target")) p.target = elementFromJson(j.at("target"), p.model);
    if (j.contains("segment")) {
        p.segC = elementFromJson(j.at("segment").at("c"), p.model);
        p.segD = elementFromJson(j.at("segment").at("d"), p.model);
    }
    if (j.contains("csegment")) {
        p.complexA = complexFromJson(j.at("csegment").at("a"), p.model);
        p.complexB = complexFromJson(j.at("csegment").at("b"), p.model);
    }
    return p;
}

Problem problemFromFile(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DomainViolation("cannot open problem file '" + path + "'");
    json j = json::parse(in);
    return problemFromJson(j);
}

std::string dumpReport(const json& j) { return j.dump(2); }

}  // namespace latcalc
