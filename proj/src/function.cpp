#include "latcalc/function.hpp"

#include "latcalc/rng.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace latcalc {

namespace {

struct BuiltinSpec {
    std::string description;
    bool lbp;
    bool probeable;
    int minDim;
    Element (*eval)(const Element&);
};

Element evalSwizzleAffine(const Element& x) {
    std::vector<double> out = x.values();
    out[1] = 1.0 - out[0];
    return Element::atomic(std::move(out));
}

Element evalFirstSquare(const Element& x) {
    std::vector<double> out = x.values();
    out[1] = out[0] * out[0];
    return Element::atomic(std::move(out));
}

// k_n(t) = 0 for t <= 1/(2n), 1 for t >= 1/n, linear in between (slope 2n).
Element evalKnThreshold(const Element& x) {
    std::vector<double> out(x.values().size());
    for (size_t i = 0; i < out.size(); ++i) {
        double n = static_cast<double>(i + 1);
        double t = x.values()[i];
        if (t <= 1.0 / (2.0 * n)) out[i] = 0.0;
        else if (t >= 1.0 / n) out[i] = 1.0;
        else out[i] = 2.0 * n * t - 1.0;
    }
    return Element::atomic(std::move(out));
}

// (x1, x2, ...) -> (sqrt|x1| when x2 = 0 else 0, 0, ...). Continuous at the
// origin, order differentiable there, but the pinned axis x2 = 0 defeats
// super order differentiability and band preservation.
Element evalThinSqrt(const Element& x) {
    std::vector<double> out(x.values().size(), 0.0);
    if (x.values()[1] == 0.0) out[0] = std::sqrt(std::abs(x.values()[0]));
    return Element::atomic(std::move(out));
}

Element evalSignStep(const Element& x) {
    std::vector<double> out(x.values().size(), 0.0);
    double t = x.values()[0];
    out[0] = t > 0.0 ? 1.0 : (t < 0.0 ? -1.0 : 0.0);
    return Element::atomic(std::move(out));
}

const std::map<std::string, BuiltinSpec>& builtinTable() {
    static const std::map<std::string, BuiltinSpec> table{
        {"swizzle_affine",
         {"(x1, x2, ...) -> (x1, 1 - x1, ...); cross-coordinate affine map, not LBP",
          false, true, 2, &evalSwizzleAffine}},
        {"first_square",
         {"(x1, x2, ...) -> (x1, x1^2, ...); cross-coordinate map, not LBP",
          false, true, 2, &evalFirstSquare}},
        {"kn_threshold",
         {"coordinatewise ramps k_n: 0 below 1/(2n), 1 above 1/n, linear between",
          true, true, 1, &evalKnThreshold}},
        {"thin_sqrt",
         {"(x1, x2, ...) -> (sqrt|x1| when x2 = 0 else 0, 0, ...); order-only differentiable at 0",
          false, true, 2, &evalThinSqrt}},
        {"sign_step",
         {"(x1, ...) -> (sign x1, 0, ...); atom-local step with a jump at x1 = 0",
          true, false, 1, &evalSignStep}},
    };
    return table;
}

}  // namespace

FunctionHandle FunctionHandle::dsl(ExprPtr expr, ModelSpec model) {
    FunctionHandle f;
    f.model_ = model;
    f.expr_ = std::move(expr);
    f.lbp_ = true;
    f.probeable_ = true;
    return f;
}

FunctionHandle FunctionHandle::dslText(const std::string& text, const ModelSpec& model) {
    return dsl(parse(text, model), model);
}

FunctionHandle FunctionHandle::builtin(const std::string& name, const ModelSpec& model) {
    auto it = builtinTable().find(name);
    if (it == builtinTable().end()) throw UnknownIdentifier(name);
    if (model.kind != ModelKind::Atomic)
        throw DomainViolation("builtin '" + name + "' requires an atomic model");
    if (model.dim < it->second.minDim)
        throw DomainViolation("builtin '" + name + "' needs dim >= " +
                              std::to_string(it->second.minDim));
    FunctionHandle f;
    f.model_ = model;
    f.builtinName_ = name;
    f.lbp_ = it->second.lbp;
    f.probeable_ = it->second.probeable;
    return f;
}

std::string FunctionHandle::displayName() const {
    if (isDsl()) return prettyPrint(*expr_);
    return builtinName_;
}

Element evaluate(const FunctionHandle& f, const Element& x) {
    if (x.model() != f.model()) throw ModelMismatch("argument model mismatch");
    if (f.isDsl()) return evalExpr(*f.expr(), x);
    return builtinTable().at(f.builtinName()).eval(x);
}

std::vector<BuiltinInfo> listBuiltins() {
    std::vector<BuiltinInfo> out;
    for (const auto& [name, spec] : builtinTable())
        out.push_back({name, spec.description, spec.lbp, spec.minDim});
    return out;
}

Band randomBand(const ModelSpec& model, Rng& rng) {
    if (model.kind == ModelKind::Atomic) {
        if (model.dim == 1) return Band::whole(model);
        for (;;) {
            std::vector<std::int32_t> atoms;
            for (int i = 0; i < model.dim; ++i)
                if (rng.coin()) atoms.push_back(i);
            if (!atoms.empty() && static_cast<int>(atoms.size()) < model.dim)
                return Band::ofAtoms(model, std::move(atoms));
        }
    }
    int depth = std::min(model.maxDepth, 4);
    if (depth == 0) return Band::whole(model);
    std::uint32_t cells = 1u << depth;
    std::uint32_t step = model.ticks() / cells;
    for (;;) {
        std::vector<std::pair<std::uint32_t, std::uint32_t>> runs;
        std::uint32_t picked = 0;
        for (std::uint32_t c = 0; c < cells; ++c) {
            if (rng.coin()) {
                runs.emplace_back(c * step, (c + 1) * step);
                ++picked;
            }
        }
        if (picked > 0 && picked < cells) return Band::ofTicks(model, std::move(runs));
    }
}

LbpReport checkLbp(const FunctionHandle& f, const OrderInterval& region, int trials,
                   std::uint64_t seed) {
    if (!leq(region.a, region.b)) throw DomainViolation("empty region");
    Rng rng(seed);
    LbpReport report;
    report.trials = trials;
    for (int t = 0; t < trials; ++t) {
        Element x = region.sample(rng);
        Element w = region.sample(rng);
        Band band = randomBand(f.model(), rng);
        Element y = splice(band, x, w);
        Element gapElem = sub(evaluate(f, x), evaluate(f, y));
        double gap = maxAbsOnBand(gapElem, band);
        if (gap > kEqTol) {
            ++report.violations;
            if (!report.witness) report.witness = LbpViolation{x, y, band, gap};
        }
    }
    report.pass = report.violations == 0;
    return report;
}

ContinuityReport continuityProbe(const FunctionHandle& f, const OrderInterval& region,
                                 int grid, std::uint64_t seed) {
    if (grid < 2) throw DomainViolation("continuity probe needs grid >= 2");
    Rng rng(seed);
    const int levels = 10;
    const int samplesPerCenter = 12;
    Element extent = sub(region.b, region.a);

    // Initial centers: segment grid plus a few random box points.
    std::vector<Element> centers;
    for (int k = 0; k < grid; ++k)
        centers.push_back(region.at(static_cast<double>(k) / static_cast<double>(grid - 1)));
    for (int k = 0; k < grid / 2 + 1; ++k) centers.push_back(region.sample(rng));

    ContinuityReport report;
    Element zero = Element::zero(region.model());
    for (int level = 0; level < levels; ++level) {
        double shrink = std::ldexp(1.0, -level);  // 2^-level
        Element osc = zero;
        std::vector<std::pair<double, Element>> worst;  // (osc, midpoint) per center
        for (const Element& c : centers) {
            Element fc = evaluate(f, c);
            double worstHere = 0.0;
            Element worstMid = c;
            for (int s = 0; s < samplesPerCenter; ++s) {
                Element offset = mapValues(extent, [&](double v) {
                    return shrink * v * (2.0 * rng.uniform01() - 1.0);
                });
                Element z = sup(region.a, inf(region.b, add(c, offset)));
                Element dv = modulus(sub(evaluate(f, z), fc));
                osc = sup(osc, dv);
                double m = maxAbs(dv);
                if (m > worstHere) {
                    worstHere = m;
                    worstMid = scale(0.5, add(c, z));
                }
            }
            worst.emplace_back(worstHere, worstMid);
        }
        report.oscByLevel.push_back(maxAbs(osc));
        if (level == 0) report.coarseOsc = osc;
        report.finalOsc = osc;
        // Zoom: keep each center's worst midpoint so persistent jumps stay
        // inside the shrinking balls.
        std::sort(worst.begin(), worst.end(),
                  [](const auto& l, const auto& r) { return l.first > r.first; });
        size_t keep = std::max<size_t>(2, centers.size() / 2);
        std::vector<Element> next;
        for (size_t i = 0; i < std::min(keep, worst.size()); ++i) next.push_back(worst[i].second);
        centers = std::move(next);
    }
    // Suspect: final oscillation not decayed below a quarter of the coarse one.
    Element threshold = add(scale(0.25, report.coarseOsc),
                            Element::constant(region.model(), 1e-6));
    report.suspect = bandLt(threshold, report.finalOsc);
    report.continuous = report.suspect.isEmpty();
    return report;
}

}  // namespace latcalc
