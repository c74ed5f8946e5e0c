#include "latcalc/solvers.hpp"

#include "latcalc/rng.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

namespace latcalc {

const char* certificateName(Certificate c) {
    switch (c) {
        case Certificate::Feasible: return "feasible";
        case Certificate::Infeasible: return "infeasible";
        case Certificate::HypothesisViolated: return "hypothesisViolated";
        case Certificate::IterationCapReached: return "iterationCapReached";
    }
    return "?";
}

SolverOptions SolverOptions::forModel(const ModelSpec& model) {
    SolverOptions o;
    o.tol = model.kind == ModelKind::Atomic ? 1e-8 : 1e-6;
    return o;
}

int spliceIndependenceFailures(const FunctionHandle& f, const OrderInterval& interval,
                               int trials, std::uint64_t seed) {
    Rng rng(seed);
    int failures = 0;
    for (int t = 0; t < trials; ++t) {
        Band band = randomBand(f.model(), rng);
        Element u = interval.sample(rng);
        Element w1 = interval.sample(rng);
        Element w2 = interval.sample(rng);
        Element x1 = splice(band, u, w1);
        Element x2 = splice(band, u, w2);
        Element gap = sub(evaluate(f, x1), evaluate(f, x2));
        if (maxAbsOnBand(gap, band) != 0.0) ++failures;
    }
    return failures;
}

namespace {

constexpr double kWidthTol = 1e-13;

// --- band-wise bisection core --------------------------------------------
//
// Solves F(point(t)) = target per band, where each active cell carries one
// scalar parameter for its whole band. Each round evaluates F once on the
// candidate assembled by splicing every cell's midpoint; local band
// preservation makes the per-cell classifications independent of the other
// cells' parameters.

struct CoreCell {
    Band band;
    double lo, hi;
    int orient = 0;  // +1: value rises through target; -1: falls
    bool active = false;
    int iters = 0;
    double t = 0.0;  // final parameter once converged
};

struct CoreResult {
    std::vector<CoreCell> cells;
    bool capReached = false;
    int splits = 0;
    int maxIters = 0;
    std::vector<TraceEvent> trace;
};

using SectionEval = std::function<Element(const Element& tParams)>;

Element assembleParams(const ModelSpec& model, const std::vector<CoreCell>& cells) {
    Element acc = Element::zero(model);
    for (const auto& cell : cells) {
        double t = cell.active ? 0.5 * (cell.lo + cell.hi) : cell.t;
        acc = add(acc, applyProjection(cell.band, Element::constant(model, t)));
    }
    return acc;
}

Element assembleAt(const ModelSpec& model, const std::vector<CoreCell>& cells, bool atHi) {
    Element acc = Element::zero(model);
    for (const auto& cell : cells) {
        double t = cell.active ? (atHi ? cell.hi : cell.lo) : cell.t;
        acc = add(acc, applyProjection(cell.band, Element::constant(model, t)));
    }
    return acc;
}

CoreResult bandBisect(const ModelSpec& model, const SectionEval& valueAt,
                      const Element& target,
                      const std::vector<std::pair<Band, std::pair<double, double>>>& seeds,
                      double tol, int bisectionCap, int splitCap) {
    CoreResult res;

    // Degenerate seeds (zero width) converge in place; the rest get their
    // orientation from the endpoint values.
    std::vector<CoreCell> pending;
    for (const auto& [band, bracket] : seeds) {
        if (band.isEmpty()) continue;
        CoreCell c;
        c.band = band;
        c.lo = bracket.first;
        c.hi = bracket.second;
        if (c.hi - c.lo <= kWidthTol) {
            c.t = 0.5 * (c.lo + c.hi);
            c.active = false;
        } else {
            c.active = true;
        }
        pending.push_back(std::move(c));
    }

    Element vLo = valueAt(assembleAt(model, pending, false));
    Element vHi = valueAt(assembleAt(model, pending, true));
    BandTrichotomy triLo = bandTrichotomy(vLo, target, tol);  // lt: vLo < target
    BandTrichotomy triHi = bandTrichotomy(vHi, target, tol);
    Band closeLo = bandLe(modulus(sub(vLo, target)), modulus(sub(vHi, target)));

    for (auto& cell : pending) {
        if (!cell.active) {
            res.cells.push_back(cell);
            continue;
        }
        Band up = bandMeet(cell.band, bandMeet(triLo.lt, triHi.gt));
        Band down = bandMeet(cell.band, bandMeet(triLo.gt, triHi.lt));
        Band rest = bandMeet(cell.band, bandComplement(bandJoin(up, down)));
        if (!up.isEmpty()) {
            CoreCell c = cell;
            c.band = up;
            c.orient = 1;
            res.trace.push_back({"orient", up.describe(), c.lo, c.hi, 0});
            res.cells.push_back(std::move(c));
        }
        if (!down.isEmpty()) {
            CoreCell c = cell;
            c.band = down;
            c.orient = -1;
            res.trace.push_back({"orient", down.describe(), c.lo, c.hi, 0});
            res.cells.push_back(std::move(c));
        }
        if (!rest.isEmpty()) {
            // No strict bracket: one endpoint already meets the target within
            // tolerance; converge at the closer one.
            Band atLo = bandMeet(rest, closeLo);
            Band atHi = bandMeet(rest, bandComplement(closeLo));
            if (!atLo.isEmpty()) {
                CoreCell c = cell;
                c.band = atLo;
                c.active = false;
                c.t = cell.lo;
                res.trace.push_back({"converged", atLo.describe(), c.lo, c.lo, 0});
                res.cells.push_back(std::move(c));
            }
            if (!atHi.isEmpty()) {
                CoreCell c = cell;
                c.band = atHi;
                c.active = false;
                c.t = cell.hi;
                res.trace.push_back({"converged", atHi.describe(), c.hi, c.hi, 0});
                res.cells.push_back(std::move(c));
            }
        }
    }

    int guard = bisectionCap + 64;
    while (guard-- > 0) {
        bool anyActive = false;
        for (const auto& c : res.cells)
            if (c.active) anyActive = true;
        if (!anyActive) break;

        Element v = valueAt(assembleParams(model, res.cells));
        BandTrichotomy tri = bandTrichotomy(v, target, tol);  // lt: v < target

        size_t count = res.cells.size();
        for (size_t i = 0; i < count; ++i) {
            if (!res.cells[i].active) continue;
            CoreCell cell = res.cells[i];
            double mid = 0.5 * (cell.lo + cell.hi);
            cell.iters += 1;
            res.maxIters = std::max(res.maxIters, cell.iters);

            if (cell.hi - cell.lo <= kWidthTol || cell.iters > bisectionCap) {
                if (cell.iters > bisectionCap) res.capReached = true;
                cell.active = false;
                cell.t = mid;
                res.trace.push_back({"converged", cell.band.describe(), cell.lo, cell.hi, cell.iters});
                res.cells[i] = std::move(cell);
                continue;
            }

            Band below = bandMeet(cell.band, tri.lt);
            Band above = bandMeet(cell.band, tri.gt);
            Band hit = bandMeet(cell.band, tri.eq);

            struct Child {
                Band band;
                double lo, hi;
                bool converged;
            };
            std::vector<Child> children;
            if (!hit.isEmpty()) children.push_back({hit, mid, mid, true});
            if (!below.isEmpty()) {
                if (cell.orient > 0) children.push_back({below, mid, cell.hi, false});
                else children.push_back({below, cell.lo, mid, false});
            }
            if (!above.isEmpty()) {
                if (cell.orient > 0) children.push_back({above, cell.lo, mid, false});
                else children.push_back({above, mid, cell.hi, false});
            }

            if (children.size() > 1) {
                res.splits += static_cast<int>(children.size()) - 1;
                if (res.splits > splitCap) {
                    res.capReached = true;
                    cell.active = false;
                    cell.t = mid;
                    res.trace.push_back({"capSplit", cell.band.describe(), cell.lo, cell.hi, cell.iters});
                    res.cells[i] = std::move(cell);
                    continue;
                }
            }

            bool first = true;
            for (auto& ch : children) {
                CoreCell next = cell;
                next.band = ch.band;
                next.lo = ch.lo;
                next.hi = ch.hi;
                if (ch.converged) {
                    next.active = false;
                    next.t = ch.lo;
                    res.trace.push_back({"converged", ch.band.describe(), ch.lo, ch.hi, next.iters});
                } else if (children.size() > 1) {
                    res.trace.push_back({"split", ch.band.describe(), ch.lo, ch.hi, next.iters});
                }
                if (first) {
                    res.cells[i] = next;
                    first = false;
                } else {
                    res.cells.push_back(next);
                }
            }
        }
    }

    // Anything still active ran out of the guard budget.
    for (auto& c : res.cells) {
        if (c.active) {
            c.active = false;
            c.t = 0.5 * (c.lo + c.hi);
            res.capReached = true;
        }
    }
    return res;
}

// --- shared solver plumbing ------------------------------------------------

struct Hypotheses {
    bool lbpOk = true;
    std::optional<LbpViolation> lbpWitness;
    bool continuityOk = true;
};

Hypotheses checkHypotheses(const FunctionHandle& f, const OrderInterval& interval,
                           const SolverOptions& opts, bool probeContinuity) {
    Hypotheses h;
    LbpReport lbp = checkLbp(f, interval, opts.lbpTrials, opts.seed ^ 0x1bdu);
    h.lbpOk = lbp.pass;
    h.lbpWitness = lbp.witness;
    if (h.lbpOk && opts.debugSpliceChecks &&
        spliceIndependenceFailures(f, interval, 1000, opts.seed ^ 0x51deu) > 0) {
        h.lbpOk = false;
    }
    if (h.lbpOk && probeContinuity) {
        ContinuityReport probe = continuityProbe(f, interval, 9, opts.seed ^ 0xc011u);
        h.continuityOk = probe.continuous;
    }
    return h;
}

SolveReport hypothesisReport(const std::string& reason, const Hypotheses& h) {
    SolveReport rep;
    rep.certificate = Certificate::HypothesisViolated;
    rep.detail = reason;
    if (h.lbpWitness) rep.witness = h.lbpWitness->x;
    return rep;
}

Element segmentPoint(const OrderInterval& interval, const Element& tParams) {
    return add(interval.a, mul(tParams, sub(interval.b, interval.a)));
}

// --- extreme value machinery ------------------------------------------------

struct EvtCells {
    std::vector<std::pair<Band, double>> cells;  // disjoint bands covering the model
    bool capReached = false;
    int splits = 0;
    std::vector<TraceEvent> trace;
};

// direction +1 maximizes the per-atom section, -1 minimizes. Ties break to
// the smallest segment parameter.
EvtCells evtExtremize(const FunctionHandle& f, const OrderInterval& interval, int direction,
                      const SolverOptions& opts) {
    const ModelSpec& model = f.model();
    EvtCells out;
    int grid = std::max(3, opts.gridPoints);

    std::vector<double> ts(static_cast<size_t>(grid));
    for (int k = 0; k < grid; ++k)
        ts[static_cast<size_t>(k)] = static_cast<double>(k) / static_cast<double>(grid - 1);

    Element bestVal = evaluate(f, interval.at(ts[0]));
    std::vector<std::pair<Band, int>> argCells{{Band::whole(model), 0}};
    for (int k = 1; k < grid; ++k) {
        Element vk = evaluate(f, interval.at(ts[static_cast<size_t>(k)]));
        BandTrichotomy cmp = bandTrichotomy(bestVal, vk, 0.0);
        Band improved = direction > 0 ? cmp.lt : cmp.gt;
        if (improved.isEmpty()) continue;
        std::vector<std::pair<Band, int>> next;
        for (auto& [band, idx] : argCells) {
            Band keep = bandMeet(band, bandComplement(improved));
            if (!keep.isEmpty()) next.emplace_back(keep, idx);
        }
        next.emplace_back(improved, k);
        argCells = std::move(next);
        bestVal = splice(improved, vk, bestVal);
    }

    // Golden-section refinement per cell around the winning grid index; cells
    // whose atoms disagree on a comparison split along it.
    struct GoldCell {
        Band band;
        double lo, hi;
        bool active;
        int iters;
    };
    const double invPhi = 0.6180339887498949;
    std::vector<GoldCell> cells;
    for (auto& [band, idx] : argCells) {
        double lo = ts[static_cast<size_t>(std::max(0, idx - 1))];
        double hi = ts[static_cast<size_t>(std::min(grid - 1, idx + 1))];
        cells.push_back({band, lo, hi, true, 0});
        out.trace.push_back({"gridArgmax", band.describe(), lo, hi, idx});
    }

    auto probePoint = [&](const std::vector<GoldCell>& cs, bool second) {
        Element acc = Element::zero(model);
        for (const auto& c : cs) {
            double w = c.hi - c.lo;
            double t = c.active ? (second ? c.lo + invPhi * w : c.hi - invPhi * w)
                                : 0.5 * (c.lo + c.hi);
            acc = add(acc, applyProjection(c.band, Element::constant(model, t)));
        }
        return segmentPoint(interval, acc);
    };

    int guard = 120;
    while (guard-- > 0) {
        bool anyActive = false;
        for (const auto& c : cells)
            if (c.active) anyActive = true;
        if (!anyActive) break;

        Element v1 = evaluate(f, probePoint(cells, false));
        Element v2 = evaluate(f, probePoint(cells, true));
        BandTrichotomy cmp = bandTrichotomy(v1, v2, 0.0);  // lt: v2 > v1

        size_t count = cells.size();
        for (size_t i = 0; i < count; ++i) {
            if (!cells[i].active) continue;
            GoldCell cell = cells[i];
            cell.iters += 1;
            if (cell.hi - cell.lo <= 1e-8 || cell.iters > 90) {
                cell.active = false;
                out.trace.push_back({"converged", cell.band.describe(), cell.lo, cell.hi, cell.iters});
                cells[i] = cell;
                continue;
            }
            double m1 = cell.hi - invPhi * (cell.hi - cell.lo);
            double m2 = cell.lo + invPhi * (cell.hi - cell.lo);
            // For a maximum: if v2 > v1 keep [m1, hi], else keep [lo, m2]
            // (ties prefer the left bracket, biasing the final parameter
            // down). Mirror for a minimum.
            Band keepRight = direction > 0 ? cmp.lt : cmp.gt;
            Band right = bandMeet(cell.band, keepRight);
            Band left = bandMeet(cell.band, bandComplement(keepRight));
            struct Part {
                Band band;
                double lo, hi;
            };
            std::vector<Part> parts;
            if (!left.isEmpty()) parts.push_back({left, cell.lo, m2});
            if (!right.isEmpty()) parts.push_back({right, m1, cell.hi});
            if (parts.size() > 1) {
                out.splits += 1;
                if (out.splits > opts.splitCap) {
                    out.capReached = true;
                    cell.active = false;
                    cells[i] = cell;
                    continue;
                }
            }
            bool first = true;
            for (auto& p : parts) {
                GoldCell next = cell;
                next.band = p.band;
                next.lo = p.lo;
                next.hi = p.hi;
                if (parts.size() > 1)
                    out.trace.push_back({"split", p.band.describe(), p.lo, p.hi, next.iters});
                if (first) {
                    cells[i] = next;
                    first = false;
                } else {
                    cells.push_back(next);
                }
            }
        }
    }

    for (const auto& c : cells) out.cells.emplace_back(c.band, c.lo);
    return out;
}

Element assembleFromCells(const ModelSpec& model, const std::vector<std::pair<Band, double>>& cells) {
    Element acc = Element::zero(model);
    for (const auto& [band, t] : cells)
        acc = add(acc, applyProjection(band, Element::constant(model, t)));
    return acc;
}

}  // namespace

// --- order bound -----------------------------------------------------------

Element orderBound(const FunctionHandle& f, const OrderInterval& interval,
                   const SolverOptions& opts) {
    LbpReport lbp = checkLbp(f, interval, opts.lbpTrials, opts.seed ^ 0x1bdu);
    if (!lbp.pass) throw HypothesisViolatedError("notLbp");

    // Doubling segment grids; per-atom maxima of |f| merged across tiles by
    // lattice sup until the bound stabilizes.
    Element bound = modulus(evaluate(f, interval.a));
    Element prev = bound;
    for (int level = 6; level <= 12; ++level) {
        int n = (1 << level) + 1;
        Element m = modulus(evaluate(f, interval.at(0.0)));
        for (int k = 1; k < n; ++k) {
            double t = static_cast<double>(k) / static_cast<double>(n - 1);
            m = sup(m, modulus(evaluate(f, interval.at(t))));
        }
        bound = m;
        if (level > 6 && maxAbs(sub(bound, prev)) <= 0.25 * opts.tol) break;
        prev = bound;
    }

    // The grid can clip a curved peak; the extremizer refinement closes the
    // continuum gap per atom.
    EvtCells hiSide = evtExtremize(f, interval, +1, opts);
    EvtCells loSide = evtExtremize(f, interval, -1, opts);
    Element atMax = evaluate(f, segmentPoint(interval, assembleFromCells(f.model(), hiSide.cells)));
    Element atMin = evaluate(f, segmentPoint(interval, assembleFromCells(f.model(), loSide.cells)));
    bound = sup(bound, sup(modulus(atMax), modulus(atMin)));

    // Box audit; any excess is absorbed into the bound.
    Rng rng(opts.seed ^ 0xb0b0u);
    for (int s = 0; s < 2000; ++s)
        bound = sup(bound, modulus(evaluate(f, interval.sample(rng))));
    return bound;
}

// --- intermediate value solver ----------------------------------------------

SolveReport solveIvt(const FunctionHandle& f, const OrderInterval& interval,
                     const Element& target, const SolverOptions& opts) {
    SolveReport rep;
    Hypotheses hyp = checkHypotheses(f, interval, opts, true);
    if (!hyp.lbpOk) return hypothesisReport("notLbp", hyp);

    Element fa = evaluate(f, interval.a);
    Element fb = evaluate(f, interval.b);
    Element hullLo = inf(fa, fb);
    Element hullHi = sup(fa, fb);
    Element slack = Element::constant(f.model(), kEqTol);
    if (!leq(sub(hullLo, slack), target) || !leq(target, add(hullHi, slack))) {
        rep.certificate = Certificate::Infeasible;
        rep.detail = "targetOutsideEndpointHull";
        return rep;
    }

    SectionEval valueAt = [&](const Element& tParams) {
        return evaluate(f, segmentPoint(interval, tParams));
    };
    std::vector<std::pair<Band, std::pair<double, double>>> seeds{
        {Band::whole(f.model()), {0.0, 1.0}}};
    CoreResult core = bandBisect(f.model(), valueAt, target, seeds, opts.tol,
                                 opts.bisectionCap, opts.splitCap);

    Element tParams = assembleParams(f.model(), core.cells);
    Element witness = segmentPoint(interval, tParams);
    Element residual = sub(evaluate(f, witness), target);

    rep.witness = witness;
    rep.residual = residual;
    rep.trace = std::move(core.trace);
    rep.bandSplits = core.splits;
    rep.maxBisections = core.maxIters;
    if (core.capReached) {
        rep.certificate = Certificate::IterationCapReached;
        rep.detail = "bisectionOrSplitCap";
    } else if (maxAbs(residual) > opts.tol) {
        rep.certificate = Certificate::IterationCapReached;
        rep.detail = "residualAboveTol";
    } else if (!hyp.continuityOk) {
        rep.certificate = Certificate::IterationCapReached;
        rep.detail = "suspectDiscontinuity";
    } else {
        rep.certificate = Certificate::Feasible;
    }
    return rep;
}

// --- extreme value solver -----------------------------------------------

SolveReport solveEvt(const FunctionHandle& f, const OrderInterval& interval,
                     const SolverOptions& opts) {
    SolveReport rep;
    Hypotheses hyp = checkHypotheses(f, interval, opts, true);
    if (!hyp.lbpOk) return hypothesisReport("notLbp", hyp);

    EvtCells maxSide = evtExtremize(f, interval, +1, opts);
    EvtCells minSide = evtExtremize(f, interval, -1, opts);

    Element d = segmentPoint(interval, assembleFromCells(f.model(), maxSide.cells));
    Element c = segmentPoint(interval, assembleFromCells(f.model(), minSide.cells));
    Element fd = evaluate(f, d);
    Element fc = evaluate(f, c);

    // Audit: f(c) - tol e <= f(x) <= f(d) + tol e on random box samples.
    Rng rng(opts.seed ^ 0xa0d17u);
    Element slackEl = Element::zero(f.model());
    for (int s = 0; s < opts.auditSamples; ++s) {
        Element fx = evaluate(f, interval.sample(rng));
        slackEl = sup(slackEl, posPart(sub(fx, fd)));
        slackEl = sup(slackEl, posPart(sub(fc, fx)));
    }

    rep.witness = c;
    rep.witness2 = d;
    rep.residual = slackEl;
    rep.trace = maxSide.trace;
    rep.trace.insert(rep.trace.end(), minSide.trace.begin(), minSide.trace.end());
    rep.bandSplits = maxSide.splits + minSide.splits;
    if (maxSide.capReached || minSide.capReached) {
        rep.certificate = Certificate::IterationCapReached;
        rep.detail = "splitCap";
    } else if (maxAbs(slackEl) > opts.tol) {
        rep.certificate = Certificate::IterationCapReached;
        rep.detail = "auditExceeded";
    } else if (!hyp.continuityOk) {
        rep.certificate = Certificate::IterationCapReached;
        rep.detail = "suspectDiscontinuity";
    } else {
        rep.certificate = Certificate::Feasible;
    }
    return rep;
}

// --- Rolle ------------------------------------------------------------------

SolveReport solveRolle(const FunctionHandle& f, const OrderInterval& interval,
                       const SolverOptions& opts) {
    if (!strictlyLess(interval.a, interval.b))
        throw DomainViolation("Rolle needs a << b");
    SolveReport rep;
    if (!f.derivativeProbeable()) {
        rep.certificate = Certificate::HypothesisViolated;
        rep.detail = "notSmooth";
        return rep;
    }
    Hypotheses hyp = checkHypotheses(f, interval, opts, false);
    if (!hyp.lbpOk) return hypothesisReport("notLbp", hyp);

    Element fa = evaluate(f, interval.a);
    Element fb = evaluate(f, interval.b);
    if (maxAbs(sub(fa, fb)) > kEqTol) {
        rep.certificate = Certificate::HypothesisViolated;
        rep.detail = "endpointsDiffer";
        return rep;
    }

    EvtCells maxSide = evtExtremize(f, interval, +1, opts);
    EvtCells minSide = evtExtremize(f, interval, -1, opts);

    // The proof's three-band split: interior maximum, interior minimum,
    // constant remainder (midpoint).
    const double tInterior = 1e-6;
    auto interior = [&](double t) { return t > tInterior && t < 1.0 - tInterior; };

    std::vector<std::pair<Band, double>> chosen;
    Band covered = Band::empty(f.model());
    for (const auto& [band, t] : maxSide.cells) {
        if (!interior(t)) continue;
        chosen.emplace_back(band, t);
        covered = bandJoin(covered, band);
    }
    for (const auto& [band, t] : minSide.cells) {
        if (!interior(t)) continue;
        Band part = bandMeet(band, bandComplement(covered));
        if (part.isEmpty()) continue;
        chosen.emplace_back(part, t);
        covered = bandJoin(covered, part);
    }
    Band constant = bandComplement(covered);
    if (!constant.isEmpty()) chosen.emplace_back(constant, 0.5);

    for (const auto& [band, t] : chosen)
        rep.trace.push_back({"rolleCell", band.describe(), t, t, 0});

    // Polish with sign bisection on the symbolic derivative where available;
    // golden-section precision alone bottoms out near sqrt(eps).
    int polishSplits = 0;
    if (f.isDsl() && isSmooth(*f.expr())) {
        ExprPtr df = differentiate(f.expr());
        SectionEval derivAt = [&](const Element& tParams) {
            return evalExpr(*df, segmentPoint(interval, tParams));
        };
        const double w = 2.0 / static_cast<double>(std::max(2, opts.gridPoints - 1));
        std::vector<std::pair<Band, std::pair<double, double>>> seeds;
        for (const auto& [band, t] : chosen) {
            if (t == 0.5 && bandMeet(band, constant) == band) {
                seeds.push_back({band, {0.5, 0.5}});
            } else {
                double lo = std::max(1e-9, t - w);
                double hi = std::min(1.0 - 1e-9, t + w);
                seeds.push_back({band, {lo, hi}});
            }
        }
        CoreResult core = bandBisect(f.model(), derivAt, Element::zero(f.model()), seeds,
                                     0.25 * opts.tol, opts.bisectionCap, opts.splitCap);
        chosen.clear();
        for (const auto& cell : core.cells) chosen.emplace_back(cell.band, cell.t);
        polishSplits = core.splits;
        rep.trace.insert(rep.trace.end(), core.trace.begin(), core.trace.end());
    }

    Element x0 = segmentPoint(interval, assembleFromCells(f.model(), chosen));
    Element deriv;
    try {
        deriv = estimateDerivative(f, x0);
    } catch (const NoConvergence&) {
        rep.certificate = Certificate::IterationCapReached;
        rep.detail = "derivativeProbeFailed";
        rep.witness = x0;
        return rep;
    }
    rep.witness = x0;
    rep.residual = deriv;
    rep.bandSplits = maxSide.splits + minSide.splits + polishSplits;
    if (maxAbs(deriv) <= opts.tol) {
        rep.certificate = Certificate::Feasible;
    } else {
        rep.certificate = Certificate::IterationCapReached;
        rep.detail = "derivativeResidualAboveTol";
    }
    return rep;
}

// --- mean value -----------------------------------------------------------

SolveReport solveMvt(const FunctionHandle& f, const OrderInterval& interval,
                     const SolverOptions& opts) {
    if (!strictlyLess(interval.a, interval.b))
        throw DomainViolation("mean value needs a << b");
    SolveReport rep;
    if (!f.isDsl() || !isSmooth(*f.expr())) {
        rep.certificate = Certificate::HypothesisViolated;
        rep.detail = "notSmooth";
        return rep;
    }

    Element fa = evaluate(f, interval.a);
    Element fb = evaluate(f, interval.b);
    Element delta = sub(interval.b, interval.a);
    Element gap = sub(fb, fa);

    // g(x) = (b - a) f(x) - (f(b) - f(a)) x
    ExprPtr gExpr = FuncExpr::sub(FuncExpr::mul(FuncExpr::constElem(delta), f.expr()),
                                  FuncExpr::mul(FuncExpr::constElem(gap), FuncExpr::var()));
    FunctionHandle g = FunctionHandle::dsl(gExpr, f.model());

    SolveReport rolle = solveRolle(g, interval, opts);
    rep.trace = rolle.trace;
    rep.bandSplits = rolle.bandSplits;
    rep.maxBisections = rolle.maxBisections;
    if (rolle.certificate != Certificate::Feasible) {
        rep.certificate = rolle.certificate;
        rep.detail = rolle.detail;
        rep.witness = rolle.witness;
        return rep;
    }

    Element x0 = *rolle.witness;
    Element fprime;
    try {
        fprime = estimateDerivative(f, x0);
    } catch (const NoConvergence&) {
        rep.certificate = Certificate::IterationCapReached;
        rep.detail = "derivativeProbeFailed";
        rep.witness = x0;
        return rep;
    }
    Element residual = sub(mul(delta, fprime), gap);
    rep.witness = x0;
    rep.residual = residual;
    rep.certificate = maxAbs(residual) <= opts.tol ? Certificate::Feasible
                                                   : Certificate::IterationCapReached;
    if (rep.certificate != Certificate::Feasible) rep.detail = "residualAboveTol";
    return rep;
}

namespace {

ExprPtr substituteVar(const ExprPtr& f, const ExprPtr& replacement) {
    using K = FuncExpr::Kind;
    switch (f->kind) {
        case K::Var: return replacement;
        case K::Unit:
        case K::Scalar:
        case K::Const: return f;
        case K::Abs: return FuncExpr::abs(substituteVar(f->a, replacement));
        case K::Pow: return FuncExpr::pow(substituteVar(f->a, replacement), f->exponent);
        case K::Map: return FuncExpr::map(f->fn, substituteVar(f->a, replacement));
        case K::Add: return FuncExpr::add(substituteVar(f->a, replacement), substituteVar(f->b, replacement));
        case K::Sub: return FuncExpr::sub(substituteVar(f->a, replacement), substituteVar(f->b, replacement));
        case K::Mul: return FuncExpr::mul(substituteVar(f->a, replacement), substituteVar(f->b, replacement));
        case K::Sup: return FuncExpr::sup(substituteVar(f->a, replacement), substituteVar(f->b, replacement));
        case K::Inf: return FuncExpr::inf(substituteVar(f->a, replacement), substituteVar(f->b, replacement));
    }
    throw LatError("unreachable expr kind");
}

}  // namespace

SolveReport solveMvtSegment(const FunctionHandle& f, const Element& segC,
                            const Element& segD, const SolverOptions& opts) {
    SolveReport rep;
    if (!f.isDsl() || !isSmooth(*f.expr())) {
        rep.certificate = Certificate::HypothesisViolated;
        rep.detail = "notSmooth";
        return rep;
    }
    if (segC.model() != f.model() || segD.model() != f.model()) throw ModelMismatch();

    // Reparametrize along {c + x (d - c)} and run the mean value machinery
    // on [0, e].
    ExprPtr point = FuncExpr::add(FuncExpr::constElem(segC),
                                  FuncExpr::mul(FuncExpr::var(), FuncExpr::constElem(sub(segD, segC))));
    FunctionHandle g = FunctionHandle::dsl(substituteVar(f.expr(), point), f.model());
    OrderInterval unitIv = OrderInterval::closedInterval(Element::zero(f.model()),
                                                         Element::unit(f.model()));
    SolveReport inner = solveMvt(g, unitIv, opts);
    rep = inner;
    if (inner.witness) rep.witness = add(segC, mul(*inner.witness, sub(segD, segC)));
    return rep;
}

// --- complex mean value -----------------------------------------------------

ComplexElement ComplexPoly::evaluateAt(const ComplexElement& z) const {
    ComplexElement acc = coeffs.back();
    for (size_t i = coeffs.size() - 1; i-- > 0;) acc = cadd(cmul(acc, z), coeffs[i]);
    return acc;
}

ComplexPoly ComplexPoly::derivative() const {
    ComplexPoly d;
    if (coeffs.size() <= 1) {
        d.coeffs.push_back(czero(model()));
        return d;
    }
    for (size_t k = 1; k < coeffs.size(); ++k)
        d.coeffs.push_back(cscale(static_cast<double>(k), coeffs[k]));
    return d;
}

SolveReport solveComplexMvt(const ComplexPoly& f, const ComplexElement& a,
                            const ComplexElement& b, const SolverOptions& opts) {
    if (f.coeffs.empty()) throw DomainViolation("complex polynomial needs coefficients");
    const ModelSpec& model = f.model();
    if (a.model() != model || b.model() != model) throw ModelMismatch();

    ComplexElement delta = csub(b, a);

    // Symbolic expansion of t -> f(a + t (b - a)) into real/imaginary DSL
    // expressions of the real parameter.
    ExprPtr zRe = FuncExpr::add(FuncExpr::constElem(a.re),
                                FuncExpr::mul(FuncExpr::var(), FuncExpr::constElem(delta.re)));
    ExprPtr zIm = FuncExpr::add(FuncExpr::constElem(a.im),
                                FuncExpr::mul(FuncExpr::var(), FuncExpr::constElem(delta.im)));
    ExprPtr accRe = FuncExpr::constElem(f.coeffs.back().re);
    ExprPtr accIm = FuncExpr::constElem(f.coeffs.back().im);
    for (size_t i = f.coeffs.size() - 1; i-- > 0;) {
        ExprPtr mulRe = FuncExpr::sub(FuncExpr::mul(accRe, zRe), FuncExpr::mul(accIm, zIm));
        ExprPtr mulIm = FuncExpr::add(FuncExpr::mul(accRe, zIm), FuncExpr::mul(accIm, zRe));
        accRe = FuncExpr::add(mulRe, FuncExpr::constElem(f.coeffs[i].re));
        accIm = FuncExpr::add(mulIm, FuncExpr::constElem(f.coeffs[i].im));
    }

    OrderInterval unitIv = OrderInterval::closedInterval(Element::zero(model),
                                                         Element::unit(model));
    SolveReport reRep = solveMvt(FunctionHandle::dsl(accRe, model), unitIv, opts);
    SolveReport imRep = solveMvt(FunctionHandle::dsl(accIm, model), unitIv, opts);

    SolveReport rep;
    rep.trace = reRep.trace;
    rep.trace.insert(rep.trace.end(), imRep.trace.begin(), imRep.trace.end());
    rep.bandSplits = reRep.bandSplits + imRep.bandSplits;
    if (reRep.certificate != Certificate::Feasible) {
        rep.certificate = reRep.certificate;
        rep.detail = "re:" + reRep.detail;
        return rep;
    }
    if (imRep.certificate != Certificate::Feasible) {
        rep.certificate = imRep.certificate;
        rep.detail = "im:" + imRep.detail;
        return rep;
    }

    Element tU = *reRep.witness;
    Element tV = *imRep.witness;
    ComplexElement u{add(a.re, mul(tU, delta.re)), add(a.im, mul(tU, delta.im))};
    ComplexElement v{add(a.re, mul(tV, delta.re)), add(a.im, mul(tV, delta.im))};

    // Independent residuals through the complex Horner evaluator.
    ComplexPoly df = f.derivative();
    ComplexElement gap = csub(f.evaluateAt(b), f.evaluateAt(a));
    Element residRe = sub(cmul(delta, df.evaluateAt(u)).re, gap.re);
    Element residIm = sub(cmul(delta, df.evaluateAt(v)).im, gap.im);

    rep.witnessU = u;
    rep.witnessV = v;
    rep.residual = residRe;
    rep.residualIm = residIm;
    bool ok = maxAbs(residRe) <= opts.tol && maxAbs(residIm) <= opts.tol;
    rep.certificate = ok ? Certificate::Feasible : Certificate::IterationCapReached;
    if (!ok) rep.detail = "residualAboveTol";
    return rep;
}

}  // namespace latcalc
