#include "latcalc/calculus.hpp"

#include "latcalc/rng.hpp"

#include <cmath>
#include <vector>

namespace latcalc {

const char* classificationName(Classification c) {
    switch (c) {
        case Classification::SuperDifferentiable: return "superDifferentiable";
        case Classification::OrderOnly: return "orderOnly";
        case Classification::NotDifferentiable: return "notDifferentiable";
    }
    return "?";
}

namespace {

Element centralDifference(const FunctionHandle& f, const Element& c, double h) {
    Element step = Element::constant(c.model(), h);
    Element num = sub(evaluate(f, add(c, step)), evaluate(f, sub(c, step)));
    return scale(1.0 / (2.0 * h), num);
}

std::string worstAtomLabel(const Element& diff) {
    size_t worst = 0;
    double m = -1.0;
    for (size_t i = 0; i < diff.values().size(); ++i) {
        double v = std::abs(diff.values()[i]);
        if (v > m) {
            m = v;
            worst = i;
        }
    }
    if (diff.model().kind == ModelKind::Atomic) return "atom " + std::to_string(worst);
    return "piece " + std::to_string(worst);
}

}  // namespace

Element estimateDerivative(const FunctionHandle& f, const Element& c) {
    const double h0 = 1e-3;
    const int maxHalvings = 8;
    // rows[i][k]: step h0 * 2^-i, k-th Richardson column.
    std::vector<std::vector<Element>> rows;
    rows.push_back({centralDifference(f, c, h0)});
    Element lastDiff = Element::zero(c.model());
    for (int i = 1; i <= maxHalvings; ++i) {
        double h = std::ldexp(h0, -i);
        std::vector<Element> row{centralDifference(f, c, h)};
        for (int k = 1; k <= i; ++k) {
            double w = std::ldexp(1.0, 2 * k);  // 4^k
            Element extrap = scale(1.0 / (w - 1.0),
                                   sub(scale(w, row[static_cast<size_t>(k - 1)]),
                                       rows.back()[static_cast<size_t>(k - 1)]));
            row.push_back(std::move(extrap));
        }
        lastDiff = sub(row.back(), rows.back().back());
        if (maxAbs(lastDiff) <= kDerivStabilizeTol) return row.back();
        rows.push_back(std::move(row));
    }
    throw NoConvergence(worstAtomLabel(lastDiff));
}

namespace {

// Scaled remainder: atom-wise |f(z) - f(c) - (z - c) d| / max(|z - c|, kEqTol).
double scaledResidual(const FunctionHandle& f, const Element& c, const Element& d,
                      const Element& fc, const Element& z) {
    Element remainder = modulus(sub(sub(evaluate(f, z), fc), mul(sub(z, c), d)));
    Element denom = sup(modulus(sub(z, c)), Element::constant(c.model(), kEqTol));
    return maxValue(zipWith(remainder, denom, +[](double num, double den) { return num / den; }));
}

// Displacement with every atom moved: sign random, magnitude in [0.2, 1] of
// the scale element.
Element denseOffset(const Element& deltaScale, Rng& rng) {
    return mapValues(deltaScale, [&rng](double v) {
        double mag = (0.2 + 0.8 * rng.uniform01()) * v;
        return rng.coin() ? mag : -mag;
    });
}

// Pin a random nonempty proper subset of atoms to zero offset.
Element thinOffset(const Element& deltaScale, const ModelSpec& model, Rng& rng) {
    Band pinned = randomBand(model, rng);
    Element offset = denseOffset(deltaScale, rng);
    return applyProjection(bandComplement(pinned), offset);
}

}  // namespace

DiffReport verifyDifferentiability(const FunctionHandle& f, const Element& c,
                                   const Element& d, DiffMode mode, const Element& r,
                                   int samples, std::uint64_t seed) {
    if (!isWeakOrderUnit(r)) throw DomainViolation("probe radius must be a weak order unit");
    if (c.model() != f.model() || d.model() != f.model() || r.model() != f.model())
        throw ModelMismatch();
    Rng rng(seed);
    Element fc = evaluate(f, c);

    DiffReport report;
    report.derivative = d;
    report.mode = mode;

    const int jMin = 4, jMax = 16;
    double denseAtFinest = 0.0, thinAtFinest = 0.0;
    std::optional<Element> denseWitness, thinWitness;
    for (int j = jMin; j <= jMax; ++j) {
        Element delta = scale(std::ldexp(1.0, -j), r);
        double dense = 0.0, thin = 0.0;
        for (int s = 0; s < samples; ++s) {
            Element z = add(c, denseOffset(delta, rng));
            double rho = scaledResidual(f, c, d, fc, z);
            if (rho > dense) {
                dense = rho;
                if (j == jMax) denseWitness = z;
            }
            if (mode == DiffMode::Super) {
                Element zt = add(c, thinOffset(delta, f.model(), rng));
                double rhoT = scaledResidual(f, c, d, fc, zt);
                if (rhoT > thin) {
                    thin = rhoT;
                    if (j == jMax) thinWitness = zt;
                }
            }
        }
        if (j == jMax) {
            denseAtFinest = dense;
            thinAtFinest = thin;
        }
    }
    report.maxScaledResidual = denseAtFinest;
    report.thinSetResidual = thinAtFinest;
    report.pass = denseAtFinest <= kResidualPassTol &&
                  (mode == DiffMode::Order || thinAtFinest <= kResidualPassTol);
    if (!report.pass) {
        if (denseAtFinest > kResidualPassTol && denseWitness) report.witness = denseWitness;
        else if (thinWitness) report.witness = thinWitness;
    }
    return report;
}

Classification classify(const FunctionHandle& f, const Element& c, const Element& r,
                        std::uint64_t seed) {
    Element d;
    try {
        d = estimateDerivative(f, c);
    } catch (const NoConvergence&) {
        return Classification::NotDifferentiable;
    }
    DiffReport superRep = verifyDifferentiability(f, c, d, DiffMode::Super, r, 8, seed);
    if (superRep.pass) return Classification::SuperDifferentiable;
    DiffReport orderRep = verifyDifferentiability(f, c, d, DiffMode::Order, r, 8, seed);
    if (orderRep.pass) return Classification::OrderOnly;
    return Classification::NotDifferentiable;
}

}  // namespace latcalc
