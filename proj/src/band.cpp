#include "latcalc/band.hpp"

#include "partition.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace latcalc {

using detail::PartitionBuilder;

namespace {

void requireSameModel(const ModelSpec& a, const ModelSpec& b) {
    if (a != b) throw ModelMismatch();
}

using Runs = std::vector<std::pair<std::uint32_t, std::uint32_t>>;

Runs canonicalRuns(Runs runs) {
    std::sort(runs.begin(), runs.end());
    Runs out;
    for (const auto& r : runs) {
        if (!out.empty() && r.first <= out.back().second) {
            out.back().second = std::max(out.back().second, r.second);
        } else {
            out.push_back(r);
        }
    }
    return out;
}

Runs unionRuns(const Runs& a, const Runs& b) {
    Runs merged = a;
    merged.insert(merged.end(), b.begin(), b.end());
    return canonicalRuns(std::move(merged));
}

Runs intersectRuns(const Runs& a, const Runs& b) {
    Runs out;
    size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        std::uint32_t lo = std::max(a[i].first, b[j].first);
        std::uint32_t hi = std::min(a[i].second, b[j].second);
        if (lo < hi) out.emplace_back(lo, hi);
        if (a[i].second <= b[j].second) ++i; else ++j;
    }
    return canonicalRuns(std::move(out));
}

Runs complementRuns(const Runs& a, std::uint32_t ticks) {
    Runs out;
    std::uint32_t pos = 0;
    for (const auto& r : a) {
        if (pos < r.first) out.emplace_back(pos, r.first);
        pos = r.second;
    }
    if (pos < ticks) out.emplace_back(pos, ticks);
    return out;
}

// Walk the common refinement of x's partition and the band's run boundaries;
// fn(start, end, value, inside) is called once per cell in order.
template <class F>
void walkWithBand(const Element& x, const Band& band, F&& fn) {
    const auto& runs = band.runs();
    std::uint32_t pos = 0;
    size_t pi = 0, ri = 0;
    while (pos < x.model().ticks()) {
        std::uint32_t pieceEnd = x.ends()[pi];
        while (ri < runs.size() && runs[ri].second <= pos) ++ri;
        bool inside = ri < runs.size() && runs[ri].first <= pos;
        std::uint32_t cut = pieceEnd;
        if (ri < runs.size()) {
            if (inside) cut = std::min(cut, runs[ri].second);
            else cut = std::min(cut, runs[ri].first);
        }
        fn(pos, cut, x.values()[pi], inside);
        pos = cut;
        if (pos == pieceEnd) ++pi;
    }
}

}  // namespace

Band Band::empty(const ModelSpec& model) {
    Band b;
    b.model_ = model;
    return b;
}

Band Band::whole(const ModelSpec& model) {
    Band b;
    b.model_ = model;
    if (model.kind == ModelKind::Atomic) {
        b.atoms_.resize(static_cast<size_t>(model.dim));
        for (int i = 0; i < model.dim; ++i) b.atoms_[static_cast<size_t>(i)] = i;
    } else {
        b.runs_.emplace_back(0u, model.ticks());
    }
    return b;
}

Band Band::ofAtoms(const ModelSpec& model, std::vector<std::int32_t> atoms) {
    if (model.kind != ModelKind::Atomic)
        throw DomainViolation("atom list requires an atomic model");
    std::sort(atoms.begin(), atoms.end());
    atoms.erase(std::unique(atoms.begin(), atoms.end()), atoms.end());
    if (!atoms.empty() && (atoms.front() < 0 || atoms.back() >= model.dim))
        throw DomainViolation("atom index out of range");
    Band b;
    b.model_ = model;
    b.atoms_ = std::move(atoms);
    return b;
}

Band Band::ofTicks(const ModelSpec& model,
                   std::vector<std::pair<std::uint32_t, std::uint32_t>> runs) {
    if (model.kind != ModelKind::DyadicStep)
        throw DomainViolation("tick runs require a DyadicStep model");
    for (const auto& r : runs) {
        if (r.first >= r.second || r.second > model.ticks())
            throw DomainViolation("band run out of range");
    }
    Band b;
    b.model_ = model;
    b.runs_ = canonicalRuns(std::move(runs));
    return b;
}

bool Band::isEmpty() const { return atoms_.empty() && runs_.empty(); }

bool Band::isWhole() const {
    if (model_.kind == ModelKind::Atomic)
        return static_cast<int>(atoms_.size()) == model_.dim;
    return runs_.size() == 1 && runs_[0].first == 0 && runs_[0].second == model_.ticks();
}

bool Band::containsAtom(std::int32_t atom) const {
    return std::binary_search(atoms_.begin(), atoms_.end(), atom);
}

bool Band::containsTick(std::uint32_t tick) const {
    auto it = std::upper_bound(runs_.begin(), runs_.end(), tick,
                               [](std::uint32_t t, const auto& r) { return t < r.second; });
    return it != runs_.end() && it->first <= tick;
}

bool Band::subsetOf(const Band& other) const {
    requireSameModel(model_, other.model_);
    if (model_.kind == ModelKind::Atomic) {
        return std::includes(other.atoms_.begin(), other.atoms_.end(),
                             atoms_.begin(), atoms_.end());
    }
    return bandMeet(*this, other) == *this;
}

std::string Band::describe() const {
    std::ostringstream os;
    if (model_.kind == ModelKind::Atomic) {
        os << '{';
        for (size_t i = 0; i < atoms_.size(); ++i) {
            if (i) os << ',';
            os << atoms_[i];
        }
        os << '}';
    } else {
        double sc = 1.0 / static_cast<double>(model_.ticks());
        os << '{';
        for (size_t i = 0; i < runs_.size(); ++i) {
            if (i) os << ',';
            os << '[' << runs_[i].first * sc << ',' << runs_[i].second * sc << ')';
        }
        os << '}';
    }
    return os.str();
}

Element applyProjection(const Band& band, const Element& x) {
    requireSameModel(band.model(), x.model());
    if (x.model().kind == ModelKind::Atomic) {
        std::vector<double> vals(x.values().size(), 0.0);
        for (std::int32_t a : band.atoms()) vals[static_cast<size_t>(a)] = x.values()[static_cast<size_t>(a)];
        return Element::atomic(std::move(vals));
    }
    PartitionBuilder b;
    walkWithBand(x, band, [&](std::uint32_t s, std::uint32_t e, double v, bool inside) {
        b.pushRange(s, e, inside ? v : 0.0);
    });
    return Element::dyadicStep(x.model(), std::move(b.ends), std::move(b.values));
}

Band bandOps(const Band& a, const Band& b, BandOp op) {
    requireSameModel(a.model(), b.model());
    Band out;
    if (a.model().kind == ModelKind::Atomic) {
        std::vector<std::int32_t> atoms;
        switch (op) {
            case BandOp::Join:
                std::set_union(a.atoms().begin(), a.atoms().end(), b.atoms().begin(),
                               b.atoms().end(), std::back_inserter(atoms));
                break;
            case BandOp::Meet:
                std::set_intersection(a.atoms().begin(), a.atoms().end(), b.atoms().begin(),
                                      b.atoms().end(), std::back_inserter(atoms));
                break;
            case BandOp::Complement: {
                std::vector<std::int32_t> all(static_cast<size_t>(a.model().dim));
                for (int i = 0; i < a.model().dim; ++i) all[static_cast<size_t>(i)] = i;
                std::set_difference(all.begin(), all.end(), a.atoms().begin(), a.atoms().end(),
                                    std::back_inserter(atoms));
                break;
            }
        }
        return Band::ofAtoms(a.model(), std::move(atoms));
    }
    Runs runs;
    switch (op) {
        case BandOp::Join: runs = unionRuns(a.runs(), b.runs()); break;
        case BandOp::Meet: runs = intersectRuns(a.runs(), b.runs()); break;
        case BandOp::Complement: runs = complementRuns(a.runs(), a.model().ticks()); break;
    }
    if (runs.empty()) return Band::empty(a.model());
    return Band::ofTicks(a.model(), std::move(runs));
}

Band bandGenerated(const Element& x) {
    if (x.model().kind == ModelKind::Atomic) {
        std::vector<std::int32_t> atoms;
        for (size_t i = 0; i < x.values().size(); ++i)
            if (x.values()[i] != 0.0) atoms.push_back(static_cast<std::int32_t>(i));
        return Band::ofAtoms(x.model(), std::move(atoms));
    }
    Runs runs;
    std::uint32_t prev = 0;
    for (int i = 0; i < x.pieceCount(); ++i) {
        if (x.values()[static_cast<size_t>(i)] != 0.0) {
            if (!runs.empty() && runs.back().second == prev) runs.back().second = x.ends()[static_cast<size_t>(i)];
            else runs.emplace_back(prev, x.ends()[static_cast<size_t>(i)]);
        }
        prev = x.ends()[static_cast<size_t>(i)];
    }
    if (runs.empty()) return Band::empty(x.model());
    return Band::ofTicks(x.model(), std::move(runs));
}

BandTrichotomy bandTrichotomy(const Element& x, const Element& y, double tol) {
    Element d = sub(y, x);
    const ModelSpec& m = x.model();
    if (m.kind == ModelKind::Atomic) {
        std::vector<std::int32_t> lt, gt, eq;
        for (size_t i = 0; i < d.values().size(); ++i) {
            double v = d.values()[i];
            if (v > tol) lt.push_back(static_cast<std::int32_t>(i));
            else if (v < -tol) gt.push_back(static_cast<std::int32_t>(i));
            else eq.push_back(static_cast<std::int32_t>(i));
        }
        return {Band::ofAtoms(m, std::move(lt)), Band::ofAtoms(m, std::move(gt)),
                Band::ofAtoms(m, std::move(eq))};
    }
    Runs lt, gt, eq;
    auto push = [](Runs& runs, std::uint32_t s, std::uint32_t e) {
        if (!runs.empty() && runs.back().second == s) runs.back().second = e;
        else runs.emplace_back(s, e);
    };
    std::uint32_t prev = 0;
    for (int i = 0; i < d.pieceCount(); ++i) {
        double v = d.values()[static_cast<size_t>(i)];
        std::uint32_t end = d.ends()[static_cast<size_t>(i)];
        if (v > tol) push(lt, prev, end);
        else if (v < -tol) push(gt, prev, end);
        else push(eq, prev, end);
        prev = end;
    }
    auto mk = [&](Runs r) {
        return r.empty() ? Band::empty(m) : Band::ofTicks(m, std::move(r));
    };
    return {mk(std::move(lt)), mk(std::move(gt)), mk(std::move(eq))};
}

Band bandLt(const Element& x, const Element& y) { return bandTrichotomy(x, y, kEqTol).lt; }

Band bandLe(const Element& x, const Element& y) {
    return bandComplement(bandLt(y, x));
}

Band bandEq(const Element& x, const Element& y) {
    return bandMeet(bandLe(x, y), bandLe(y, x));
}

Band ladderBand(const Element& r, int m) {
    if (m < 1) throw DomainViolation("ladder index must be positive");
    if (!leq(Element::zero(r.model()), r)) throw DomainViolation("ladder band needs r >= 0");
    return bandLe(Element::constant(r.model(), 1.0 / static_cast<double>(m)), r);
}

Element invertOnBand(const Element& x, const Band& band) {
    requireSameModel(x.model(), band.model());
    if (x.model().kind == ModelKind::Atomic) {
        std::vector<double> vals(x.values().size(), 0.0);
        for (std::int32_t a : band.atoms()) {
            double v = x.values()[static_cast<size_t>(a)];
            if (std::abs(v) < kInvTol)
                throw NotInvertibleOnBand("atom " + std::to_string(a) + " carries |x| below threshold");
            vals[static_cast<size_t>(a)] = 1.0 / v;
        }
        return Element::atomic(std::move(vals));
    }
    PartitionBuilder b;
    walkWithBand(x, band, [&](std::uint32_t s, std::uint32_t e, double v, bool inside) {
        if (inside && std::abs(v) < kInvTol)
            throw NotInvertibleOnBand("piece at tick " + std::to_string(s) + " carries |x| below threshold");
        b.pushRange(s, e, inside ? 1.0 / v : 0.0);
    });
    return Element::dyadicStep(x.model(), std::move(b.ends), std::move(b.values));
}

Element splice(const Band& band, const Element& u, const Element& w) {
    return add(applyProjection(band, u), applyProjection(bandComplement(band), w));
}

double maxAbsOnBand(const Element& x, const Band& band) {
    if (x.model().kind == ModelKind::Atomic) {
        double m = 0.0;
        for (std::int32_t a : band.atoms())
            m = std::max(m, std::abs(x.values()[static_cast<size_t>(a)]));
        return m;
    }
    double m = 0.0;
    walkWithBand(x, band, [&](std::uint32_t, std::uint32_t, double v, bool inside) {
        if (inside) m = std::max(m, std::abs(v));
    });
    return m;
}

}  // namespace latcalc
