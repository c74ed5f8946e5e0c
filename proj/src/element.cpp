#include "latcalc/element.hpp"

#include "partition.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace latcalc {

using detail::PartitionBuilder;

namespace {

void requireSameModel(const Element& x, const Element& y) {
    if (x.model() != y.model()) throw ModelMismatch();
}

}  // namespace

Element Element::atomic(std::vector<double> coords) {
    if (coords.empty()) throw DomainViolation("atomic element needs at least one coordinate");
    Element e;
    e.model_ = ModelSpec::atomic(static_cast<int>(coords.size()));
    for (auto& v : coords) v = detail::canonValue(v);
    e.values_ = std::move(coords);
    return e;
}

Element Element::constant(const ModelSpec& model, double value) {
    Element e;
    e.model_ = model;
    if (model.kind == ModelKind::Atomic) {
        e.values_.assign(static_cast<size_t>(model.dim), detail::canonValue(value));
    } else {
        e.values_.assign(1, detail::canonValue(value));
        e.ends_.assign(1, model.ticks());
    }
    return e;
}

Element Element::dyadicStep(const ModelSpec& model,
                            std::vector<std::uint32_t> ends,
                            std::vector<double> values) {
    if (model.kind != ModelKind::DyadicStep)
        throw DomainViolation("dyadicStep literal requires a DyadicStep model");
    if (ends.empty() || ends.size() != values.size())
        throw DomainViolation("piece list malformed");
    if (ends.back() != model.ticks())
        throw DomainViolation("pieces must cover [0,1)");
    PartitionBuilder b;
    std::uint32_t prev = 0;
    for (size_t i = 0; i < ends.size(); ++i) {
        if (ends[i] <= prev) throw DomainViolation("pieces must be sorted and disjoint");
        std::uint32_t len = ends[i] - prev;
        if (!detail::isPow2(len) || prev % len != 0)
            throw DepthExceeded("piece is not a dyadic interval at depth <= maxDepth");
        b.pushDyadic(ends[i], values[i]);
        prev = ends[i];
    }
    Element e;
    e.model_ = model;
    e.ends_ = std::move(b.ends);
    e.values_ = std::move(b.values);
    return e;
}

double Element::valueAtTick(std::uint32_t tick) const {
    if (model_.kind == ModelKind::Atomic) return values_.at(tick);
    auto it = std::upper_bound(ends_.begin(), ends_.end(), tick);
    return values_.at(static_cast<size_t>(it - ends_.begin()));
}

std::string Element::describe() const {
    std::ostringstream os;
    if (model_.kind == ModelKind::Atomic) {
        os << '[';
        for (size_t i = 0; i < values_.size(); ++i) {
            if (i) os << ", ";
            os << values_[i];
        }
        os << ']';
    } else {
        os << "{";
        std::uint32_t prev = 0;
        double scale = 1.0 / static_cast<double>(model_.ticks());
        for (size_t i = 0; i < values_.size(); ++i) {
            if (i) os << ", ";
            os << '[' << prev * scale << ',' << ends_[i] * scale << ")=" << values_[i];
            prev = ends_[i];
        }
        os << "}";
    }
    return os.str();
}

Element zipWith(const Element& x, const Element& y, double (*f)(double, double)) {
    requireSameModel(x, y);
    Element out;
    out.model_ = x.model();
    if (x.model().kind == ModelKind::Atomic) {
        out.values_.resize(x.values_.size());
        for (size_t i = 0; i < x.values_.size(); ++i)
            out.values_[i] = detail::canonValue(f(x.values_[i], y.values_[i]));
        return out;
    }
    // Common refinement walk. Each output cell is the intersection of one
    // piece from each operand; dyadic intervals are nested or disjoint, so
    // every cell is itself dyadic.
    PartitionBuilder b;
    size_t i = 0, j = 0;
    while (i < x.ends_.size() && j < y.ends_.size()) {
        std::uint32_t end = std::min(x.ends_[i], y.ends_[j]);
        b.pushDyadic(end, f(x.values_[i], y.values_[j]));
        if (x.ends_[i] == end) ++i;
        if (y.ends_[j] == end) ++j;
    }
    out.ends_ = std::move(b.ends);
    out.values_ = std::move(b.values);
    return out;
}

Element mapValues(const Element& x, const std::function<double(double)>& f) {
    Element out;
    out.model_ = x.model();
    if (x.model().kind == ModelKind::Atomic) {
        out.values_.resize(x.values_.size());
        for (size_t i = 0; i < x.values_.size(); ++i)
            out.values_[i] = detail::canonValue(f(x.values_[i]));
        return out;
    }
    PartitionBuilder b;
    for (size_t i = 0; i < x.values_.size(); ++i) b.pushDyadic(x.ends_[i], f(x.values_[i]));
    out.ends_ = std::move(b.ends);
    out.values_ = std::move(b.values);
    return out;
}

Element combine(const Element& x, const Element& y, BinOp op) {
    switch (op) {
        case BinOp::Add: return zipWith(x, y, +[](double a, double b) { return a + b; });
        case BinOp::Sub: return zipWith(x, y, +[](double a, double b) { return a - b; });
        case BinOp::Mul: return zipWith(x, y, +[](double a, double b) { return a * b; });
        case BinOp::Sup: return zipWith(x, y, +[](double a, double b) { return std::max(a, b); });
        case BinOp::Inf: return zipWith(x, y, +[](double a, double b) { return std::min(a, b); });
    }
    throw LatError("unreachable combine op");
}

Element scale(double t, const Element& x) {
    return mapValues(x, [t](double v) { return t * v; });
}

Element modulus(const Element& x) {
    return mapValues(x, [](double v) { return std::abs(v); });
}

Element posPart(const Element& x) {
    return mapValues(x, [](double v) { return std::max(v, 0.0); });
}

Element negPart(const Element& x) {
    return mapValues(x, [](double v) { return std::max(-v, 0.0); });
}

bool isWeakOrderUnit(const Element& x) {
    for (double v : x.values())
        if (!(v > 0.0)) return false;
    return true;
}

bool strictlyLess(const Element& x, const Element& y) {
    return isWeakOrderUnit(sub(y, x));
}

bool leq(const Element& x, const Element& y) {
    Element d = sub(y, x);
    for (double v : d.values())
        if (v < 0.0) return false;
    return true;
}

bool lt(const Element& x, const Element& y) {
    Element d = sub(y, x);
    for (double v : d.values())
        if (!(v > 0.0)) return false;
    return true;
}

double minValue(const Element& x) {
    double m = x.values().front();
    for (double v : x.values()) m = std::min(m, v);
    return m;
}

double maxValue(const Element& x) {
    double m = x.values().front();
    for (double v : x.values()) m = std::max(m, v);
    return m;
}

double maxAbs(const Element& x) {
    double m = 0.0;
    for (double v : x.values()) m = std::max(m, std::abs(v));
    return m;
}

bool approxEqual(const Element& x, const Element& y, double tol) {
    return maxAbs(sub(x, y)) <= tol;
}

ModelSpec ModelSpec::atomic(int dim) {
    if (dim < 1) throw DomainViolation("atomic model needs dim >= 1");
    ModelSpec m;
    m.kind = ModelKind::Atomic;
    m.dim = dim;
    m.maxDepth = 0;
    return m;
}

ModelSpec ModelSpec::dyadic(int maxDepth) {
    if (maxDepth < 0 || maxDepth > kMaxDyadicDepth)
        throw DepthExceeded("maxDepth out of range");
    ModelSpec m;
    m.kind = ModelKind::DyadicStep;
    m.dim = 0;
    m.maxDepth = maxDepth;
    return m;
}

std::string ModelSpec::describe() const {
    if (kind == ModelKind::Atomic) return "atomic:" + std::to_string(dim);
    return "dyadic:" + std::to_string(maxDepth);
}

}  // namespace latcalc
