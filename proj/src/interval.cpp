#include "latcalc/interval.hpp"

#include "latcalc/rng.hpp"

namespace latcalc {

OrderInterval OrderInterval::closedInterval(Element a, Element b) {
    if (!leq(a, b)) throw DomainViolation("interval needs a <= b");
    return {std::move(a), std::move(b), true};
}

OrderInterval OrderInterval::openInterval(Element a, Element b) {
    if (!leq(a, b)) throw DomainViolation("interval needs a <= b");
    return {std::move(a), std::move(b), false};
}

bool OrderInterval::contains(const Element& x) const {
    if (closed) return leq(a, x) && leq(x, b);
    return strictlyLess(a, x) && strictlyLess(x, b);
}

Element OrderInterval::at(double t) const {
    return add(a, scale(t, sub(b, a)));
}

Element OrderInterval::sample(Rng& rng) const {
    // Per-atom parameter: zipWith would need shared state, so walk the two
    // canonical partitions through sub/add instead.
    Element d = sub(b, a);
    Element u = mapValues(d, [&rng](double v) { return rng.uniform01() * v; });
    return add(a, u);
}

Neighborhood Neighborhood::make(Element center, Element radius, bool closed) {
    if (center.model() != radius.model()) throw ModelMismatch();
    if (!isWeakOrderUnit(radius)) throw DomainViolation("neighbourhood radius must be a weak order unit");
    return {std::move(center), std::move(radius), closed};
}

OrderInterval Neighborhood::asInterval() const {
    return {sub(center, radius), add(center, radius), closed};
}

}  // namespace latcalc
