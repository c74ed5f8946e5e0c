#pragma once

#include "latcalc/element.hpp"

namespace latcalc {

class Rng;

/// Order interval [a, b] (closed) or (a, b) (open; nonempty in solver use
/// only when a << b).
struct OrderInterval {
    Element a;
    Element b;
    bool closed = true;

    static OrderInterval closedInterval(Element a, Element b);
    static OrderInterval openInterval(Element a, Element b);

    const ModelSpec& model() const { return a.model(); }
    bool contains(const Element& x) const;

    /// Point a + t (b - a) on the diagonal segment.
    Element at(double t) const;

    /// Uniform sample from the box [a, b] (independent per atom).
    Element sample(Rng& rng) const;
};

/// Order neighbourhood N(c, r) / closed variant; r must be a weak order unit.
struct Neighborhood {
    Element center;
    Element radius;
    bool closed = true;

    static Neighborhood make(Element center, Element radius, bool closed = true);

    OrderInterval asInterval() const;
};

}  // namespace latcalc
