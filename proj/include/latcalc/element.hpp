#pragma once

#include "latcalc/model.hpp"

#include <cstdint>
#include <functional>
#include <vector>

namespace latcalc {

enum class BinOp { Add, Sub, Mul, Sup, Inf };

/// An element of a model. Atomic: one value per coordinate. DyadicStep: a
/// step function stored as consecutive pieces; ends_[i] is the end tick of
/// piece i at scale 2^maxDepth, so piece i occupies [ends_[i-1], ends_[i]).
///
/// DyadicStep invariant: every piece is a dyadic interval (power-of-two
/// length, aligned), the pieces partition [0,1), and the partition is
/// canonical (no two equal-valued sibling pieces). Canonical form makes
/// equality of elements equality of representations.
class Element {
public:
    Element() = default;

    static Element atomic(std::vector<double> coords);
    static Element constant(const ModelSpec& model, double value);
    static Element unit(const ModelSpec& model) { return constant(model, 1.0); }
    static Element zero(const ModelSpec& model) { return constant(model, 0.0); }

    // Validates dyadicity, coverage and coalesces. Throws DomainViolation /
    // DepthExceeded on malformed input.
    static Element dyadicStep(const ModelSpec& model,
                              std::vector<std::uint32_t> ends,
                              std::vector<double> values);

    const ModelSpec& model() const { return model_; }
    int pieceCount() const { return static_cast<int>(values_.size()); }
    const std::vector<double>& values() const { return values_; }
    const std::vector<std::uint32_t>& ends() const { return ends_; }  // DyadicStep only

    std::uint32_t pieceStart(int i) const { return i == 0 ? 0u : ends_[static_cast<size_t>(i) - 1]; }
    std::uint32_t pieceEnd(int i) const { return ends_[static_cast<size_t>(i)]; }

    // Value at a tick position (DyadicStep) or coordinate (Atomic).
    double valueAtTick(std::uint32_t tick) const;

    bool operator==(const Element&) const = default;

    std::string describe() const;

private:
    friend Element zipWith(const Element&, const Element&, double (*)(double, double));
    friend Element mapValues(const Element&, const std::function<double(double)>&);

    ModelSpec model_;
    std::vector<double> values_;
    std::vector<std::uint32_t> ends_;
};

// --- Phi-algebra operations -------------------------------------------------

Element combine(const Element& x, const Element& y, BinOp op);
Element scale(double t, const Element& x);
Element modulus(const Element& x);
Element posPart(const Element& x);
Element negPart(const Element& x);

inline Element add(const Element& x, const Element& y) { return combine(x, y, BinOp::Add); }
inline Element sub(const Element& x, const Element& y) { return combine(x, y, BinOp::Sub); }
inline Element mul(const Element& x, const Element& y) { return combine(x, y, BinOp::Mul); }
inline Element sup(const Element& x, const Element& y) { return combine(x, y, BinOp::Sup); }
inline Element inf(const Element& x, const Element& y) { return combine(x, y, BinOp::Inf); }

/// True iff x >= 0 and x is nonzero on every atom. In the two implemented
/// models weak order units coincide with strictly positive elements; this is
/// a model fact, not a general vector-lattice claim.
bool isWeakOrderUnit(const Element& x);

/// x << y: y - x is a weak order unit.
bool strictlyLess(const Element& x, const Element& y);

// Pointwise comparisons (exact, no tolerance).
bool leq(const Element& x, const Element& y);
bool lt(const Element& x, const Element& y);  // strict on every atom

// Pointwise helpers.
double minValue(const Element& x);
double maxValue(const Element& x);
double maxAbs(const Element& x);
bool approxEqual(const Element& x, const Element& y, double tol);

/// Generic pointwise combination on the common refinement; output is
/// canonical. All BinOp cases route through this.
Element zipWith(const Element& x, const Element& y, double (*f)(double, double));
Element mapValues(const Element& x, const std::function<double(double)>& f);

}  // namespace latcalc
