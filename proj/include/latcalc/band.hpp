#pragma once

#include "latcalc/element.hpp"

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace latcalc {

enum class BandOp { Join, Meet, Complement };

/// A projection band, stored extensionally by its support region. Atomic:
/// a sorted set of coordinate indices. DyadicStep: sorted disjoint tick
/// ranges with adjacent ranges merged. Regions are canonical, so equality
/// of bands is equality of regions and complement is an involution.
class Band {
public:
    Band() = default;

    static Band empty(const ModelSpec& model);
    static Band whole(const ModelSpec& model);
    static Band ofAtoms(const ModelSpec& model, std::vector<std::int32_t> atoms);
    static Band ofTicks(const ModelSpec& model,
                        std::vector<std::pair<std::uint32_t, std::uint32_t>> runs);

    const ModelSpec& model() const { return model_; }
    const std::vector<std::int32_t>& atoms() const { return atoms_; }
    const std::vector<std::pair<std::uint32_t, std::uint32_t>>& runs() const { return runs_; }

    bool isEmpty() const;
    bool isWhole() const;
    bool containsAtom(std::int32_t atom) const;
    bool containsTick(std::uint32_t tick) const;

    /// Region inclusion (this subseteq other).
    bool subsetOf(const Band& other) const;

    bool operator==(const Band&) const = default;

    std::string describe() const;

private:
    ModelSpec model_;
    std::vector<std::int32_t> atoms_;
    std::vector<std::pair<std::uint32_t, std::uint32_t>> runs_;
};

// --- band algebra -------------------------------------------------------

Element applyProjection(const Band& band, const Element& x);
Band bandOps(const Band& a, const Band& b, BandOp op);

inline Band bandJoin(const Band& a, const Band& b) { return bandOps(a, b, BandOp::Join); }
inline Band bandMeet(const Band& a, const Band& b) { return bandOps(a, b, BandOp::Meet); }
inline Band bandComplement(const Band& a) { return bandOps(a, a, BandOp::Complement); }

/// Smallest band containing x: the support of |x| (exact nonzero test).
Band bandGenerated(const Element& x);

/// The three regions of y - x against a tolerance: lt is y - x > tol,
/// gt is x - y > tol, eq the rest. The regions partition the model.
struct BandTrichotomy {
    Band lt, gt, eq;
};

BandTrichotomy bandTrichotomy(const Element& x, const Element& y, double tol);

/// Inequality-induced bands. An atom counts as x < y only when
/// y - x > kEqTol there; ties within the tolerance land in the equality
/// band. bandLe is the complement of bandLt(y, x), bandEq the meet of the
/// two bandLe's, and the three strict/equal regions partition the model.
Band bandLt(const Element& x, const Element& y);
Band bandLe(const Element& x, const Element& y);
Band bandEq(const Element& x, const Element& y);

/// The band where (1/m)e <= r. Monotone in m; for a weak order unit r it
/// reaches the whole model at m = ceil(1 / min r).
Band ladderBand(const Element& r, int m);

/// Band-local inverse: returns s supported on band with s*x equal to the
/// projection of the unit onto band, zero on the complement. Throws
/// NotInvertibleOnBand when some atom of the band carries |x| < kInvTol.
Element invertOnBand(const Element& x, const Band& band);

/// Splice: P(u) + P^d(w).
Element splice(const Band& band, const Element& u, const Element& w);

/// Max of |x| over the band's region (0 for the empty band).
double maxAbsOnBand(const Element& x, const Band& band);

}  // namespace latcalc
