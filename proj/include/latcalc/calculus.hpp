#pragma once

#include "latcalc/function.hpp"

#include <optional>

namespace latcalc {

struct NoConvergence : LatError {
    std::string where;
    explicit NoConvergence(const std::string& atom)
        : LatError("derivative estimate did not stabilize at " + atom), where(atom) {}
};

enum class DiffMode { Order, Super };

enum class Classification { SuperDifferentiable, OrderOnly, NotDifferentiable };

const char* classificationName(Classification c);

/// Outcome of a differentiability probe at a point. The residual is the
/// remainder |f(z) - f(c) - (z - c) d| scaled atom-wise by max(|z - c|,
/// kEqTol); a pass means it decayed below 1e-4 at the finest dyadic scale.
struct DiffReport {
    Element derivative;
    DiffMode mode = DiffMode::Order;
    double maxScaledResidual = 0.0;
    double thinSetResidual = 0.0;  // super mode only; thin samples pin atoms to c
    bool pass = false;
    std::optional<Element> witness;
};

inline constexpr double kResidualPassTol = 1e-4;
inline constexpr double kDerivStabilizeTol = 1e-9;

/// Atom-wise central differences with Richardson extrapolation, halving
/// from h0 = 1e-3 until successive estimates agree to 1e-9 atom-wise
/// (at most 8 halvings). Throws NoConvergence when they never do.
Element estimateDerivative(const FunctionHandle& f, const Element& c);

/// Probes the remainder bound defining (super) order differentiability at c
/// with candidate derivative d. Order mode draws z displaced on every atom
/// (|z - c| a weak order unit); super mode additionally draws thin z with a
/// random proper subset of atoms pinned exactly to c.
DiffReport verifyDifferentiability(const FunctionHandle& f, const Element& c,
                                   const Element& d, DiffMode mode, const Element& r,
                                   int samples, std::uint64_t seed);

/// Three-way verdict from estimateDerivative plus both probe modes.
Classification classify(const FunctionHandle& f, const Element& c, const Element& r,
                        std::uint64_t seed);

}  // namespace latcalc
