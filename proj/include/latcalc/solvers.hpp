#pragma once

#include "latcalc/calculus.hpp"
#include "latcalc/complex.hpp"
#include "latcalc/function.hpp"

#include <optional>
#include <string>
#include <vector>

namespace latcalc {

enum class Certificate { Feasible, Infeasible, HypothesisViolated, IterationCapReached };

const char* certificateName(Certificate c);

struct TraceEvent {
    std::string kind;   // "orient", "split", "converged", "probe", "audit"
    std::string band;
    double lo = 0.0;
    double hi = 0.0;
    int iter = 0;
};

/// Outcome record of a solver run. Feasible implies the residual is below
/// the configured tolerance atom-wise. Negative outcomes (hypothesis
/// violations, infeasible targets) are first-class results, not errors.
struct SolveReport {
    Certificate certificate = Certificate::Feasible;
    std::string detail;                  // "notLbp", "endpointsDiffer", ...
    std::optional<Element> witness;      // c / x0 / EVT minimizer
    std::optional<Element> witness2;     // EVT maximizer d
    std::optional<ComplexElement> witnessU, witnessV;  // complex MVT
    std::optional<Element> residual;
    std::optional<Element> residualIm;   // complex MVT imaginary part
    std::vector<TraceEvent> trace;
    int bandSplits = 0;
    int maxBisections = 0;
};

struct SolverOptions {
    double tol = 1e-8;
    std::uint64_t seed = 42;
    int bisectionCap = 200;
    int splitCap = 64;
    int gridPoints = 65;
    int auditSamples = 10000;
    int lbpTrials = 200;
    bool debugSpliceChecks = false;

    // Default tolerance by model: 1e-8 atomic, 1e-6 dyadic (band splits
    // consume depth budget there).
    static SolverOptions forModel(const ModelSpec& model);
};

/// Thrown by orderBound when its hypothesis fails (it returns a bare bound,
/// not a report).
struct HypothesisViolatedError : LatError {
    std::string reason;
    explicit HypothesisViolatedError(const std::string& r)
        : LatError("hypothesis violated: " + r), reason(r) {}
};

/// Order bound of an LBP function on [a, b]: per-atom maxima of |f| over an
/// adaptively refined segment grid, merged across subinterval tilings by
/// lattice sup. The diagonal segment sweeps every atom through its full
/// range, which is exactly what local band preservation licenses.
Element orderBound(const FunctionHandle& f, const OrderInterval& interval,
                   const SolverOptions& opts);

/// Band-wise intermediate value solver: orientation split by
/// bandLe(f(a), f(b)), then per-cell bisection on the segment parameter with
/// band splits wherever the sign of f(candidate) - y is mixed across a cell.
SolveReport solveIvt(const FunctionHandle& f, const OrderInterval& interval,
                     const Element& target, const SolverOptions& opts);

/// Extreme value solver: multi-start grid plus golden-section refinement per
/// cell, splitting cells whose atoms develop distinct argmax structure.
/// witness = minimizer c, witness2 = maximizer d; ties break to the smallest
/// segment parameter.
SolveReport solveEvt(const FunctionHandle& f, const OrderInterval& interval,
                     const SolverOptions& opts);

/// Rolle point: runs the extreme value solver, then per band picks the
/// interior extremizer (constant bands return the midpoint) and, for smooth
/// DSL functions, polishes with sign bisection on the symbolic derivative.
SolveReport solveRolle(const FunctionHandle& f, const OrderInterval& interval,
                       const SolverOptions& opts);

/// Mean value point via the auxiliary g(x) = (b-a) f(x) - (f(b)-f(a)) x and
/// Rolle. residual = (b-a) f'(x0) - (f(b) - f(a)).
SolveReport solveMvt(const FunctionHandle& f, const OrderInterval& interval,
                     const SolverOptions& opts);

/// Segment form: reparametrizes f along {c + x (d-c)} over [0, e].
SolveReport solveMvtSegment(const FunctionHandle& f, const Element& segC,
                            const Element& segD, const SolverOptions& opts);

/// Complex polynomial c0 + c1 z + ... + ck z^k with ComplexElement
/// coefficients.
struct ComplexPoly {
    std::vector<ComplexElement> coeffs;

    const ModelSpec& model() const { return coeffs.front().model(); }
    ComplexElement evaluateAt(const ComplexElement& z) const;
    ComplexPoly derivative() const;
};

/// Complex mean value points: real segment machinery applied separately to
/// the real and imaginary parts of t -> f(a + t (b-a)). witnessU satisfies
/// Re((b-a) f'(u)) = Re(f(b)-f(a)) within tol, witnessV the imaginary
/// counterpart.
SolveReport solveComplexMvt(const ComplexPoly& f, const ComplexElement& a,
                            const ComplexElement& b, const SolverOptions& opts);

/// Debug oracle for the solvers' load-bearing fact: for LBP handles,
/// candidates equal on a band have images whose projections onto that band
/// agree exactly. Returns the number of failures over the given trials.
int spliceIndependenceFailures(const FunctionHandle& f, const OrderInterval& interval,
                               int trials, std::uint64_t seed);

}  // namespace latcalc
