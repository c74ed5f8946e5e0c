#pragma once

#include "latcalc/band.hpp"
#include "latcalc/expr.hpp"
#include "latcalc/interval.hpp"

#include <optional>
#include <string>
#include <vector>

namespace latcalc {

/// A function of one lattice variable: either a DSL expression (atom-local,
/// hence locally band preserving by construction) or a registered builtin.
/// The deliberately non-LBP gallery functions exist only as builtins, so
/// "DSL implies LBP" stays an invariant the test suite can lean on.
class FunctionHandle {
public:
    static FunctionHandle dsl(ExprPtr expr, ModelSpec model);
    static FunctionHandle dslText(const std::string& text, const ModelSpec& model);
    static FunctionHandle builtin(const std::string& name, const ModelSpec& model);

    const ModelSpec& model() const { return model_; }
    bool isDsl() const { return expr_ != nullptr; }
    const ExprPtr& expr() const { return expr_; }
    const std::string& builtinName() const { return builtinName_; }

    /// LBP guaranteed by construction (all DSL; atom-local builtins).
    bool lbpByConstruction() const { return lbp_; }

    /// Safe to probe with finite differences (excludes the step builtin).
    bool derivativeProbeable() const { return probeable_; }

    std::string displayName() const;

private:
    FunctionHandle() = default;
    ModelSpec model_;
    ExprPtr expr_;
    std::string builtinName_;
    bool lbp_ = true;
    bool probeable_ = true;
};

Element evaluate(const FunctionHandle& f, const Element& x);

struct BuiltinInfo {
    std::string name;
    std::string description;
    bool lbp;
    int minDim;
};

std::vector<BuiltinInfo> listBuiltins();

// --- locally-band-preserving check ---------------------------------------

struct LbpViolation {
    Element x;
    Element y;
    Band band;
    double gap;  // max |P f(x) - P f(y)| over the band
};

struct LbpReport {
    bool pass = true;
    int trials = 0;
    int violations = 0;
    std::optional<LbpViolation> witness;
};

/// Randomized check of P(x) = P(y) => P(f(x)) = P(f(y)). Pairs are spliced
/// by construction (y = P(x) + P^d(w)), so the hypothesis holds exactly;
/// any projected image gap beyond kEqTol is a counterexample.
LbpReport checkLbp(const FunctionHandle& f, const OrderInterval& region, int trials,
                   std::uint64_t seed);

/// Random band for splice tests; nonempty and proper whenever the model
/// admits one.
Band randomBand(const ModelSpec& model, Rng& rng);

// --- continuity probe -----------------------------------------------------

/// Heuristic oscillation scan, not a proof: oscillation of f is sampled on
/// shrinking balls (delta_j = 2^-j (b-a)) around adaptively chosen centers;
/// atoms whose oscillation fails to decay are flagged suspect.
struct ContinuityReport {
    bool continuous = true;
    Band suspect;
    std::vector<double> oscByLevel;  // max over atoms, per level
    Element coarseOsc;
    Element finalOsc;
};

ContinuityReport continuityProbe(const FunctionHandle& f, const OrderInterval& region,
                                 int grid, std::uint64_t seed = 2026);

}  // namespace latcalc
