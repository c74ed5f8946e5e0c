#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace latcalc {

// Finest dyadic level a DyadicStep model may request.
inline constexpr int kMaxDyadicDepth = 24;

// Atom classification tolerance: |y - x| <= kEqTol lands in the equality band.
inline constexpr double kEqTol = 1e-9;

// Band-local inversion threshold.
inline constexpr double kInvTol = 1e-12;

enum class ModelKind { Atomic, DyadicStep };

/// A concrete Dedekind complete Phi-algebra model: either R^dim with
/// coordinatewise order and multiplication, or step functions on [0,1)
/// with dyadic breakpoints no finer than 2^-maxDepth.
struct ModelSpec {
    ModelKind kind = ModelKind::Atomic;
    int dim = 1;       // Atomic: coordinate count (>= 1)
    int maxDepth = 0;  // DyadicStep: finest allowed dyadic level (<= kMaxDyadicDepth)

    static ModelSpec atomic(int dim);
    static ModelSpec dyadic(int maxDepth);

    // DyadicStep: number of grid cells at the finest level. All piece and
    // band endpoints are integers at this scale, so partition arithmetic
    // is exact.
    std::uint32_t ticks() const { return 1u << maxDepth; }

    bool operator==(const ModelSpec&) const = default;

    std::string describe() const;
};

struct LatError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ModelMismatch : LatError {
    ModelMismatch() : LatError("operands belong to different models") {}
    explicit ModelMismatch(const std::string& what) : LatError(what) {}
};

struct DepthExceeded : LatError {
    explicit DepthExceeded(const std::string& what) : LatError(what) {}
};

struct NotInvertibleOnBand : LatError {
    explicit NotInvertibleOnBand(const std::string& what) : LatError(what) {}
};

struct DomainViolation : LatError {
    explicit DomainViolation(const std::string& what) : LatError(what) {}
};

}  // namespace latcalc
