#pragma once

#include "latcalc/element.hpp"

#include <memory>
#include <optional>
#include <string>
#include <string_view>

namespace latcalc {

/// Atom-wise scalar maps available in expressions. sqrtshift(t) = sqrt(t^2+1)
/// and invsqrtshift(t) = 1/sqrt(t^2+1); together with sin/cos/exp/tanh the
/// registry is closed under differentiation.
enum class MapFn { Sin, Cos, Exp, Tanh, Sqrtshift, InvSqrtshift };

const char* mapFnName(MapFn fn);
std::optional<MapFn> mapFnByName(std::string_view name);
double applyMapFn(MapFn fn, double t);

struct FuncExpr;
using ExprPtr = std::shared_ptr<const FuncExpr>;

/// Expression tree for a lattice-valued function of one lattice variable.
/// Evaluation is atom-local by construction: each output atom depends only
/// on the same input atom, so every expressible function is locally band
/// preserving.
struct FuncExpr {
    enum class Kind { Var, Unit, Scalar, Const, Add, Sub, Mul, Sup, Inf, Abs, Pow, Map };

    Kind kind = Kind::Var;
    double scalar = 0.0;           // Scalar
    std::optional<Element> elem;   // Const
    int exponent = 0;              // Pow (>= 1)
    MapFn fn = MapFn::Sin;         // Map
    ExprPtr a, b;                  // children

    static ExprPtr var();
    static ExprPtr unit();
    static ExprPtr scalarLit(double t);
    static ExprPtr constElem(Element e);
    static ExprPtr add(ExprPtr l, ExprPtr r);
    static ExprPtr sub(ExprPtr l, ExprPtr r);
    static ExprPtr mul(ExprPtr l, ExprPtr r);
    static ExprPtr sup(ExprPtr l, ExprPtr r);
    static ExprPtr inf(ExprPtr l, ExprPtr r);
    static ExprPtr abs(ExprPtr c);
    static ExprPtr pow(ExprPtr base, int k);
    static ExprPtr map(MapFn fn, ExprPtr c);
};

bool exprEqual(const FuncExpr& x, const FuncExpr& y);

struct SyntaxError : LatError {
    size_t offset;
    SyntaxError(const std::string& what, size_t off)
        : LatError(what + " at offset " + std::to_string(off)), offset(off) {}
};

struct UnknownIdentifier : LatError {
    explicit UnknownIdentifier(const std::string& name)
        : LatError("unknown identifier '" + name + "'") {}
};

/// Thrown by differentiate on Abs/Sup/Inf nodes; path is the child-index
/// chain from the root, e.g. "/0/1".
struct NonSmoothNode : LatError {
    std::string path;
    explicit NonSmoothNode(const std::string& p)
        : LatError("non-smooth node at " + p), path(p) {}
};

/// Recursive-descent parser for
///   expr   := term (('+'|'-') term)*
///   term   := factor ('*' factor)*
///   factor := base ('^' INT)?
///   base   := 'x' | 'e' | NUMBER | '[' NUMBER (',' NUMBER)* ']'
///           | 'sup(' expr ',' expr ')' | 'inf(' expr ',' expr ')'
///           | 'abs(' expr ')' | IDENT '(' expr ')' | '(' expr ')'
/// The model is needed to type element literals.
ExprPtr parse(std::string_view text, const ModelSpec& model);

/// Prints with minimal parentheses; parse(prettyPrint(f)) rebuilds an
/// equal tree.
std::string prettyPrint(const FuncExpr& f);

Element evalExpr(const FuncExpr& f, const Element& x);

/// Symbolic derivative. Var' = e, constants' = 0, sum/product rules,
/// integer powers, atom-wise chain rule through the map registry.
ExprPtr differentiate(const ExprPtr& f);

bool isSmooth(const FuncExpr& f);

std::string formatDouble(double v);

}  // namespace latcalc
