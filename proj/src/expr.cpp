#include "latcalc/expr.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <sstream>
#include <vector>

namespace latcalc {

namespace {

struct MapEntry {
    MapFn fn;
    const char* name;
    double (*eval)(double);
};

constexpr std::array<MapEntry, 6> kMapTable{{
    {MapFn::Sin, "sin", [](double t) { return std::sin(t); }},
    {MapFn::Cos, "cos", [](double t) { return std::cos(t); }},
    {MapFn::Exp, "exp", [](double t) { return std::exp(t); }},
    {MapFn::Tanh, "tanh", [](double t) { return std::tanh(t); }},
    {MapFn::Sqrtshift, "sqrtshift", [](double t) { return std::sqrt(t * t + 1.0); }},
    {MapFn::InvSqrtshift, "invsqrtshift", [](double t) { return 1.0 / std::sqrt(t * t + 1.0); }},
}};

ExprPtr makeNode(FuncExpr node) { return std::make_shared<const FuncExpr>(std::move(node)); }

}  // namespace

const char* mapFnName(MapFn fn) {
    for (const auto& e : kMapTable)
        if (e.fn == fn) return e.name;
    return "?";
}

std::optional<MapFn> mapFnByName(std::string_view name) {
    for (const auto& e : kMapTable)
        if (name == e.name) return e.fn;
    return std::nullopt;
}

double applyMapFn(MapFn fn, double t) {
    for (const auto& e : kMapTable)
        if (e.fn == fn) return e.eval(t);
    throw LatError("unreachable map fn");
}

ExprPtr FuncExpr::var() {
    FuncExpr n;
    n.kind = Kind::Var;
    return makeNode(std::move(n));
}

ExprPtr FuncExpr::unit() {
    FuncExpr n;
    n.kind = Kind::Unit;
    return makeNode(std::move(n));
}

ExprPtr FuncExpr::scalarLit(double t) {
    FuncExpr n;
    n.kind = Kind::Scalar;
    n.scalar = t;
    return makeNode(std::move(n));
}

ExprPtr FuncExpr::constElem(Element e) {
    FuncExpr n;
    n.kind = Kind::Const;
    n.elem = std::move(e);
    return makeNode(std::move(n));
}

namespace {
ExprPtr binary(FuncExpr::Kind k, ExprPtr l, ExprPtr r) {
    FuncExpr n;
    n.kind = k;
    n.a = std::move(l);
    n.b = std::move(r);
    return makeNode(std::move(n));
}
}  // namespace

ExprPtr FuncExpr::add(ExprPtr l, ExprPtr r) { return binary(Kind::Add, std::move(l), std::move(r)); }
ExprPtr FuncExpr::sub(ExprPtr l, ExprPtr r) { return binary(Kind::Sub, std::move(l), std::move(r)); }
ExprPtr FuncExpr::mul(ExprPtr l, ExprPtr r) { return binary(Kind::Mul, std::move(l), std::move(r)); }
ExprPtr FuncExpr::sup(ExprPtr l, ExprPtr r) { return binary(Kind::Sup, std::move(l), std::move(r)); }
ExprPtr FuncExpr::inf(ExprPtr l, ExprPtr r) { return binary(Kind::Inf, std::move(l), std::move(r)); }

ExprPtr FuncExpr::abs(ExprPtr c) {
    FuncExpr n;
    n.kind = Kind::Abs;
    n.a = std::move(c);
    return makeNode(std::move(n));
}

ExprPtr FuncExpr::pow(ExprPtr base, int k) {
    if (k < 1) throw DomainViolation("power exponent must be >= 1");
    FuncExpr n;
    n.kind = Kind::Pow;
    n.a = std::move(base);
    n.exponent = k;
    return makeNode(std::move(n));
}

ExprPtr FuncExpr::map(MapFn fn, ExprPtr c) {
    FuncExpr n;
    n.kind = Kind::Map;
    n.fn = fn;
    n.a = std::move(c);
    return makeNode(std::move(n));
}

bool exprEqual(const FuncExpr& x, const FuncExpr& y) {
    if (x.kind != y.kind) return false;
    switch (x.kind) {
        case FuncExpr::Kind::Var:
        case FuncExpr::Kind::Unit: return true;
        case FuncExpr::Kind::Scalar: return x.scalar == y.scalar;
        case FuncExpr::Kind::Const: return *x.elem == *y.elem;
        case FuncExpr::Kind::Pow:
            return x.exponent == y.exponent && exprEqual(*x.a, *y.a);
        case FuncExpr::Kind::Map: return x.fn == y.fn && exprEqual(*x.a, *y.a);
        case FuncExpr::Kind::Abs: return exprEqual(*x.a, *y.a);
        default: return exprEqual(*x.a, *y.a) && exprEqual(*x.b, *y.b);
    }
}

// --- evaluation ---------------------------------------------------------

Element evalExpr(const FuncExpr& f, const Element& x) {
    switch (f.kind) {
        case FuncExpr::Kind::Var: return x;
        case FuncExpr::Kind::Unit: return Element::unit(x.model());
        case FuncExpr::Kind::Scalar: return Element::constant(x.model(), f.scalar);
        case FuncExpr::Kind::Const:
            if (f.elem->model() != x.model()) throw ModelMismatch("element literal model mismatch");
            return *f.elem;
        case FuncExpr::Kind::Add: return add(evalExpr(*f.a, x), evalExpr(*f.b, x));
        case FuncExpr::Kind::Sub: return sub(evalExpr(*f.a, x), evalExpr(*f.b, x));
        case FuncExpr::Kind::Mul: return mul(evalExpr(*f.a, x), evalExpr(*f.b, x));
        case FuncExpr::Kind::Sup: return sup(evalExpr(*f.a, x), evalExpr(*f.b, x));
        case FuncExpr::Kind::Inf: return inf(evalExpr(*f.a, x), evalExpr(*f.b, x));
        case FuncExpr::Kind::Abs: return modulus(evalExpr(*f.a, x));
        case FuncExpr::Kind::Pow: {
            Element v = evalExpr(*f.a, x);
            Element acc = v;
            for (int i = 1; i < f.exponent; ++i) acc = mul(acc, v);
            return acc;
        }
        case FuncExpr::Kind::Map: {
            Element v = evalExpr(*f.a, x);
            MapFn fn = f.fn;
            return mapValues(v, [fn](double t) { return applyMapFn(fn, t); });
        }
    }
    throw LatError("unreachable expr kind");
}

// --- differentiation ----------------------------------------------------

namespace {

ExprPtr diffRec(const ExprPtr& f, std::string& path) {
    using K = FuncExpr::Kind;
    auto child = [&](const ExprPtr& c, int idx) {
        path += '/';
        path += std::to_string(idx);
        ExprPtr d = diffRec(c, path);
        path.resize(path.size() - 2);
        return d;
    };
    switch (f->kind) {
        case K::Var: return FuncExpr::unit();
        case K::Unit:
        case K::Scalar:
        case K::Const: return FuncExpr::scalarLit(0.0);
        case K::Add: return FuncExpr::add(child(f->a, 0), child(f->b, 1));
        case K::Sub: return FuncExpr::sub(child(f->a, 0), child(f->b, 1));
        case K::Mul:
            return FuncExpr::add(FuncExpr::mul(child(f->a, 0), f->b),
                                 FuncExpr::mul(f->a, child(f->b, 1)));
        case K::Pow: {
            ExprPtr da = child(f->a, 0);
            if (f->exponent == 1) return da;
            ExprPtr reduced = f->exponent == 2 ? f->a : FuncExpr::pow(f->a, f->exponent - 1);
            return FuncExpr::mul(
                FuncExpr::mul(FuncExpr::scalarLit(static_cast<double>(f->exponent)), reduced), da);
        }
        case K::Map: {
            ExprPtr da = child(f->a, 0);
            ExprPtr inner;
            switch (f->fn) {
                case MapFn::Sin: inner = FuncExpr::map(MapFn::Cos, f->a); break;
                case MapFn::Cos:
                    inner = FuncExpr::mul(FuncExpr::scalarLit(-1.0), FuncExpr::map(MapFn::Sin, f->a));
                    break;
                case MapFn::Exp: inner = FuncExpr::map(MapFn::Exp, f->a); break;
                case MapFn::Tanh:
                    inner = FuncExpr::sub(FuncExpr::unit(),
                                          FuncExpr::pow(FuncExpr::map(MapFn::Tanh, f->a), 2));
                    break;
                case MapFn::Sqrtshift:
                    // d/dt sqrt(t^2+1) = t / sqrt(t^2+1)
                    inner = FuncExpr::mul(f->a, FuncExpr::map(MapFn::InvSqrtshift, f->a));
                    break;
                case MapFn::InvSqrtshift:
                    // d/dt (t^2+1)^(-1/2) = -t (t^2+1)^(-3/2)
                    inner = FuncExpr::mul(
                        FuncExpr::scalarLit(-1.0),
                        FuncExpr::mul(f->a, FuncExpr::pow(FuncExpr::map(MapFn::InvSqrtshift, f->a), 3)));
                    break;
            }
            return FuncExpr::mul(inner, da);
        }
        case K::Abs:
        case K::Sup:
        case K::Inf: throw NonSmoothNode(path.empty() ? "/" : path);
    }
    throw LatError("unreachable expr kind");
}

}  // namespace

ExprPtr differentiate(const ExprPtr& f) {
    std::string path;
    return diffRec(f, path);
}

bool isSmooth(const FuncExpr& f) {
    using K = FuncExpr::Kind;
    switch (f.kind) {
        case K::Abs:
        case K::Sup:
        case K::Inf: return false;
        case K::Var:
        case K::Unit:
        case K::Scalar:
        case K::Const: return true;
        case K::Pow:
        case K::Map: return isSmooth(*f.a);
        default: return isSmooth(*f.a) && isSmooth(*f.b);
    }
}

// --- printing -----------------------------------------------------------

std::string formatDouble(double v) {
    std::array<char, 64> buf;
    auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), res.ptr);
}

namespace {

// Grammar levels: 1 = additive, 2 = multiplicative, 3 = power, 4 = base.
int precedence(const FuncExpr& f) {
    switch (f.kind) {
        case FuncExpr::Kind::Add:
        case FuncExpr::Kind::Sub: return 1;
        case FuncExpr::Kind::Mul: return 2;
        case FuncExpr::Kind::Pow: return 3;
        default: return 4;
    }
}

void printRec(const FuncExpr& f, std::ostringstream& os, int level, bool rightOperand) {
    int prec = precedence(f);
    bool parens = prec < level || (prec == level && rightOperand && prec <= 2);
    // Negative literals bind looser than they look; parenthesize inside
    // binary contexts so reparsing keeps the tree shape.
    if (f.kind == FuncExpr::Kind::Scalar && f.scalar < 0 && level > 1) parens = true;
    if (parens) os << '(';
    switch (f.kind) {
        case FuncExpr::Kind::Var: os << 'x'; break;
        case FuncExpr::Kind::Unit: os << 'e'; break;
        case FuncExpr::Kind::Scalar: os << formatDouble(f.scalar); break;
        case FuncExpr::Kind::Const: {
            os << '[';
            const auto& vals = f.elem->values();
            for (size_t i = 0; i < vals.size(); ++i) {
                if (i) os << ", ";
                os << formatDouble(vals[i]);
            }
            os << ']';
            break;
        }
        case FuncExpr::Kind::Add:
            printRec(*f.a, os, 1, false);
            os << " + ";
            printRec(*f.b, os, 1, true);
            break;
        case FuncExpr::Kind::Sub:
            printRec(*f.a, os, 1, false);
            os << " - ";
            printRec(*f.b, os, 1, true);
            break;
        case FuncExpr::Kind::Mul:
            printRec(*f.a, os, 2, false);
            os << " * ";
            printRec(*f.b, os, 2, true);
            break;
        case FuncExpr::Kind::Pow:
            printRec(*f.a, os, 4, false);
            os << '^' << f.exponent;
            break;
        case FuncExpr::Kind::Sup:
            os << "sup(";
            printRec(*f.a, os, 0, false);
            os << ", ";
            printRec(*f.b, os, 0, false);
            os << ')';
            break;
        case FuncExpr::Kind::Inf:
            os << "inf(";
            printRec(*f.a, os, 0, false);
            os << ", ";
            printRec(*f.b, os, 0, false);
            os << ')';
            break;
        case FuncExpr::Kind::Abs:
            os << "abs(";
            printRec(*f.a, os, 0, false);
            os << ')';
            break;
        case FuncExpr::Kind::Map:
            os << mapFnName(f.fn) << '(';
            printRec(*f.a, os, 0, false);
            os << ')';
            break;
    }
    if (parens) os << ')';
}

}  // namespace

std::string prettyPrint(const FuncExpr& f) {
    std::ostringstream os;
    printRec(f, os, 0, false);
    return os.str();
}

// --- parsing ------------------------------------------------------------

namespace {

class Parser {
public:
    Parser(std::string_view text, const ModelSpec& model) : text_(text), model_(model) {}

    ExprPtr run() {
        ExprPtr e = parseExpr();
        skipWs();
        if (pos_ != text_.size()) throw SyntaxError("unexpected trailing input", pos_);
        return e;
    }

private:
    std::string_view text_;
    ModelSpec model_;
    size_t pos_ = 0;

    void skipWs() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    bool eat(char c) {
        skipWs();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    void expect(char c) {
        if (!eat(c)) throw SyntaxError(std::string("expected '") + c + "'", pos_);
    }

    char peek() {
        skipWs();
        return pos_ < text_.size() ? text_[pos_] : '\0';
    }

    bool startsNumber() {
        char c = peek();
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return true;
        if (c == '-') {
            size_t q = pos_ + 1;
            return q < text_.size() &&
                   (std::isdigit(static_cast<unsigned char>(text_[q])) || text_[q] == '.');
        }
        return false;
    }

    double parseNumber() {
        skipWs();
        size_t start = pos_;
        double value = 0.0;
        auto res = std::from_chars(text_.data() + start, text_.data() + text_.size(), value);
        if (res.ec != std::errc{}) throw SyntaxError("expected a number", start);
        pos_ = static_cast<size_t>(res.ptr - text_.data());
        return value;
    }

    int parseInt() {
        skipWs();
        size_t start = pos_;
        int value = 0;
        auto res = std::from_chars(text_.data() + start, text_.data() + text_.size(), value);
        if (res.ec != std::errc{} || value < 1) throw SyntaxError("expected a positive integer", start);
        pos_ = static_cast<size_t>(res.ptr - text_.data());
        return value;
    }

    std::string parseIdent() {
        skipWs();
        size_t start = pos_;
        while (pos_ < text_.size() && std::isalpha(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        return std::string(text_.substr(start, pos_ - start));
    }

    // '-' after a term is always binary here; signed numbers only lex in
    // parseBase, where an operand is expected.
    ExprPtr parseExpr() {
        ExprPtr lhs = parseTerm();
        for (;;) {
            if (eat('+')) lhs = FuncExpr::add(lhs, parseTerm());
            else if (eat('-')) lhs = FuncExpr::sub(lhs, parseTerm());
            else break;
        }
        return lhs;
    }

    ExprPtr parseTerm() {
        ExprPtr lhs = parseFactor();
        while (eat('*')) lhs = FuncExpr::mul(lhs, parseFactor());
        return lhs;
    }

    ExprPtr parseFactor() {
        ExprPtr base = parseBase();
        if (eat('^')) return FuncExpr::pow(base, parseInt());
        return base;
    }

    ExprPtr parseBase() {
        skipWs();
        if (pos_ >= text_.size()) throw SyntaxError("unexpected end of input", pos_);
        char c = text_[pos_];
        if (c == '(') {
            ++pos_;
            ExprPtr e = parseExpr();
            expect(')');
            return e;
        }
        if (c == '[') {
            ++pos_;
            if (model_.kind != ModelKind::Atomic)
                throw SyntaxError("element literals require an atomic model", pos_ - 1);
            std::vector<double> vals;
            vals.push_back(parseNumber());
            while (eat(',')) vals.push_back(parseNumber());
            expect(']');
            if (static_cast<int>(vals.size()) != model_.dim)
                throw SyntaxError("element literal has wrong dimension", pos_);
            return FuncExpr::constElem(Element::atomic(std::move(vals)));
        }
        if (startsNumber()) return FuncExpr::scalarLit(parseNumber());
        if (std::isalpha(static_cast<unsigned char>(c))) {
            size_t identPos = pos_;
            std::string ident = parseIdent();
            if (ident == "x" && peek() != '(') return FuncExpr::var();
            if (ident == "e" && peek() != '(') return FuncExpr::unit();
            if (ident == "sup" || ident == "inf") {
                expect('(');
                ExprPtr l = parseExpr();
                expect(',');
                ExprPtr r = parseExpr();
                expect(')');
                return ident == "sup" ? FuncExpr::sup(l, r) : FuncExpr::inf(l, r);
            }
            if (ident == "abs") {
                expect('(');
                ExprPtr e = parseExpr();
                expect(')');
                return FuncExpr::abs(e);
            }
            if (auto fn = mapFnByName(ident)) {
                expect('(');
                ExprPtr e = parseExpr();
                expect(')');
                return FuncExpr::map(*fn, e);
            }
            if (peek() == '(') throw UnknownIdentifier(ident);
            throw SyntaxError("unknown name '" + ident + "'", identPos);
        }
        throw SyntaxError("expected an expression", pos_);
    }
};

}  // namespace

ExprPtr parse(std::string_view text, const ModelSpec& model) {
    return Parser(text, model).run();
}

}  // namespace latcalc
