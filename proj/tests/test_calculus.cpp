#include "latcalc/calculus.hpp"

#include "test_support.hpp"

#include <doctest.h>

#include <cmath>

using namespace latcalc;
using latcalc::testing::randElement;
using latcalc::testing::randPoly;

namespace {

const ModelSpec kAtomic2 = ModelSpec::atomic(2);

FunctionHandle dslOf(const char* text, const ModelSpec& model = kAtomic2) {
    return FunctionHandle::dslText(text, model);
}

}  // namespace

TEST_CASE("derivative estimation on polynomials") {
    CHECK(approxEqual(estimateDerivative(dslOf("x*x"), Element::atomic({3, 1})),
                      Element::atomic({6, 2}), 1e-8));
    ModelSpec m3 = ModelSpec::atomic(3);
    CHECK(approxEqual(estimateDerivative(dslOf("x^3", m3), Element::unit(m3)),
                      Element::constant(m3, 3.0), 1e-8));
}

TEST_CASE("derivative estimation matches the symbolic oracle") {
    Rng rng(601);
    for (int i = 0; i < 100; ++i) {
        ExprPtr f = randPoly(rng, 3);
        FunctionHandle h = FunctionHandle::dsl(f, kAtomic2);
        Element c = randElement(rng, kAtomic2);
        Element sym = evalExpr(*differentiate(f), c);
        CHECK(approxEqual(estimateDerivative(h, c), sym, 1e-7));
    }
}

TEST_CASE("derivative estimation diverges at a jump") {
    FunctionHandle sgn = FunctionHandle::builtin("sign_step", kAtomic2);
    CHECK_THROWS_AS(estimateDerivative(sgn, Element::atomic({0.0, 0.5})), NoConvergence);
}

TEST_CASE("differentiability probe: polynomial passes in super mode") {
    FunctionHandle f = dslOf("x*x");
    Element c = Element::constant(kAtomic2, 0.3);
    Element d = Element::constant(kAtomic2, 0.6);
    Element r = Element::constant(kAtomic2, 0.25);
    DiffReport rep = verifyDifferentiability(f, c, d, DiffMode::Super, r, 8, 77);
    CHECK(rep.pass);
    CHECK(rep.maxScaledResidual <= kResidualPassTol);
    CHECK(rep.thinSetResidual <= kResidualPassTol);
}

TEST_CASE("thin_sqrt at the origin: order passes, super fails on a thin witness") {
    FunctionHandle f = FunctionHandle::builtin("thin_sqrt", kAtomic2);
    Element c = Element::atomic({0.0, 0.0});
    Element d = Element::atomic({0.0, 0.0});
    Element r = Element::constant(kAtomic2, 0.25);

    DiffReport order = verifyDifferentiability(f, c, d, DiffMode::Order, r, 8, 77);
    CHECK(order.pass);

    DiffReport super = verifyDifferentiability(f, c, d, DiffMode::Super, r, 8, 77);
    CHECK_FALSE(super.pass);
    CHECK(super.thinSetResidual > kResidualPassTol);
    REQUIRE(super.witness.has_value());
    // the witness lives on the thin axis x2 = 0
    CHECK(super.witness->values()[1] == 0.0);

    // Brute-force oracle along the pinned axis: the scaled remainder at
    // z = (t, 0) is sqrt(t)/t = 2^{j/2} at t = 2^-j, growing without bound.
    for (int j = 4; j <= 16; j += 4) {
        double t = std::ldexp(1.0, -j);
        double scaled = std::sqrt(t) / t;
        CHECK(scaled > kResidualPassTol);
        CHECK(scaled == doctest::Approx(std::ldexp(1.0, j / 2)));
    }
}

TEST_CASE("a wrong derivative candidate fails both modes") {
    FunctionHandle f = dslOf("x*x");
    Element c = Element::constant(kAtomic2, 0.3);
    Element d = Element::constant(kAtomic2, 0.7);  // true derivative + 0.1 e
    Element r = Element::constant(kAtomic2, 0.25);
    CHECK_FALSE(verifyDifferentiability(f, c, d, DiffMode::Order, r, 8, 77).pass);
    CHECK_FALSE(verifyDifferentiability(f, c, d, DiffMode::Super, r, 8, 77).pass);
}

TEST_CASE("classification verdicts") {
    Element r = Element::constant(kAtomic2, 0.25);
    CHECK(classify(dslOf("x*x - x"), Element::constant(kAtomic2, 0.4), r, 5) ==
          Classification::SuperDifferentiable);
    CHECK(classify(FunctionHandle::builtin("thin_sqrt", kAtomic2),
                   Element::atomic({0.0, 0.0}), r, 5) == Classification::OrderOnly);
    CHECK(classify(FunctionHandle::builtin("sign_step", kAtomic2),
                   Element::atomic({0.0, 0.5}), r, 5) == Classification::NotDifferentiable);
    // swizzle_affine admits no multiplication-operator derivative at all
    CHECK(classify(FunctionHandle::builtin("swizzle_affine", kAtomic2),
                   Element::atomic({0.3, 0.4}), r, 5) == Classification::NotDifferentiable);
}

TEST_CASE("sum and product rules numerically") {
    Rng rng(602);
    for (int i = 0; i < 100; ++i) {
        ExprPtr fe = randPoly(rng, 3, -1.0, 1.0);
        ExprPtr ge = randPoly(rng, 3, -1.0, 1.0);
        FunctionHandle f = FunctionHandle::dsl(fe, kAtomic2);
        FunctionHandle g = FunctionHandle::dsl(ge, kAtomic2);
        FunctionHandle fPlusG = FunctionHandle::dsl(FuncExpr::add(fe, ge), kAtomic2);
        FunctionHandle fTimesG = FunctionHandle::dsl(FuncExpr::mul(fe, ge), kAtomic2);
        Element c = randElement(rng, kAtomic2);

        Element df = estimateDerivative(f, c);
        Element dg = estimateDerivative(g, c);
        CHECK(approxEqual(estimateDerivative(fPlusG, c), add(df, dg), 1e-6));
        Element productRule = add(mul(df, evaluate(g, c)), mul(evaluate(f, c), dg));
        CHECK(approxEqual(estimateDerivative(fTimesG, c), productRule, 1e-6));
    }
}

TEST_CASE("super differentiable handles pass the lbp check") {
    Rng rng(603);
    Element r = Element::constant(kAtomic2, 0.25);
    int classified = 0;
    for (int i = 0; i < 15; ++i) {
        FunctionHandle f = FunctionHandle::dsl(randPoly(rng, 3), kAtomic2);
        Element c = randElement(rng, kAtomic2);
        if (classify(f, c, r, 600 + i) != Classification::SuperDifferentiable) continue;
        ++classified;
        OrderInterval nbhd = OrderInterval::closedInterval(sub(c, r), add(c, r));
        LbpReport rep = checkLbp(f, nbhd, 1000, 600 + i);
        CHECK(rep.pass);
        CHECK(rep.violations == 0);
    }
    CHECK(classified > 10);
}

TEST_CASE("zero symbolic derivative means a constant function") {
    Rng rng(604);
    const char* constants[] = {"e", "5", "e*3 - 2", "[0.5, -1.5]"};
    for (const char* text : constants) {
        ExprPtr f = parse(text, kAtomic2);
        ExprPtr df = differentiate(f);
        OrderInterval box = OrderInterval::closedInterval(
            Element::constant(kAtomic2, -2.0), Element::constant(kAtomic2, 2.0));
        Element first = evalExpr(*f, box.sample(rng));
        for (int i = 0; i < 100; ++i) {
            Element x = box.sample(rng);
            CHECK(evalExpr(*df, x) == Element::zero(kAtomic2));
            CHECK(evalExpr(*f, x) == first);
        }
    }
}

TEST_CASE("nonnegative derivative means increasing") {
    Rng rng(605);
    FunctionHandle f = dslOf("x^3 + x");  // derivative 3x^2 + 1 > 0
    ExprPtr df = differentiate(f.expr());
    OrderInterval box = OrderInterval::closedInterval(
        Element::constant(kAtomic2, -1.0), Element::unit(kAtomic2));
    for (int i = 0; i < 100; ++i) {
        Element x = box.sample(rng);
        CHECK(leq(Element::zero(kAtomic2), evalExpr(*df, x)));
        Element y = sup(x, box.sample(rng));  // x <= y
        Element fx = evaluate(f, x);
        Element fy = evaluate(f, y);
        CHECK(leq(fx, add(fy, Element::constant(kAtomic2, kEqTol))));
    }
}

TEST_CASE("probe radius must be a weak order unit") {
    FunctionHandle f = dslOf("x*x");
    Element c = Element::constant(kAtomic2, 0.3);
    CHECK_THROWS_AS(
        verifyDifferentiability(f, c, c, DiffMode::Order, Element::atomic({1.0, 0.0}), 8, 1),
        DomainViolation);
}

TEST_CASE("neighbourhoods demand weak-order-unit radii") {
    Element c = Element::constant(kAtomic2, 0.5);
    CHECK_THROWS_AS(Neighborhood::make(c, Element::atomic({0.5, 0.0})), DomainViolation);
    Neighborhood n = Neighborhood::make(c, Element::constant(kAtomic2, 0.25));
    OrderInterval iv = n.asInterval();
    CHECK(iv.a == Element::constant(kAtomic2, 0.25));
    CHECK(iv.b == Element::constant(kAtomic2, 0.75));
    CHECK(iv.contains(c));
}
