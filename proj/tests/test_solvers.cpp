#include "latcalc/solvers.hpp"

#include "latcalc/io.hpp"
#include "test_support.hpp"

#include <doctest.h>

#include <cmath>

using namespace latcalc;
using latcalc::testing::randElement;
using latcalc::testing::randPoly;

namespace {

const ModelSpec kAtomic2 = ModelSpec::atomic(2);
const ModelSpec kAtomic3 = ModelSpec::atomic(3);

OrderInterval box(const Element& a, const Element& b) {
    return OrderInterval::closedInterval(a, b);
}

FunctionHandle dslOf(const char* text, const ModelSpec& model) {
    return FunctionHandle::dslText(text, model);
}

}  // namespace

TEST_CASE("order bound on monotone and humped sections") {
    SolverOptions opts = SolverOptions::forModel(kAtomic2);
    FunctionHandle sq = dslOf("x*x", kAtomic2);
    Element m = orderBound(sq, box(Element::zero(kAtomic2), Element::constant(kAtomic2, 2.0)),
                           opts);
    CHECK(approxEqual(m, Element::constant(kAtomic2, 4.0), 1e-9));

    // per-atom max of |t^2 - t| on [0,1] is 1/4 at t = 1/2
    FunctionHandle hump = dslOf("x*x - x", kAtomic2);
    Element m2 = orderBound(hump, box(Element::zero(kAtomic2), Element::unit(kAtomic2)), opts);
    CHECK(approxEqual(m2, Element::constant(kAtomic2, 0.25), 1e-9));

    FunctionHandle swz = FunctionHandle::builtin("swizzle_affine", kAtomic2);
    CHECK_THROWS_AS(orderBound(swz, box(Element::zero(kAtomic2), Element::unit(kAtomic2)), opts),
                    HypothesisViolatedError);
}

TEST_CASE("order bound audits against random box samples") {
    Rng rng(701);
    SolverOptions opts = SolverOptions::forModel(kAtomic3);
    for (int i = 0; i < 10; ++i) {
        FunctionHandle f = FunctionHandle::dsl(randPoly(rng, 3), kAtomic3);
        Element a = randElement(rng, kAtomic3, -1.0, 0.0);
        Element b = add(a, modulus(randElement(rng, kAtomic3, 0.5, 1.5)));
        OrderInterval iv = box(a, b);
        Element m = orderBound(f, iv, opts);
        for (int s = 0; s < 500; ++s) {
            Element x = iv.sample(rng);
            CHECK(leq(modulus(evaluate(f, x)), add(m, Element::constant(kAtomic3, opts.tol))));
        }
    }
}

TEST_CASE("ivt: band-split solve of a two-target quadratic") {
    SolverOptions opts = SolverOptions::forModel(kAtomic2);
    FunctionHandle sq = dslOf("x*x", kAtomic2);
    OrderInterval iv = box(Element::zero(kAtomic2), Element::constant(kAtomic2, 2.0));
    SolveReport rep = solveIvt(sq, iv, Element::atomic({2.25, 0.25}), opts);
    CHECK(rep.certificate == Certificate::Feasible);
    REQUIRE(rep.witness.has_value());
    CHECK(approxEqual(*rep.witness, Element::atomic({1.5, 0.5}), 1e-7));
    CHECK(maxAbs(*rep.residual) <= 1e-8);
    CHECK(rep.bandSplits >= 1);
    CHECK(rep.maxBisections <= opts.bisectionCap);
}

TEST_CASE("ivt: endpoint target returns the endpoint with zero residual") {
    SolverOptions opts = SolverOptions::forModel(kAtomic2);
    FunctionHandle f = dslOf("x*x + x", kAtomic2);
    OrderInterval iv = box(Element::zero(kAtomic2), Element::unit(kAtomic2));
    Element fa = evaluate(f, iv.a);
    SolveReport rep = solveIvt(f, iv, fa, opts);
    CHECK(rep.certificate == Certificate::Feasible);
    CHECK(*rep.witness == iv.a);
    CHECK(*rep.residual == Element::zero(kAtomic2));
}

TEST_CASE("ivt: infeasible targets and non-LBP functions are refused") {
    SolverOptions opts = SolverOptions::forModel(kAtomic2);
    FunctionHandle sq = dslOf("x*x", kAtomic2);
    OrderInterval iv = box(Element::zero(kAtomic2), Element::unit(kAtomic2));
    SolveReport rep = solveIvt(sq, iv, Element::atomic({5.0, 0.5}), opts);
    CHECK(rep.certificate == Certificate::Infeasible);

    FunctionHandle fsq = FunctionHandle::builtin("first_square", kAtomic2);
    SolveReport rep2 = solveIvt(fsq, iv, Element::atomic({0.5, 0.5}), opts);
    CHECK(rep2.certificate == Certificate::HypothesisViolated);
    CHECK(rep2.detail == "notLbp");
}

TEST_CASE("ivt: random smooth problems in both models") {
    Rng rng(702);
    // Atomic R^4
    for (int i = 0; i < 25; ++i) {
        SolverOptions opts = SolverOptions::forModel(ModelSpec::atomic(4));
        opts.seed = 7000 + static_cast<std::uint64_t>(i);
        FunctionHandle f = FunctionHandle::dsl(randPoly(rng, 3), ModelSpec::atomic(4));
        Element a = randElement(rng, ModelSpec::atomic(4), -1.0, -0.2);
        Element b = add(a, mapValues(randElement(rng, ModelSpec::atomic(4)),
                                     [](double v) { return 0.7 + std::abs(v); }));
        OrderInterval iv = box(a, b);
        Element fa = evaluate(f, a);
        Element fb = evaluate(f, b);
        double u = rng.uniform01();
        Element target = add(inf(fa, fb), scale(u, modulus(sub(fb, fa))));
        SolveReport rep = solveIvt(f, iv, target, opts);
        CHECK(rep.certificate == Certificate::Feasible);
        CHECK(maxAbs(*rep.residual) <= opts.tol);
        CHECK(iv.contains(*rep.witness));
    }
    // DyadicStep depth 5
    ModelSpec dy = ModelSpec::dyadic(5);
    for (int i = 0; i < 10; ++i) {
        SolverOptions opts = SolverOptions::forModel(dy);
        opts.seed = 7100 + static_cast<std::uint64_t>(i);
        FunctionHandle f = FunctionHandle::dsl(randPoly(rng, 3), dy);
        Element a = latcalc::testing::randDyadic(rng, dy, 4, -1.0, -0.2);
        Element b = add(a, mapValues(latcalc::testing::randDyadic(rng, dy, 4),
                                     [](double v) { return 0.7 + std::abs(v); }));
        OrderInterval iv = box(a, b);
        Element fa = evaluate(f, a);
        Element fb = evaluate(f, b);
        Element target = add(inf(fa, fb), scale(rng.uniform01(), modulus(sub(fb, fa))));
        SolveReport rep = solveIvt(f, iv, target, opts);
        CHECK(rep.certificate == Certificate::Feasible);
        CHECK(maxAbs(*rep.residual) <= opts.tol);
        CHECK(rep.bandSplits <= opts.splitCap);
    }
}

TEST_CASE("splice independence holds for LBP handles and fails for swizzle") {
    Rng rng(703);
    OrderInterval iv = box(Element::zero(kAtomic3), Element::unit(kAtomic3));
    for (int i = 0; i < 5; ++i) {
        FunctionHandle f = FunctionHandle::dsl(randPoly(rng, 3), kAtomic3);
        CHECK(spliceIndependenceFailures(f, iv, 1000, 42 + i) == 0);
    }
    FunctionHandle swz = FunctionHandle::builtin("swizzle_affine", kAtomic2);
    OrderInterval iv2 = box(Element::zero(kAtomic2), Element::unit(kAtomic2));
    CHECK(spliceIndependenceFailures(swz, iv2, 1000, 42) > 0);
}

TEST_CASE("evt: hump, ties, constants, refusals") {
    SolverOptions opts = SolverOptions::forModel(kAtomic3);
    FunctionHandle hump = dslOf("x*x - x", kAtomic3);
    OrderInterval iv = box(Element::zero(kAtomic3), Element::unit(kAtomic3));
    SolveReport rep = solveEvt(hump, iv, opts);
    CHECK(rep.certificate == Certificate::Feasible);
    // minimum at t = 1/2 with value -1/4; max tied between endpoints, the
    // smaller parameter wins, so d = a with value 0
    CHECK(approxEqual(*rep.witness, Element::constant(kAtomic3, 0.5), 1e-6));
    CHECK(approxEqual(evaluate(hump, *rep.witness), Element::constant(kAtomic3, -0.25), 1e-9));
    CHECK(*rep.witness2 == iv.a);
    CHECK(maxAbs(*rep.residual) <= opts.tol);

    FunctionHandle c = dslOf("[1.5, -2, 0.25]", kAtomic3);
    SolveReport repC = solveEvt(c, iv, opts);
    CHECK(repC.certificate == Certificate::Feasible);
    CHECK(*repC.witness == iv.a);
    CHECK(*repC.witness2 == iv.a);
    CHECK(*repC.residual == Element::zero(kAtomic3));

    FunctionHandle swz = FunctionHandle::builtin("swizzle_affine", kAtomic2);
    SolveReport repS = solveEvt(swz, box(Element::zero(kAtomic2), Element::unit(kAtomic2)),
                                SolverOptions::forModel(kAtomic2));
    CHECK(repS.certificate == Certificate::HypothesisViolated);
    CHECK(repS.detail == "notLbp");
}

TEST_CASE("evt: audit bound on random smooth problems") {
    Rng rng(704);
    SolverOptions opts = SolverOptions::forModel(kAtomic3);
    opts.auditSamples = 2000;
    for (int i = 0; i < 10; ++i) {
        opts.seed = 7200 + static_cast<std::uint64_t>(i);
        FunctionHandle f = FunctionHandle::dsl(randPoly(rng, 3), kAtomic3);
        Element a = randElement(rng, kAtomic3, -1.0, 0.0);
        Element b = add(a, mapValues(randElement(rng, kAtomic3),
                                     [](double v) { return 0.5 + std::abs(v); }));
        OrderInterval iv = box(a, b);
        SolveReport rep = solveEvt(f, iv, opts);
        CHECK(rep.certificate == Certificate::Feasible);
        Element fc = evaluate(f, *rep.witness);
        Element fd = evaluate(f, *rep.witness2);
        Rng audit(999 + i);
        for (int s = 0; s < 1000; ++s) {
            Element fx = evaluate(f, iv.sample(audit));
            CHECK(leq(fx, add(fd, Element::constant(kAtomic3, 1e-6))));
            CHECK(leq(sub(fc, Element::constant(kAtomic3, 1e-6)), fx));
        }
    }
}

TEST_CASE("rolle: parabola vertex, constant branch, hypothesis violations") {
    SolverOptions opts = SolverOptions::forModel(kAtomic3);
    opts.tol = 1e-6;
    FunctionHandle hump = dslOf("x*x - x", kAtomic3);
    OrderInterval iv = box(Element::zero(kAtomic3), Element::unit(kAtomic3));
    SolveReport rep = solveRolle(hump, iv, opts);
    CHECK(rep.certificate == Certificate::Feasible);
    CHECK(approxEqual(*rep.witness, Element::constant(kAtomic3, 0.5), 1e-6));
    CHECK(maxAbs(*rep.residual) <= 1e-6);

    FunctionHandle c = dslOf("2", kAtomic3);
    SolveReport repC = solveRolle(c, iv, opts);
    CHECK(repC.certificate == Certificate::Feasible);
    CHECK(*repC.witness == Element::constant(kAtomic3, 0.5));  // the midpoint branch
    CHECK(maxAbs(*repC.residual) <= 1e-9);

    FunctionHandle inc = dslOf("x", kAtomic3);
    SolveReport repI = solveRolle(inc, iv, opts);
    CHECK(repI.certificate == Certificate::HypothesisViolated);
    CHECK(repI.detail == "endpointsDiffer");

    CHECK_THROWS_AS(
        solveRolle(hump, box(Element::zero(kAtomic3), Element::atomic({1, 0, 1})), opts),
        DomainViolation);
}

TEST_CASE("mvt: quadratic and cubic fixtures") {
    SolverOptions opts = SolverOptions::forModel(kAtomic3);
    OrderInterval iv = box(Element::zero(kAtomic3), Element::unit(kAtomic3));

    SolveReport rep = solveMvt(dslOf("x*x", kAtomic3), iv, opts);
    CHECK(rep.certificate == Certificate::Feasible);
    CHECK(approxEqual(*rep.witness, Element::constant(kAtomic3, 0.5), 1e-6));

    SolveReport rep3 = solveMvt(dslOf("x^3", kAtomic3), iv, opts);
    CHECK(rep3.certificate == Certificate::Feasible);
    CHECK(approxEqual(*rep3.witness, Element::constant(kAtomic3, 1.0 / std::sqrt(3.0)), 1e-6));
    CHECK(maxAbs(*rep3.residual) <= opts.tol);
}

TEST_CASE("mvt: random smooth problems meet the residual bound") {
    Rng rng(705);
    SolverOptions opts = SolverOptions::forModel(kAtomic3);
    for (int i = 0; i < 20; ++i) {
        opts.seed = 7300 + static_cast<std::uint64_t>(i);
        FunctionHandle f = FunctionHandle::dsl(randPoly(rng, 3), kAtomic3);
        Element a = randElement(rng, kAtomic3, -1.0, 0.0);
        Element b = add(a, mapValues(randElement(rng, kAtomic3),
                                     [](double v) { return 0.5 + std::abs(v); }));
        SolveReport rep = solveMvt(f, box(a, b), opts);
        CHECK(rep.certificate == Certificate::Feasible);
        CHECK(maxAbs(*rep.residual) <= 1e-8);
        CHECK(box(a, b).contains(*rep.witness));
    }
}

TEST_CASE("mvt segment corollary: (d-c) f'(x0) = f(d) - f(c)") {
    SolverOptions opts = SolverOptions::forModel(kAtomic2);
    FunctionHandle cube = dslOf("x^3", kAtomic2);
    Element segC = Element::constant(kAtomic2, 0.2);
    Element segD = Element::constant(kAtomic2, 0.7);
    SolveReport rep = solveMvtSegment(cube, segC, segD, opts);
    CHECK(rep.certificate == Certificate::Feasible);
    // scalar oracle: 3 t^2 (0.5) = 0.7^3 - 0.2^3 => t = sqrt(0.335/1.5)
    double expectT = std::sqrt((0.343 - 0.008) / 0.5 / 3.0);
    CHECK(approxEqual(*rep.witness, Element::constant(kAtomic2, expectT), 1e-6));
    Element resid = sub(mul(sub(segD, segC), evalExpr(*differentiate(cube.expr()), *rep.witness)),
                        sub(evaluate(cube, segD), evaluate(cube, segC)));
    CHECK(maxAbs(resid) <= 1e-7);
}

TEST_CASE("complex mvt: squared segment and linear/constant degenerations") {
    SolverOptions opts = SolverOptions::forModel(kAtomic2);
    // f(z) = z^2 on the segment 0 -> (1+i)e
    ComplexPoly sqPoly{{czero(kAtomic2), czero(kAtomic2), cunit(kAtomic2)}};
    ComplexElement a0 = czero(kAtomic2);
    ComplexElement b0{Element::unit(kAtomic2), Element::unit(kAtomic2)};
    SolveReport rep = solveComplexMvt(sqPoly, a0, b0, opts);
    CHECK(rep.certificate == Certificate::Feasible);
    CHECK(maxAbs(*rep.residual) <= opts.tol);
    CHECK(maxAbs(*rep.residualIm) <= opts.tol);
    // v = (1+i)/2 e
    CHECK(approxEqual(rep.witnessV->re, Element::constant(kAtomic2, 0.5), 1e-6));
    CHECK(approxEqual(rep.witnessV->im, Element::constant(kAtomic2, 0.5), 1e-6));

    // constant polynomial: residual 0, any witness
    ComplexPoly constant{{cunit(kAtomic2)}};
    SolveReport repC = solveComplexMvt(constant, a0, b0, opts);
    CHECK(repC.certificate == Certificate::Feasible);
    CHECK(*repC.residual == Element::zero(kAtomic2));
    CHECK(*repC.residualIm == Element::zero(kAtomic2));

    // f(z) = z: every interior point works; the solver settles mid-segment
    ComplexPoly linear{{czero(kAtomic2), cunit(kAtomic2)}};
    SolveReport repL = solveComplexMvt(linear, a0, b0, opts);
    CHECK(repL.certificate == Certificate::Feasible);
    CHECK(approxEqual(repL.witnessU->re, Element::constant(kAtomic2, 0.5), 1e-9));
    CHECK(maxAbs(*repL.residual) <= 1e-12);
}

TEST_CASE("complex mvt with zero imaginary parts reproduces the real segment solver") {
    SolverOptions opts = SolverOptions::forModel(kAtomic2);
    // f(z) = z^3 embedded with real coefficients on a real segment
    ComplexPoly cube{{czero(kAtomic2), czero(kAtomic2), czero(kAtomic2), cunit(kAtomic2)}};
    ComplexElement a = complexify(Element::zero(kAtomic2));
    ComplexElement b = complexify(Element::unit(kAtomic2));
    SolveReport creport = solveComplexMvt(cube, a, b, opts);
    CHECK(creport.certificate == Certificate::Feasible);
    CHECK(maxAbs(creport.witnessU->im) == 0.0);

    SolveReport rreport = solveMvtSegment(dslOf("x^3", kAtomic2), Element::zero(kAtomic2),
                                          Element::unit(kAtomic2), opts);
    CHECK(rreport.certificate == Certificate::Feasible);
    CHECK(approxEqual(creport.witnessU->re, *rreport.witness, 1e-9));
}

TEST_CASE("reports are byte-identical across reruns with one seed") {
    SolverOptions opts = SolverOptions::forModel(kAtomic2);
    opts.seed = 424242;
    FunctionHandle f = dslOf("x*x - x + 1", kAtomic2);
    OrderInterval iv = box(Element::zero(kAtomic2), Element::unit(kAtomic2));
    Element target = Element::atomic({0.9, 0.8});
    std::string first = dumpReport(reportToJson(solveIvt(f, iv, target, opts)));
    std::string second = dumpReport(reportToJson(solveIvt(f, iv, target, opts)));
    CHECK(first == second);

    std::string evt1 = dumpReport(reportToJson(solveEvt(f, iv, opts)));
    std::string evt2 = dumpReport(reportToJson(solveEvt(f, iv, opts)));
    CHECK(evt1 == evt2);
}

TEST_CASE("debug splice checks are wired into the solver entry") {
    SolverOptions opts = SolverOptions::forModel(kAtomic2);
    opts.debugSpliceChecks = true;
    FunctionHandle f = dslOf("x*x", kAtomic2);
    OrderInterval iv = box(Element::zero(kAtomic2), Element::unit(kAtomic2));
    SolveReport rep = solveIvt(f, iv, Element::atomic({0.25, 0.5}), opts);
    CHECK(rep.certificate == Certificate::Feasible);
}

TEST_CASE("restriction to bands: LBP bounds restrict through projections") {
    // For LBP f bounded by M on [c, d], P_{c<=x} P_{x<=d} f(x) <= (same) M
    // for every x in the enclosing interval.
    Rng rng(706);
    SolverOptions opts = SolverOptions::forModel(kAtomic3);
    for (int i = 0; i < 10; ++i) {
        FunctionHandle f = FunctionHandle::dsl(randPoly(rng, 3), kAtomic3);
        Element a = Element::constant(kAtomic3, -1.0);
        Element b = Element::unit(kAtomic3);
        Element c = randElement(rng, kAtomic3, -0.9, -0.1);
        Element d = add(c, modulus(randElement(rng, kAtomic3, 0.2, 0.9)));
        Element m = orderBound(f, box(c, d), opts);  // |f| <= m on [c, d]
        for (int s = 0; s < 200; ++s) {
            Element x = box(a, b).sample(rng);
            Band p = bandMeet(bandLe(c, x), bandLe(x, d));
            Element lhs = applyProjection(p, evaluate(f, x));
            Element rhs = applyProjection(p, add(m, Element::constant(kAtomic3, 1e-6)));
            CHECK(leq(lhs, rhs));
        }
    }
}

TEST_CASE("a failed continuity probe downgrades the certificate") {
    SolverOptions opts = SolverOptions::forModel(kAtomic2);
    FunctionHandle sgn = FunctionHandle::builtin("sign_step", kAtomic2);
    OrderInterval iv = box(Element::constant(kAtomic2, -1.0), Element::unit(kAtomic2));
    // sign_step is LBP (atom-local), so the solver proceeds, but the jump at
    // x1 = 0 must demote the certificate with a note.
    SolveReport rep = solveIvt(sgn, iv, evaluate(sgn, iv.b), opts);
    CHECK(rep.certificate == Certificate::IterationCapReached);
    CHECK(rep.detail == "suspectDiscontinuity");
}

TEST_CASE("mvt on a constant function reproduces the constancy corollary") {
    SolverOptions opts = SolverOptions::forModel(kAtomic3);
    OrderInterval iv = box(Element::zero(kAtomic3), Element::unit(kAtomic3));
    SolveReport rep = solveMvt(dslOf("3", kAtomic3), iv, opts);
    CHECK(rep.certificate == Certificate::Feasible);
    CHECK(*rep.witness == Element::constant(kAtomic3, 0.5));
    CHECK(*rep.residual == Element::zero(kAtomic3));
    bool constantCellFlagged = false;
    for (const auto& ev : rep.trace)
        if (ev.kind == "rolleCell" && ev.lo == 0.5) constantCellFlagged = true;
    CHECK(constantCellFlagged);
}
