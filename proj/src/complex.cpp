#include "latcalc/complex.hpp"

#include <cmath>

namespace latcalc {

ComplexElement::ComplexElement(Element r, Element i) : re(std::move(r)), im(std::move(i)) {
    if (re.model() != im.model()) throw ModelMismatch("re and im parts belong to different models");
}

ComplexElement cadd(const ComplexElement& z, const ComplexElement& w) {
    return {add(z.re, w.re), add(z.im, w.im)};
}

ComplexElement csub(const ComplexElement& z, const ComplexElement& w) {
    return {sub(z.re, w.re), sub(z.im, w.im)};
}

ComplexElement cmul(const ComplexElement& z, const ComplexElement& w) {
    return {sub(mul(z.re, w.re), mul(z.im, w.im)),
            add(mul(z.re, w.im), mul(z.im, w.re))};
}

ComplexElement cscale(double t, const ComplexElement& z) {
    return {scale(t, z.re), scale(t, z.im)};
}

ComplexElement complexify(const Element& x) {
    return {x, Element::zero(x.model())};
}

ComplexElement cunit(const ModelSpec& model) {
    return {Element::unit(model), Element::zero(model)};
}

ComplexElement czero(const ModelSpec& model) {
    return {Element::zero(model), Element::zero(model)};
}

Element cmodulusGrid(const ComplexElement& z, int K) {
    if (K < 4) throw DomainViolation("modulus grid needs K >= 4");
    // theta computed as ((2*pi)*j)/K so that doubling K reproduces the
    // coarser angles bit for bit; refinement is then monotone exactly.
    const double twoPi = 2.0 * M_PI;
    Element acc = z.re;  // j = 0: cos 0 = 1, sin 0 = 0
    for (int j = 1; j < K; ++j) {
        double theta = (twoPi * static_cast<double>(j)) / static_cast<double>(K);
        Element term = add(scale(std::cos(theta), z.re), scale(std::sin(theta), z.im));
        acc = sup(acc, term);
    }
    return acc;
}

Element cmodulus(const ComplexElement& z) {
    return zipWith(z.re, z.im, +[](double a, double b) { return std::hypot(a, b); });
}

}  // namespace latcalc
