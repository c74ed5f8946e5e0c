#pragma once

#include "latcalc/element.hpp"

namespace latcalc {

/// Complexification E = F + iF of a model; re and im share one ModelSpec.
struct ComplexElement {
    Element re;
    Element im;

    ComplexElement() = default;
    ComplexElement(Element r, Element i);

    const ModelSpec& model() const { return re.model(); }

    bool operator==(const ComplexElement&) const = default;
};

ComplexElement cadd(const ComplexElement& z, const ComplexElement& w);
ComplexElement csub(const ComplexElement& z, const ComplexElement& w);
ComplexElement cmul(const ComplexElement& z, const ComplexElement& w);
ComplexElement cscale(double t, const ComplexElement& z);

ComplexElement complexify(const Element& x);  // x + 0i
ComplexElement cunit(const ModelSpec& model);
ComplexElement czero(const ModelSpec& model);

/// Modulus by its defining finite supremum over the angle grid
/// theta_j = 2*pi*j/K: sup_j (cos theta_j) re + (sin theta_j) im.
/// Monotone under grid refinement K -> 2K and exact on real inputs when
/// 4 | K. Requires K >= 4.
Element cmodulusGrid(const ComplexElement& z, int K);

/// Closed-form modulus: atom-wise hypot(re, im). The fast path; the grid
/// form above is the defining formula and the oracle anchor.
Element cmodulus(const ComplexElement& z);

}  // namespace latcalc
