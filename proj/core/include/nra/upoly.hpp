#pragma once

#include "nra/poly.hpp"

namespace nra::upoly {

// Helpers over dense univariate integer polynomials (index = power). The empty
// vector is the zero polynomial.

int degree(const UPoly& p);
void trim(UPoly& p);
UPoly derivative(const UPoly& p);
UPoly primitive(const UPoly& p);
/// Exact value at a rational point.
Rational evaluate(const UPoly& p, const Rational& x);
int sign_at(const UPoly& p, const Rational& x);
/// Primitive gcd with positive leading coefficient.
UPoly gcd(const UPoly& a, const UPoly& b);
/// Quotient of exact division over Q, scaled back to a primitive integer
/// polynomial (same roots as a / b).
UPoly divide(const UPoly& a, const UPoly& b);
/// Primitive square-free part.
UPoly square_free(const UPoly& p);
/// Number of sign variations in the coefficient sequence.
int sign_variations(const UPoly& p);
/// Descartes bound for the number of roots in the open interval (a, b).
int descartes_bound(const UPoly& p, const Rational& a, const Rational& b);
/// Power of two strictly exceeding the absolute value of every real root.
Rational root_bound(const UPoly& p);

}  // namespace nra::upoly
