#pragma once

#include "vdm/rational.hpp"

#include <vector>

namespace vdm {

// Polynomial with exact rational coefficients, coeffs[k] * x^k.
class RationalPoly {
public:
    RationalPoly() = default;
    explicit RationalPoly(std::vector<Rational> coeffs);

    const std::vector<Rational>& coeffs() const { return coeffs_; }
    int degree() const { return coeffs_.empty() ? -1 : static_cast<int>(coeffs_.size()) - 1; }

    Rational eval(const Rational& x) const;
    double eval(double x) const;

    RationalPoly operator+(const RationalPoly& o) const;
    RationalPoly operator*(const RationalPoly& o) const;
    RationalPoly pow(int q) const;

    // Antiderivative with zero constant term.
    RationalPoly antiderivative() const;
    // Definite integral over [a,b].
    Rational integral(const Rational& a, const Rational& b) const;

private:
    void trim();
    std::vector<Rational> coeffs_;
};

// Piecewise polynomial on [0,m] with integer breakpoints 0,1,...,m;
// pieces[l] is the polynomial valid on [l, l+1].
struct PiecewisePolynomial {
    std::vector<RationalPoly> pieces;

    int interval_count() const { return static_cast<int>(pieces.size()); }
    double eval(double x) const;
    // Integral of (piece)^q summed over all intervals.
    Rational integral_of_power(int q) const;
    // Continuity at interior breakpoints (exact rational comparison).
    bool is_continuous() const;
};

// Volume polynomials of the unit-cube slices {x in [0,1]^m : x_1+...+x_m = t}:
// piece l is the polynomial valid for t in [l, l+1], built by the recursion
// a_l^{(m+1)}(x) = int_{x-1}^{l} a_{l-1}^{(m)} + int_l^x a_l^{(m)}.
// Requires 1 <= m <= 10.
PiecewisePolynomial convolution_polynomials(int m);

// Exact coefficient of the cyclic-shift partition with q blocks of size m
// (block i = {i, i+q, i+2q, ...} of {1..mq}): integral over [0,m] of
// (slice volume)^q.
Rational cyclic_shift_coefficient(int m, int q);

} // namespace vdm
