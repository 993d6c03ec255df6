#include "vdm/piecewise_polynomial.hpp"

#include "vdm/errors.hpp"

#include <algorithm>

namespace vdm {

RationalPoly::RationalPoly(std::vector<Rational> coeffs) : coeffs_(std::move(coeffs)) { trim(); }

void RationalPoly::trim() {
    while (!coeffs_.empty() && coeffs_.back() == Rational(0)) coeffs_.pop_back();
}

Rational RationalPoly::eval(const Rational& x) const {
    Rational acc(0);
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * x + *it;
    return acc;
}

double RationalPoly::eval(double x) const {
    double acc = 0.0;
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * x + it->to_double();
    return acc;
}

RationalPoly RationalPoly::operator+(const RationalPoly& o) const {
    std::vector<Rational> out(std::max(coeffs_.size(), o.coeffs_.size()), Rational(0));
    for (std::size_t i = 0; i < coeffs_.size(); ++i) out[i] += coeffs_[i];
    for (std::size_t i = 0; i < o.coeffs_.size(); ++i) out[i] += o.coeffs_[i];
    return RationalPoly(std::move(out));
}

RationalPoly RationalPoly::operator*(const RationalPoly& o) const {
    if (coeffs_.empty() || o.coeffs_.empty()) return RationalPoly();
    std::vector<Rational> out(coeffs_.size() + o.coeffs_.size() - 1, Rational(0));
    for (std::size_t i = 0; i < coeffs_.size(); ++i) {
        for (std::size_t j = 0; j < o.coeffs_.size(); ++j) out[i + j] += coeffs_[i] * o.coeffs_[j];
    }
    return RationalPoly(std::move(out));
}

RationalPoly RationalPoly::pow(int q) const {
    RationalPoly result(std::vector<Rational>{Rational(1)});
    for (int i = 0; i < q; ++i) result = result * *this;
    return result;
}

RationalPoly RationalPoly::antiderivative() const {
    std::vector<Rational> out(coeffs_.size() + 1, Rational(0));
    for (std::size_t i = 0; i < coeffs_.size(); ++i) out[i + 1] = coeffs_[i] / Rational(static_cast<std::int64_t>(i) + 1);
    return RationalPoly(std::move(out));
}

Rational RationalPoly::integral(const Rational& a, const Rational& b) const {
    RationalPoly anti = antiderivative();
    return anti.eval(b) - anti.eval(a);
}

double PiecewisePolynomial::eval(double x) const {
    const int m = interval_count();
    if (x < 0.0 || x > static_cast<double>(m)) return 0.0;
    int l = std::min(static_cast<int>(x), m - 1);
    return pieces[static_cast<std::size_t>(l)].eval(x);
}

Rational PiecewisePolynomial::integral_of_power(int q) const {
    Rational total(0);
    for (int l = 0; l < interval_count(); ++l) {
        total += pieces[static_cast<std::size_t>(l)].pow(q).integral(Rational(l), Rational(l + 1));
    }
    return total;
}

bool PiecewisePolynomial::is_continuous() const {
    for (int l = 0; l + 1 < interval_count(); ++l) {
        Rational left = pieces[static_cast<std::size_t>(l)].eval(Rational(l + 1));
        Rational right = pieces[static_cast<std::size_t>(l + 1)].eval(Rational(l + 1));
        if (left != right) return false;
    }
    return true;
}

PiecewisePolynomial convolution_polynomials(int m) {
    if (m < 1 || m > 10) throw size_error("convolution_polynomials supports 1 <= m <= 10");
    PiecewisePolynomial current;
    current.pieces = {RationalPoly(std::vector<Rational>{Rational(1)})};  // a_0^{(1)} = 1 on [0,1]

    for (int cur_m = 1; cur_m < m; ++cur_m) {
        PiecewisePolynomial next;
        next.pieces.resize(static_cast<std::size_t>(cur_m) + 1);
        for (int l = 0; l <= cur_m; ++l) {
            // a_l^{(m+1)}(x) = int_{x-1}^{l} a_{l-1}^{(m)} + int_l^x a_l^{(m)},
            // with out-of-range pieces contributing nothing.
            RationalPoly piece;
            if (l - 1 >= 0 && l - 1 < cur_m) {
                RationalPoly anti = current.pieces[static_cast<std::size_t>(l - 1)].antiderivative();
                // int_{x-1}^{l}: F(l) - F(x-1)
                Rational at_l = anti.eval(Rational(l));
                RationalPoly shifted = [&] {
                    // compose anti with (x-1)
                    RationalPoly acc(std::vector<Rational>{Rational(1)});
                    RationalPoly xm1(std::vector<Rational>{Rational(-1), Rational(1)});
                    RationalPoly total;
                    for (std::size_t i = 0; i < anti.coeffs().size(); ++i) {
                        total = total + RationalPoly(std::vector<Rational>{anti.coeffs()[i]}) * acc;
                        acc = acc * xm1;
                    }
                    return total;
                }();
                piece = piece + RationalPoly(std::vector<Rational>{at_l}) +
                        RationalPoly(std::vector<Rational>{Rational(-1)}) * shifted;
            }
            if (l < cur_m) {
                RationalPoly anti = current.pieces[static_cast<std::size_t>(l)].antiderivative();
                Rational at_l = anti.eval(Rational(l));
                piece = piece + anti + RationalPoly(std::vector<Rational>{-at_l});
            }
            next.pieces[static_cast<std::size_t>(l)] = piece;
        }
        current = std::move(next);
    }
    return current;
}

Rational cyclic_shift_coefficient(int m, int q) {
    if (m < 1 || q < 1 || m * q > 24) throw size_error("cyclic_shift_coefficient out of supported range");
    return convolution_polynomials(m).integral_of_power(q);
}

} // namespace vdm
