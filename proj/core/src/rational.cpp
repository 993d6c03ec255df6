#include "vdm/rational.hpp"

#include "vdm/errors.hpp"

#include <numeric>
#include <ostream>
#include <sstream>

namespace vdm {

namespace {

using i128 = __int128;

std::int64_t checked_narrow(i128 v) {
    if (v > INT64_MAX || v < INT64_MIN) {
        throw size_error("rational overflow");
    }
    return static_cast<std::int64_t>(v);
}

i128 gcd128(i128 a, i128 b) {
    if (a < 0) a = -a;
    if (b < 0) b = -b;
    while (b != 0) {
        i128 t = a % b;
        a = b;
        b = t;
    }
    return a;
}

} // namespace

Rational Rational::reduced(__int128 num, __int128 den) {
    if (den == 0) throw domain_error("rational with zero denominator");
    if (den < 0) {
        num = -num;
        den = -den;
    }
    i128 g = gcd128(num, den);
    if (g > 1) {
        num /= g;
        den /= g;
    }
    Rational r;
    r.num_ = checked_narrow(num);
    r.den_ = checked_narrow(den);
    return r;
}

Rational::Rational(std::int64_t num, std::int64_t den) {
    Rational r = reduced(num, den);
    num_ = r.num_;
    den_ = r.den_;
}

Rational Rational::operator-() const {
    Rational r;
    r.num_ = -num_;
    r.den_ = den_;
    return r;
}

Rational& Rational::operator+=(const Rational& o) {
    *this = reduced(i128(num_) * o.den_ + i128(o.num_) * den_, i128(den_) * o.den_);
    return *this;
}

Rational& Rational::operator-=(const Rational& o) {
    *this = reduced(i128(num_) * o.den_ - i128(o.num_) * den_, i128(den_) * o.den_);
    return *this;
}

Rational& Rational::operator*=(const Rational& o) {
    *this = reduced(i128(num_) * o.num_, i128(den_) * o.den_);
    return *this;
}

Rational& Rational::operator/=(const Rational& o) {
    if (o.num_ == 0) throw domain_error("rational division by zero");
    *this = reduced(i128(num_) * o.den_, i128(den_) * o.num_);
    return *this;
}

bool operator<(const Rational& a, const Rational& b) {
    return i128(a.num_) * b.den_ < i128(b.num_) * a.den_;
}

std::string Rational::to_string() const {
    std::ostringstream os;
    os << num_;
    if (den_ != 1) os << '/' << den_;
    return os.str();
}

Rational Rational::parse(const std::string& s) {
    auto slash = s.find('/');
    try {
        if (slash == std::string::npos) {
            return Rational(std::stoll(s));
        }
        return Rational(std::stoll(s.substr(0, slash)), std::stoll(s.substr(slash + 1)));
    } catch (const std::logic_error&) {
        throw domain_error("cannot parse rational: " + s);
    }
}

std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.to_string(); }

Rational factorial_rational(int n) {
    if (n < 0 || n > 33) throw size_error("factorial out of supported range");
    Rational r(1);
    for (int i = 2; i <= n; ++i) r *= Rational(i);
    return r;
}

Rational binomial_rational(int n, int k) {
    if (k < 0 || k > n) return Rational(0);
    k = std::min(k, n - k);
    Rational r(1);
    for (int i = 0; i < k; ++i) {
        r *= Rational(n - i);
        r /= Rational(i + 1);
    }
    return r;
}

} // namespace vdm
