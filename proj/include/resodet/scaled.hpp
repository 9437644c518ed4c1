#pragma once

#include <cmath>
#include <complex>

namespace resodet {

using Complex = std::complex<double>;

// Complex number stored as mantissa * exp(log_scale).  Determinants of large
// Nystrom matrices span many orders of magnitude; the phase and log-magnitude
// stay representable even when the plain value would over- or underflow.
struct ScaledComplex {
    Complex mantissa{0.0, 0.0};
    double log_scale = 0.0;

    static ScaledComplex from(Complex z) { return ScaledComplex{z, 0.0}.normalized(); }

    ScaledComplex normalized() const {
        double a = std::abs(mantissa);
        if (a == 0.0 || !std::isfinite(a)) return {mantissa, log_scale};
        double s = std::log(a);
        return {mantissa / a, log_scale + s};
    }

    bool is_zero() const { return mantissa == Complex(0.0, 0.0); }

    double log_abs() const {
        double a = std::abs(mantissa);
        if (a == 0.0) return -std::numeric_limits<double>::infinity();
        return std::log(a) + log_scale;
    }

    double abs() const { return std::exp(log_abs()); }

    // Plain value; overflows to inf if log_scale is extreme.
    Complex value() const { return mantissa * std::exp(log_scale); }

    Complex arg_ref() const { return mantissa; }  // scale is real positive: same argument

    ScaledComplex operator*(const ScaledComplex& o) const {
        return ScaledComplex{mantissa * o.mantissa, log_scale + o.log_scale}.normalized();
    }
    ScaledComplex operator/(const ScaledComplex& o) const {
        return ScaledComplex{mantissa / o.mantissa, log_scale - o.log_scale}.normalized();
    }
    ScaledComplex operator+(const ScaledComplex& o) const {
        if (is_zero()) return o;
        if (o.is_zero()) return *this;
        double s = std::max(log_scale, o.log_scale);
        Complex m = mantissa * std::exp(log_scale - s) + o.mantissa * std::exp(o.log_scale - s);
        return ScaledComplex{m, s}.normalized();
    }
    ScaledComplex operator-(const ScaledComplex& o) const {
        return *this + ScaledComplex{-o.mantissa, o.log_scale};
    }
    ScaledComplex operator*(double c) const {
        return ScaledComplex{mantissa * c, log_scale}.normalized();
    }
    ScaledComplex pow_int(int k) const {
        ScaledComplex r{Complex(1.0, 0.0), 0.0};
        for (int i = 0; i < k; ++i) r = r * *this;
        return r;
    }
};

inline ScaledComplex scaled(Complex z) { return ScaledComplex::from(z); }

}  // namespace resodet
