#pragma once

#include <cmath>
#include <complex>

#include "lyatel/bigfloat.hpp"

namespace lyatel {

using std::abs;
using std::atan2;
using std::cos;
using std::exp;
using std::hypot;
using std::log;
using std::max;
using std::min;
using std::sin;
using std::sqrt;

inline double root_n(double a, unsigned long n) { return std::pow(a, 1.0 / double(n)); }

// Minimal complex number over a generic real scalar (double or BigFloat).
// std::complex is only specified for builtin floating types, hence this.
template <class R>
struct Cx {
    R re{}, im{};
};

template <class R> Cx<R> operator+(const Cx<R>& a, const Cx<R>& b) { return {a.re + b.re, a.im + b.im}; }
template <class R> Cx<R> operator-(const Cx<R>& a, const Cx<R>& b) { return {a.re - b.re, a.im - b.im}; }
template <class R> Cx<R> operator*(const Cx<R>& a, const Cx<R>& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}
template <class R> Cx<R> operator/(const Cx<R>& a, const Cx<R>& b) {
    R den = b.re * b.re + b.im * b.im;
    return {(a.re * b.re + a.im * b.im) / den, (a.im * b.re - a.re * b.im) / den};
}
template <class R> Cx<R> operator-(const Cx<R>& a) { return {-a.re, -a.im}; }

template <class R> R abs2(const Cx<R>& a) { return a.re * a.re + a.im * a.im; }
template <class R> R cx_abs(const Cx<R>& a) { return hypot(a.re, a.im); }
template <class R> R cx_arg(const Cx<R>& a) { return atan2(a.im, a.re); }
template <class R> R cx_dist(const Cx<R>& a, const Cx<R>& b) { return hypot(a.re - b.re, a.im - b.im); }

template <class R> Cx<R> cx_exp(const Cx<R>& a) {
    R m = exp(a.re);
    return {m * cos(a.im), m * sin(a.im)};
}

template <class R> bool cx_finite(const Cx<R>& a) { return scalar_finite(a.re) && scalar_finite(a.im); }

template <class R> Cx<R> cx_log(const Cx<R>& a) { return {log(cx_abs(a)), cx_arg(a)}; }

// log(1+u) with full relative accuracy for small u; series below |u| = 1/4.
template <class R>
Cx<R> cx_log1p(const Cx<R>& u, int bits) {
    if (to_double(cx_abs(u)) > 0.25) {
        Cx<R> one{scalar_from_double(1.0, bits, u.re), scalar_from_double(0.0, bits, u.re)};
        return cx_log(one + u);
    }
    // u - u^2/2 + u^3/3 - ...
    Cx<R> term = u;
    Cx<R> sum = u;
    double eps = std::pow(2.0, -double(bits + 4));
    double unorm = to_double(cx_abs(u));
    for (int k = 2; k < 4000; ++k) {
        term = term * u;
        Cx<R> piece{term.re / scalar_from_double(k % 2 ? double(k) : -double(k), bits, u.re),
                    term.im / scalar_from_double(k % 2 ? double(k) : -double(k), bits, u.re)};
        sum = sum + piece;
        if (to_double(cx_abs(piece)) <= eps * unorm) break;
    }
    return sum;
}

// exp(v) - 1 with full relative accuracy for small v; series below |v| = 1/4.
template <class R>
Cx<R> cx_expm1(const Cx<R>& v, int bits) {
    if (to_double(cx_abs(v)) > 0.25) {
        Cx<R> one{scalar_from_double(1.0, bits, v.re), scalar_from_double(0.0, bits, v.re)};
        return cx_exp(v) - one;
    }
    Cx<R> term = v;
    Cx<R> sum = v;
    double eps = std::pow(2.0, -double(bits + 4));
    double vnorm = to_double(cx_abs(v));
    for (int k = 2; k < 4000; ++k) {
        R kk = scalar_from_double(double(k), bits, v.re);
        term = Cx<R>{term.re / kk, term.im / kk} * v;
        sum = sum + term;
        if (to_double(cx_abs(term)) <= eps * vnorm) break;
    }
    return sum;
}

inline Cx<double> cx_of(std::complex<double> z) { return {z.real(), z.imag()}; }
inline std::complex<double> cx_to_std(const Cx<double>& z) { return {z.re, z.im}; }
inline std::complex<double> cx_to_std(const Cx<BigFloat>& z) { return {z.re.to_double(), z.im.to_double()}; }

template <class R>
Cx<R> cx_from_std(std::complex<double> z, int bits, const R& model) {
    return {scalar_from_double(z.real(), bits, model), scalar_from_double(z.imag(), bits, model)};
}

} // namespace lyatel
