#include "lyatel/conformal.hpp"

#include <cmath>
#include <limits>

#include "lyatel/errors.hpp"

namespace lyatel {

LambdaBracket lambda_brackets(double R) {
    if (!(R > 1.0)) throw DomainError("lambda_brackets needs R > 1");
    return {std::log(16.0 * R), std::log(16.0 * (R + 1.0))};
}

SeparationBound separation_factor(double m) {
    if (!(m > 0.0)) throw DomainError("separation_factor needs m > 0");
    double b1 = std::exp(m) / 16.0 - 1.0;
    double b2 = 16.0 * std::exp(-M_PI * M_PI / m);
    SeparationBound s;
    s.m = m;
    if (b1 >= b2) {
        s.factor = b1;
        s.active = SeparationBranch::Exponential;
    } else {
        s.factor = b2;
        s.active = SeparationBranch::Reciprocal;
    }
    return s;
}

double alpha(double m) {
    if (!(m > 0.0)) throw DomainError("alpha needs m > 0");
    double t = 2.0 / m + 1.0;
    return t * t;
}

long long spacing_gap_E(double m, double rho) {
    if (!(m > 0.0)) throw DomainError("spacing_gap_E needs m > 0");
    if (!(rho >= 16.0)) throw DomainError("spacing_gap_E needs rho >= 16");
    long long e = (long long)std::floor(std::log(9.0 * rho * alpha(m)) / m);
    if (m < 2.0 + std::log(rho) && e < 1)
        throw Error("internal: E(m) < 1 below m_max");
    return e;
}

double orbit_bound_D(double m, double M_f, double S_f) {
    if (!(m > 0.0)) throw DomainError("orbit_bound_D needs m > 0");
    if (!(M_f >= 1.0)) throw DomainError("orbit_bound_D needs M_f >= 1");
    if (!(S_f >= 1.0)) throw DomainError("orbit_bound_D needs S_f >= 1");
    double ex = M_PI * M_PI / m;
    if (ex > 700.0) return std::numeric_limits<double>::infinity();
    return S_f + (M_f + S_f) * std::exp(ex) / 16.0;
}

std::pair<double, double> koebe_distortion_envelope(double w_abs) {
    if (!(w_abs > 0.0 && w_abs < 1.0)) throw DomainError("koebe envelope needs |w| in (0,1)");
    double lo = w_abs / ((1.0 + w_abs) * (1.0 + w_abs));
    double hi = w_abs / ((1.0 - w_abs) * (1.0 - w_abs));
    return {lo, hi};
}

} // namespace lyatel
