#pragma once

#include <utility>

namespace lyatel {

// Bracket for the Teichmuller extremal modulus Lambda(R): the function
// itself is never computed, only the closed interval
// [log(16R), log(16(R+1))] that the classical estimate pins it to.
struct LambdaBracket {
    double lower;
    double upper;
};
LambdaBracket lambda_brackets(double R);

enum class SeparationBranch { Exponential, Reciprocal };

// max{ e^m/16 - 1, 16 e^{-pi^2/m} } and which branch is active.
struct SeparationBound {
    double m;
    double factor;
    SeparationBranch active;
};
SeparationBound separation_factor(double m);

// alpha(m) = (2/m + 1)^2
double alpha(double m);

// E(m) = floor(m^{-1} log[9 rho alpha(m)]); guaranteed >= 1 for m < 2 + log rho.
long long spacing_gap_E(double m, double rho);

// D(m) = S_f + (M_f + S_f) e^{pi^2/m} / 16; +inf when the exponent overflows.
double orbit_bound_D(double m, double M_f, double S_f);

// (|w|/(1+|w|)^2, |w|/(1-|w|)^2) for 0 < |w| < 1.
std::pair<double, double> koebe_distortion_envelope(double w_abs);

} // namespace lyatel
