#pragma once

#include <complex>
#include <string>
#include <vector>

#include "lyatel/cx.hpp"
#include "lyatel/errors.hpp"

namespace lyatel {

enum class MapFamily { UnicriticalPoly, Exponential };

// One member of the two implemented holomorphic families:
//   UnicriticalPoly: z -> z^d + c   (d >= 2)
//   Exponential:     z -> a e^z + c (a != 0)
// Both are entire, so V = V' = C throughout.
struct MapSpec {
    MapFamily family = MapFamily::UnicriticalPoly;
    int degree = 2;                      // poly only
    std::complex<double> a{1.0, 0.0};    // exponential only
    std::complex<double> c{0.0, 0.0};

    static MapSpec unicritical(int d, std::complex<double> c);
    static MapSpec exponential(std::complex<double> a, std::complex<double> c);
};

// sing(f^{-1}): the critical value for the polynomial, the omitted /
// asymptotic value for the exponential. Exactly {c} for both families.
struct SingularSet {
    std::vector<std::complex<double>> points;
    bool bounded = true;
    double S_f = 1.0; // sup |s| + 1 when bounded
};

struct InverseBranchState {
    std::complex<double> current_point;
    int level = 0;
};

std::complex<double> eval(const MapSpec& map, std::complex<double> z);
std::complex<double> deriv(const MapSpec& map, std::complex<double> z);
SingularSet singular_set(const MapSpec& map);

struct PullOptions {
    double ambiguity_frac = 0.25; // (d2-d1)/(d1+d2) below this is ambiguous
    double singular_tol = 1e-13;  // relative to 1+|c|
};

// One continuation step of the inverse branch: the preimage of `target`
// nearest to branch.current_point (d-th root for the polynomial, the
// imaginary-part-nearest logarithm branch for the exponential).
InverseBranchState pull_back_step(const MapSpec& map, const InverseBranchState& branch,
                                  std::complex<double> target, const PullOptions& opt = {});

// --- map grammar -----------------------------------------------------------
// poly:d=<int>,c=<re>[+<im>i]     exp:a=<re>[+<im>i],c=<re>[+<im>i]
MapSpec parse_map(const std::string& text);
std::string format_map(const MapSpec& map);
std::complex<double> parse_complex(const std::string& text);
std::string format_complex(std::complex<double> z);

// --- generic kernels shared with the high-precision telescope engine -------

template <class R>
Cx<R> map_eval_t(const MapSpec& f, const Cx<R>& z, int bits) {
    Cx<R> c = cx_from_std(f.c, bits, z.re);
    if (f.family == MapFamily::UnicriticalPoly) {
        Cx<R> w = z;
        for (int k = 1; k < f.degree; ++k) w = w * z;
        return w + c;
    }
    Cx<R> a = cx_from_std(f.a, bits, z.re);
    return a * cx_exp(z) + c;
}

template <class R>
Cx<R> map_deriv_t(const MapSpec& f, const Cx<R>& z, int bits) {
    if (f.family == MapFamily::UnicriticalPoly) {
        Cx<R> w{scalar_from_double(double(f.degree), bits, z.re),
                scalar_from_double(0.0, bits, z.re)};
        for (int k = 1; k < f.degree; ++k) w = w * z;
        return w;
    }
    Cx<R> a = cx_from_std(f.a, bits, z.re);
    return a * cx_exp(z);
}

enum class PullStatus { Ok, Ambiguous, Singular };

template <class R>
struct PullOutcome {
    Cx<R> value{};
    PullStatus status = PullStatus::Ok;
};

// Candidate-selection core of pull_back_step, exception-free for hot loops.
template <class R>
PullOutcome<R> pull_back_toward(const MapSpec& f, const Cx<R>& reference, const Cx<R>& target,
                                int bits, const PullOptions& opt = {}) {
    PullOutcome<R> out;
    Cx<R> c = cx_from_std(f.c, bits, reference.re);
    Cx<R> w = target - c;
    R wabs = cx_abs(w);
    double sing_guard = opt.singular_tol * (1.0 + std::abs(f.c));
    if (to_double(wabs) <= sing_guard) {
        out.status = PullStatus::Singular;
        return out;
    }
    if (f.family == MapFamily::UnicriticalPoly) {
        const int d = f.degree;
        R r = root_n(wabs, (unsigned long)d);
        R base = cx_arg(w) / scalar_from_double(double(d), bits, wabs);
        R best_d{}, second_d{};
        Cx<R> best{};
        for (int k = 0; k < d; ++k) {
            R ang = base + scalar_from_double(2.0 * M_PI * k / d, bits, wabs);
            Cx<R> cand{r * cos(ang), r * sin(ang)};
            R dist = cx_dist(cand, reference);
            if (k == 0 || dist < best_d) {
                second_d = (k == 0) ? dist : best_d;
                best_d = dist;
                best = cand;
            } else if (k == 1 || dist < second_d) {
                second_d = dist;
            }
        }
        if (d > 1) {
            double d1 = to_double(best_d), d2 = to_double(second_d);
            if (!(d2 - d1 > opt.ambiguity_frac * (d1 + d2))) {
                out.status = PullStatus::Ambiguous;
                return out;
            }
        }
        out.value = best;
        return out;
    }
    // exponential: z = log((target - c)/a), branch with Im nearest reference
    Cx<R> a = cx_from_std(f.a, bits, reference.re);
    Cx<R> q = w / a;
    R x = log(cx_abs(q));
    R y0 = cx_arg(q);
    double two_pi = 2.0 * M_PI;
    double k0 = std::round((to_double(reference.im) - to_double(y0)) / two_pi);
    Cx<R> best{};
    R best_d{}, second_d{};
    bool have_second = false;
    for (int dk = -1; dk <= 1; ++dk) {
        R y = y0 + scalar_from_double((k0 + dk) * two_pi, bits, y0);
        Cx<R> cand{x, y};
        R dist = cx_dist(cand, reference);
        if (dk == -1 || dist < best_d) {
            if (dk != -1) {
                second_d = best_d;
                have_second = true;
            }
            best_d = dist;
            best = cand;
        } else if (!have_second || dist < second_d) {
            second_d = dist;
            have_second = true;
        }
    }
    double d1 = to_double(best_d), d2 = to_double(second_d);
    if (!(d2 - d1 > opt.ambiguity_frac * (d1 + d2))) {
        out.status = PullStatus::Ambiguous;
        return out;
    }
    out.value = best;
    return out;
}

} // namespace lyatel
