#pragma once

#include <complex>
#include <limits>
#include <vector>

#include "lyatel/map_model.hpp"
#include "lyatel/orbit.hpp"

namespace lyatel::testing {

// Inverse-branch continuation of a single point along the straight path
// from `path_from` to `target`, anchored at the known preimage `pre_anchor`
// (the branch mapping path_from -> pre_anchor). Uniform subdivision,
// doubled until no step is ambiguous.
inline std::complex<double> branch_pull_path(const MapSpec& map, std::complex<double> pre_anchor,
                                             std::complex<double> path_from,
                                             std::complex<double> target) {
    for (int K = 64; K <= (1 << 14); K *= 2) {
        try {
            InverseBranchState st{pre_anchor, 0};
            for (int k = 1; k <= K; ++k) {
                std::complex<double> pt = path_from + (target - path_from) * (double(k) / K);
                st = pull_back_step(map, st, pt);
            }
            return st.current_point;
        } catch (const AmbiguousBranch&) {
            continue;
        }
    }
    throw AmbiguousBranch("oracle path continuation stayed ambiguous");
}

// Independent telescope oracle for one-singular-value maps: level j of the
// chain is obstructed exactly at radius |f^{n-j}(c) - z_n|, provided the
// branch pullback of f^{n-j}(c) from level n lands on the singular value.
// tau_i then is min(delta_n, obstruction radii of levels i+1..n).
inline std::vector<double> oracle_tau(const MapSpec& map, const Orbit& orbit, double delta_n) {
    const int n = orbit.steps();
    const std::complex<double> c = map.c;
    const double inf = std::numeric_limits<double>::infinity();

    // obstruction radius of level j = n-k, k applications of f to c
    std::vector<double> obstruct(n + 1, inf); // indexed by k
    std::complex<double> v = c;
    for (int k = 0; k < n; ++k) {
        if (k > 0) v = eval(map, v);
        double r = std::abs(v - orbit.z[n]);
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) break;
        if (r >= delta_n) continue;
        // walk the point down k levels along the orbit's branch
        std::complex<double> p = v;
        bool ok = true;
        for (int step = 1; step <= k && ok; ++step) {
            int l = n - step;
            try {
                p = branch_pull_path(map, orbit.z[l], orbit.z[l + 1], p);
            } catch (const Error&) {
                ok = false;
            }
        }
        if (ok && std::abs(p - c) < 1e-6 * (1.0 + std::abs(c))) obstruct[k] = r;
    }

    std::vector<double> tau(n + 1);
    tau[n] = delta_n;
    for (int i = n - 1; i >= 0; --i) tau[i] = std::min(tau[i + 1], obstruct[n - i - 1]);
    return tau;
}

} // namespace lyatel::testing
