#pragma once

#include <complex>
#include <utility>
#include <vector>

#include "lyatel/map_model.hpp"

namespace lyatel {

enum class OrbitStatus { Complete, Overflowed, HitSingular };

// A finite orbit z_0..z_n with per-step log-derivatives and Birkhoff
// prefix averages chi_k = (1/k) sum_{i<k} log|f'(z_i)|.
struct Orbit {
    MapSpec map;
    std::complex<double> z0;
    int n_requested = 0;
    std::vector<std::complex<double>> z;  // length steps()+1
    std::vector<double> log_abs_deriv;    // length steps()
    std::vector<double> chi_prefix;       // length steps()+1, chi_prefix[0] = 0
    OrbitStatus status = OrbitStatus::Complete;
    int fail_step = -1;

    int steps() const { return (int)log_abs_deriv.size(); }
    double chi() const { return chi_prefix.back(); }
    double sum_log_deriv() const { return chi_prefix.back() * steps(); }
    // Honest finite proxy for the liminf: min of chi over a trailing window.
    double chi_window_min(int window = 0) const;
};

struct IterateOptions {
    double escape_radius = 1e100;
    double singular_hit_tol = 1e-14; // relative to 1+|s|
};

Orbit iterate(const MapSpec& map, std::complex<double> z0, int n, const IterateOptions& opt = {});

// The per-orbit constants of the derivative estimate. delta_n uses the
// Euclidean distance to every singular point; the d(z_i, C\V') term is
// +inf for entire maps and omitted.
struct GeometryConstants {
    double delta_n = 0.0;
    double D_n = 1.0;
    double M_f = 1.0;
    bool S_f_present = false;
    double S_f = 0.0;
    double rho_n = 0.0;        // 4 (D_n + M_f) / delta_n, always >= 16
    double rho_tilde_n = 0.0;  // 4 (S_f + M_f) / delta_n when S_f present
    double m_max = 0.0;        // 2 + log rho_n
    double m_tilde_max = 0.0;  // 2 + log rho_tilde_n when S_f present
};

GeometryConstants geometry_constants(const MapSpec& map, const Orbit& orbit, double M_f);

struct SlowDecayResult {
    bool ok = true;
    int first_violation_n = -1;
};

// Remark-rate check: delta_n / D_n >= kappa n^{-beta} (general case) or
// delta_n >= kappa n^{-beta} (bounded singular set).
SlowDecayResult slow_decay_check(const std::vector<std::pair<int, GeometryConstants>>& series,
                                 double kappa, double beta, bool bounded_singular_set);

// CSV emitter: i, re_z, im_z, log_abs_deriv, chi_i, delta_i, D_i with the
// running prefix delta/D; 17 significant digits, deterministic.
std::string orbit_csv(const MapSpec& map, const Orbit& orbit);

} // namespace lyatel
