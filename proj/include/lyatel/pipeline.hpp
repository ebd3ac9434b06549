#pragma once

#include <string>
#include <vector>

#include "lyatel/bounds.hpp"
#include "lyatel/cycles.hpp"

namespace lyatel {

// Flat run configuration: every knob a CLI flag or key=value line can set.
struct RunConfig {
    std::string map_text;
    std::string z0_text = "0";
    int n = 0;
    std::vector<int> n_series;

    double escape_radius = 1e100;
    int chi_window = 0; // 0 -> n/10

    int samples = 256;
    double bisect_tol = 1e-10;
    int precision_bits = 53;

    BoundParams bounds;

    CycleSearchOptions cycle_search;
    BasinOptions basin;

    // c-grid sweep (basin map)
    double c_re_min = 0.0, c_re_max = 0.0;
    double c_im_min = 0.0, c_im_max = 0.0;
    int c_re_steps = 0, c_im_steps = 0;

    // slow-decay rate columns for n-series sweeps
    bool have_rate = false;
    double kappa = 0.0, beta = 0.0;
    bool rate_bounded_sing = false;

    int jobs = 1;

    TelescopeOptions telescope_options() const {
        TelescopeOptions t;
        t.samples = samples;
        t.bisect_tol = bisect_tol;
        t.precision_bits = precision_bits;
        return t;
    }
    IterateOptions iterate_options() const {
        IterateOptions o;
        o.escape_radius = escape_radius;
        return o;
    }
};

// One fully-checked run: orbit, hypothesis gate, telescope, claim suite.
BoundReport run_verify(const RunConfig& cfg);

std::string run_orbit_csv(const RunConfig& cfg);

struct TelescopeRun {
    TelescopeResult tele;
    TailDistribution tail;
    GeometryConstants constants;
    Orbit orbit;
    std::string csv;
    std::string tail_json_text;
};
TelescopeRun run_telescope(const RunConfig& cfg);

// Dump of every U_j boundary at its final radius tau_j.
std::string run_region_dump(const RunConfig& cfg, const TelescopeRun& run);

std::string run_sweep_csv(const RunConfig& cfg);
std::string run_cycles_json(const RunConfig& cfg);
std::string lambda_table_csv(double r_min, double r_max, int points);

// Shared by verify and the sweep's n-series mode.
Orbit checked_orbit(const RunConfig& cfg, const MapSpec& map, int n);

} // namespace lyatel
