#pragma once

#include <complex>
#include <string>
#include <vector>

#include "lyatel/map_model.hpp"

namespace lyatel {

struct Cycle {
    std::vector<std::complex<double>> points; // one period, canonical rotation
    int period = 1;
    std::complex<double> multiplier{0.0, 0.0}; // product of f' over the cycle
    double max_modulus = 0.0;
};

struct CycleSearchOptions {
    int max_period = 4;
    double box_radius = 4.0; // search box |Re|,|Im| <= box_radius
    int grid_density = 64;
    int max_newton_iter = 200;
    double accept_residual = 1e-12;
    double dedup_tol = 1e-8;
};

// Damped-Newton search for roots of f^p(z) - z over a seed grid,
// deduplicated into cycles of minimal period.
std::vector<Cycle> find_cycles(const MapSpec& map, const CycleSearchOptions& opt = {});

// min over found cycles of max_modulus + 1. An UPPER bound for the true
// M_f (the infimum runs over all cycles); callers must label it as such.
double estimate_Mf(const MapSpec& map, const std::vector<Cycle>& cycles);

struct BasinOptions {
    int max_iter = 20000;
    double block_tol = 1e-9;     // successive period-blocks must differ less
    int stable_blocks = 50;
    double attracting_margin = 1e-6; // require |multiplier| < 1 - margin
    int max_period = 8;
    double escape_radius = 1e100;
};

struct BasinDetection {
    bool in_basin = false;
    Cycle cycle; // valid when in_basin
};

// InBasin only when the orbit tail converges to a verified attracting
// cycle; never claims absence of a basin, only failure to detect.
BasinDetection detect_basin(const MapSpec& map, std::complex<double> z0, const BasinOptions& opt = {});

// JSON emitter: array of {period, points:[[re,im]...], multiplier:[re,im], max_modulus}.
std::string cycles_json(const std::vector<Cycle>& cycles);

} // namespace lyatel
