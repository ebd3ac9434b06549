#pragma once

#include <complex>
#include <string>
#include <vector>

#include "lyatel/orbit.hpp"

namespace lyatel {

struct TelescopeOptions {
    int samples = 256;           // initial circle discretization
    double bisect_tol = 1e-10;   // relative tolerance on each tau_i
    int precision_bits = 53;     // > 53 switches to the extended-precision engine
    long max_rays = 1 << 20;     // total boundary points cap per trace
    double arc_frac = 1e-2;      // subdivide arcs whose chord exceeds this fraction of local scale
    double containment_rel = 1e-10; // guard band = containment_rel * delta_n
    double underflow_guard = 1e-280; // double engine bails below this tau
};

// Radii tau_i of the maximal univalent pullbacks B(z_n, tau_i) -> U_i and
// the annulus moduli m_i = log(tau_{i+1}/tau_i).
struct TelescopeResult {
    int n = 0;
    int precision_bits = 53;
    std::vector<double> tau;     // length n+1, non-decreasing, tau_n = delta_n
    std::vector<double> log_tau; // length n+1 (meaningful even when tau underflows)
    std::vector<double> m;       // length n, all >= 0
    double sum_m = 0.0;
    double koebe_log_margin = 0.0; // sum log|f'| - (log tau_0 - log(4(M_f+|z0|)))
};

struct PullbackRegion {
    int level = 0;
    std::vector<std::complex<double>> boundary; // closed polyline, winding 1 around center
    std::complex<double> center{};
};

// Pulls the circle dB(z_from, radius) back level by level via inverse-branch
// continuation, producing the boundary polyline at each level down to
// to_level. Throws SingularCrossed(level) if the singular value lies inside
// (winding test) or within the guard band of any traced region.
std::vector<PullbackRegion> trace_pullback(const MapSpec& map, const Orbit& orbit, int from_level,
                                           int to_level, double radius,
                                           const TelescopeOptions& opt = {});

TelescopeResult compute_tau(const MapSpec& map, const Orbit& orbit, const GeometryConstants& constants,
                            const TelescopeOptions& opt = {});

// Distance from a point to the traced boundary d f(U_i) (the pullback of
// dB(z_n, tau_i) to level i+1), refined near the query point. Used by the
// inner-disk check.
double boundary_distance(const MapSpec& map, const Orbit& orbit, double radius, int to_level,
                         std::complex<double> point, const TelescopeOptions& opt = {});

// Boundary of the destination region only; containment is checked at the
// levels pulled through but not at to_level itself (a U_i may contain the
// singular value).
PullbackRegion trace_final_region(const MapSpec& map, const Orbit& orbit, double radius,
                                  int to_level, const TelescopeOptions& opt = {});

// Step function F(m) = #{i : m_i >= m} with exact layer-cake integral.
struct TailDistribution {
    int n = 0;                                  // total number of moduli (zeros included)
    std::vector<std::pair<double, int>> sorted_m; // positive values, descending, with multiplicities
    double plain_sum = 0.0;                     // sum of all m_i as given

    int F(double m) const;              // counts m_i >= m (F(0) = n)
    double max_m() const;               // 0 when the tail is empty
    double integral() const;            // int_0^inf F dm by rectangle decomposition
    double integral_over(double a, double b) const; // exact int_a^b F dm
};

TailDistribution tail_distribution(const TelescopeResult& tele);
TailDistribution tail_from_values(const std::vector<double>& m_values);

// CSV emitter: i, tau_i, m_i.
std::string telescope_csv(const TelescopeResult& tele);
std::string tail_json(const TailDistribution& tail);
std::string regions_json(const std::vector<PullbackRegion>& regions);

// Closed-polyline pairwise intersection test (annulus boundary disjointness).
bool polylines_intersect(const std::vector<std::complex<double>>& a,
                         const std::vector<std::complex<double>>& b);
int winding_number(const std::vector<std::complex<double>>& poly, std::complex<double> p);

} // namespace lyatel
