#pragma once

#include <string>
#include <vector>

#include "lyatel/orbit.hpp"
#include "lyatel/telescope.hpp"

namespace lyatel {

enum class AnRule { PowerFifth, InverseLog, InverseLogLog };

// Tunable stand-ins for the unnamed constants of the final bounds. The
// claim-level checks never depend on them; where a cap carries one, the
// report also states the minimal value making the inequality hold.
struct BoundParams {
    double gamma = 0.5;   // in (0,1)
    double C_abs = 1.0;   // > 0
    double c1 = 1.0, c2 = 1.0, c3 = 1.0, c4 = 1.0, c5 = 1.0, c6 = 1.0;
    AnRule a_n_rule = AnRule::PowerFifth;
};

enum class MfProvenance { Exact, UpperBound };

struct ClaimRecord {
    std::string claim_id;
    double measured_margin = 0.0;
    bool pass = false;
    bool vacuous = false;
    bool constant_free = true;
    MfProvenance mf_provenance = MfProvenance::UpperBound;
    std::vector<std::pair<std::string, double>> inputs;
};

// F(m) = 0 beyond m_max = 2 + log rho_n (or the bounded-type variant).
ClaimRecord check_m_max_cutoff(const TailDistribution& tail, const GeometryConstants& g,
                               bool bounded_type);

// F(m) <= E(m) (rho_n alpha(m))^2 on a log grid over (0, m_max].
ClaimRecord check_packing_bound(const TailDistribution& tail, const GeometryConstants& g,
                                int grid_points = 200, double grid_lo = 1e-3);

// |z_{i_j+1} - z_{i_k+1}| >= delta_n / (2 alpha(m)) for positions k-j >= E(m)
// within the ordered index set I_m.
ClaimRecord check_spacing(const Orbit& orbit, const TelescopeResult& tele,
                          const GeometryConstants& g, double m);

// B(z_{i+1}, delta_n/alpha(m_i)) inside f(U_i), via the traced boundary.
ClaimRecord check_inner_disk(const MapSpec& map, const Orbit& orbit, const TelescopeResult& tele,
                             const GeometryConstants& g, int i, const TelescopeOptions& opt = {});

// |z_{i+1}| <= D(m_i) for every i with m_i > 0 (bounded singular set).
ClaimRecord check_orbit_bound_Dm(const Orbit& orbit, const TelescopeResult& tele,
                                 const GeometryConstants& g);

// sum log|f'(z_i)| >= -log rho_n - sum m_i (log form of the base estimate).
ClaimRecord base_derivative_bound(const Orbit& orbit, const TelescopeResult& tele,
                                  const GeometryConstants& g);

struct SplitPart {
    std::string interval;
    double lo = 0.0, hi = 0.0;
    double empirical = 0.0;
    double cap = 0.0;
    bool pass = false;
    bool constant_free = true;
    double min_constant = 0.0; // minimal c making empirical <= cap, when applicable
};

struct IntegralSplit {
    double a_n = 0.0;
    std::vector<SplitPart> parts; // [m_max,inf), [2,m_max), [a_n,2), (0,a_n)
    double parts_sum = 0.0;       // must equal sum m_i exactly (Abel identity)
    double sum_m = 0.0;
};

IntegralSplit integral_split(const TailDistribution& tail, const GeometryConstants& g,
                             const BoundParams& params, int n);

enum class TheoremVariant { Thm14, Thm31 };

// log of the stated right-hand side; Thm31 uses prefactor delta_n/(4(M_f+|z0|)).
double theorem_rhs(const GeometryConstants& g, const BoundParams& params, double n,
                   TheoremVariant variant, double abs_z0);

// Minimal C making theorem_rhs(Thm14) <= the base-derivative RHS.
double min_C_thm14(const GeometryConstants& g, const BoundParams& params, double n, double sum_m);

struct EnvelopePoint {
    int n = 0;
    double envelope = 0.0; // -(log rho_n)/n - (1/n) sum m_i
    double chi_n = 0.0;
    double chi_window_min = 0.0;
};

struct EnvelopeInput {
    int n;
    GeometryConstants constants;
    double sum_m;
    double chi_n;
    double chi_window_min;
};

std::vector<EnvelopePoint> chi_lower_envelope(const std::vector<EnvelopeInput>& series);

// Remark-rate arithmetic: the envelope exponent -1/5 + 2b + g(b + 1/5) and
// the gamma threshold (1-10b)/(1+5b) below which it is negative (b < 1/10).
double remark_rate_exponent(double beta, double gamma);
double remark_rate_gamma_threshold(double beta);

struct BoundReport {
    std::string map;
    std::string z0;
    int n = 0;
    MfProvenance mf_provenance = MfProvenance::UpperBound;
    GeometryConstants constants;
    std::vector<ClaimRecord> claims;
    IntegralSplit split;
    double log_deriv_measured = 0.0;
    double chi_n = 0.0;
    double base_der_bound_log_rhs = 0.0;
    double thm14_log_rhs = 0.0;
    double thm31_log_rhs = 0.0; // only meaningful when S_f present
    bool thm31_present = false;
    double min_C_14 = 0.0;
    double min_c1_split = 0.0;
    double koebe_log_margin = 0.0;
    double sum_m = 0.0;

    bool all_constant_free_pass() const;
};

std::string bound_report_json(const BoundReport& report);

} // namespace lyatel
