#include "lyatel/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

#include "lyatel/conformal.hpp"
#include "lyatel/csv.hpp"

namespace lyatel {

Orbit checked_orbit(const RunConfig& cfg, const MapSpec& map, int n) {
    Orbit orbit = iterate(map, parse_complex(cfg.z0_text), n, cfg.iterate_options());
    if (orbit.status == OrbitStatus::HitSingular)
        throw DegenerateOrbit("orbit hits the singular set at step " +
                              std::to_string(orbit.fail_step));
    if (orbit.status == OrbitStatus::Overflowed)
        throw PrecisionExhausted("orbit overflowed at step " + std::to_string(orbit.fail_step) +
                                 "; the full orbit is required");
    return orbit;
}

namespace {

struct Prepared {
    MapSpec map;
    Orbit orbit;
    GeometryConstants constants;
    MfProvenance provenance = MfProvenance::UpperBound;
};

Prepared prepare(const RunConfig& cfg, int n, bool gate_basin) {
    if (n < 1) throw DomainError("n must be >= 1");
    Prepared p{parse_map(cfg.map_text), Orbit{}, GeometryConstants{}, MfProvenance::UpperBound};
    if (gate_basin) {
        BasinDetection basin = detect_basin(p.map, parse_complex(cfg.z0_text), cfg.basin);
        if (basin.in_basin) {
            throw BasinDetected("z0 lies in the basin of an attracting cycle (period " +
                                std::to_string(basin.cycle.period) + ", |multiplier| = " +
                                fmt17(std::abs(basin.cycle.multiplier)) + ")");
        }
    }
    p.orbit = checked_orbit(cfg, p.map, n);
    std::vector<Cycle> cycles = find_cycles(p.map, cfg.cycle_search);
    double mf = estimate_Mf(p.map, cycles);
    p.constants = geometry_constants(p.map, p.orbit, mf);
    return p;
}

} // namespace

BoundReport run_verify(const RunConfig& cfg) {
    Prepared p = prepare(cfg, cfg.n, /*gate_basin=*/true);
    TelescopeOptions topt = cfg.telescope_options();
    TelescopeResult tele = compute_tau(p.map, p.orbit, p.constants, topt);
    TailDistribution tail = tail_distribution(tele);
    const int n = p.orbit.steps();

    BoundReport rep;
    rep.map = format_map(p.map);
    rep.z0 = format_complex(p.orbit.z0);
    rep.n = n;
    rep.mf_provenance = p.provenance;
    rep.constants = p.constants;
    rep.sum_m = tele.sum_m;
    rep.koebe_log_margin = tele.koebe_log_margin;

    rep.claims.push_back(check_m_max_cutoff(tail, p.constants, false));
    if (p.constants.S_f_present)
        rep.claims.push_back(check_m_max_cutoff(tail, p.constants, true));
    rep.claims.push_back(check_packing_bound(tail, p.constants));

    double max_m = tail.max_m();
    rep.claims.push_back(check_spacing(p.orbit, tele, p.constants, max_m > 0.0 ? max_m / 2.0 : 1.0));

    bool any_positive = false;
    for (int i = 0; i < tele.n; ++i) {
        if (tele.m[i] > 0.0) {
            any_positive = true;
            rep.claims.push_back(check_inner_disk(p.map, p.orbit, tele, p.constants, i, topt));
        }
    }
    if (!any_positive) rep.claims.push_back(check_inner_disk(p.map, p.orbit, tele, p.constants, 0, topt));

    if (p.constants.S_f_present)
        rep.claims.push_back(check_orbit_bound_Dm(p.orbit, tele, p.constants));
    rep.claims.push_back(base_derivative_bound(p.orbit, tele, p.constants));

    ClaimRecord koebe;
    koebe.claim_id = "koebe_quarter_consistency";
    koebe.measured_margin = tele.koebe_log_margin;
    koebe.pass = koebe.measured_margin >= 0.0;
    koebe.inputs = {{"log_deriv", p.orbit.sum_log_deriv()}, {"log_tau0", tele.log_tau[0]}};
    rep.claims.push_back(koebe);

    for (auto& c : rep.claims) c.mf_provenance = p.provenance;

    rep.split = integral_split(tail, p.constants, cfg.bounds, n);
    rep.min_c1_split = rep.split.parts[2].min_constant;

    rep.log_deriv_measured = p.orbit.sum_log_deriv();
    rep.chi_n = p.orbit.chi();
    rep.base_der_bound_log_rhs = -std::log(p.constants.rho_n) - tele.sum_m;
    rep.thm14_log_rhs =
        theorem_rhs(p.constants, cfg.bounds, n, TheoremVariant::Thm14, std::abs(p.orbit.z0));
    if (p.constants.S_f_present && n >= 2) {
        rep.thm31_present = true;
        rep.thm31_log_rhs =
            theorem_rhs(p.constants, cfg.bounds, n, TheoremVariant::Thm31, std::abs(p.orbit.z0));
    }
    rep.min_C_14 = min_C_thm14(p.constants, cfg.bounds, n, tele.sum_m);
    return rep;
}

std::string run_orbit_csv(const RunConfig& cfg) {
    if (cfg.n < 1) throw DomainError("n must be >= 1");
    MapSpec map = parse_map(cfg.map_text);
    Orbit orbit = iterate(map, parse_complex(cfg.z0_text), cfg.n, cfg.iterate_options());
    return orbit_csv(map, orbit);
}

TelescopeRun run_telescope(const RunConfig& cfg) {
    Prepared p = prepare(cfg, cfg.n, /*gate_basin=*/false);
    TelescopeRun out{TelescopeResult{}, TailDistribution{}, p.constants, p.orbit, "", ""};
    out.tele = compute_tau(p.map, p.orbit, p.constants, cfg.telescope_options());
    out.tail = tail_distribution(out.tele);
    out.csv = telescope_csv(out.tele);
    out.tail_json_text = tail_json(out.tail);
    return out;
}

std::string run_region_dump(const RunConfig& cfg, const TelescopeRun& run) {
    MapSpec map = parse_map(cfg.map_text);
    TelescopeOptions topt = cfg.telescope_options();
    std::vector<PullbackRegion> regions;
    const int n = run.tele.n;
    for (int j = n; j >= 0; --j) {
        if (j == n) {
            PullbackRegion reg;
            reg.level = n;
            reg.center = run.orbit.z[n];
            for (int k = 0; k < topt.samples; ++k) {
                double ang = 2.0 * M_PI * k / topt.samples;
                reg.boundary.push_back(run.orbit.z[n] + run.tele.tau[n] *
                                                            std::complex<double>(std::cos(ang), std::sin(ang)));
            }
            regions.push_back(std::move(reg));
            continue;
        }
        auto traced = trace_final_region(map, run.orbit, run.tele.tau[j], j, topt);
        regions.push_back(std::move(traced));
    }
    return regions_json(regions);
}

std::string run_cycles_json(const RunConfig& cfg) {
    MapSpec map = parse_map(cfg.map_text);
    return cycles_json(find_cycles(map, cfg.cycle_search));
}

std::string lambda_table_csv(double r_min, double r_max, int points) {
    if (!(r_min > 1.0) || !(r_max > r_min) || points < 2)
        throw DomainError("lambda-table needs 1 < r_min < r_max and points >= 2");
    CsvWriter w;
    w.header({"R", "lambda_lower", "lambda_upper"});
    double llo = std::log(r_min), lhi = std::log(r_max);
    for (int k = 0; k < points; ++k) {
        double R = std::exp(llo + (lhi - llo) * k / (points - 1));
        LambdaBracket b = lambda_brackets(R);
        w.field(R);
        w.field(b.lower);
        w.field(b.upper);
        w.end_row();
    }
    return w.str();
}

namespace {

// Deterministic parallel map: results land by index regardless of schedule.
template <class F>
void parallel_for(int count, int jobs, F&& fn) {
    jobs = std::max(1, std::min(jobs, count));
    if (jobs == 1) {
        for (int i = 0; i < count; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    std::atomic<int> next{0};
    for (int t = 0; t < jobs; ++t) {
        pool.emplace_back([&]() {
            while (true) {
                int i = next.fetch_add(1);
                if (i >= count) return;
                fn(i);
            }
        });
    }
    for (auto& th : pool) th.join();
}

} // namespace

std::string run_sweep_csv(const RunConfig& cfg) {
    const bool grid_mode = cfg.c_re_steps > 0 || cfg.c_im_steps > 0;
    if (grid_mode) {
        if (cfg.c_re_steps < 1 || cfg.c_im_steps < 1)
            throw DomainError("c-grid sweep needs positive step counts on both axes");
        MapSpec base = parse_map(cfg.map_text);
        int count = cfg.c_re_steps * cfg.c_im_steps;
        struct Row {
            double re, im;
            BasinDetection det;
        };
        std::vector<Row> rows(count);
        std::complex<double> z0 = parse_complex(cfg.z0_text);
        parallel_for(count, cfg.jobs, [&](int idx) {
            int iy = idx / cfg.c_re_steps, ix = idx % cfg.c_re_steps;
            double re = cfg.c_re_steps == 1
                            ? cfg.c_re_min
                            : cfg.c_re_min + (cfg.c_re_max - cfg.c_re_min) * ix / (cfg.c_re_steps - 1);
            double im = cfg.c_im_steps == 1
                            ? cfg.c_im_min
                            : cfg.c_im_min + (cfg.c_im_max - cfg.c_im_min) * iy / (cfg.c_im_steps - 1);
            MapSpec m = base;
            m.c = {re, im};
            rows[idx] = {re, im, detect_basin(m, z0, cfg.basin)};
        });
        CsvWriter w;
        w.header({"re_c", "im_c", "in_basin", "period", "abs_multiplier", "max_modulus"});
        for (const auto& r : rows) {
            w.field(r.re);
            w.field(r.im);
            w.field((long long)(r.det.in_basin ? 1 : 0));
            w.field((long long)(r.det.in_basin ? r.det.cycle.period : 0));
            if (r.det.in_basin) {
                w.field(std::abs(r.det.cycle.multiplier));
                w.field(r.det.cycle.max_modulus);
            } else {
                w.field_empty();
                w.field_empty();
            }
            w.end_row();
        }
        return w.str();
    }

    if (cfg.n_series.empty()) throw DomainError("sweep needs --n-series or a c-grid");
    std::vector<int> series = cfg.n_series;
    std::sort(series.begin(), series.end());
    MapSpec map = parse_map(cfg.map_text);

    // hypothesis gate once for the whole study
    BasinDetection basin = detect_basin(map, parse_complex(cfg.z0_text), cfg.basin);
    if (basin.in_basin)
        throw BasinDetected("z0 lies in the basin of an attracting cycle (period " +
                            std::to_string(basin.cycle.period) + ")");
    std::vector<Cycle> cycles = find_cycles(map, cfg.cycle_search);
    double mf = estimate_Mf(map, cycles);

    struct Row {
        int n;
        GeometryConstants g;
        double sum_m, chi, chi_win;
    };
    std::vector<Row> rows(series.size());
    parallel_for((int)series.size(), cfg.jobs, [&](int idx) {
        int n = series[idx];
        Orbit orbit = checked_orbit(cfg, map, n);
        GeometryConstants g = geometry_constants(map, orbit, mf);
        TelescopeResult tele = compute_tau(map, orbit, g, cfg.telescope_options());
        rows[idx] = {n, g, tele.sum_m, orbit.chi(), orbit.chi_window_min(cfg.chi_window)};
    });

    CsvWriter w;
    std::vector<std::string> cols = {"n",   "chi_n", "chi_window_min", "envelope", "delta_n",
                                     "D_n", "rho_n", "m_max",          "sum_m"};
    if (cfg.have_rate) cols.push_back("rate_ok");
    w.header(cols);
    for (const auto& r : rows) {
        w.field((long long)r.n);
        w.field(r.chi);
        w.field(r.chi_win);
        w.field(-std::log(r.g.rho_n) / r.n - r.sum_m / r.n);
        w.field(r.g.delta_n);
        w.field(r.g.D_n);
        w.field(r.g.rho_n);
        w.field(r.g.m_max);
        w.field(r.sum_m);
        if (cfg.have_rate) {
            double lhs = cfg.rate_bounded_sing ? r.g.delta_n : r.g.delta_n / r.g.D_n;
            bool ok = lhs >= cfg.kappa * std::pow(double(r.n), -cfg.beta);
            w.field((long long)(ok ? 1 : 0));
        }
        w.end_row();
    }
    return w.str();
}

} // namespace lyatel
