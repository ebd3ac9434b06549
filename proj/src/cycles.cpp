#include "lyatel/cycles.hpp"

#include <algorithm>
#include <cmath>

#include "lyatel/csv.hpp"
#include "nlohmann/json.hpp"

namespace lyatel {

namespace {

using C = std::complex<double>;

// f^p(z) and d/dz f^p(z) by the chain rule.
struct IterVal {
    C value;
    C deriv;
    bool finite;
};

IterVal iterate_with_deriv(const MapSpec& map, C z, int p) {
    C v = z, d = 1.0;
    for (int k = 0; k < p; ++k) {
        d *= deriv(map, v);
        v = eval(map, v);
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag()) ||
            !std::isfinite(d.real()) || !std::isfinite(d.imag()))
            return {v, d, false};
    }
    return {v, d, true};
}

// Damped Newton on g(z) = f^p(z) - z. Returns true on residual < tol.
bool refine_periodic(const MapSpec& map, int p, C& z, const CycleSearchOptions& opt) {
    double bail = 16.0 * opt.box_radius + 16.0;
    for (int it = 0; it < opt.max_newton_iter; ++it) {
        IterVal fv = iterate_with_deriv(map, z, p);
        if (!fv.finite || std::abs(z) > bail) return false;
        C g = fv.value - z;
        double res = std::abs(g);
        if (res < opt.accept_residual) return true;
        C gp = fv.deriv - 1.0;
        if (std::abs(gp) < 1e-300) return false;
        C step = g / gp;
        // damp until the residual actually drops
        double lambda = 1.0;
        bool moved = false;
        for (int h = 0; h < 30; ++h) {
            C zn = z - lambda * step;
            IterVal fn = iterate_with_deriv(map, zn, p);
            if (fn.finite && std::abs(fn.value - zn) < res) {
                z = zn;
                moved = true;
                break;
            }
            lambda *= 0.5;
        }
        if (!moved) return false;
    }
    IterVal fv = iterate_with_deriv(map, z, p);
    return fv.finite && std::abs(fv.value - z) < opt.accept_residual;
}

bool lex_less(const C& a, const C& b) {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
}

} // namespace

std::vector<Cycle> find_cycles(const MapSpec& map, const CycleSearchOptions& opt) {
    if (opt.max_period < 1) throw DomainError("find_cycles needs max_period >= 1");
    if (opt.grid_density < 2) throw DomainError("find_cycles needs grid_density >= 2");

    std::vector<Cycle> cycles;
    auto near_existing = [&](const C& z, int period) {
        for (const auto& cy : cycles) {
            if (cy.period != period) continue;
            for (const auto& q : cy.points)
                if (std::abs(q - z) < opt.dedup_tol * (1.0 + std::abs(q))) return true;
        }
        return false;
    };

    for (int p = 1; p <= opt.max_period; ++p) {
        for (int iy = 0; iy < opt.grid_density; ++iy) {
            for (int ix = 0; ix < opt.grid_density; ++ix) {
                double fx = (ix + 0.5) / opt.grid_density;
                double fy = (iy + 0.5) / opt.grid_density;
                C z{-opt.box_radius + 2.0 * opt.box_radius * fx,
                    -opt.box_radius + 2.0 * opt.box_radius * fy};
                if (!refine_periodic(map, p, z, opt)) continue;

                // minimal period of the refined point
                int q = p;
                for (int cand = 1; cand < p; ++cand) {
                    if (p % cand != 0) continue;
                    IterVal fv = iterate_with_deriv(map, z, cand);
                    if (fv.finite && std::abs(fv.value - z) < 1e3 * opt.accept_residual * (1.0 + std::abs(z))) {
                        q = cand;
                        break;
                    }
                }
                if (q < p) continue; // already discovered at its own period
                if (near_existing(z, p)) continue;

                Cycle cy;
                cy.period = p;
                C w = z;
                bool ok = true;
                for (int k = 0; k < p; ++k) {
                    cy.points.push_back(w);
                    w = eval(map, w);
                    if (!std::isfinite(w.real()) || !std::isfinite(w.imag())) ok = false;
                }
                if (!ok || std::abs(w - z) > 1e2 * opt.accept_residual * (1.0 + std::abs(z))) continue;
                C mult = 1.0;
                double mm = 0.0;
                for (const auto& q2 : cy.points) {
                    mult *= deriv(map, q2);
                    mm = std::max(mm, std::abs(q2));
                }
                cy.multiplier = mult;
                cy.max_modulus = mm;
                // canonical rotation: start at the lexicographically least point
                size_t lead = 0;
                for (size_t k = 1; k < cy.points.size(); ++k)
                    if (lex_less(cy.points[k], cy.points[lead])) lead = k;
                std::rotate(cy.points.begin(), cy.points.begin() + lead, cy.points.end());
                cycles.push_back(std::move(cy));
            }
        }
    }
    if (cycles.empty()) throw NoCycleFound("no cycle found; widen the box or grid");
    std::sort(cycles.begin(), cycles.end(), [](const Cycle& a, const Cycle& b) {
        if (a.period != b.period) return a.period < b.period;
        return lex_less(a.points[0], b.points[0]);
    });
    return cycles;
}

double estimate_Mf(const MapSpec& /*map*/, const std::vector<Cycle>& cycles) {
    if (cycles.empty()) throw DomainError("estimate_Mf needs at least one cycle");
    double best = cycles[0].max_modulus;
    for (const auto& cy : cycles) best = std::min(best, cy.max_modulus);
    return best + 1.0;
}

BasinDetection detect_basin(const MapSpec& map, std::complex<double> z0, const BasinOptions& opt) {
    BasinDetection out;
    std::vector<C> orbit;
    orbit.reserve(opt.max_iter + 1);
    orbit.push_back(z0);
    for (int i = 0; i < opt.max_iter; ++i) {
        C zn = eval(map, orbit.back());
        if (!std::isfinite(zn.real()) || !std::isfinite(zn.imag()) || std::abs(zn) > opt.escape_radius)
            return out; // escaped: nothing detected
        orbit.push_back(zn);
    }

    int N = (int)orbit.size();
    for (int p = 1; p <= opt.max_period; ++p) {
        int need = (opt.stable_blocks + 1) * p;
        if (need + p > N) break;
        bool stable = true;
        for (int k = N - need; k + p < N; ++k) {
            if (std::abs(orbit[k + p] - orbit[k]) >= opt.block_tol) {
                stable = false;
                break;
            }
        }
        if (!stable) continue;

        // polish the cycle and check it really attracts
        CycleSearchOptions ropt;
        ropt.max_newton_iter = 100;
        ropt.accept_residual = 1e-13;
        ropt.box_radius = std::abs(orbit.back()) + 1.0;
        C z = orbit[N - 1];
        if (!refine_periodic(map, p, z, ropt)) continue;

        int q = p;
        for (int cand = 1; cand < p; ++cand) {
            if (p % cand != 0) continue;
            IterVal fv = iterate_with_deriv(map, z, cand);
            if (fv.finite && std::abs(fv.value - z) < 1e-10 * (1.0 + std::abs(z))) {
                q = cand;
                break;
            }
        }

        Cycle cy;
        cy.period = q;
        C w = z;
        C mult = 1.0;
        double mm = 0.0;
        for (int k = 0; k < q; ++k) {
            cy.points.push_back(w);
            mult *= deriv(map, w);
            mm = std::max(mm, std::abs(w));
            w = eval(map, w);
        }
        cy.multiplier = mult;
        cy.max_modulus = mm;
        if (std::abs(mult) < 1.0 - opt.attracting_margin) {
            size_t lead = 0;
            for (size_t k = 1; k < cy.points.size(); ++k)
                if (lex_less(cy.points[k], cy.points[lead])) lead = k;
            std::rotate(cy.points.begin(), cy.points.begin() + lead, cy.points.end());
            out.in_basin = true;
            out.cycle = cy;
            return out;
        }
    }
    return out;
}

std::string cycles_json(const std::vector<Cycle>& cycles) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& cy : cycles) {
        nlohmann::ordered_json item;
        item["period"] = cy.period;
        auto pts = nlohmann::ordered_json::array();
        for (const auto& p : cy.points) pts.push_back({p.real(), p.imag()});
        item["points"] = pts;
        item["multiplier"] = {cy.multiplier.real(), cy.multiplier.imag()};
        item["max_modulus"] = cy.max_modulus;
        arr.push_back(item);
    }
    return arr.dump(2) + "\n";
}

} // namespace lyatel
