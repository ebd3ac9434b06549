#include "lyatel/orbit.hpp"

#include <algorithm>
#include <cmath>

#include "lyatel/csv.hpp"

namespace lyatel {

double Orbit::chi_window_min(int window) const {
    int n = steps();
    if (n == 0) return 0.0;
    if (window <= 0) window = std::max(1, n / 10);
    window = std::min(window, n);
    double m = chi_prefix[n];
    for (int k = n - window + 1; k <= n; ++k) m = std::min(m, chi_prefix[k]);
    return m;
}

Orbit iterate(const MapSpec& map, std::complex<double> z0, int n, const IterateOptions& opt) {
    if (n < 1) throw DomainError("iterate needs n >= 1");
    Orbit o;
    o.map = map;
    o.z0 = z0;
    o.n_requested = n;
    o.z.reserve(n + 1);
    o.log_abs_deriv.reserve(n);
    o.chi_prefix.reserve(n + 1);
    o.z.push_back(z0);
    o.chi_prefix.push_back(0.0);

    SingularSet sing = singular_set(map);
    double sum = 0.0;
    for (int i = 0; i < n; ++i) {
        std::complex<double> zi = o.z.back();
        for (const auto& s : sing.points) {
            if (std::abs(zi - s) <= opt.singular_hit_tol * (1.0 + std::abs(s))) {
                o.status = OrbitStatus::HitSingular;
                o.fail_step = i;
                return o;
            }
        }
        std::complex<double> zn = eval(map, zi);
        if (!std::isfinite(zn.real()) || !std::isfinite(zn.imag()) || std::abs(zn) > opt.escape_radius) {
            o.status = OrbitStatus::Overflowed;
            o.fail_step = i + 1;
            return o;
        }
        double ld = std::log(std::abs(deriv(map, zi)));
        sum += ld;
        o.z.push_back(zn);
        o.log_abs_deriv.push_back(ld);
        o.chi_prefix.push_back(sum / (i + 1));
    }
    return o;
}

GeometryConstants geometry_constants(const MapSpec& map, const Orbit& orbit, double M_f) {
    if (M_f < 1.0) throw DomainError("M_f must be >= 1");
    if (orbit.status == OrbitStatus::HitSingular)
        throw DegenerateOrbit("orbit passes through the singular set (delta_n = 0)");
    SingularSet sing = singular_set(map);

    GeometryConstants g;
    g.M_f = M_f;
    g.S_f_present = sing.bounded;
    g.S_f = sing.S_f;

    double dmin = 0.5;
    double zmax = 0.0;
    for (const auto& z : orbit.z) {
        zmax = std::max(zmax, std::abs(z));
        for (const auto& s : sing.points) dmin = std::min(dmin, std::abs(z - s));
    }
    if (dmin <= 0.0) throw DegenerateOrbit("orbit passes through the singular set (delta_n = 0)");
    g.delta_n = dmin;
    g.D_n = zmax + 1.0;
    g.rho_n = 4.0 * (g.D_n + g.M_f) / g.delta_n;
    g.m_max = 2.0 + std::log(g.rho_n);
    if (g.S_f_present) {
        g.rho_tilde_n = 4.0 * (g.S_f + g.M_f) / g.delta_n;
        g.m_tilde_max = 2.0 + std::log(g.rho_tilde_n);
        if (g.rho_tilde_n < 16.0) throw Error("internal: rho_tilde_n < 16");
    }
    if (g.rho_n < 16.0) throw Error("internal: rho_n < 16");
    return g;
}

SlowDecayResult slow_decay_check(const std::vector<std::pair<int, GeometryConstants>>& series,
                                 double kappa, double beta, bool bounded_singular_set) {
    if (!(kappa > 0.0)) throw DomainError("slow_decay_check needs kappa > 0");
    if (!(beta < 0.5)) throw DomainError("slow_decay_check needs beta < 1/2");
    SlowDecayResult r;
    for (const auto& [n, g] : series) {
        double lhs = bounded_singular_set ? g.delta_n : g.delta_n / g.D_n;
        if (lhs < kappa * std::pow(double(n), -beta)) {
            r.ok = false;
            r.first_violation_n = n;
            return r;
        }
    }
    return r;
}

std::string orbit_csv(const MapSpec& map, const Orbit& orbit) {
    SingularSet sing = singular_set(map);
    CsvWriter w;
    w.header({"i", "re_z", "im_z", "log_abs_deriv", "chi_i", "delta_i", "D_i"});
    double dmin = 0.5, zmax = 0.0;
    for (size_t i = 0; i < orbit.z.size(); ++i) {
        const auto& z = orbit.z[i];
        zmax = std::max(zmax, std::abs(z));
        for (const auto& s : sing.points) dmin = std::min(dmin, std::abs(z - s));
        w.field((long long)i);
        w.field(z.real());
        w.field(z.imag());
        if ((int)i < orbit.steps())
            w.field(orbit.log_abs_deriv[i]);
        else
            w.field_empty();
        w.field(orbit.chi_prefix[std::min(i, orbit.chi_prefix.size() - 1)]);
        w.field(dmin);
        w.field(zmax + 1.0);
        w.end_row();
    }
    return w.str();
}

} // namespace lyatel
