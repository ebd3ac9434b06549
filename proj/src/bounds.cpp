#include "lyatel/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "lyatel/conformal.hpp"
#include "nlohmann/json.hpp"

namespace lyatel {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

ClaimRecord check_m_max_cutoff(const TailDistribution& tail, const GeometryConstants& g,
                               bool bounded_type) {
    if (bounded_type && !g.S_f_present)
        throw DomainError("bounded-type cutoff needs a bounded singular set");
    ClaimRecord r;
    r.claim_id = bounded_type ? "m_max_cutoff_bounded_type" : "m_max_cutoff";
    double cap = bounded_type ? g.m_tilde_max : g.m_max;
    r.measured_margin = cap - tail.max_m();
    r.pass = r.measured_margin >= 0.0;
    r.inputs = {{"m_cap", cap}, {"max_m", tail.max_m()}};
    return r;
}

ClaimRecord check_packing_bound(const TailDistribution& tail, const GeometryConstants& g,
                                int grid_points, double grid_lo) {
    if (grid_points < 2) throw DomainError("packing grid needs >= 2 points");
    ClaimRecord r;
    r.claim_id = "packing_bound";
    double lo = std::log(grid_lo), hi = std::log(g.m_max);
    double worst = kInf;
    double worst_m = grid_lo;
    for (int k = 0; k < grid_points; ++k) {
        double m = std::exp(lo + (hi - lo) * k / (grid_points - 1));
        double a = alpha(m);
        double rhs = double(spacing_gap_E(m, g.rho_n)) * (g.rho_n * a) * (g.rho_n * a);
        double margin = rhs - tail.F(m);
        if (margin < worst) {
            worst = margin;
            worst_m = m;
        }
    }
    r.measured_margin = worst;
    r.pass = worst >= 0.0;
    r.inputs = {{"grid_points", double(grid_points)}, {"worst_m", worst_m}};
    return r;
}

ClaimRecord check_spacing(const Orbit& orbit, const TelescopeResult& tele,
                          const GeometryConstants& g, double m) {
    if (!(m > 0.0)) throw DomainError("check_spacing needs m > 0");
    ClaimRecord r;
    r.claim_id = "spacing";
    r.inputs = {{"m", m}};
    std::vector<int> idx;
    for (int i = 0; i < tele.n; ++i)
        if (tele.m[i] >= m) idx.push_back(i);
    if (idx.empty()) {
        r.vacuous = true;
        r.pass = true;
        r.measured_margin = 0.0;
        return r;
    }
    long long E = spacing_gap_E(m, g.rho_n);
    double bound = g.delta_n / (2.0 * alpha(m));
    double worst = kInf;
    int pairs = 0;
    for (size_t j = 0; j < idx.size(); ++j) {
        for (size_t k = j + 1; k < idx.size(); ++k) {
            if ((long long)(k - j) < E) continue;
            double dist = std::abs(orbit.z[idx[j] + 1] - orbit.z[idx[k] + 1]);
            worst = std::min(worst, dist - bound);
            ++pairs;
        }
    }
    r.inputs.push_back({"E", double(E)});
    r.inputs.push_back({"pairs", double(pairs)});
    if (pairs == 0) {
        r.vacuous = true;
        r.pass = true;
        r.measured_margin = 0.0;
        return r;
    }
    r.measured_margin = worst;
    r.pass = worst >= 0.0;
    return r;
}

ClaimRecord check_inner_disk(const MapSpec& map, const Orbit& orbit, const TelescopeResult& tele,
                             const GeometryConstants& g, int i, const TelescopeOptions& opt) {
    if (i < 0 || i >= tele.n) throw DomainError("check_inner_disk index out of range");
    ClaimRecord r;
    r.claim_id = "inner_disk[i=" + std::to_string(i) + "]";
    r.inputs = {{"i", double(i)}, {"m_i", tele.m[i]}};
    if (!(tele.m[i] > 0.0)) {
        r.vacuous = true;
        r.pass = true;
        return r;
    }
    // d f(U_i) is the pullback of dB(z_n, tau_i) to level i+1
    double dist = boundary_distance(map, orbit, tele.tau[i], i + 1, orbit.z[i + 1], opt);
    double need = g.delta_n / alpha(tele.m[i]);
    r.measured_margin = dist - need;
    r.pass = r.measured_margin >= 0.0;
    r.inputs.push_back({"distance", dist});
    r.inputs.push_back({"required", need});
    return r;
}

ClaimRecord check_orbit_bound_Dm(const Orbit& orbit, const TelescopeResult& tele,
                                 const GeometryConstants& g) {
    if (!g.S_f_present) throw DomainError("D(m) bound needs a bounded singular set");
    ClaimRecord r;
    r.claim_id = "orbit_bound_Dm";
    double worst = kInf;
    int checked = 0;
    for (int i = 0; i < tele.n; ++i) {
        if (!(tele.m[i] > 0.0)) continue;
        double dm = orbit_bound_D(tele.m[i], g.M_f, g.S_f);
        worst = std::min(worst, dm - std::abs(orbit.z[i + 1]));
        ++checked;
    }
    r.inputs = {{"checked", double(checked)}};
    if (checked == 0) {
        r.vacuous = true;
        r.pass = true;
        r.measured_margin = 0.0;
        return r;
    }
    r.measured_margin = worst;
    r.pass = worst >= 0.0;
    return r;
}

ClaimRecord base_derivative_bound(const Orbit& orbit, const TelescopeResult& tele,
                                  const GeometryConstants& g) {
    ClaimRecord r;
    r.claim_id = "base_derivative_bound";
    double lhs = orbit.sum_log_deriv();
    double rhs = -std::log(g.rho_n) - tele.sum_m;
    r.measured_margin = lhs - rhs;
    r.pass = r.measured_margin >= 0.0;
    r.inputs = {{"log_deriv", lhs}, {"log_rhs", rhs}};
    return r;
}

IntegralSplit integral_split(const TailDistribution& tail, const GeometryConstants& g,
                             const BoundParams& params, int n) {
    if (n < 1) throw DomainError("integral_split needs n >= 1");
    IntegralSplit s;
    double a_n = 0.0;
    switch (params.a_n_rule) {
        case AnRule::PowerFifth:
            a_n = std::pow(double(n), -0.2);
            break;
        case AnRule::InverseLog:
            if (n < 2) throw DomainError("InverseLog rule needs n >= 2");
            a_n = 1.0 / std::log(double(n));
            break;
        case AnRule::InverseLogLog:
            if (n < 3) throw DomainError("InverseLogLog rule needs n >= 3");
            a_n = params.c6 / std::log(std::log(double(n)));
            break;
    }
    s.a_n = a_n;
    double a_eff = std::min(a_n, 2.0); // keep the four parts a partition
    double mm = g.m_max;
    bool tilde = params.a_n_rule == AnRule::InverseLogLog;
    if (tilde && !g.S_f_present) throw DomainError("InverseLogLog rule needs a bounded singular set");
    double rho = tilde ? g.rho_tilde_n : g.rho_n;
    double mcap = tilde ? g.m_tilde_max : g.m_max;
    mm = mcap;

    SplitPart p1;
    p1.interval = "[m_max,inf)";
    p1.lo = mm;
    p1.hi = kInf;
    p1.empirical = tail.integral() - tail.integral_over(0.0, mm);
    p1.cap = 0.0;
    p1.pass = p1.empirical <= p1.cap;
    s.parts.push_back(p1);

    SplitPart p2;
    p2.interval = "[2,m_max)";
    p2.lo = 2.0;
    p2.hi = mm;
    p2.empirical = tail.integral_over(2.0, mm);
    if (!tilde) {
        p2.cap = 30.0 * (rho * std::log(rho)) * (rho * std::log(rho));
        p2.constant_free = true;
    } else {
        // c5 (rho~ log rho~)^2
        double unit = (rho * std::log(rho)) * (rho * std::log(rho));
        p2.cap = params.c5 * unit;
        p2.constant_free = false;
        p2.min_constant = p2.empirical / unit;
    }
    p2.pass = p2.empirical <= p2.cap;
    s.parts.push_back(p2);

    SplitPart p3;
    p3.interval = "[a_n,2)";
    p3.lo = a_eff;
    p3.hi = 2.0;
    p3.empirical = tail.integral_over(a_eff, 2.0);
    p3.constant_free = false;
    double unit3 = 0.0;
    switch (params.a_n_rule) {
        case AnRule::PowerFifth:
            unit3 = 2.0 * rho * rho * std::pow(double(n), 0.8) *
                    std::log(rho * std::pow(double(n), 0.2));
            break;
        case AnRule::InverseLog: {
            double ln = std::log(double(n));
            unit3 = 2.0 * rho * rho * ln * ln * ln * ln * std::log(rho * ln);
            break;
        }
        case AnRule::InverseLogLog:
            // c6^{-1} rho~^2 log(rho~) e^{c6/a_n}; with a_n = c6/loglog n this is log n
            unit3 = rho * rho * std::log(rho) * std::exp(params.c6 / a_n) / params.c6;
            break;
    }
    double c3const = params.a_n_rule == AnRule::InverseLogLog ? 1.0 : params.c1;
    p3.cap = c3const * unit3;
    p3.min_constant = unit3 > 0.0 ? p3.empirical / unit3 : 0.0;
    p3.pass = p3.empirical <= p3.cap;
    s.parts.push_back(p3);

    SplitPart p4;
    p4.interval = "(0,a_n)";
    p4.lo = 0.0;
    p4.hi = a_eff;
    p4.empirical = tail.integral_over(0.0, a_eff);
    p4.cap = double(tail.n) * a_n; // F <= n everywhere
    p4.pass = p4.empirical <= p4.cap;
    s.parts.push_back(p4);

    s.parts_sum = p1.empirical + p2.empirical + p3.empirical + p4.empirical;
    s.sum_m = tail.plain_sum;
    return s;
}

double theorem_rhs(const GeometryConstants& g, const BoundParams& params, double n,
                   TheoremVariant variant, double abs_z0) {
    if (!(params.gamma > 0.0 && params.gamma < 1.0)) throw DomainError("gamma must be in (0,1)");
    if (!(params.C_abs > 0.0)) throw DomainError("C_abs must be positive");
    if (variant == TheoremVariant::Thm14) {
        if (!(n >= 1.0)) throw DomainError("Thm14 needs n >= 1");
        double ge = params.gamma;
        return -std::log(g.rho_n) - params.C_abs / (ge * ge) * std::pow(g.rho_n, 2.0 + ge) *
                                        std::pow(n, (4.0 + ge) / 5.0);
    }
    if (!g.S_f_present) throw DomainError("Thm31 needs a bounded singular set");
    if (!(n > 1.0)) throw DomainError("Thm31 needs n > 1");
    double rl = g.rho_tilde_n * std::log(g.rho_tilde_n);
    return std::log(0.25 * g.delta_n / (g.M_f + abs_z0)) -
           params.C_abs * rl * rl * n / std::log(n);
}

double min_C_thm14(const GeometryConstants& g, const BoundParams& params, double n, double sum_m) {
    double ge = params.gamma;
    double denom = std::pow(g.rho_n, 2.0 + ge) * std::pow(n, (4.0 + ge) / 5.0) / (ge * ge);
    return sum_m / denom;
}

std::vector<EnvelopePoint> chi_lower_envelope(const std::vector<EnvelopeInput>& series) {
    std::vector<EnvelopePoint> out;
    out.reserve(series.size());
    for (const auto& e : series) {
        EnvelopePoint p;
        p.n = e.n;
        p.envelope = -std::log(e.constants.rho_n) / e.n - e.sum_m / e.n;
        p.chi_n = e.chi_n;
        p.chi_window_min = e.chi_window_min;
        out.push_back(p);
    }
    return out;
}

double remark_rate_exponent(double beta, double gamma) {
    return -0.2 + 2.0 * beta + gamma * (beta + 0.2);
}

double remark_rate_gamma_threshold(double beta) {
    if (!(beta < 0.1)) throw DomainError("gamma threshold needs beta < 1/10");
    return (1.0 - 10.0 * beta) / (1.0 + 5.0 * beta);
}

bool BoundReport::all_constant_free_pass() const {
    for (const auto& c : claims)
        if (c.constant_free && !c.vacuous && !c.pass) return false;
    for (const auto& p : split.parts)
        if (p.constant_free && !p.pass) return false;
    return true;
}

std::string bound_report_json(const BoundReport& report) {
    using J = nlohmann::ordered_json;
    J j;
    j["map"] = report.map;
    j["z0"] = report.z0;
    j["n"] = report.n;
    j["M_f_provenance"] = report.mf_provenance == MfProvenance::Exact ? "Exact" : "UpperBound";
    J g;
    g["delta_n"] = report.constants.delta_n;
    g["D_n"] = report.constants.D_n;
    g["M_f"] = report.constants.M_f;
    g["S_f"] = report.constants.S_f_present ? J(report.constants.S_f) : J(nullptr);
    g["rho_n"] = report.constants.rho_n;
    g["rho_tilde_n"] = report.constants.S_f_present ? J(report.constants.rho_tilde_n) : J(nullptr);
    g["m_max"] = report.constants.m_max;
    g["m_tilde_max"] = report.constants.S_f_present ? J(report.constants.m_tilde_max) : J(nullptr);
    j["constants"] = g;

    J claims = J::array();
    for (const auto& c : report.claims) {
        J item;
        item["claim_id"] = c.claim_id;
        J inputs;
        for (const auto& [k, v] : c.inputs) inputs[k] = v;
        item["inputs"] = inputs;
        item["measured_margin"] = c.measured_margin;
        item["pass"] = c.pass;
        item["vacuous"] = c.vacuous;
        item["constant_free"] = c.constant_free;
        item["M_f_provenance"] = c.mf_provenance == MfProvenance::Exact ? "Exact" : "UpperBound";
        claims.push_back(item);
    }
    j["claims"] = claims;

    J split;
    split["a_n"] = report.split.a_n;
    J parts = J::array();
    for (const auto& p : report.split.parts) {
        J item;
        item["interval"] = p.interval;
        item["empirical"] = p.empirical;
        item["cap"] = std::isfinite(p.cap) ? J(p.cap) : J("inf");
        item["pass"] = p.pass;
        item["constant_free"] = p.constant_free;
        if (!p.constant_free) item["min_constant"] = p.min_constant;
        parts.push_back(item);
    }
    split["parts"] = parts;
    split["parts_sum"] = report.split.parts_sum;
    split["sum_m"] = report.split.sum_m;
    j["integral_split"] = split;

    J fin;
    fin["log_deriv_measured"] = report.log_deriv_measured;
    fin["chi_n"] = report.chi_n;
    fin["sum_m"] = report.sum_m;
    fin["base_der_bound_rhs"] = report.base_der_bound_log_rhs;
    fin["thm14_rhs"] = report.thm14_log_rhs;
    fin["thm31_rhs"] = report.thm31_present ? J(report.thm31_log_rhs) : J(nullptr);
    fin["min_C_thm14"] = report.min_C_14;
    fin["min_c1_split"] = report.min_c1_split;
    fin["koebe_log_margin"] = report.koebe_log_margin;
    fin["all_constant_free_pass"] = report.all_constant_free_pass();
    j["final"] = fin;
    return j.dump(2) + "\n";
}

} // namespace lyatel
