#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "lyatel/conformal.hpp"
#include "lyatel/pipeline.hpp"

namespace py = pybind11;
using namespace lyatel;

namespace {

RunConfig make_config(const std::string& map, const std::string& z0, int n, int samples,
                      double bisect_tol, int precision_bits, double gamma, double C_abs,
                      const std::string& a_n_rule, int max_period, double box, int grid) {
    RunConfig cfg;
    cfg.map_text = map;
    cfg.z0_text = z0;
    cfg.n = n;
    cfg.samples = samples;
    cfg.bisect_tol = bisect_tol;
    cfg.precision_bits = precision_bits;
    cfg.bounds.gamma = gamma;
    cfg.bounds.C_abs = C_abs;
    if (a_n_rule == "power5")
        cfg.bounds.a_n_rule = AnRule::PowerFifth;
    else if (a_n_rule == "invlog")
        cfg.bounds.a_n_rule = AnRule::InverseLog;
    else if (a_n_rule == "invloglog")
        cfg.bounds.a_n_rule = AnRule::InverseLogLog;
    else
        throw DomainError("unknown a_n rule '" + a_n_rule + "'");
    cfg.cycle_search.max_period = max_period;
    cfg.cycle_search.box_radius = box;
    cfg.cycle_search.grid_density = grid;
    return cfg;
}

} // namespace

PYBIND11_MODULE(lyatel, m) {
    m.doc() = "pullback telescopes and pointwise Lyapunov lower bounds for holomorphic maps";

    py::register_exception<DomainError>(m, "DomainError");
    py::register_exception<ParseError>(m, "MapParseError");
    py::register_exception<DegenerateOrbit>(m, "DegenerateOrbitError");
    py::register_exception<BasinDetected>(m, "BasinDetectedError");
    py::register_exception<PrecisionExhausted>(m, "PrecisionExhaustedError");
    py::register_exception<SingularCrossed>(m, "SingularCrossedError");

    py::class_<MapSpec>(m, "MapSpec")
        .def_readonly("degree", &MapSpec::degree)
        .def_readonly("a", &MapSpec::a)
        .def_readonly("c", &MapSpec::c)
        .def_property_readonly("family",
                               [](const MapSpec& s) {
                                   return s.family == MapFamily::UnicriticalPoly ? "poly" : "exp";
                               })
        .def("__repr__", [](const MapSpec& s) { return "MapSpec('" + format_map(s) + "')"; });

    m.def("parse_map", &parse_map, py::arg("text"));
    m.def("format_map", &format_map);
    m.def("eval", [](const MapSpec& f, std::complex<double> z) { return eval(f, z); });
    m.def("deriv", [](const MapSpec& f, std::complex<double> z) { return deriv(f, z); });
    m.def("singular_set", [](const MapSpec& f) {
        SingularSet s = singular_set(f);
        return py::make_tuple(s.points, s.S_f);
    });
    m.def(
        "pull_back_step",
        [](const MapSpec& f, std::complex<double> current, std::complex<double> target) {
            return pull_back_step(f, InverseBranchState{current, 0}, target).current_point;
        },
        py::arg("map"), py::arg("current"), py::arg("target"));

    py::class_<Orbit>(m, "Orbit")
        .def_readonly("z", &Orbit::z)
        .def_readonly("log_abs_deriv", &Orbit::log_abs_deriv)
        .def_readonly("chi_prefix", &Orbit::chi_prefix)
        .def_property_readonly("status",
                               [](const Orbit& o) {
                                   switch (o.status) {
                                       case OrbitStatus::Complete: return "complete";
                                       case OrbitStatus::Overflowed: return "overflowed";
                                       default: return "hit_singular";
                                   }
                               })
        .def_property_readonly("chi", &Orbit::chi)
        .def("chi_window_min", &Orbit::chi_window_min, py::arg("window") = 0)
        .def_property_readonly("n", &Orbit::steps);

    m.def(
        "iterate",
        [](const MapSpec& f, std::complex<double> z0, int n, double escape_radius) {
            IterateOptions opt;
            opt.escape_radius = escape_radius;
            return iterate(f, z0, n, opt);
        },
        py::arg("map"), py::arg("z0"), py::arg("n"), py::arg("escape_radius") = 1e100);

    py::class_<GeometryConstants>(m, "GeometryConstants")
        .def_readonly("delta_n", &GeometryConstants::delta_n)
        .def_readonly("D_n", &GeometryConstants::D_n)
        .def_readonly("M_f", &GeometryConstants::M_f)
        .def_readonly("S_f", &GeometryConstants::S_f)
        .def_readonly("rho_n", &GeometryConstants::rho_n)
        .def_readonly("rho_tilde_n", &GeometryConstants::rho_tilde_n)
        .def_readonly("m_max", &GeometryConstants::m_max)
        .def_readonly("m_tilde_max", &GeometryConstants::m_tilde_max);
    m.def("geometry_constants", &geometry_constants, py::arg("map"), py::arg("orbit"),
          py::arg("M_f"));

    py::class_<Cycle>(m, "Cycle")
        .def_readonly("points", &Cycle::points)
        .def_readonly("period", &Cycle::period)
        .def_readonly("multiplier", &Cycle::multiplier)
        .def_readonly("max_modulus", &Cycle::max_modulus);

    m.def(
        "find_cycles",
        [](const MapSpec& f, int max_period, double box_radius, int grid_density) {
            CycleSearchOptions opt;
            opt.max_period = max_period;
            opt.box_radius = box_radius;
            opt.grid_density = grid_density;
            return find_cycles(f, opt);
        },
        py::arg("map"), py::arg("max_period") = 4, py::arg("box_radius") = 4.0,
        py::arg("grid_density") = 64);
    m.def("estimate_Mf", &estimate_Mf, py::arg("map"), py::arg("cycles"));
    m.def(
        "detect_basin",
        [](const MapSpec& f, std::complex<double> z0) -> py::object {
            BasinDetection det = detect_basin(f, z0);
            if (!det.in_basin) return py::none();
            return py::cast(det.cycle);
        },
        py::arg("map"), py::arg("z0"));

    // conformal-geometry closed forms
    m.def("lambda_brackets", [](double R) {
        LambdaBracket b = lambda_brackets(R);
        return py::make_tuple(b.lower, b.upper);
    });
    m.def("separation_factor", [](double mm) {
        SeparationBound s = separation_factor(mm);
        return py::make_tuple(s.factor,
                              s.active == SeparationBranch::Exponential ? "exponential" : "reciprocal");
    });
    m.def("alpha", &alpha, py::arg("m"));
    m.def("spacing_gap_E", &spacing_gap_E, py::arg("m"), py::arg("rho"));
    m.def("orbit_bound_D", &orbit_bound_D, py::arg("m"), py::arg("M_f"), py::arg("S_f"));
    m.def("koebe_distortion_envelope", [](double w) {
        auto [lo, hi] = koebe_distortion_envelope(w);
        return py::make_tuple(lo, hi);
    });

    py::class_<TelescopeResult>(m, "TelescopeResult")
        .def_readonly("n", &TelescopeResult::n)
        .def_readonly("precision_bits", &TelescopeResult::precision_bits)
        .def_readonly("tau", &TelescopeResult::tau)
        .def_readonly("log_tau", &TelescopeResult::log_tau)
        .def_readonly("m", &TelescopeResult::m)
        .def_readonly("sum_m", &TelescopeResult::sum_m)
        .def_readonly("koebe_log_margin", &TelescopeResult::koebe_log_margin);

    m.def(
        "compute_tau",
        [](const MapSpec& f, const Orbit& orbit, const GeometryConstants& g, int samples,
           double bisect_tol, int precision_bits) {
            TelescopeOptions opt;
            opt.samples = samples;
            opt.bisect_tol = bisect_tol;
            opt.precision_bits = precision_bits;
            return compute_tau(f, orbit, g, opt);
        },
        py::arg("map"), py::arg("orbit"), py::arg("constants"), py::arg("samples") = 256,
        py::arg("bisect_tol") = 1e-10, py::arg("precision_bits") = 53);

    py::class_<TailDistribution>(m, "TailDistribution")
        .def_readonly("n", &TailDistribution::n)
        .def("F", &TailDistribution::F, py::arg("m"))
        .def_property_readonly("max_m", &TailDistribution::max_m)
        .def("integral", &TailDistribution::integral)
        .def("integral_over", &TailDistribution::integral_over, py::arg("a"), py::arg("b"));
    m.def("tail_distribution", &tail_distribution);
    m.def("tail_from_values", &tail_from_values);

    m.def(
        "trace_pullback",
        [](const MapSpec& f, const Orbit& orbit, int from_level, int to_level, double radius,
           int samples) {
            TelescopeOptions opt;
            opt.samples = samples;
            auto regions = trace_pullback(f, orbit, from_level, to_level, radius, opt);
            py::list out;
            for (const auto& reg : regions)
                out.append(py::make_tuple(reg.level, reg.center, reg.boundary));
            return out;
        },
        py::arg("map"), py::arg("orbit"), py::arg("from_level"), py::arg("to_level"),
        py::arg("radius"), py::arg("samples") = 256);

    m.def(
        "verify_report",
        [](const std::string& map, const std::string& z0, int n, int samples, double bisect_tol,
           int precision_bits, double gamma, double C_abs, const std::string& a_n_rule,
           int max_period, double box, int grid) {
            RunConfig cfg = make_config(map, z0, n, samples, bisect_tol, precision_bits, gamma,
                                        C_abs, a_n_rule, max_period, box, grid);
            return bound_report_json(run_verify(cfg));
        },
        py::arg("map"), py::arg("z0"), py::arg("n"), py::arg("samples") = 256,
        py::arg("bisect_tol") = 1e-10, py::arg("precision_bits") = 53, py::arg("gamma") = 0.5,
        py::arg("C_abs") = 1.0, py::arg("a_n_rule") = "power5", py::arg("max_period") = 4,
        py::arg("box") = 4.0, py::arg("grid") = 64);

    m.def("remark_rate_exponent", &remark_rate_exponent, py::arg("beta"), py::arg("gamma"));
    m.def("remark_rate_gamma_threshold", &remark_rate_gamma_threshold, py::arg("beta"));

    m.attr("__version__") = "0.1.0";
}
