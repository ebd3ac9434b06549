#include <algorithm>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "lyatel/pipeline.hpp"
#include "nlohmann/json.hpp"

using namespace lyatel;

namespace {

// Exit codes: 0 pass, 1 failed checks, 2 usage/config error,
// 3 hypothesis failure (basin/degenerate), 4 numerical failure.
constexpr int kExitUsage = 2;
constexpr int kExitHypothesis = 3;
constexpr int kExitNumerical = 4;

void write_output(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DomainError("cannot open output file '" + path + "'");
    out << text;
}

struct CommonFlags {
    std::string out;
};

std::string strip_ws(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r");
    size_t b = s.find_last_not_of(" \t\r");
    if (a == std::string::npos) return "";
    return s.substr(a, b - a + 1);
}

// Flat key=value config file -> argv tokens, inserted right after the
// subcommand so explicit flags (which come later) override file values.
std::vector<std::string> expand_config(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    std::string path;
    for (size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config") {
            if (i + 1 >= args.size()) throw ParseError("--config needs a file path");
            path = args[i + 1];
            args.erase(args.begin() + i, args.begin() + i + 2);
            break;
        }
        if (args[i].rfind("--config=", 0) == 0) {
            path = args[i].substr(9);
            args.erase(args.begin() + i);
            break;
        }
    }
    if (path.empty()) return args;
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open config file '" + path + "'");
    std::vector<std::string> injected;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string t = strip_ws(line);
        if (t.empty() || t[0] == '#') continue;
        size_t eq = t.find('=');
        if (eq == std::string::npos)
            throw ParseError("config line " + std::to_string(lineno) + " is not key=value: '" + t + "'");
        injected.push_back("--" + strip_ws(t.substr(0, eq)));
        injected.push_back(strip_ws(t.substr(eq + 1)));
    }
    size_t pos = (!args.empty() && !args[0].empty() && args[0][0] != '-') ? 1 : 0;
    args.insert(args.begin() + pos, injected.begin(), injected.end());
    return args;
}

void add_map_options(CLI::App* cmd, RunConfig& cfg, bool with_orbit) {
    cmd->add_option("--map", cfg.map_text, "map spec: poly:d=<int>,c=<re>[+<im>i] or exp:a=...,c=...")
        ->required();
    if (with_orbit) {
        cmd->add_option("--z0", cfg.z0_text, "initial point <re>[+<im>i]")->capture_default_str();
        cmd->add_option("--escape-radius", cfg.escape_radius, "orbit overflow radius")
            ->capture_default_str();
    }
}

void add_telescope_options(CLI::App* cmd, RunConfig& cfg) {
    cmd->add_option("--samples", cfg.samples, "initial circle samples")->capture_default_str();
    cmd->add_option("--bisect-tol", cfg.bisect_tol, "relative tolerance on each tau_i")
        ->capture_default_str();
    cmd->add_option("--precision-bits", cfg.precision_bits, "mantissa bits (>53 uses mpfr)")
        ->capture_default_str();
}

void add_bound_options(CLI::App* cmd, RunConfig& cfg) {
    cmd->add_option("--gamma", cfg.bounds.gamma, "gamma in (0,1)")->capture_default_str();
    cmd->add_option("--C", cfg.bounds.C_abs, "stand-in for the absolute constant C")
        ->capture_default_str();
    cmd->add_option("--c1", cfg.bounds.c1)->capture_default_str();
    cmd->add_option("--c5", cfg.bounds.c5)->capture_default_str();
    cmd->add_option("--c6", cfg.bounds.c6)->capture_default_str();
    std::map<std::string, AnRule> rules{{"power5", AnRule::PowerFifth},
                                        {"invlog", AnRule::InverseLog},
                                        {"invloglog", AnRule::InverseLogLog}};
    cmd->add_option("--a-n-rule", cfg.bounds.a_n_rule, "a_n rule: power5|invlog|invloglog")
        ->transform(CLI::CheckedTransformer(rules, CLI::ignore_case));
}

void add_cycle_options(CLI::App* cmd, RunConfig& cfg) {
    cmd->add_option("--max-period", cfg.cycle_search.max_period)->capture_default_str();
    cmd->add_option("--box", cfg.cycle_search.box_radius, "cycle search box half-width")
        ->capture_default_str();
    cmd->add_option("--grid", cfg.cycle_search.grid_density, "cycle seed grid density")
        ->capture_default_str();
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"numerical laboratory for pullback telescopes and pointwise Lyapunov lower bounds"};
    app.require_subcommand(1);
    app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

    RunConfig cfg;
    CommonFlags flags;
    std::string config_path_doc;
    std::string tail_json_path, regions_path, n_series_text;
    double r_min = 1.001, r_max = 1000.0;
    int r_points = 100;

    auto* orbit_cmd = app.add_subcommand("orbit", "iterate an orbit and emit its CSV");
    add_map_options(orbit_cmd, cfg, true);
    orbit_cmd->add_option("--n", cfg.n, "orbit length")->required();
    orbit_cmd->add_option("--out", flags.out, "output path (default stdout)");

    auto* tele_cmd = app.add_subcommand("telescope", "compute tau_i / m_i and the tail distribution");
    add_map_options(tele_cmd, cfg, true);
    tele_cmd->add_option("--n", cfg.n, "orbit length")->required();
    add_telescope_options(tele_cmd, cfg);
    add_cycle_options(tele_cmd, cfg);
    tele_cmd->add_option("--out", flags.out, "telescope CSV path (default stdout)");
    tele_cmd->add_option("--tail-json", tail_json_path, "also write the tail distribution JSON here");
    tele_cmd->add_option("--dump-regions", regions_path, "also write per-level boundary polylines here");

    auto* verify_cmd = app.add_subcommand("verify", "run the full inequality suite; nonzero exit on failure");
    add_map_options(verify_cmd, cfg, true);
    verify_cmd->add_option("--n", cfg.n, "orbit length")->required();
    add_telescope_options(verify_cmd, cfg);
    add_bound_options(verify_cmd, cfg);
    add_cycle_options(verify_cmd, cfg);
    verify_cmd->add_option("--out", flags.out, "report JSON path (default stdout)");

    auto* sweep_cmd = app.add_subcommand("sweep", "n-series study or c-grid basin map, long-form CSV");
    add_map_options(sweep_cmd, cfg, true);
    sweep_cmd->add_option("--n-series", n_series_text, "comma-separated orbit lengths");
    add_telescope_options(sweep_cmd, cfg);
    add_cycle_options(sweep_cmd, cfg);
    sweep_cmd->add_option("--window", cfg.chi_window, "chi trailing-window size (0 = n/10)");
    sweep_cmd->add_option("--c-re-min", cfg.c_re_min);
    sweep_cmd->add_option("--c-re-max", cfg.c_re_max);
    sweep_cmd->add_option("--c-re-steps", cfg.c_re_steps);
    sweep_cmd->add_option("--c-im-min", cfg.c_im_min);
    sweep_cmd->add_option("--c-im-max", cfg.c_im_max);
    sweep_cmd->add_option("--c-im-steps", cfg.c_im_steps);
    auto* kappa_opt = sweep_cmd->add_option("--kappa", cfg.kappa, "slow-decay rate constant");
    sweep_cmd->add_option("--beta", cfg.beta, "slow-decay rate exponent (< 1/2)")->needs(kappa_opt);
    sweep_cmd->add_flag("--bounded-sing", cfg.rate_bounded_sing,
                        "rate check uses delta_n alone (bounded singular set)");
    sweep_cmd->add_option("--jobs", cfg.jobs, "concurrent sweep points")->capture_default_str();
    sweep_cmd->add_option("--out", flags.out, "output path (default stdout)");

    auto* cycles_cmd = app.add_subcommand("cycles", "periodic-point search, JSON");
    add_map_options(cycles_cmd, cfg, false);
    add_cycle_options(cycles_cmd, cfg);
    cycles_cmd->add_option("--out", flags.out, "output path (default stdout)");

    auto* lambda_cmd = app.add_subcommand("lambda-table", "Lambda(R) bracket table, CSV");
    lambda_cmd->add_option("--r-min", r_min)->capture_default_str();
    lambda_cmd->add_option("--r-max", r_max)->capture_default_str();
    lambda_cmd->add_option("--points", r_points)->capture_default_str();
    lambda_cmd->add_option("--out", flags.out, "output path (default stdout)");

    for (auto* cmd : {orbit_cmd, tele_cmd, verify_cmd, sweep_cmd, cycles_cmd, lambda_cmd})
        cmd->add_option("--config", config_path_doc,
                        "flat key=value config file; flags override file values");

    try {
        std::vector<std::string> args = expand_config(argc, argv);
        std::reverse(args.begin(), args.end());
        app.parse(args);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }

    try {
        if (*orbit_cmd) {
            write_output(flags.out, run_orbit_csv(cfg));
        } else if (*tele_cmd) {
            TelescopeRun run = run_telescope(cfg);
            write_output(flags.out, run.csv);
            if (!tail_json_path.empty()) write_output(tail_json_path, run.tail_json_text);
            if (!regions_path.empty()) write_output(regions_path, run_region_dump(cfg, run));
        } else if (*verify_cmd) {
            BoundReport rep = run_verify(cfg);
            write_output(flags.out, bound_report_json(rep));
            return rep.all_constant_free_pass() ? 0 : 1;
        } else if (*sweep_cmd) {
            if (!n_series_text.empty()) {
                std::stringstream ss(n_series_text);
                std::string item;
                while (std::getline(ss, item, ',')) cfg.n_series.push_back(std::stoi(item));
            }
            cfg.have_rate = kappa_opt->count() > 0;
            if (cfg.have_rate && !(cfg.beta < 0.5 && cfg.kappa > 0.0))
                throw DomainError("rate check needs kappa > 0 and beta < 1/2");
            write_output(flags.out, run_sweep_csv(cfg));
        } else if (*cycles_cmd) {
            write_output(flags.out, run_cycles_json(cfg));
        } else if (*lambda_cmd) {
            write_output(flags.out, lambda_table_csv(r_min, r_max, r_points));
        }
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const DomainError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const BasinDetected& e) {
        nlohmann::ordered_json j;
        j["hypothesis_failure"] = e.what();
        j["kind"] = "basin";
        write_output(flags.out, j.dump(2) + "\n");
        return kExitHypothesis;
    } catch (const DegenerateOrbit& e) {
        nlohmann::ordered_json j;
        j["hypothesis_failure"] = e.what();
        j["kind"] = "degenerate";
        write_output(flags.out, j.dump(2) + "\n");
        return kExitHypothesis;
    } catch (const PrecisionExhausted& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const Error& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return 0;
}
