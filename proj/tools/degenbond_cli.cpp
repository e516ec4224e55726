// degenbond: command-line front end for the fitted finite-volume bond solver.
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "degenbond/analysis.hpp"
#include "degenbond/config.hpp"
#include "degenbond/errors.hpp"
#include "degenbond/experiments.hpp"

namespace fs = std::filesystem;
using namespace degenbond;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

struct Options {
    std::string config_path;
    std::string problem;
    std::string out_dir = ".";
    std::string nodes;
    std::optional<double> xi;
    std::string scheme;
    std::optional<double> snapshot_t;
    std::string report_nodes;
};

class ConfigFailure : public Error {
    using Error::Error;
};

RunConfig load_config(const Options& opt) {
    std::string text;
    if (!opt.config_path.empty()) {
        std::ifstream in(opt.config_path, std::ios::binary);
        if (!in) throw ConfigFailure("cannot read config '" + opt.config_path + "'");
        std::ostringstream ss;
        ss << in.rdbuf();
        text = ss.str();
    }
    if (!opt.problem.empty()) {
        if (!text.empty()) throw ConfigFailure("give either --config or --problem, not both");
        text = "problem = " + opt.problem + "\n";
    }
    if (text.empty()) throw ConfigFailure("no problem given (use --config <path> or --problem <id>)");

    RunConfig cfg = parse_config(text);
    if (opt.xi) {
        if (!(*opt.xi >= 0.0 && *opt.xi <= 1.0)) throw ValidationError("xi", "must lie in [0, 1]");
        cfg.xi = *opt.xi;
    }
    if (!opt.scheme.empty()) {
        const auto s = scheme_from_string(opt.scheme);
        if (!s) throw ValidationError("scheme", "expected fitted, scheme_b or both");
        cfg.scheme = *s;
    }
    if (!opt.nodes.empty()) {
        cfg.sweep_nodes = parse_size_list(opt.nodes, "nodes");
        for (std::size_t n : cfg.sweep_nodes) {
            if (n < 5) throw ValidationError("nodes", "at least 5 nodes are required");
        }
        cfg.nodes = cfg.sweep_nodes.front();
    }
    if (opt.snapshot_t) {
        if (*opt.snapshot_t < 0.0) throw ValidationError("snapshot_t", "must be non-negative");
        cfg.snapshot_t = *opt.snapshot_t;
    }
    if (!opt.report_nodes.empty()) cfg.report_nodes = parse_index_list(opt.report_nodes, "report_nodes");
    return cfg;
}

std::vector<SchemeChoice> schemes_of(SchemeChoice s) {
    if (s == SchemeChoice::Both) return {SchemeChoice::Fitted, SchemeChoice::SchemeB};
    return {s};
}

std::vector<std::size_t> run_nodes(const RunConfig& cfg) {
    return cfg.sweep_nodes.empty() ? std::vector<std::size_t>{cfg.nodes} : cfg.sweep_nodes;
}

std::ofstream open_output(const fs::path& dir, const std::string& name) {
    fs::create_directories(dir);
    const fs::path path = dir / name;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigFailure("cannot write '" + path.string() + "'");
    std::cout << "wrote " << path.string() << '\n';
    return out;
}

bool wants(const RunConfig& cfg, OutputKind kind, bool by_default) {
    if (cfg.outputs.empty()) return by_default;
    return std::find(cfg.outputs.begin(), cfg.outputs.end(), kind) != cfg.outputs.end();
}

std::string tag(const std::string& scheme, std::size_t nodes) {
    return scheme + "_N" + std::to_string(nodes);
}

int cmd_run(const Options& opt) {
    const RunConfig cfg = load_config(opt);
    const ProblemSpec spec = build_problem(cfg);
    const fs::path dir = opt.out_dir;
    for (std::size_t nodes : run_nodes(cfg)) {
        for (SchemeChoice s : schemes_of(cfg.scheme)) {
            const RunOutput run = run_single(cfg, spec, s, nodes);
            const std::string name = tag(run.scheme_id, nodes);
            const std::vector<std::string> info = {"scheme=" + run.scheme_id +
                                                   " N=" + std::to_string(nodes)};
            FieldFunction exact = spec.exact ? spec.exact->u : FieldFunction{};
            if (wants(cfg, OutputKind::SolutionCsv, true)) {
                auto out = open_output(dir, "solution_" + name + ".csv");
                write_csv_preamble(out, cfg, "solution", info);
                write_solution_csv(out, run.mesh, run.march.final, exact);
            }
            if (wants(cfg, OutputKind::DiagnosticsCsv, true)) {
                auto out = open_output(dir, "diagnostics_" + name + ".csv");
                write_csv_preamble(out, cfg, "diagnostics", info);
                write_diagnostics_csv(out, run.march);
            }
            if (wants(cfg, OutputKind::PlotdataCsv, false)) {
                const double t = cfg.snapshot_t.value_or(spec.T);
                auto out = open_output(dir, "plotdata_" + name + ".csv");
                write_csv_preamble(out, cfg, "plotdata", {info[0], "t=" + format_number(t)});
                emit_plotdata(out, run.mesh, find_snapshot(run, t), exact);
            }
            std::cout << name << ": steps=" << run.time_mesh.steps()
                      << " m_matrix_failures=" << run.march.steps_failing_m_matrix;
            if (run.errors) {
                std::cout << " C=" << format_number(run.errors->c_norm)
                          << " L2=" << format_number(run.errors->l2_norm)
                          << " H1=" << format_number(run.errors->h1_norm);
            }
            std::cout << '\n';
        }
    }
    return kExitOk;
}

int cmd_sweep(const Options& opt) {
    RunConfig cfg = load_config(opt);
    const ProblemSpec spec = build_problem(cfg);
    if (cfg.sweep_nodes.empty()) cfg.sweep_nodes = {21, 41, 81, 161, 321};
    int code = kExitOk;
    for (SchemeChoice s : schemes_of(cfg.scheme)) {
        const SweepResult result = run_convergence_sweep(cfg, spec, cfg.sweep_nodes, s);
        auto out = open_output(opt.out_dir, "rates_" + result.scheme_id + ".csv");
        std::vector<std::string> info = {"scheme=" + result.scheme_id};
        if (result.failure) info.push_back("incomplete: " + *result.failure);
        write_csv_preamble(out, cfg, "rate table", info);
        write_rate_table_csv(out, result.table);
        write_rate_table_csv(std::cout, result.table);
        if (result.failure) {
            std::cerr << "error: " << *result.failure << '\n';
            code = result.numerical_failure ? kExitNumerical : kExitConfig;
        }
    }
    return code;
}

int cmd_compare(const Options& opt) {
    RunConfig cfg = load_config(opt);
    const ProblemSpec spec = build_problem(cfg);
    const double t = cfg.snapshot_t.value_or(spec.T);
    const auto rows = run_ab_comparison(cfg, spec, run_nodes(cfg), cfg.report_nodes, t);
    auto out = open_output(opt.out_dir, "comparison.csv");
    write_csv_preamble(out, cfg, "scheme comparison", {"t=" + format_number(t)});
    write_comparison_csv(out, rows);
    write_comparison_csv(std::cout, rows);
    return kExitOk;
}

int cmd_plotdata(const Options& opt) {
    const RunConfig cfg = load_config(opt);
    const ProblemSpec spec = build_problem(cfg);
    const double t = cfg.snapshot_t.value_or(spec.T);
    RunConfig local = cfg;
    local.snapshot_t = t;
    for (std::size_t nodes : run_nodes(cfg)) {
        for (SchemeChoice s : schemes_of(cfg.scheme)) {
            const RunOutput run = run_single(local, spec, s, nodes);
            const std::string name = tag(run.scheme_id, nodes);
            auto out = open_output(opt.out_dir, "plotdata_" + name + ".csv");
            write_csv_preamble(out, cfg, "plotdata",
                               {"scheme=" + run.scheme_id + " N=" + std::to_string(nodes),
                                "t=" + format_number(t)});
            emit_plotdata(out, run.mesh, find_snapshot(run, t),
                          spec.exact ? spec.exact->u : FieldFunction{});
        }
    }
    return kExitOk;
}

// Quick sanity pass over the built-in problems; the full suite lives in ctest.
int cmd_selftest() {
    bool ok = true;
    auto line = [&](bool pass, const std::string& what) {
        std::cout << (pass ? "PASS " : "FAIL ") << what << '\n';
        ok = ok && pass;
    };

    RunConfig cfg = parse_config("problem = example1\n");
    const ProblemSpec ex1 = build_problem(cfg);
    const SweepResult sweep = run_convergence_sweep(cfg, ex1, {21, 41, 81}, SchemeChoice::Fitted);
    const bool have_rates = !sweep.failure && sweep.table.rows.size() == 3;
    const double rc = have_rates ? *sweep.table.rows.back().c_rate : 0.0;
    line(have_rates && std::abs(rc - 1.0) < 0.2,
         "example1 C-norm rate 41->81 nodes = " + format_number(rc));

    for (const char* id : {"example1", "example2", "example3"}) {
        RunConfig bond = parse_config(std::string("problem = ") + id + "\nmanufactured = false\n");
        bond.steps = 200;
        const ProblemSpec spec = build_problem(bond);
        const RunOutput run = run_single(bond, spec, SchemeChoice::Fitted, 21);
        double lo = 1.0, hi = 0.0;
        for (const auto& d : run.march.diagnostics) {
            lo = std::min(lo, d.min_solution);
            hi = std::max(hi, d.max_solution);
        }
        line(run.march.steps_failing_m_matrix == 0 && lo >= -1e-12 && hi <= 1.0 + 1e-12,
             std::string(id) + " bond run: M-matrix at every level, P in [" + format_number(lo) +
                 ", " + format_number(hi) + "]");
    }
    return ok ? kExitOk : kExitNumerical;
}

int classify(const std::exception& e) {
    if (dynamic_cast<const NonFiniteSolution*>(&e) || dynamic_cast<const SingularSystem*>(&e) ||
        dynamic_cast<const NumericalOverflow*>(&e) || dynamic_cast<const AssemblyError*>(&e) ||
        dynamic_cast<const RateUndefined*>(&e)) {
        return kExitNumerical;
    }
    if (dynamic_cast<const Error*>(&e)) return kExitConfig;
    return kExitNumerical;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Fitted finite-volume solver for the degenerate bond pricing equation"};
    app.require_subcommand(1);
    Options opt;

    auto add_common = [&opt](CLI::App* sub) {
        sub->add_option("--config", opt.config_path, "Config file (key = value, [sections])");
        sub->add_option("--problem", opt.problem, "Built-in problem id instead of a config");
        sub->add_option("--out-dir", opt.out_dir, "Directory for CSV output");
        sub->add_option("--nodes", opt.nodes, "Comma separated node counts, e.g. 21,41,81");
        sub->add_option("--xi", opt.xi, "Time weighting: 0.5 Crank-Nicolson, 1 implicit");
        sub->add_option("--scheme", opt.scheme, "fitted, scheme_b or both");
        sub->add_option("--snapshot-t", opt.snapshot_t, "Time level to report");
    };
    auto* run = app.add_subcommand("run", "Single solve; writes solution and diagnostics CSV");
    auto* sweep = app.add_subcommand("sweep", "Convergence sweep over doubling node counts");
    auto* compare = app.add_subcommand("compare", "Nodal errors of both schemes at one time");
    auto* plot = app.add_subcommand("plotdata", "r,P[,u] columns of one snapshot");
    auto* self = app.add_subcommand("selftest", "Fast built-in sanity checks");
    for (auto* sub : {run, sweep, compare, plot}) add_common(sub);
    compare->add_option("--report-nodes", opt.report_nodes,
                        "Node indices to report; negative values count from the end");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfig;
    }

    try {
        if (*run) return cmd_run(opt);
        if (*sweep) return cmd_sweep(opt);
        if (*compare) return cmd_compare(opt);
        if (*plot) return cmd_plotdata(opt);
        if (*self) return cmd_selftest();
    } catch (const ParseError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const ValidationError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const fs::filesystem_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::exception& e) {
        const int code = classify(e);
        std::cerr << (code == kExitNumerical ? "numerical failure: " : "error: ") << e.what() << '\n';
        return code;
    }
    return kExitConfig;
}
