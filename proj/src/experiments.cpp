#include "degenbond/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <ostream>
#include <thread>

#include "degenbond/errors.hpp"
#include "degenbond/scheme_b.hpp"

namespace degenbond {

std::string format_number(double value) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.9g", value);
    return buf;
}

SpatialMesh build_mesh(const RunConfig& config, std::size_t nodes) {
    const std::size_t n = intervals_from_nodes(nodes);
    if (config.mesh == MeshChoice::Graded) return graded_spatial(n, config.R, config.grading_exponent);
    return uniform_spatial(n, config.R);
}

TimeMesh build_time_mesh(const RunConfig& config, const ProblemSpec& spec) {
    return uniform_time(config.steps, spec.T);
}

RunOutput run_single(const RunConfig& config, const ProblemSpec& spec, SchemeChoice scheme,
                     std::size_t nodes) {
    if (scheme == SchemeChoice::Both) {
        throw ValidationError("scheme", "run_single takes one scheme at a time");
    }
    RunOutput out;
    out.scheme_id = std::string(to_string(scheme));
    out.mesh = build_mesh(config, nodes);
    out.time_mesh = build_time_mesh(config, spec);

    MarchOptions options;
    options.xi = config.xi;
    if (config.snapshot_t) options.snapshot_times.push_back(*config.snapshot_t);

    std::optional<NormAccumulator> acc;
    LevelObserver observer;
    if (spec.exact) {
        acc.emplace(out.mesh, out.time_mesh, spec.exact->u);
        observer = acc->observer();
    }
    if (scheme == SchemeChoice::Fitted) {
        out.march = march(spec, out.mesh, out.time_mesh, options, observer);
    } else {
        SchemeBOptions sb;
        sb.force_boundary_rows = config.force_scheme_b_boundary;
        out.march = march_scheme_b(spec, out.mesh, out.time_mesh, options, sb, observer);
    }
    if (acc) {
        ErrorReport report = acc->finish();
        report.scheme_id = out.scheme_id;
        report.problem_id = spec.id;
        out.errors = report;
    }
    return out;
}

std::size_t sweep_threads(std::size_t jobs) {
    std::size_t n = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("DEGENBOND_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v > 0) n = static_cast<std::size_t>(v);
    }
    return std::max<std::size_t>(1, std::min(n, jobs));
}

SweepResult run_convergence_sweep(const RunConfig& config, const ProblemSpec& spec,
                                  const std::vector<std::size_t>& node_counts,
                                  SchemeChoice scheme, std::size_t threads) {
    if (node_counts.empty()) throw ValidationError("sweep_nodes", "no node counts given");
    for (std::size_t k = 1; k < node_counts.size(); ++k) {
        if (intervals_from_nodes(node_counts[k]) != 2 * intervals_from_nodes(node_counts[k - 1])) {
            throw ValidationError("sweep_nodes", "node counts must double in subintervals (e.g. 21,41,81)");
        }
    }
    if (!spec.exact) throw MissingExact("a convergence sweep needs a manufactured solution");

    RunConfig local = config;
    local.snapshot_t.reset();

    const std::size_t jobs = node_counts.size();
    std::vector<std::optional<ErrorReport>> reports(jobs);
    std::vector<std::exception_ptr> errors(jobs);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t k; (k = next.fetch_add(1)) < jobs;) {
            try {
                reports[k] = run_single(local, spec, scheme, node_counts[k]).errors;
            } catch (...) {
                errors[k] = std::current_exception();
            }
        }
    };
    const std::size_t n_threads = threads > 0 ? std::min(threads, jobs) : sweep_threads(jobs);
    std::vector<std::thread> pool;
    for (std::size_t k = 1; k < n_threads; ++k) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();

    SweepResult result;
    result.scheme_id = std::string(to_string(scheme));
    for (std::size_t k = 0; k < jobs; ++k) {
        if (errors[k]) {
            try {
                std::rethrow_exception(errors[k]);
            } catch (const NonFiniteSolution& e) {
                result.numerical_failure = true;
                result.failure = e.what();
            } catch (const SingularSystem& e) {
                result.numerical_failure = true;
                result.failure = e.what();
            } catch (const NumericalOverflow& e) {
                result.numerical_failure = true;
                result.failure = e.what();
            } catch (const std::exception& e) {
                result.failure = e.what();
            }
            break;
        }
        result.reports.push_back(*reports[k]);
    }
    if (result.reports.size() > 0) {
        try {
            result.table = double_mesh_rates(result.reports);
        } catch (const RateUndefined& e) {
            result.failure = e.what();
            result.numerical_failure = true;
        }
    }
    return result;
}

const SolutionField& find_snapshot(const RunOutput& run, double t) {
    const double T = run.time_mesh.levels.empty() ? 0.0 : run.time_mesh.levels.back();
    const double tol = 1e-9 * std::max(T, 1.0);
    for (const auto& s : run.march.snapshots) {
        if (std::abs(s.time - t) <= tol) return s;
    }
    if (std::abs(run.march.final.time - t) <= tol) return run.march.final;
    throw SnapshotMissing("no stored time level at t=" + format_number(t));
}

std::vector<ComparisonRow> run_ab_comparison(const RunConfig& config, const ProblemSpec& spec,
                                             const std::vector<std::size_t>& node_counts,
                                             const std::vector<long>& report_nodes,
                                             double t_report) {
    if (report_nodes.empty()) throw ValidationError("report_nodes", "at least one node index is required");
    if (node_counts.empty()) throw ValidationError("sweep_nodes", "no node counts given");
    if (!spec.exact) throw MissingExact("the comparison reports |P - u| and needs an exact solution");

    RunConfig local = config;
    local.snapshot_t = t_report;
    std::vector<ComparisonRow> rows;
    for (std::size_t nodes : node_counts) {
        std::vector<std::size_t> indices;
        for (long k : report_nodes) {
            const long n = static_cast<long>(nodes);
            const long idx = k < 0 ? n + k : k;
            if (idx < 0 || idx >= n) {
                throw ValidationError("report_nodes", "index " + std::to_string(k) + " is outside 0.." +
                                                          std::to_string(n - 1));
            }
            indices.push_back(static_cast<std::size_t>(idx));
        }
        const RunOutput a = run_single(local, spec, SchemeChoice::Fitted, nodes);
        const RunOutput b = run_single(local, spec, SchemeChoice::SchemeB, nodes);
        const SolutionField& sa = find_snapshot(a, t_report);
        const SolutionField& sb = find_snapshot(b, t_report);
        for (std::size_t i : indices) {
            ComparisonRow row;
            row.nodes = nodes;
            row.node_index = i;
            row.r = a.mesh.nodes[i];
            row.t = sa.time;
            row.exact = spec.exact->u(row.r, row.t);
            row.error_fitted = std::abs(sa.values[i] - row.exact);
            row.error_scheme_b = std::abs(sb.values[i] - row.exact);
            rows.push_back(row);
        }
    }
    return rows;
}

void write_csv_preamble(std::ostream& out, const RunConfig& config, std::string_view title,
                        const std::vector<std::string>& extra) {
    out << "# degenbond " << title << '\n';
    out << "# config_hash=" << hash_hex(config.hash) << '\n';
    out << "# problem=" << config.problem_id << " xi=" << format_number(config.xi)
        << " steps=" << config.steps << '\n';
    out << "# N counts nodes; subintervals = N - 1\n";
    for (const auto& line : extra) out << "# " << line << '\n';
}

void emit_plotdata(std::ostream& out, const SpatialMesh& mesh, const SolutionField& snapshot,
                   const FieldFunction& exact) {
    out << (exact ? "r,P,u\n" : "r,P\n");
    for (std::size_t i = 0; i < mesh.nodes.size(); ++i) {
        out << format_number(mesh.nodes[i]) << ',' << format_number(snapshot.values[i]);
        if (exact) out << ',' << format_number(exact(mesh.nodes[i], snapshot.time));
        out << '\n';
    }
}

void write_solution_csv(std::ostream& out, const SpatialMesh& mesh, const SolutionField& snapshot,
                        const FieldFunction& exact) {
    out << "# t=" << format_number(snapshot.time) << '\n';
    out << (exact ? "i,r,P,u,abs_error\n" : "i,r,P\n");
    for (std::size_t i = 0; i < mesh.nodes.size(); ++i) {
        const double r = mesh.nodes[i];
        out << i << ',' << format_number(r) << ',' << format_number(snapshot.values[i]);
        if (exact) {
            const double u = exact(r, snapshot.time);
            out << ',' << format_number(u) << ',' << format_number(std::abs(snapshot.values[i] - u));
        }
        out << '\n';
    }
}

void write_diagnostics_csv(std::ostream& out, const MarchResult& march) {
    out << "j,t_j,min_solution,diag_dominance_margin,is_m_matrix\n";
    for (const auto& d : march.diagnostics) {
        out << d.level << ',' << format_number(d.time) << ',' << format_number(d.min_solution) << ','
            << format_number(d.diag_dominance_margin) << ','
            << (d.is_m_matrix ? "true" : "false") << '\n';
    }
}

void write_comparison_csv(std::ostream& out, const std::vector<ComparisonRow>& rows) {
    out << "N,node,r,t,u,error_fitted,error_scheme_b\n";
    for (const auto& row : rows) {
        out << row.nodes << ',' << row.node_index << ',' << format_number(row.r) << ','
            << format_number(row.t) << ',' << format_number(row.exact) << ','
            << format_number(row.error_fitted) << ',' << format_number(row.error_scheme_b) << '\n';
    }
}

}  // namespace degenbond
