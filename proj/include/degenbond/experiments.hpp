#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "degenbond/analysis.hpp"
#include "degenbond/config.hpp"
#include "degenbond/mesh.hpp"
#include "degenbond/model.hpp"
#include "degenbond/timestep.hpp"

namespace degenbond {

/// Mesh with the given node count (subintervals = nodes - 1) following config.mesh.
SpatialMesh build_mesh(const RunConfig& config, std::size_t nodes);

/// config.steps equal steps on [0, spec.T].
TimeMesh build_time_mesh(const RunConfig& config, const ProblemSpec& spec);

struct RunOutput {
    std::string scheme_id;  // "fitted" or "scheme_b"
    SpatialMesh mesh;
    TimeMesh time_mesh;
    MarchResult march;
    std::optional<ErrorReport> errors;  // manufactured problems only
};

/// One solve with a single scheme (Fitted or SchemeB). Snapshots are kept at
/// config.snapshot_t when set.
RunOutput run_single(const RunConfig& config, const ProblemSpec& spec, SchemeChoice scheme,
                     std::size_t nodes);

struct SweepResult {
    std::string scheme_id;
    std::vector<ErrorReport> reports;  // completed entries, in node order
    RateTable table;                   // over the completed prefix
    std::optional<std::string> failure;
    bool numerical_failure = false;
};

/// Worker count for sweeps: DEGENBOND_THREADS if set and positive, otherwise the
/// hardware concurrency, capped by `jobs`.
std::size_t sweep_threads(std::size_t jobs);

/// Error reports for every node count, solved concurrently. Results are ordered as
/// `node_counts` regardless of scheduling. Solver failures are recorded in `failure`
/// and the reports before the first failing entry are kept.
/// Throws ValidationError unless node counts double in subintervals, MissingExact
/// for non-manufactured problems.
SweepResult run_convergence_sweep(const RunConfig& config, const ProblemSpec& spec,
                                  const std::vector<std::size_t>& node_counts,
                                  SchemeChoice scheme, std::size_t threads = 0);

struct ComparisonRow {
    std::size_t nodes = 0;
    std::size_t node_index = 0;
    double r = 0.0;
    double t = 0.0;
    double exact = 0.0;
    double error_fitted = 0.0;
    double error_scheme_b = 0.0;
};

/// |P - u| of both schemes at t_report for the requested node indices (negative
/// indices count from the last node). The fitted scheme uses config.xi; the baseline is
/// always Crank-Nicolson. Throws ValidationError on an empty or out-of-range index list,
/// MissingExact, SnapshotMissing.
std::vector<ComparisonRow> run_ab_comparison(const RunConfig& config, const ProblemSpec& spec,
                                             const std::vector<std::size_t>& node_counts,
                                             const std::vector<long>& report_nodes,
                                             double t_report);

/// Snapshot of a run at time t (matched to the nearest stored level within 1e-9 T).
/// Throws SnapshotMissing.
const SolutionField& find_snapshot(const RunOutput& run, double t);

/// Leading comment block shared by every CSV file.
void write_csv_preamble(std::ostream& out, const RunConfig& config, std::string_view title,
                        const std::vector<std::string>& extra = {});

/// r,P[,u] rows of one snapshot.
void emit_plotdata(std::ostream& out, const SpatialMesh& mesh, const SolutionField& snapshot,
                   const FieldFunction& exact = {});

/// i,r,P[,u,abs_error] rows of one snapshot.
void write_solution_csv(std::ostream& out, const SpatialMesh& mesh, const SolutionField& snapshot,
                        const FieldFunction& exact = {});

/// j,t_j,min_solution,diag_dominance_margin,is_m_matrix.
void write_diagnostics_csv(std::ostream& out, const MarchResult& march);

void write_comparison_csv(std::ostream& out, const std::vector<ComparisonRow>& rows);

/// Nine significant digits, shortest form.
std::string format_number(double value);

}  // namespace degenbond
