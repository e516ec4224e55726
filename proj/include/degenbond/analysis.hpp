#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "degenbond/mesh.hpp"
#include "degenbond/model.hpp"
#include "degenbond/timestep.hpp"

namespace degenbond {

/// Space-time mesh norms of z = P - u.
///
///   C  = max_{i,j} |z_i^j| / max_{i,j} |P_i^j|
///   L2 = sqrt( sum_{i=0..N} sum_{j=0..M} h tau (z_i^j)^2 )
///   H1 = sqrt( sum_{i=1..N-1} sum_{j=0..M} h tau [ (z_i^j)^2 + (dz_i^j)^2 ] )
/// with dz the central difference of z. On non-uniform meshes h is replaced by hbar_i
/// and the report is flagged `generalized`.
struct ErrorReport {
    double c_norm = 0.0;
    double l2_norm = 0.0;
    double h1_norm = 0.0;
    std::size_t nodes = 0;
    std::size_t steps = 0;
    std::string scheme_id;
    std::string problem_id;
    bool generalized = false;
};

/// Streaming form of error_norms: feed every time level in order, then finish().
class NormAccumulator {
public:
    NormAccumulator(const SpatialMesh& mesh, const TimeMesh& time_mesh, FieldFunction exact);

    void add_level(double t, std::span<const double> P);
    ErrorReport finish() const;

    /// Adapter for march(): forwards every level to add_level.
    LevelObserver observer();

private:
    const SpatialMesh* mesh_;
    double tau_weight_;
    bool uniform_;
    FieldFunction exact_;
    std::vector<double> space_weight_;
    std::vector<double> error_;
    double max_error_ = 0.0;
    double max_solution_ = 0.0;
    double l2_sum_ = 0.0;
    double h1_sum_ = 0.0;
    std::size_t levels_ = 0;
};

/// Norms over a stored history holding every time level of `time_mesh`.
/// Throws MissingExact if the problem has no exact solution.
ErrorReport error_norms(std::span<const SolutionField> history, const ProblemSpec& spec,
                        const SpatialMesh& mesh, const TimeMesh& time_mesh);

struct RateRow {
    std::size_t nodes = 0;
    double c_norm = 0.0;
    double l2_norm = 0.0;
    double h1_norm = 0.0;
    std::optional<double> c_rate;
    std::optional<double> l2_rate;
    std::optional<double> h1_rate;
};

struct RateTable {
    std::vector<RateRow> rows;
};

/// RC = log2(ER^N / ER^{2N}) for every consecutive pair. Consecutive reports must double
/// the subinterval count at equal step counts. Throws RateUndefined on a zero error.
RateTable double_mesh_rates(std::span<const ErrorReport> reports);

/// s = ln|(u - P_h) / (u - P_{h/2})| / ln 2
double runge_rate_exact(double u, double p_h, double p_h2);

/// s = ln|(P_h - P_{h/2}) / (P_{h/2} - P_{h/4})| / ln 2
double runge_rate_three_grid(double p_h, double p_h2, double p_h4);

/// Two-grid form when u is given, three-grid form otherwise.
double runge_rate(double p_h, double p_h2, std::optional<double> p_h4, std::optional<double> u);

/// Value of a nodal field at the mesh node equal to r (to 1e-12 R). Throws InvalidMesh.
double value_at_node(const SpatialMesh& mesh, std::span<const double> values, double r);

/// N,C-norm,RC,L2-norm,RC,H1-norm,RC with 9 significant digits.
void write_rate_table_csv(std::ostream& out, const RateTable& table);

}  // namespace degenbond
