#pragma once

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "degenbond/assembly.hpp"
#include "degenbond/mesh.hpp"
#include "degenbond/model.hpp"
#include "degenbond/tridiagonal.hpp"

namespace degenbond {

struct SolutionField {
    std::vector<double> values;
    double time = 0.0;
};

/// Per-step record of the implicit matrix and the new solution.
struct StepDiagnostics {
    std::size_t level = 0;  // j + 1
    double time = 0.0;
    bool is_m_matrix = false;
    double min_solution = 0.0;
    double max_solution = 0.0;
    double diag_dominance_margin = 0.0;
};

/// Two-level step  (G + xi E^{j+1}) P^{j+1} = (G - (1-xi) E^j) P^j + xi L^{j+1} + (1-xi) L^j
/// with G = diag(hbar_i / tau).
TridiagonalSystem build_step_system(const SemiDiscreteSystem& E_next,
                                    const SemiDiscreteSystem& E_curr,
                                    std::span<const double> P_curr, double xi, double tau);

/// Eliminates rows 0, 1 and N, N-1 into rows 2 and N-2 and checks that the reduced
/// matrix has a positive diagonal, non-positive off-diagonals and is weakly diagonally
/// dominant with strict dominance in at least one row. The eliminated pivots must be
/// positive. `diag_dominance_margin` is min_i B_i - |A_i| - |C_i| over the full matrix.
/// `min_solution` / `max_solution` are left for the caller.
StepDiagnostics check_m_matrix(const TridiagonalSystem& system);

/// Assembles the semi-discrete operator at a given time.
using OperatorAssembler = std::function<SemiDiscreteSystem(double t)>;

struct MarchOptions {
    double xi = 0.5;
    bool diagnose = true;
    /// Keep every k-th level (0 keeps none). Level 0 and the final level are always
    /// kept when k > 0.
    std::size_t snapshot_every = 0;
    /// Additional levels to keep, matched to the nearest time level.
    std::vector<double> snapshot_times;
};

/// Called once for level 0 (diagnostics empty) and after every step.
using LevelObserver =
    std::function<void(std::size_t level, double t, std::span<const double> P,
                       const std::optional<StepDiagnostics>& diagnostics)>;

struct MarchResult {
    SolutionField final;
    std::vector<SolutionField> snapshots;
    std::vector<StepDiagnostics> diagnostics;
    std::size_t steps_failing_m_matrix = 0;
};

/// Generic two-level march. Throws NonFiniteSolution or SingularSystem.
MarchResult march(const OperatorAssembler& assemble, std::vector<double> initial,
                  const TimeMesh& time_mesh, const MarchOptions& options,
                  const LevelObserver& observer = {});

/// Fitted finite-volume march for a problem on the given meshes.
MarchResult march(const ProblemSpec& spec, const SpatialMesh& mesh, const TimeMesh& time_mesh,
                  const MarchOptions& options, const LevelObserver& observer = {});

/// Nodal samples of the initial data.
std::vector<double> sample_initial(const ProblemSpec& spec, const SpatialMesh& mesh);

}  // namespace degenbond
