#include "degenbond/timestep.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "degenbond/errors.hpp"

namespace degenbond {

TridiagonalSystem build_step_system(const SemiDiscreteSystem& E_next,
                                    const SemiDiscreteSystem& E_curr,
                                    std::span<const double> P_curr, double xi, double tau) {
    const std::size_t n = E_next.size();
    TridiagonalSystem sys;
    sys.sub.assign(n, 0.0);
    sys.diag.assign(n, 0.0);
    sys.super.assign(n, 0.0);
    sys.rhs.assign(n, 0.0);
    const double explicit_weight = 1.0 - xi;
    for (std::size_t i = 0; i < n; ++i) {
        const double g = E_next.hbar_weights[i] / tau;
        sys.diag[i] = g + xi * E_next.e_diag[i];
        if (i > 0) sys.sub[i] = -xi * E_next.e_sub[i];
        if (i + 1 < n) sys.super[i] = -xi * E_next.e_super[i];

        double rhs = (g - explicit_weight * E_curr.e_diag[i]) * P_curr[i];
        if (i > 0) rhs += explicit_weight * E_curr.e_sub[i] * P_curr[i - 1];
        if (i + 1 < n) rhs += explicit_weight * E_curr.e_super[i] * P_curr[i + 1];
        rhs += xi * E_next.load[i] + explicit_weight * E_curr.load[i];
        sys.rhs[i] = rhs;
    }
    return sys;
}

namespace {

bool reduced_is_m_matrix(std::span<const double> sub, std::span<const double> diag,
                         std::span<const double> super) {
    const std::size_t n = diag.size();
    bool strict_somewhere = false;
    for (std::size_t i = 0; i < n; ++i) {
        const double s = i > 0 ? sub[i] : 0.0;
        const double c = i + 1 < n ? super[i] : 0.0;
        if (!(diag[i] > 0.0) || s > 0.0 || c > 0.0) return false;
        const double margin = diag[i] - std::abs(s) - std::abs(c);
        if (margin < -1e-13 * diag[i]) return false;
        if (margin > 1e-13 * diag[i]) strict_somewhere = true;
    }
    return strict_somewhere;
}

}  // namespace

StepDiagnostics check_m_matrix(const TridiagonalSystem& sys) {
    const std::size_t n = sys.size();
    StepDiagnostics d;
    d.diag_dominance_margin = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
        double m = sys.diag[i];
        if (i > 0) m -= std::abs(sys.sub[i]);
        if (i + 1 < n) m -= std::abs(sys.super[i]);
        d.diag_dominance_margin = std::min(d.diag_dominance_margin, m);
    }
    if (n < 5) {
        d.is_m_matrix = reduced_is_m_matrix(sys.sub, sys.diag, sys.super);
        return d;
    }

    const auto& A = sys.sub;
    const auto& B = sys.diag;
    const auto& C = sys.super;
    const std::size_t N = n - 1;

    // Left end: P_0 from row 0, then P_1 from row 1.
    const double delta_left = B[1] - A[1] * C[0] / B[0];
    // Right end: P_N from row N, then P_{N-1} from row N-1.
    const double delta_right = B[N - 1] - C[N - 1] * A[N] / B[N];
    if (!(B[0] > 0.0) || !(B[N] > 0.0) || !(delta_left > 0.0) || !(delta_right > 0.0)) {
        d.is_m_matrix = false;
        return d;
    }

    std::vector<double> r_sub(A.begin() + 2, A.begin() + static_cast<std::ptrdiff_t>(N - 1));
    std::vector<double> r_diag(B.begin() + 2, B.begin() + static_cast<std::ptrdiff_t>(N - 1));
    std::vector<double> r_super(C.begin() + 2, C.begin() + static_cast<std::ptrdiff_t>(N - 1));
    r_diag.front() -= A[2] * C[1] / delta_left;
    r_diag.back() -= C[N - 2] * A[N - 1] / delta_right;
    d.is_m_matrix = reduced_is_m_matrix(r_sub, r_diag, r_super);
    return d;
}

MarchResult march(const OperatorAssembler& assemble, std::vector<double> initial,
                  const TimeMesh& time_mesh, const MarchOptions& options,
                  const LevelObserver& observer) {
    if (!(options.xi >= 0.0 && options.xi <= 1.0)) {
        throw InvalidProblem("splitting parameter xi must lie in [0, 1]");
    }
    const std::size_t M = time_mesh.steps();

    std::vector<bool> keep(M + 1, false);
    if (options.snapshot_every > 0) {
        for (std::size_t j = 0; j <= M; j += options.snapshot_every) keep[j] = true;
        keep[0] = true;
        keep[M] = true;
    }
    for (double ts : options.snapshot_times) {
        const auto it = std::lower_bound(time_mesh.levels.begin(), time_mesh.levels.end(), ts);
        std::size_t j = static_cast<std::size_t>(it - time_mesh.levels.begin());
        if (j > M) j = M;
        if (j > 0 && std::abs(time_mesh.levels[j - 1] - ts) < std::abs(time_mesh.levels[j] - ts)) {
            --j;
        }
        keep[j] = true;
    }

    MarchResult result;
    std::vector<double> P = std::move(initial);
    if (keep[0]) result.snapshots.push_back({P, time_mesh.levels[0]});
    if (observer) observer(0, time_mesh.levels[0], P, std::nullopt);
    if (M == 0) {
        result.final = {std::move(P), time_mesh.levels[0]};
        return result;
    }

    SemiDiscreteSystem E_curr = assemble(time_mesh.levels[0]);
    for (std::size_t j = 0; j < M; ++j) {
        const double t_next = time_mesh.levels[j + 1];
        SemiDiscreteSystem E_next = assemble(t_next);
        const auto sys = build_step_system(E_next, E_curr, P, options.xi, time_mesh.tau[j]);

        std::optional<StepDiagnostics> diag;
        if (options.diagnose) diag = check_m_matrix(sys);

        P = solve_tridiagonal(sys);
        for (std::size_t i = 0; i < P.size(); ++i) {
            if (!std::isfinite(P[i])) {
                throw NonFiniteSolution("non-finite value at node " + std::to_string(i) +
                                        ", level " + std::to_string(j + 1));
            }
        }
        if (diag) {
            diag->level = j + 1;
            diag->time = t_next;
            const auto [lo, hi] = std::minmax_element(P.begin(), P.end());
            diag->min_solution = *lo;
            diag->max_solution = *hi;
            if (!diag->is_m_matrix) ++result.steps_failing_m_matrix;
            result.diagnostics.push_back(*diag);
        }
        if (keep[j + 1]) result.snapshots.push_back({P, t_next});
        if (observer) observer(j + 1, t_next, P, diag);
        E_curr = std::move(E_next);
    }
    result.final = {std::move(P), time_mesh.levels[M]};
    return result;
}

std::vector<double> sample_initial(const ProblemSpec& spec, const SpatialMesh& mesh) {
    std::vector<double> P(mesh.nodes.size());
    for (std::size_t i = 0; i < P.size(); ++i) P[i] = spec.initial(mesh.nodes[i]);
    return P;
}

MarchResult march(const ProblemSpec& spec, const SpatialMesh& mesh, const TimeMesh& time_mesh,
                  const MarchOptions& options, const LevelObserver& observer) {
    validate(spec);
    const auto factored = factor_coefficients(spec);
    OperatorAssembler assemble = [&](double t) { return assemble_fitted(spec, factored, mesh, t); };
    return march(assemble, sample_initial(spec, mesh), time_mesh, options, observer);
}

}  // namespace degenbond
