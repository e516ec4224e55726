#pragma once

#include "degenbond/assembly.hpp"
#include "degenbond/mesh.hpp"
#include "degenbond/model.hpp"
#include "degenbond/timestep.hpp"

namespace degenbond {

struct SchemeBOptions {
    /// Add the forcing term to the two characteristic end equations as well. By default
    /// they are discretized homogeneous, as the end-point equations are written for the
    /// unforced pricing problem; only interior rows carry the forcing.
    bool force_boundary_rows = false;
};

/// Classical baseline on a uniform grid, written in the same
/// hbar dP/dt + E P = load layout as the fitted operator with hbar = 1:
///
///  - interior nodes: three-point second difference and central first difference of
///      P_t = (w^2/2) P_rr + (theta + lambda w) P_r - r P + f
///  - r = 0:  P_t = theta(0) (P_1 - P_0) / h
///  - r = R:  P_t = theta(R) (P_N - P_{N-1}) / h - R P_N
///
/// Throws NonUniformMesh.
SemiDiscreteSystem assemble_scheme_b(const ProblemSpec& spec, const SpatialMesh& mesh, double t,
                                     const SchemeBOptions& options = {});

/// Crank-Nicolson march of the baseline operator.
MarchResult march_scheme_b(const ProblemSpec& spec, const SpatialMesh& mesh,
                           const TimeMesh& time_mesh, MarchOptions options = {},
                           const SchemeBOptions& scheme_options = {},
                           const LevelObserver& observer = {});

}  // namespace degenbond
