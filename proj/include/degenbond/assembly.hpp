#pragma once

#include <iosfwd>
#include <span>
#include <vector>

#include "degenbond/fitted_flux.hpp"
#include "degenbond/mesh.hpp"
#include "degenbond/model.hpp"

namespace degenbond {

/// Semi-discrete system  hbar_i dP_i/dt + (E P)_i = load_i  with tridiagonal rows
///   (E P)_i = -e_sub[i] P_{i-1} + e_diag[i] P_i - e_super[i] P_{i+1}.
/// All arrays have N+1 entries; e_sub[0] and e_super[N] are unused and zero.
struct SemiDiscreteSystem {
    std::vector<double> e_sub;
    std::vector<double> e_diag;
    std::vector<double> e_super;
    std::vector<double> hbar_weights;
    std::vector<double> load;
    double t = 0.0;

    std::size_t size() const noexcept { return e_diag.size(); }
};

/// Per-cell reaction integrals Q_i^h (midpoint rule on r, telescoped on the rest).
struct ReactionQuadrature {
    std::vector<double> Q_h;
};

ReactionQuadrature reaction_quadrature(const ProblemSpec& spec, const SpatialMesh& mesh, double t);

/// load[i] = f(r_i, t) hbar_i. Zero when the problem has no forcing.
std::vector<double> load_vector(const FieldFunction& forcing, const SpatialMesh& mesh, double t);

/// Rows 1..N-1 from the face fluxes weighted by their degeneracy factors plus Q_i^h on
/// the diagonal. Throws AssemblyError if a coupling between two interior unknowns is
/// not strictly positive.
SemiDiscreteSystem assemble_interior_rows(std::span<const FaceFlux> fluxes,
                                          std::span<const double> degeneracy,
                                          const ReactionQuadrature& quadrature,
                                          const SpatialMesh& mesh, double t);

/// Fills rows 0 and N (the half cells at the degenerate ends).
void assemble_boundary_rows(SemiDiscreteSystem& system, const FaceFlux& left,
                            const FaceFlux& right, double left_degeneracy,
                            double right_degeneracy, double Q0, double QN);

/// Full fitted finite-volume operator and load at time t.
SemiDiscreteSystem assemble_fitted(const ProblemSpec& spec, const FactoredCoefficients& factored,
                                   const SpatialMesh& mesh, double t);

/// E * P.
std::vector<double> apply_operator(const SemiDiscreteSystem& system, std::span<const double> P);

/// CSV dump: i,e_sub,e_diag,e_super,hbar,load.
void write_system_csv(std::ostream& out, const SemiDiscreteSystem& system);

}  // namespace degenbond
