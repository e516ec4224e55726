#include "degenbond/assembly.hpp"

#include <cstdio>
#include <ostream>
#include <string>

#include "degenbond/errors.hpp"

namespace degenbond {

ReactionQuadrature reaction_quadrature(const ProblemSpec& spec, const SpatialMesh& mesh, double t) {
    const std::size_t N = mesh.intervals();
    const double R = mesh.R();
    const double lambda = spec.lambda(t);
    // theta + lambda w - w w' is the antiderivative of everything but r in the reaction.
    auto primitive = [&](double r) {
        const double w = spec.w(r);
        return spec.theta(r) + lambda * w - w * spec.w_prime(r);
    };

    ReactionQuadrature q;
    q.Q_h.resize(N + 1);
    const double h0 = mesh.h.front();
    const double hN = mesh.h.back();
    // theta(0) and theta(R) cancel against the end-point fluxes.
    q.Q_h[0] = h0 * h0 / 8.0 + primitive(mesh.midpoints.front());
    for (std::size_t i = 1; i < N; ++i) {
        q.Q_h[i] = mesh.nodes[i] * mesh.hbar[i] + primitive(mesh.midpoints[i]) -
                   primitive(mesh.midpoints[i - 1]);
    }
    q.Q_h[N] = hN / 4.0 * (2.0 * R - hN / 2.0) - primitive(mesh.midpoints.back());
    return q;
}

std::vector<double> load_vector(const FieldFunction& forcing, const SpatialMesh& mesh, double t) {
    std::vector<double> load(mesh.nodes.size(), 0.0);
    if (!forcing) return load;
    for (std::size_t i = 0; i < load.size(); ++i) {
        load[i] = forcing(mesh.nodes[i], t) * mesh.hbar[i];
    }
    return load;
}

SemiDiscreteSystem assemble_interior_rows(std::span<const FaceFlux> fluxes,
                                          std::span<const double> degeneracy,
                                          const ReactionQuadrature& quadrature,
                                          const SpatialMesh& mesh, double t) {
    const std::size_t N = mesh.intervals();
    if (fluxes.size() != N || degeneracy.size() != N || quadrature.Q_h.size() != N + 1) {
        throw AssemblyError("face arrays do not match the mesh");
    }
    SemiDiscreteSystem s;
    s.e_sub.assign(N + 1, 0.0);
    s.e_diag.assign(N + 1, 0.0);
    s.e_super.assign(N + 1, 0.0);
    s.hbar_weights = mesh.hbar;
    s.load.assign(N + 1, 0.0);
    s.t = t;

    for (std::size_t i = 1; i < N; ++i) {
        const FaceFlux& west = fluxes[i - 1];
        const FaceFlux& east = fluxes[i];
        const double d_west = degeneracy[i - 1];
        const double d_east = degeneracy[i];
        // -[D rho]_{i-1/2}^{i+1/2} + Q_i P_i
        s.e_sub[i] = -d_west * west.coeff_left;
        s.e_super[i] = d_east * east.coeff_right;
        s.e_diag[i] = quadrature.Q_h[i] - d_east * east.coeff_left + d_west * west.coeff_right;
    }
    // An exponent beyond the double range leaves an exact zero (pure upwind), which is allowed.
    for (std::size_t i = 1; i < N; ++i) {
        const bool bad_sub = i >= 2 && !(s.e_sub[i] >= 0.0);
        const bool bad_super = i + 2 <= N && !(s.e_super[i] >= 0.0);
        if (bad_sub || bad_super) {
            throw AssemblyError("non-positive off-diagonal coupling in row " + std::to_string(i) +
                                "; check the case classification of the drift");
        }
    }
    return s;
}

void assemble_boundary_rows(SemiDiscreteSystem& s, const FaceFlux& left, const FaceFlux& right,
                            double left_degeneracy, double right_degeneracy, double Q0,
                            double QN) {
    const std::size_t N = s.size() - 1;
    s.e_diag[0] = Q0 - left_degeneracy * left.coeff_left;
    s.e_super[0] = left_degeneracy * left.coeff_right;
    s.e_sub[N] = -right_degeneracy * right.coeff_left;
    s.e_diag[N] = QN + right_degeneracy * right.coeff_right;
}

SemiDiscreteSystem assemble_fitted(const ProblemSpec& spec, const FactoredCoefficients& factored,
                                   const SpatialMesh& mesh, double t) {
    const auto coeffs = face_coefficient_values(factored, mesh, t);
    const auto fluxes = compute_fluxes(mesh, coeffs);
    const auto quadrature = reaction_quadrature(spec, mesh, t);
    auto s = assemble_interior_rows(fluxes, coeffs.degeneracy, quadrature, mesh, t);
    assemble_boundary_rows(s, fluxes.front(), fluxes.back(), coeffs.degeneracy.front(),
                           coeffs.degeneracy.back(), quadrature.Q_h.front(),
                           quadrature.Q_h.back());
    s.load = load_vector(spec.forcing, mesh, t);
    return s;
}

std::vector<double> apply_operator(const SemiDiscreteSystem& s, std::span<const double> P) {
    const std::size_t n = s.size();
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        double v = s.e_diag[i] * P[i];
        if (i > 0) v -= s.e_sub[i] * P[i - 1];
        if (i + 1 < n) v -= s.e_super[i] * P[i + 1];
        out[i] = v;
    }
    return out;
}

void write_system_csv(std::ostream& out, const SemiDiscreteSystem& s) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "# t=%.9g\n", s.t);
    out << buf << "i,e_sub,e_diag,e_super,hbar,load\n";
    for (std::size_t i = 0; i < s.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%zu,%.9g,%.9g,%.9g,%.9g,%.9g\n", i, s.e_sub[i],
                      s.e_diag[i], s.e_super[i], s.hbar_weights[i], s.load[i]);
        out << buf;
    }
}

}  // namespace degenbond
