#include "degenbond/fitted_flux.hpp"

#include <cmath>
#include <string>

#include "degenbond/errors.hpp"

namespace degenbond {

FaceFlux interior_flux(const SpatialMesh& mesh, double a_face, double b_face, std::size_t i,
                       double R) {
    const std::size_t N = mesh.intervals();
    if (i < 1 || i + 2 > N) {
        throw InvalidMesh("interior flux requested on face " + std::to_string(i) +
                          " outside 1..N-2");
    }
    if (!(a_face > 0.0)) {
        throw DegenerateFactor("non-positive diffusion coefficient on face " + std::to_string(i));
    }
    const double r0 = mesh.nodes[i];
    const double r1 = mesh.nodes[i + 1];
    // ln of (r1/(R-r1)) / (r0/(R-r0)), positive for r0 < r1.
    const double log_gap = std::log((r1 / r0) * ((R - r0) / (R - r1)));
    const double alpha = b_face / a_face;
    const double x = alpha / R * log_gap;

    FaceFlux f;
    f.face_index = i;
    f.alpha = alpha;
    f.kind = FaceKind::Interior;
    if (std::abs(x) < kFittingExponentSwitch) {
        // b / x == a R / log_gap exactly; keep terms through x^2.
        const double scale = a_face * R / log_gap;
        const double even = 1.0 + x * x / 12.0;
        f.coeff_right = scale * (even + 0.5 * x);
        f.coeff_left = -scale * (even - 0.5 * x);
    } else {
        f.coeff_right = -b_face / std::expm1(-x);
        f.coeff_left = -b_face / std::expm1(x);
    }
    if (!std::isfinite(f.coeff_left) || !std::isfinite(f.coeff_right)) {
        throw NumericalOverflow("fitted flux weights overflow on face " + std::to_string(i));
    }
    return f;
}

FaceFlux left_boundary_flux(double a_face, double b_face) {
    FaceFlux f;
    f.face_index = 0;
    f.kind = FaceKind::LeftBoundary;
    f.alpha = b_face / a_face;
    f.coeff_right = 0.5 * (a_face + b_face);
    f.coeff_left = -0.5 * (a_face - b_face);
    return f;
}

FaceFlux right_boundary_flux(double a_face, double b_face, std::size_t last_face) {
    FaceFlux f;
    f.face_index = last_face;
    f.kind = FaceKind::RightBoundary;
    f.alpha = b_face / a_face;
    f.coeff_right = 0.5 * (a_face + b_face);
    f.coeff_left = -0.5 * (a_face - b_face);
    return f;
}

FaceCoefficients face_coefficient_values(const FactoredCoefficients& factored,
                                         const SpatialMesh& mesh, double t) {
    const std::size_t N = mesh.intervals();
    FaceCoefficients c;
    c.a.resize(N);
    c.b.resize(N);
    c.degeneracy.resize(N);
    for (std::size_t i = 0; i < N; ++i) {
        const double r = mesh.midpoints[i];
        if (i == 0) {
            c.a[i] = factored.a_left(r);
        } else if (i + 1 == N) {
            c.a[i] = factored.a_right(r);
        } else {
            c.a[i] = factored.a_interior(r);
        }
        c.b[i] = factored.b(r, t);
        c.degeneracy[i] = factored.degeneracy(r);
        if (!(c.a[i] > 0.0) || !std::isfinite(c.a[i])) {
            throw DegenerateFactor("face coefficient a is not positive at r = " +
                                   std::to_string(r));
        }
        if (!std::isfinite(c.b[i])) {
            throw DegenerateFactor("face coefficient b is not finite at r = " + std::to_string(r));
        }
    }
    return c;
}

std::vector<FaceFlux> compute_fluxes(const SpatialMesh& mesh, const FaceCoefficients& coeffs) {
    const std::size_t N = mesh.intervals();
    const double R = mesh.R();
    std::vector<FaceFlux> fluxes;
    fluxes.reserve(N);
    fluxes.push_back(left_boundary_flux(coeffs.a[0], coeffs.b[0]));
    for (std::size_t i = 1; i + 1 < N; ++i) {
        fluxes.push_back(interior_flux(mesh, coeffs.a[i], coeffs.b[i], i, R));
    }
    fluxes.push_back(right_boundary_flux(coeffs.a[N - 1], coeffs.b[N - 1], N - 1));
    return fluxes;
}

}  // namespace degenbond
