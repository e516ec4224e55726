#pragma once

#include <cstddef>
#include <vector>

#include "degenbond/mesh.hpp"
#include "degenbond/model.hpp"

namespace degenbond {

enum class FaceKind { Interior, LeftBoundary, RightBoundary };

/// Two-point flux at the face r_{i+1/2}: rho_i = coeff_left * P_i + coeff_right * P_{i+1}.
struct FaceFlux {
    std::size_t face_index = 0;
    double coeff_left = 0.0;
    double coeff_right = 0.0;
    double alpha = 0.0;  // b / a at the face
    FaceKind kind = FaceKind::Interior;

    double apply(double p_left, double p_right) const noexcept {
        return coeff_left * p_left + coeff_right * p_right;
    }
};

/// Below this magnitude of the fitted exponent (alpha / R) * [ln(r/(R-r))] across the
/// face the series form of the flux replaces the exponential ratio.
inline constexpr double kFittingExponentSwitch = 1e-7;

/// Exponentially fitted flux on an interior face 1 <= i <= N-2.
///
/// Solves (a r (R-r) v' + b v)' = 0 on (r_i, r_{i+1}) with v(r_i) = P_i, v(r_{i+1}) = P_{i+1}
/// and returns the constant a r (R-r) v' + b v. With x = (alpha/R) [L_{i+1} - L_i],
/// L = ln(r/(R-r)):
///   coeff_right =  b / (1 - e^{-x}),   coeff_left = -b / (e^{x} - 1).
FaceFlux interior_flux(const SpatialMesh& mesh, double a_face, double b_face, std::size_t i,
                       double R);

/// Flux on face 0 from the linear local solution: 1/2 [(a+b) P_1 - (a-b) P_0].
FaceFlux left_boundary_flux(double a_face, double b_face);

/// Flux on face N-1: 1/2 [(a+b) P_N - (a-b) P_{N-1}].
FaceFlux right_boundary_flux(double a_face, double b_face, std::size_t last_face);

/// Face-family coefficient values at one time level.
struct FaceCoefficients {
    std::vector<double> a;           // a at r_{i+1/2}, face family per position
    std::vector<double> b;           // b at (r_{i+1/2}, t)
    std::vector<double> degeneracy;  // multiplier D(r_{i+1/2}) in front of rho
};

FaceCoefficients face_coefficient_values(const FactoredCoefficients& factored,
                                         const SpatialMesh& mesh, double t);

/// All N face fluxes for the given coefficients.
std::vector<FaceFlux> compute_fluxes(const SpatialMesh& mesh, const FaceCoefficients& coeffs);

}  // namespace degenbond
