#pragma once

#include <span>
#include <vector>

namespace degenbond {

/// Row i reads  sub[i] x_{i-1} + diag[i] x_i + super[i] x_{i+1} = rhs[i].
/// sub[0] and super[n-1] are ignored.
struct TridiagonalSystem {
    std::vector<double> sub;
    std::vector<double> diag;
    std::vector<double> super;
    std::vector<double> rhs;

    std::size_t size() const noexcept { return diag.size(); }
};

/// Gaussian elimination without pivoting (Thomas algorithm).
/// Throws SingularSystem when a pivot falls below 1e-300 in magnitude.
std::vector<double> solve_tridiagonal(const TridiagonalSystem& system);

/// max_i |(A x - rhs)_i|
double residual_inf(const TridiagonalSystem& system, std::span<const double> x);

/// max_i (|sub_i| + |diag_i| + |super_i|)
double matrix_inf_norm(const TridiagonalSystem& system);

}  // namespace degenbond
