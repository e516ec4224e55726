#include "degenbond/tridiagonal.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "degenbond/errors.hpp"

namespace degenbond {

std::vector<double> solve_tridiagonal(const TridiagonalSystem& sys) {
    const std::size_t n = sys.size();
    if (n == 0) return {};
    if (sys.sub.size() != n || sys.super.size() != n || sys.rhs.size() != n) {
        throw SingularSystem("tridiagonal arrays have inconsistent sizes");
    }
    constexpr double tiny = 1e-300;
    std::vector<double> c_prime(n, 0.0);
    std::vector<double> x(n);

    double pivot = sys.diag[0];
    if (std::abs(pivot) < tiny) throw SingularSystem("zero pivot in row 0");
    c_prime[0] = n > 1 ? sys.super[0] / pivot : 0.0;
    x[0] = sys.rhs[0] / pivot;
    for (std::size_t i = 1; i < n; ++i) {
        pivot = sys.diag[i] - sys.sub[i] * c_prime[i - 1];
        if (std::abs(pivot) < tiny) {
            throw SingularSystem("zero pivot in row " + std::to_string(i));
        }
        c_prime[i] = i + 1 < n ? sys.super[i] / pivot : 0.0;
        x[i] = (sys.rhs[i] - sys.sub[i] * x[i - 1]) / pivot;
    }
    for (std::size_t i = n - 1; i > 0; --i) x[i - 1] -= c_prime[i - 1] * x[i];
    return x;
}

double residual_inf(const TridiagonalSystem& sys, std::span<const double> x) {
    const std::size_t n = sys.size();
    double worst = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double v = sys.diag[i] * x[i] - sys.rhs[i];
        if (i > 0) v += sys.sub[i] * x[i - 1];
        if (i + 1 < n) v += sys.super[i] * x[i + 1];
        worst = std::max(worst, std::abs(v));
    }
    return worst;
}

double matrix_inf_norm(const TridiagonalSystem& sys) {
    const std::size_t n = sys.size();
    double norm = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double row = std::abs(sys.diag[i]);
        if (i > 0) row += std::abs(sys.sub[i]);
        if (i + 1 < n) row += std::abs(sys.super[i]);
        norm = std::max(norm, row);
    }
    return norm;
}

}  // namespace degenbond
