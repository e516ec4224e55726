#pragma once

#include <functional>
#include <optional>
#include <string>
#include <string_view>

namespace degenbond {

using RateFunction = std::function<double(double)>;           // r -> value
using TimeFunction = std::function<double(double)>;           // t -> value
using FieldFunction = std::function<double(double, double)>;  // (r, t) -> value

/// Structural form of the drift near the two degenerate ends.
///
///   Case1: theta = r (R - r) theta0
///   Case2: theta = r theta0,         theta0(R) < 0
///   Case3: theta = (R - r) theta0,   theta0(0) > 0
///   Case4: theta = theta0,           theta0(0) > 0, theta0(R) < 0
enum class CaseTag { Case1 = 1, Case2 = 2, Case3 = 3, Case4 = 4 };

std::string_view to_string(CaseTag tag);
std::optional<CaseTag> case_from_string(std::string_view text);

/// Manufactured solution u with the partial derivatives needed to build a forcing term.
struct ExactSolution {
    FieldFunction u;
    FieldFunction u_t;
    FieldFunction u_r;
    FieldFunction u_rr;
};

/// Forward (time-to-maturity) pricing problem
///   P_t - (w^2/2) P_rr - (theta + lambda w) P_r + r P = f   on [0,R] x (0,T],
///   P(r, 0) = P0(r).
/// No boundary conditions are posed: w vanishes at both ends.
struct ProblemSpec {
    std::string id = "custom";
    double R = 1.0;
    double T = 1.0;
    RateFunction w;
    RateFunction theta;
    TimeFunction lambda;
    RateFunction w_prime;
    RateFunction theta_prime;
    RateFunction ww_prime_prime;  // d/dr (w w')
    std::optional<CaseTag> case_tag;  // explicit override; inferred when absent
    RateFunction initial;
    FieldFunction forcing;  // empty when the problem is unforced
    std::optional<ExactSolution> exact;

    bool has_forcing() const noexcept { return static_cast<bool>(forcing); }
};

/// Case-specific factorization w = r (R - r) w0 plus the drift factor theta0.
///
/// The conservative flux is written as D(r) [a(r) g(r) P_r + b(r,t) P] where g depends
/// on the face family: r (R - r) at interior faces, r at the first face, (R - r) at the
/// last face. `a_*` return the face-family coefficient, `degeneracy` returns D.
struct FactoredCoefficients {
    CaseTag case_tag = CaseTag::Case1;
    double R = 1.0;
    RateFunction w0;
    RateFunction theta0;
    RateFunction a_interior;
    RateFunction a_left;
    RateFunction a_right;
    FieldFunction b;
    RateFunction degeneracy;
};

/// Sample the drift near both ends and infer the factorization case.
CaseTag classify_case(const ProblemSpec& spec);

/// Build the factorization for the problem's case (explicit tag if set, inferred otherwise).
FactoredCoefficients factor_coefficients(const ProblemSpec& spec);

/// f = u_t - (w^2/2) u_rr - (theta + lambda w) u_r + r u.
FieldFunction manufactured_forcing(const ProblemSpec& spec, const ExactSolution& u);

/// Zeroth-order coefficient of the conservative form: r + theta' + lambda w' - (w w')'.
double reaction_coefficient(const ProblemSpec& spec, double r, double t);

/// Checks w(0) = w(R) = 0, w > 0 inside, theta(0) >= 0, theta(R) <= 0 and the
/// presence of every required callable. Throws InvalidProblem.
void validate(const ProblemSpec& spec);

/// u(r, t) = exp(-r - t).
ExactSolution exponential_solution();

/// Built-in problems `example1`, `example2`, `example3` on R = T = 1 with
/// lambda(t) = 0.25 / (1 + t^2) and w(r) = r (R - r).
///
/// With `manufactured` the initial data and forcing come from exp(-r-t); otherwise the
/// problem is the unforced bond problem with P0 = face_value.
ProblemSpec builtin_problem(std::string_view id, bool manufactured = true,
                            double face_value = 1.0);

bool is_builtin_problem(std::string_view id);

}  // namespace degenbond
