#include "degenbond/model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "degenbond/errors.hpp"

namespace degenbond {

std::string_view to_string(CaseTag tag) {
    switch (tag) {
        case CaseTag::Case1: return "Case1";
        case CaseTag::Case2: return "Case2";
        case CaseTag::Case3: return "Case3";
        case CaseTag::Case4: return "Case4";
    }
    return "Case?";
}

std::optional<CaseTag> case_from_string(std::string_view text) {
    if (text == "Case1" || text == "case1" || text == "1") return CaseTag::Case1;
    if (text == "Case2" || text == "case2" || text == "2") return CaseTag::Case2;
    if (text == "Case3" || text == "case3" || text == "3") return CaseTag::Case3;
    if (text == "Case4" || text == "case4" || text == "4") return CaseTag::Case4;
    return std::nullopt;
}

void validate(const ProblemSpec& spec) {
    if (!(spec.R > 0.0) || !std::isfinite(spec.R)) throw InvalidProblem("R must be positive");
    if (!(spec.T >= 0.0) || !std::isfinite(spec.T)) throw InvalidProblem("T must be non-negative");
    if (!spec.w || !spec.theta || !spec.lambda || !spec.w_prime || !spec.theta_prime ||
        !spec.ww_prime_prime || !spec.initial) {
        throw InvalidProblem("problem '" + spec.id + "' is missing a coefficient function");
    }
    const double R = spec.R;
    const double w_scale = std::max({std::abs(spec.w(0.25 * R)), std::abs(spec.w(0.5 * R)),
                                     std::abs(spec.w(0.75 * R)), 1e-300});
    if (std::abs(spec.w(0.0)) > 1e-12 * w_scale || std::abs(spec.w(R)) > 1e-12 * w_scale) {
        throw InvalidProblem("w must vanish at r = 0 and r = R");
    }
    constexpr int samples = 200;
    for (int k = 1; k < samples; ++k) {
        const double r = R * k / samples;
        if (!(spec.w(r) > 0.0)) {
            throw InvalidProblem("w must be positive on (0, R); fails at r = " + std::to_string(r));
        }
    }
    const double theta_tol = 1e-12 * std::max(1.0, std::abs(spec.theta(0.5 * R)));
    if (spec.theta(0.0) < -theta_tol) throw InvalidProblem("theta(0) must be >= 0");
    if (spec.theta(R) > theta_tol) throw InvalidProblem("theta(R) must be <= 0");
    if (spec.exact && !spec.forcing) {
        throw InvalidProblem("an exact solution is given but no forcing term");
    }
}

namespace {

enum class EndBehaviour { NonVanishing, Linear, Faster, Ambiguous };

// Behaviour of theta as the distance to an end point goes to zero, from two samples
// at distances d and d/2.
EndBehaviour end_behaviour(const std::function<double(double)>& at_distance, double d,
                           double scale) {
    constexpr double zero_threshold = 1e-8;
    const double near = at_distance(d);
    const double nearer = at_distance(0.5 * d);
    if (!std::isfinite(near) || !std::isfinite(nearer)) return EndBehaviour::Ambiguous;
    if (std::abs(near / d) <= zero_threshold * scale) return EndBehaviour::Faster;
    const double ratio = nearer / near;
    if (std::abs(ratio - 1.0) < 0.05) return EndBehaviour::NonVanishing;
    if (std::abs(ratio - 0.5) < 0.05) return EndBehaviour::Linear;
    if (ratio >= 0.0 && ratio < 0.3) return EndBehaviour::Faster;
    return EndBehaviour::Ambiguous;
}

}  // namespace

CaseTag classify_case(const ProblemSpec& spec) {
    const double R = spec.R;
    const double d = 1e-6 * R;
    double scale = 0.0;
    for (int k = 0; k <= 100; ++k) scale = std::max(scale, std::abs(spec.theta(R * k / 100.0)));
    if (scale == 0.0) return CaseTag::Case1;

    const auto left = end_behaviour([&](double s) { return spec.theta(s); }, d, scale);
    const auto right = end_behaviour([&](double s) { return spec.theta(R - s); }, d, scale);
    if (left == EndBehaviour::Ambiguous || right == EndBehaviour::Ambiguous) {
        throw AmbiguousCase("drift '" + spec.id +
                            "' matches no factorization near the end points");
    }
    const bool left_vanishes = left != EndBehaviour::NonVanishing;
    const bool right_vanishes = right != EndBehaviour::NonVanishing;
    if (left_vanishes && right_vanishes) return CaseTag::Case1;
    if (left_vanishes) return CaseTag::Case2;
    if (right_vanishes) return CaseTag::Case3;
    return CaseTag::Case4;
}

FactoredCoefficients factor_coefficients(const ProblemSpec& spec) {
    const CaseTag tag = spec.case_tag ? *spec.case_tag : classify_case(spec);
    const double R = spec.R;

    FactoredCoefficients f;
    f.case_tag = tag;
    f.R = R;

    const auto w = spec.w;
    const auto w_prime = spec.w_prime;
    const auto theta = spec.theta;
    const auto theta_prime = spec.theta_prime;
    const auto lambda = spec.lambda;

    // One-sided limits at the ends come from the analytic derivatives.
    f.w0 = [w, w_prime, R](double r) {
        if (r <= 0.0) return w_prime(0.0) / R;
        if (r >= R) return -w_prime(R) / R;
        return w(r) / (r * (R - r));
    };
    const double w0_left = f.w0(0.0);
    const double w0_right = f.w0(R);
    if (!(w0_left > 0.0) || !(w0_right > 0.0)) {
        throw DegenerateFactor("w / (r (R - r)) must have positive limits at both ends");
    }

    const auto w0 = f.w0;
    auto half_w0_sq = [w0](double r) {
        const double v = w0(r);
        return 0.5 * v * v;
    };

    switch (tag) {
        case CaseTag::Case1:
            f.theta0 = [theta, theta_prime, R](double r) {
                if (r <= 0.0) return theta_prime(0.0) / R;
                if (r >= R) return -theta_prime(R) / R;
                return theta(r) / (r * (R - r));
            };
            f.degeneracy = [R](double r) { return r * (R - r); };
            f.a_interior = half_w0_sq;
            f.a_left = [half_w0_sq, R](double r) { return half_w0_sq(r) * (R - r); };
            f.a_right = [half_w0_sq](double r) { return half_w0_sq(r) * r; };
            f.b = [theta0 = f.theta0, lambda, w_prime, w0](double r, double t) {
                return theta0(r) + (lambda(t) - w_prime(r)) * w0(r);
            };
            break;
        case CaseTag::Case2:
            f.theta0 = [theta, theta_prime](double r) {
                if (r <= 0.0) return theta_prime(0.0);
                return theta(r) / r;
            };
            f.degeneracy = [](double r) { return r; };
            f.a_interior = [half_w0_sq, R](double r) { return half_w0_sq(r) * (R - r); };
            f.a_left = [half_w0_sq, R](double r) { return half_w0_sq(r) * (R - r) * (R - r); };
            f.a_right = [half_w0_sq, R](double r) { return half_w0_sq(r) * r * (R - r); };
            f.b = [theta0 = f.theta0, lambda, w_prime, w0, R](double r, double t) {
                return theta0(r) + (lambda(t) - w_prime(r)) * (R - r) * w0(r);
            };
            break;
        case CaseTag::Case3:
            f.theta0 = [theta, theta_prime, R](double r) {
                if (r >= R) return -theta_prime(R);
                return theta(r) / (R - r);
            };
            f.degeneracy = [R](double r) { return R - r; };
            f.a_interior = [half_w0_sq](double r) { return half_w0_sq(r) * r; };
            f.a_left = [half_w0_sq, R](double r) { return half_w0_sq(r) * r * (R - r); };
            f.a_right = [half_w0_sq](double r) { return half_w0_sq(r) * r * r; };
            f.b = [theta0 = f.theta0, lambda, w_prime, w0](double r, double t) {
                return theta0(r) + (lambda(t) - w_prime(r)) * r * w0(r);
            };
            break;
        case CaseTag::Case4:
            f.theta0 = theta;
            f.degeneracy = [](double) { return 1.0; };
            f.a_interior = [half_w0_sq, R](double r) { return half_w0_sq(r) * r * (R - r); };
            f.a_left = [half_w0_sq, R](double r) {
                return half_w0_sq(r) * r * (R - r) * (R - r);
            };
            f.a_right = [half_w0_sq, R](double r) { return half_w0_sq(r) * r * r * (R - r); };
            f.b = [theta, lambda, w_prime, w](double r, double t) {
                return theta(r) + (lambda(t) - w_prime(r)) * w(r);
            };
            break;
    }
    return f;
}

FieldFunction manufactured_forcing(const ProblemSpec& spec, const ExactSolution& u) {
    return [w = spec.w, theta = spec.theta, lambda = spec.lambda, u](double r, double t) {
        const double wr = w(r);
        return u.u_t(r, t) - 0.5 * wr * wr * u.u_rr(r, t) -
               (theta(r) + lambda(t) * wr) * u.u_r(r, t) + r * u.u(r, t);
    };
}

double reaction_coefficient(const ProblemSpec& spec, double r, double t) {
    return r + spec.theta_prime(r) + spec.lambda(t) * spec.w_prime(r) - spec.ww_prime_prime(r);
}

ExactSolution exponential_solution() {
    ExactSolution u;
    u.u = [](double r, double t) { return std::exp(-r - t); };
    u.u_t = [](double r, double t) { return -std::exp(-r - t); };
    u.u_r = [](double r, double t) { return -std::exp(-r - t); };
    u.u_rr = [](double r, double t) { return std::exp(-r - t); };
    return u;
}

bool is_builtin_problem(std::string_view id) {
    return id == "example1" || id == "example2" || id == "example3";
}

ProblemSpec builtin_problem(std::string_view id, bool manufactured, double face_value) {
    if (!is_builtin_problem(id)) {
        throw InvalidProblem("unknown built-in problem '" + std::string(id) + "'");
    }
    constexpr double R = 1.0;
    ProblemSpec spec;
    spec.id = std::string(id);
    spec.R = R;
    spec.T = 1.0;
    spec.w = [](double r) { return r * (R - r); };
    spec.w_prime = [](double r) { return R - 2.0 * r; };
    // (w w')' = w'^2 + w w''
    spec.ww_prime_prime = [](double r) {
        const double wp = R - 2.0 * r;
        return wp * wp - 2.0 * r * (R - r);
    };
    spec.lambda = [](double t) { return 0.25 / (1.0 + t * t); };

    if (id == "example1") {
        spec.theta = [](double r) { return r * (R - r); };
        spec.theta_prime = [](double r) { return R - 2.0 * r; };
        spec.case_tag = CaseTag::Case1;
    } else if (id == "example2") {
        spec.theta = [](double r) { return r * (R - r) * (0.5 * R - r); };
        // d/dr [(rR - r^2)(R/2 - r)]
        spec.theta_prime = [](double r) {
            return (R - 2.0 * r) * (0.5 * R - r) - r * (R - r);
        };
        spec.case_tag = CaseTag::Case1;
    } else {
        spec.theta = [](double r) { return 0.5 * R - r; };
        spec.theta_prime = [](double) { return -1.0; };
        spec.case_tag = CaseTag::Case4;
    }

    if (manufactured) {
        auto u = exponential_solution();
        spec.initial = [u](double r) { return u.u(r, 0.0); };
        spec.forcing = manufactured_forcing(spec, u);
        spec.exact = u;
    } else {
        spec.initial = [face_value](double) { return face_value; };
    }
    return spec;
}

}  // namespace degenbond
