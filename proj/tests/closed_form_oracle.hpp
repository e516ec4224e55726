#pragma once

// Scalar evaluation of the assembled coefficients for the first example problem
// (w = r(1-r), theta = r(1-r), lambda(t) = 0.25/(1+t^2), R = 1) on a uniform grid,
// written straight from the closed forms with explicit powers. Shares no code with
// the library.

#include <cmath>
#include <cstddef>
#include <vector>

namespace oracle {

struct Rows {
    std::vector<double> sub, diag, super;
};

inline Rows example1_rows(std::size_t N, double t) {
    const double R = 1.0;
    const double h = R / static_cast<double>(N);
    const double lambda = 0.25 / (1.0 + t * t);
    auto node = [&](std::size_t i) { return h * static_cast<double>(i); };
    auto mid = [&](std::size_t i) { return h * (static_cast<double>(i) + 0.5); };
    auto theta = [](double r) { return r * (1.0 - r); };
    auto w = [](double r) { return r * (1.0 - r); };
    auto wwp = [](double r) { return r * (1.0 - r) * (1.0 - 2.0 * r); };
    // theta0 = 1, w0 = 1
    auto b = [&](double r) { return 1.0 + (lambda - (1.0 - 2.0 * r)); };
    const double a = 0.5;
    auto g = [&](double alpha, double r) { return std::pow(r / (R - r), alpha / R); };

    std::vector<double> Q(N + 1);
    Q[0] = h * h / 8.0 + theta(mid(0)) + lambda * w(mid(0)) - wwp(mid(0));
    for (std::size_t i = 1; i < N; ++i) {
        const double rp = mid(i), rm = mid(i - 1);
        Q[i] = node(i) * h + theta(rp) - theta(rm) + lambda * (w(rp) - w(rm)) - wwp(rp) + wwp(rm);
    }
    const double rl = mid(N - 1);
    Q[N] = h / 4.0 * (2.0 * R - h / 2.0) - theta(rl) - lambda * w(rl) + wwp(rl);

    Rows out;
    out.sub.assign(N + 1, 0.0);
    out.diag.assign(N + 1, 0.0);
    out.super.assign(N + 1, 0.0);

    const double a_left = 0.5 * (R - mid(0));
    const double b_left = b(mid(0));
    const double a_right = 0.5 * mid(N - 1);
    const double b_right = b(mid(N - 1));
    const double end_weight = h / 4.0 * (R - h / 2.0);

    out.diag[0] = end_weight * (a_left - b_left) + Q[0];
    out.super[0] = end_weight * (a_left + b_left);
    out.sub[N] = end_weight * (a_right - b_right);
    out.diag[N] = end_weight * (a_right + b_right) + Q[N];

    // Interior face k in 1..N-2 between r_k and r_{k+1}.
    auto face = [&](std::size_t k, double& to_left, double& to_right) {
        const double rk = mid(k);
        const double bk = b(rk);
        const double alpha = bk / a;
        const double gl = g(alpha, node(k));
        const double gr = g(alpha, node(k + 1));
        const double weight = rk * (R - rk) * bk;
        to_left = weight * gl / (gr - gl);
        to_right = weight * gr / (gr - gl);
    };

    for (std::size_t i = 1; i <= N - 1; ++i) {
        double diag = Q[i];
        if (i == 1) {
            const double d = 0.5 * mid(0) * (R - mid(0));
            out.sub[1] = d * (a_left - b_left);
            diag += d * (a_left + b_left);
        } else {
            double to_left = 0.0, to_right = 0.0;
            face(i - 1, to_left, to_right);
            out.sub[i] = to_left;
            diag += to_right;
        }
        if (i == N - 1) {
            const double d = 0.5 * mid(N - 1) * (R - mid(N - 1));
            out.super[N - 1] = d * (a_right + b_right);
            diag += d * (a_right - b_right);
        } else {
            double to_left = 0.0, to_right = 0.0;
            face(i, to_left, to_right);
            out.super[i] = to_right;
            diag += to_left;
        }
        out.diag[i] = diag;
    }
    return out;
}

}  // namespace oracle
