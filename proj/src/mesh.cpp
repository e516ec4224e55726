#include "degenbond/mesh.hpp"

#include <cmath>
#include <string>

#include "degenbond/errors.hpp"

namespace degenbond {

bool SpatialMesh::is_uniform(double rel_tol) const {
    if (h.empty()) return true;
    const double ref = h.front();
    for (double hi : h) {
        if (std::abs(hi - ref) > rel_tol * ref) return false;
    }
    return true;
}

SpatialMesh mesh_from_nodes(std::vector<double> nodes) {
    if (nodes.size() < 5) throw InvalidMesh("a mesh needs at least 4 subintervals");
    if (nodes.front() != 0.0) throw InvalidMesh("the first node must be r = 0");
    for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
        if (!(nodes[i + 1] > nodes[i]) || !std::isfinite(nodes[i + 1])) {
            throw InvalidMesh("nodes must be finite and strictly increasing (index " +
                              std::to_string(i + 1) + ")");
        }
    }
    SpatialMesh mesh;
    const std::size_t N = nodes.size() - 1;
    mesh.h.resize(N);
    mesh.midpoints.resize(N);
    mesh.hbar.resize(N + 1);
    for (std::size_t i = 0; i < N; ++i) {
        mesh.h[i] = nodes[i + 1] - nodes[i];
        mesh.midpoints[i] = 0.5 * (nodes[i] + nodes[i + 1]);
    }
    mesh.hbar[0] = 0.5 * mesh.h[0];
    for (std::size_t i = 1; i < N; ++i) mesh.hbar[i] = 0.5 * (mesh.h[i - 1] + mesh.h[i]);
    mesh.hbar[N] = 0.5 * mesh.h[N - 1];
    mesh.nodes = std::move(nodes);
    return mesh;
}

SpatialMesh uniform_spatial(std::size_t N, double R) {
    if (N < 4) throw InvalidMesh("N = " + std::to_string(N) + " < 4 subintervals");
    if (!(R > 0.0)) throw InvalidMesh("R must be positive");
    std::vector<double> nodes(N + 1);
    // R * i / N keeps the even nodes of a 2N mesh bit-identical to this one.
    for (std::size_t i = 0; i < N; ++i) nodes[i] = R * static_cast<double>(i) / static_cast<double>(N);
    nodes[N] = R;
    return mesh_from_nodes(std::move(nodes));
}

SpatialMesh graded_spatial(std::size_t N, double R, double grading_exponent) {
    if (!(grading_exponent >= 1.0)) throw InvalidMesh("grading exponent must be >= 1");
    if (grading_exponent == 1.0) return uniform_spatial(N, R);
    if (N < 4) throw InvalidMesh("N = " + std::to_string(N) + " < 4 subintervals");
    const double p = grading_exponent;
    const double c = std::pow(2.0, p - 1.0);
    std::vector<double> nodes(N + 1);
    for (std::size_t i = 0; i <= N; ++i) {
        const double s = static_cast<double>(i) / static_cast<double>(N);
        nodes[i] = s <= 0.5 ? R * c * std::pow(s, p) : R * (1.0 - c * std::pow(1.0 - s, p));
    }
    nodes[0] = 0.0;
    nodes[N] = R;
    return mesh_from_nodes(std::move(nodes));
}

TimeMesh uniform_time(std::size_t M, double T) {
    TimeMesh tm;
    if (M == 0) {
        if (T != 0.0) throw InvalidMesh("M = 0 time steps requires T = 0");
        tm.levels = {0.0};
        return tm;
    }
    if (!(T > 0.0)) throw InvalidMesh("T must be positive when M >= 1");
    tm.levels.resize(M + 1);
    tm.tau.resize(M);
    for (std::size_t j = 0; j < M; ++j) tm.levels[j] = T * static_cast<double>(j) / static_cast<double>(M);
    tm.levels[M] = T;
    for (std::size_t j = 0; j < M; ++j) tm.tau[j] = tm.levels[j + 1] - tm.levels[j];
    return tm;
}

std::size_t intervals_from_nodes(std::size_t node_count) {
    if (node_count < 5) throw InvalidMesh("at least 5 nodes are required");
    return node_count - 1;
}

}  // namespace degenbond
