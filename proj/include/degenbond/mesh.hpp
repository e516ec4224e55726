#pragma once

#include <cstddef>
#include <vector>

namespace degenbond {

/// Primal nodes r_0 = 0 < ... < r_N = R with the dual (control volume) partition.
///
/// `hbar[i]` is the length of the dual cell around node i: half-widths at the two ends,
/// 0.5 (h_{i-1} + h_i) in between.
struct SpatialMesh {
    std::vector<double> nodes;
    std::vector<double> h;          // h[i] = nodes[i+1] - nodes[i], size N
    std::vector<double> midpoints;  // midpoints[i] = r_{i+1/2}, size N
    std::vector<double> hbar;       // size N + 1

    std::size_t intervals() const noexcept { return h.size(); }
    double R() const noexcept { return nodes.back(); }
    bool is_uniform(double rel_tol = 1e-12) const;
};

struct TimeMesh {
    std::vector<double> levels;  // t_0 = 0 < ... < t_M = T
    std::vector<double> tau;     // tau[j] = levels[j+1] - levels[j]

    std::size_t steps() const noexcept { return tau.size(); }
};

/// N equal subintervals on [0, R]. Requires N >= 4.
SpatialMesh uniform_spatial(std::size_t N, double R);

/// Symmetric power grading toward both ends:
///   s -> R 2^{p-1} s^p              for s <= 1/2
///   s -> R (1 - 2^{p-1} (1-s)^p)    otherwise
/// An exponent of 1 is identical to uniform_spatial.
SpatialMesh graded_spatial(std::size_t N, double R, double grading_exponent);

/// Builds the dual quantities from a node list. Throws InvalidMesh unless the nodes
/// start at 0, strictly increase and number at least 5.
SpatialMesh mesh_from_nodes(std::vector<double> nodes);

/// M equal steps on [0, T]. M = 0 is accepted only for T = 0.
TimeMesh uniform_time(std::size_t M, double T);

/// Subinterval count for a node count (tables quote node counts: 21 nodes = 20 intervals).
std::size_t intervals_from_nodes(std::size_t node_count);

}  // namespace degenbond
