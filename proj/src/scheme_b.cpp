#include "degenbond/scheme_b.hpp"

#include "degenbond/errors.hpp"

namespace degenbond {

SemiDiscreteSystem assemble_scheme_b(const ProblemSpec& spec, const SpatialMesh& mesh, double t,
                                     const SchemeBOptions& options) {
    if (!mesh.is_uniform(1e-9)) throw NonUniformMesh("the baseline scheme needs a uniform mesh");
    const std::size_t N = mesh.intervals();
    const double h = mesh.h.front();
    const double R = mesh.R();
    const double lambda = spec.lambda(t);

    SemiDiscreteSystem s;
    s.e_sub.assign(N + 1, 0.0);
    s.e_diag.assign(N + 1, 0.0);
    s.e_super.assign(N + 1, 0.0);
    s.hbar_weights.assign(N + 1, 1.0);
    s.load.assign(N + 1, 0.0);
    s.t = t;

    for (std::size_t i = 1; i < N; ++i) {
        const double r = mesh.nodes[i];
        const double w = spec.w(r);
        const double diffusion = 0.5 * w * w / (h * h);
        const double convection = (spec.theta(r) + lambda * w) / (2.0 * h);
        s.e_sub[i] = diffusion - convection;
        s.e_super[i] = diffusion + convection;
        s.e_diag[i] = 2.0 * diffusion + r;
    }
    // Upwinded characteristic equations at the degenerate ends.
    const double speed_left = spec.theta(0.0);
    s.e_diag[0] = speed_left / h;
    s.e_super[0] = speed_left / h;
    const double speed_right = spec.theta(R);
    s.e_sub[N] = -speed_right / h;
    s.e_diag[N] = -speed_right / h + R;

    if (spec.forcing) {
        const std::size_t first = options.force_boundary_rows ? 0 : 1;
        const std::size_t last = options.force_boundary_rows ? N : N - 1;
        for (std::size_t i = first; i <= last; ++i) s.load[i] = spec.forcing(mesh.nodes[i], t);
    }
    return s;
}

MarchResult march_scheme_b(const ProblemSpec& spec, const SpatialMesh& mesh,
                           const TimeMesh& time_mesh, MarchOptions options,
                           const SchemeBOptions& scheme_options, const LevelObserver& observer) {
    validate(spec);
    if (!mesh.is_uniform(1e-9)) throw NonUniformMesh("the baseline scheme needs a uniform mesh");
    options.xi = 0.5;
    OperatorAssembler assemble = [&](double t) { return assemble_scheme_b(spec, mesh, t, scheme_options); };
    return march(assemble, sample_initial(spec, mesh), time_mesh, options, observer);
}

}  // namespace degenbond
