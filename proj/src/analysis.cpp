#include "degenbond/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>

#include "degenbond/errors.hpp"

namespace degenbond {

NormAccumulator::NormAccumulator(const SpatialMesh& mesh, const TimeMesh& time_mesh,
                                 FieldFunction exact)
    : mesh_(&mesh),
      tau_weight_(time_mesh.steps() > 0 ? time_mesh.tau.front() : 1.0),
      uniform_(mesh.is_uniform(1e-9)),
      exact_(std::move(exact)),
      error_(mesh.nodes.size()) {
    if (!exact_) throw MissingExact("error norms need an exact solution");
    space_weight_.resize(mesh.nodes.size());
    for (std::size_t i = 0; i < space_weight_.size(); ++i) {
        space_weight_[i] = uniform_ ? mesh.h.front() : mesh.hbar[i];
    }
}

void NormAccumulator::add_level(double t, std::span<const double> P) {
    const auto& r = mesh_->nodes;
    const std::size_t n = r.size();
    for (std::size_t i = 0; i < n; ++i) {
        error_[i] = P[i] - exact_(r[i], t);
        max_error_ = std::max(max_error_, std::abs(error_[i]));
        max_solution_ = std::max(max_solution_, std::abs(P[i]));
        l2_sum_ += space_weight_[i] * tau_weight_ * error_[i] * error_[i];
    }
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const double slope = (error_[i + 1] - error_[i - 1]) / (r[i + 1] - r[i - 1]);
        h1_sum_ += space_weight_[i] * tau_weight_ * (error_[i] * error_[i] + slope * slope);
    }
    ++levels_;
}

ErrorReport NormAccumulator::finish() const {
    ErrorReport report;
    report.c_norm = max_solution_ > 0.0 ? max_error_ / max_solution_ : max_error_;
    report.l2_norm = std::sqrt(l2_sum_);
    report.h1_norm = std::sqrt(h1_sum_);
    report.nodes = mesh_->nodes.size();
    report.steps = levels_ > 0 ? levels_ - 1 : 0;
    report.generalized = !uniform_;
    return report;
}

LevelObserver NormAccumulator::observer() {
    return [this](std::size_t, double t, std::span<const double> P,
                  const std::optional<StepDiagnostics>&) { add_level(t, P); };
}

ErrorReport error_norms(std::span<const SolutionField> history, const ProblemSpec& spec,
                        const SpatialMesh& mesh, const TimeMesh& time_mesh) {
    if (!spec.exact) throw MissingExact("problem '" + spec.id + "' has no exact solution");
    NormAccumulator acc(mesh, time_mesh, spec.exact->u);
    for (const auto& level : history) acc.add_level(level.time, level.values);
    auto report = acc.finish();
    report.problem_id = spec.id;
    return report;
}

namespace {

double log2_ratio(double coarse, double fine) {
    if (coarse == 0.0 || fine == 0.0) throw RateUndefined("zero error in a rate estimate");
    return std::log2(coarse / fine);
}

}  // namespace

RateTable double_mesh_rates(std::span<const ErrorReport> reports) {
    RateTable table;
    for (std::size_t k = 0; k < reports.size(); ++k) {
        const auto& rep = reports[k];
        RateRow row{rep.nodes, rep.c_norm, rep.l2_norm, rep.h1_norm, {}, {}, {}};
        if (k > 0) {
            const auto& prev = reports[k - 1];
            if (rep.nodes - 1 != 2 * (prev.nodes - 1)) {
                throw ValidationError("nodes", "double-mesh rates need doubled subinterval counts (" +
                                                   std::to_string(prev.nodes) + " -> " +
                                                   std::to_string(rep.nodes) + " nodes)");
            }
            if (rep.steps != prev.steps) {
                throw ValidationError("steps", "double-mesh rates need a fixed time step");
            }
            row.c_rate = log2_ratio(prev.c_norm, rep.c_norm);
            row.l2_rate = log2_ratio(prev.l2_norm, rep.l2_norm);
            row.h1_rate = log2_ratio(prev.h1_norm, rep.h1_norm);
        }
        table.rows.push_back(row);
    }
    return table;
}

double runge_rate_exact(double u, double p_h, double p_h2) {
    const double num = u - p_h;
    const double den = u - p_h2;
    if (num == 0.0 || den == 0.0) throw RateUndefined("zero error in the Runge estimate");
    return std::log(std::abs(num / den)) / std::log(2.0);
}

double runge_rate_three_grid(double p_h, double p_h2, double p_h4) {
    const double num = p_h - p_h2;
    const double den = p_h2 - p_h4;
    if (num == 0.0 || den == 0.0) throw RateUndefined("zero difference in the Runge estimate");
    return std::log(std::abs(num / den)) / std::log(2.0);
}

double runge_rate(double p_h, double p_h2, std::optional<double> p_h4, std::optional<double> u) {
    if (u) return runge_rate_exact(*u, p_h, p_h2);
    if (!p_h4) throw RateUndefined("the three-grid Runge estimate needs a third solution");
    return runge_rate_three_grid(p_h, p_h2, *p_h4);
}

double value_at_node(const SpatialMesh& mesh, std::span<const double> values, double r) {
    const auto& nodes = mesh.nodes;
    const auto it = std::lower_bound(nodes.begin(), nodes.end(), r - 1e-12 * mesh.R());
    if (it == nodes.end() || std::abs(*it - r) > 1e-12 * mesh.R()) {
        throw InvalidMesh("r = " + std::to_string(r) + " is not a mesh node");
    }
    return values[static_cast<std::size_t>(it - nodes.begin())];
}

void write_rate_table_csv(std::ostream& out, const RateTable& table) {
    auto num = [](double v) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.9g", v);
        return std::string(buf);
    };
    auto opt = [&](const std::optional<double>& v) { return v ? num(*v) : std::string(); };
    out << "N,C-norm,RC,L2-norm,RC,H1-norm,RC\n";
    for (const auto& row : table.rows) {
        out << row.nodes << ',' << num(row.c_norm) << ',' << opt(row.c_rate) << ','
            << num(row.l2_norm) << ',' << opt(row.l2_rate) << ',' << num(row.h1_norm) << ','
            << opt(row.h1_rate) << '\n';
    }
}

}  // namespace degenbond
