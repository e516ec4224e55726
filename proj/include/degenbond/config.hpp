#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "degenbond/model.hpp"

namespace degenbond {

enum class SchemeChoice { Fitted, SchemeB, Both };
enum class MeshChoice { Uniform, Graded };
enum class OutputKind { SolutionCsv, RateTableCsv, DiagnosticsCsv, PlotdataCsv, ComparisonCsv };

std::string_view to_string(SchemeChoice s);
std::optional<SchemeChoice> scheme_from_string(std::string_view text);
std::string_view to_string(OutputKind k);

/// An expression string together with where it came from in the config text.
struct SourceExpression {
    std::string text;
    int line = 0;
    int column = 0;

    bool empty() const noexcept { return text.empty(); }
};

/// Coefficients of a user-defined problem, as expressions in r, t and R.
struct CustomCoefficients {
    SourceExpression w, w_prime, theta, theta_prime, ww_prime_prime, lambda, initial;
    SourceExpression exact, exact_t, exact_r, exact_rr, forcing;
    std::optional<CaseTag> case_tag;
};

struct RunConfig {
    std::string problem_id = "custom";
    CustomCoefficients custom;
    double R = 1.0;
    std::optional<double> T;  // built-in problems default to 1
    std::size_t nodes = 21;   // node count; subintervals = nodes - 1
    std::size_t steps = 1000;
    double xi = 0.5;
    SchemeChoice scheme = SchemeChoice::Fitted;
    MeshChoice mesh = MeshChoice::Uniform;
    double grading_exponent = 1.0;
    bool manufactured = false;
    double face_value = 1.0;
    bool force_scheme_b_boundary = false;
    std::vector<std::size_t> sweep_nodes;
    std::vector<long> report_nodes{0, 1, -2, -1};  // negative values count from the last node
    std::optional<double> snapshot_t;
    std::vector<OutputKind> outputs;
    std::uint64_t hash = 0;  // FNV-1a of the config text

    bool is_builtin() const { return is_builtin_problem(problem_id); }
};

/// Parses the line-oriented `key = value` format. `#` and `;` start comments; `[name]`
/// opens a section (`problem`, `run`, `sweep`, `compare`, `output`); keys may also appear
/// before any section.
///
/// Throws ParseError (with line/column) on malformed text or expressions and
/// ValidationError (naming the key) on out-of-range values.
RunConfig parse_config(std::string_view text);

/// Builds the problem described by a config. Custom problems must provide w, theta,
/// lambda and the derivative expressions w_prime, theta_prime, ww_prime_prime.
/// Throws ValidationError naming the first missing field.
ProblemSpec build_problem(const RunConfig& config);

std::string hash_hex(std::uint64_t hash);

/// Comma separated list of unsigned integers, e.g. "21,41,81".
std::vector<std::size_t> parse_size_list(std::string_view text, std::string_view field);

/// Comma separated list of signed integers.
std::vector<long> parse_index_list(std::string_view text, std::string_view field);

}  // namespace degenbond
