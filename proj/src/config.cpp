#include "degenbond/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <map>

#include "degenbond/errors.hpp"
#include "degenbond/expression.hpp"

namespace degenbond {

std::string_view to_string(SchemeChoice s) {
    switch (s) {
        case SchemeChoice::Fitted: return "fitted";
        case SchemeChoice::SchemeB: return "scheme_b";
        case SchemeChoice::Both: return "both";
    }
    return "?";
}

std::optional<SchemeChoice> scheme_from_string(std::string_view text) {
    if (text == "fitted") return SchemeChoice::Fitted;
    if (text == "scheme_b") return SchemeChoice::SchemeB;
    if (text == "both") return SchemeChoice::Both;
    return std::nullopt;
}

std::string_view to_string(OutputKind k) {
    switch (k) {
        case OutputKind::SolutionCsv: return "solution_csv";
        case OutputKind::RateTableCsv: return "rate_table_csv";
        case OutputKind::DiagnosticsCsv: return "diagnostics_csv";
        case OutputKind::PlotdataCsv: return "plotdata_csv";
        case OutputKind::ComparisonCsv: return "comparison_csv";
    }
    return "?";
}

std::string hash_hex(std::uint64_t hash) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(hash));
    return buf;
}

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

std::uint64_t fnv1a(std::string_view text) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

struct RawValue {
    std::string text;
    int line = 0;
    int column = 0;
};

// Canonical key -> section it belongs to.
const std::map<std::string, std::string, std::less<>>& key_sections() {
    static const std::map<std::string, std::string, std::less<>> keys = {
        {"problem", "problem"},   {"R", "problem"},           {"T", "problem"},
        {"w", "problem"},         {"w_prime", "problem"},     {"theta", "problem"},
        {"theta_prime", "problem"}, {"ww_prime_prime", "problem"}, {"lambda", "problem"},
        {"initial", "problem"},   {"exact", "problem"},       {"exact_t", "problem"},
        {"exact_r", "problem"},   {"exact_rr", "problem"},    {"forcing", "problem"},
        {"case", "problem"},      {"face_value", "problem"},  {"N", "run"},
        {"M", "run"},             {"xi", "run"},              {"scheme", "run"},
        {"mesh", "run"},          {"grading_exponent", "run"}, {"manufactured", "run"},
        {"force_scheme_b_boundary", "run"}, {"sweep_nodes", "sweep"},
        {"report_nodes", "compare"}, {"snapshot_t", "compare"}, {"outputs", "output"},
    };
    return keys;
}

std::string canonical_key(std::string_view key) {
    if (key == "nodes") return "N";
    if (key == "steps") return "M";
    if (key == "P0") return "initial";
    if (key == "Z") return "face_value";
    if (key == "node_counts") return "sweep_nodes";
    if (key == "t_report") return "snapshot_t";
    return std::string(key);
}

double to_double(const RawValue& v, std::string_view field) {
    const std::string_view s = trim(v.text);
    double out = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(out)) {
        throw ValidationError(std::string(field), "'" + v.text + "' is not a number");
    }
    return out;
}

std::size_t to_size(const RawValue& v, std::string_view field) {
    const std::string_view s = trim(v.text);
    std::size_t out = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
        throw ValidationError(std::string(field), "'" + v.text + "' is not a non-negative integer");
    }
    return out;
}

bool to_bool(const RawValue& v, std::string_view field) {
    const std::string_view s = trim(v.text);
    if (s == "true" || s == "yes" || s == "1" || s == "on") return true;
    if (s == "false" || s == "no" || s == "0" || s == "off") return false;
    throw ValidationError(std::string(field), "'" + v.text + "' is not a boolean");
}

template <typename T>
std::vector<T> parse_list(std::string_view text, std::string_view field) {
    std::vector<T> out;
    std::size_t start = 0;
    while (start <= text.size()) {
        const std::size_t comma = std::min(text.find(',', start), text.size());
        const std::string_view item = trim(text.substr(start, comma - start));
        T value{};
        const auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), value);
        if (item.empty() || ec != std::errc() || ptr != item.data() + item.size()) {
            throw ValidationError(std::string(field), "'" + std::string(item) + "' is not an integer");
        }
        out.push_back(value);
        start = comma + 1;
    }
    return out;
}

}  // namespace

std::vector<std::size_t> parse_size_list(std::string_view text, std::string_view field) {
    return parse_list<std::size_t>(text, field);
}

std::vector<long> parse_index_list(std::string_view text, std::string_view field) {
    return parse_list<long>(text, field);
}

RunConfig parse_config(std::string_view text) {
    const auto& sections = key_sections();
    std::map<std::string, RawValue> raw;
    std::string section;

    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t eol = std::min(text.find('\n', pos), text.size());
        std::string_view line = text.substr(pos, eol - pos);
        pos = eol + 1;
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);

        const std::size_t comment = line.find_first_of("#;");
        if (comment != std::string_view::npos) line = line.substr(0, comment);
        const std::string_view content = trim(line);
        if (content.empty()) continue;
        const int indent = static_cast<int>(content.data() - line.data());

        if (content.front() == '[') {
            if (content.back() != ']') {
                throw ParseError("unterminated section header", line_no, indent + 1);
            }
            section = std::string(trim(content.substr(1, content.size() - 2)));
            if (section != "problem" && section != "run" && section != "sweep" &&
                section != "compare" && section != "output") {
                throw ParseError("unknown section [" + section + "]", line_no, indent + 2);
            }
            continue;
        }
        const std::size_t eq = content.find('=');
        if (eq == std::string_view::npos) {
            throw ParseError("expected key = value", line_no, indent + 1);
        }
        const std::string key = canonical_key(trim(content.substr(0, eq)));
        const auto known = sections.find(key);
        if (key.empty() || known == sections.end()) {
            throw ParseError("unknown key '" + std::string(trim(content.substr(0, eq))) + "'",
                             line_no, indent + 1);
        }
        if (!section.empty() && known->second != section) {
            throw ParseError("key '" + key + "' does not belong in [" + section + "]", line_no,
                             indent + 1);
        }
        const std::string_view after = content.substr(eq + 1);
        const std::string_view value = trim(after);
        if (value.empty()) throw ParseError("missing value for '" + key + "'", line_no, indent + 1);
        if (raw.count(key)) throw ParseError("duplicate key '" + key + "'", line_no, indent + 1);
        const int value_column =
            indent + static_cast<int>(eq + 1 + (value.data() - after.data())) + 1;
        raw[key] = RawValue{std::string(value), line_no, value_column};
    }

    RunConfig cfg;
    cfg.hash = fnv1a(text);
    auto get = [&](const std::string& key) -> const RawValue* {
        const auto it = raw.find(key);
        return it == raw.end() ? nullptr : &it->second;
    };

    if (const auto* v = get("R")) cfg.R = to_double(*v, "R");
    if (!(cfg.R > 0.0)) throw ValidationError("R", "must be positive");
    if (const auto* v = get("T")) {
        cfg.T = to_double(*v, "T");
        if (!(*cfg.T > 0.0)) throw ValidationError("T", "must be positive");
    }

    static const char* const expression_keys[] = {
        "w", "w_prime", "theta", "theta_prime", "ww_prime_prime", "lambda",
        "initial", "exact", "exact_t", "exact_r", "exact_rr", "forcing"};
    bool any_custom = false;
    for (const char* key : expression_keys) {
        const auto* v = get(key);
        if (!v) continue;
        any_custom = true;
        // Syntax and identifier check now; build_problem compiles again.
        (void)Expression::compile(v->text, cfg.R, v->line, v->column);
        SourceExpression se{v->text, v->line, v->column};
        const std::string_view k = key;
        auto& c = cfg.custom;
        if (k == "w") c.w = se;
        else if (k == "w_prime") c.w_prime = se;
        else if (k == "theta") c.theta = se;
        else if (k == "theta_prime") c.theta_prime = se;
        else if (k == "ww_prime_prime") c.ww_prime_prime = se;
        else if (k == "lambda") c.lambda = se;
        else if (k == "initial") c.initial = se;
        else if (k == "exact") c.exact = se;
        else if (k == "exact_t") c.exact_t = se;
        else if (k == "exact_r") c.exact_r = se;
        else if (k == "exact_rr") c.exact_rr = se;
        else c.forcing = se;
    }
    if (const auto* v = get("case")) {
        cfg.custom.case_tag = case_from_string(trim(v->text));
        if (!cfg.custom.case_tag) throw ValidationError("case", "expected Case1..Case4");
    }

    if (const auto* v = get("problem")) {
        cfg.problem_id = std::string(trim(v->text));
        if (cfg.problem_id != "custom" && !is_builtin_problem(cfg.problem_id)) {
            throw ValidationError("problem", "unknown problem '" + cfg.problem_id +
                                                 "' (expected example1, example2, example3 or custom)");
        }
        if (cfg.is_builtin() && any_custom) {
            throw ValidationError("problem", "built-in problems take no coefficient expressions");
        }
    } else if (!any_custom) {
        throw ValidationError("problem", "no problem id and no coefficient expressions given");
    }

    if (const auto* v = get("face_value")) cfg.face_value = to_double(*v, "face_value");
    if (const auto* v = get("N")) cfg.nodes = to_size(*v, "N");
    if (cfg.nodes < 5) throw ValidationError("N", "at least 5 nodes are required");
    if (const auto* v = get("M")) cfg.steps = to_size(*v, "M");
    if (cfg.steps < 1) throw ValidationError("M", "at least one time step is required");
    if (const auto* v = get("xi")) cfg.xi = to_double(*v, "xi");
    if (!(cfg.xi >= 0.0 && cfg.xi <= 1.0)) throw ValidationError("xi", "must lie in [0, 1]");

    if (const auto* v = get("scheme")) {
        const auto s = scheme_from_string(trim(v->text));
        if (!s) throw ValidationError("scheme", "expected fitted, scheme_b or both");
        cfg.scheme = *s;
    }
    if (const auto* v = get("mesh")) {
        const std::string_view m = trim(v->text);
        if (m == "uniform") {
            cfg.mesh = MeshChoice::Uniform;
        } else if (m == "graded") {
            cfg.mesh = MeshChoice::Graded;
            cfg.grading_exponent = 2.0;
        } else if (m.starts_with("graded(") && m.ends_with(")")) {
            cfg.mesh = MeshChoice::Graded;
            cfg.grading_exponent =
                to_double(RawValue{std::string(m.substr(7, m.size() - 8)), v->line, v->column},
                          "mesh");
        } else {
            throw ValidationError("mesh", "expected uniform, graded or graded(<exponent>)");
        }
    }
    if (const auto* v = get("grading_exponent")) {
        cfg.grading_exponent = to_double(*v, "grading_exponent");
        cfg.mesh = MeshChoice::Graded;
    }
    if (!(cfg.grading_exponent >= 1.0)) throw ValidationError("mesh", "grading exponent must be >= 1");

    cfg.manufactured = cfg.is_builtin();
    if (const auto* v = get("manufactured")) cfg.manufactured = to_bool(*v, "manufactured");
    if (const auto* v = get("force_scheme_b_boundary")) {
        cfg.force_scheme_b_boundary = to_bool(*v, "force_scheme_b_boundary");
    }
    if (cfg.manufactured && !cfg.is_builtin() && cfg.custom.exact.empty()) {
        throw ValidationError("manufactured", "a manufactured custom run needs 'exact'");
    }

    if (const auto* v = get("sweep_nodes")) {
        cfg.sweep_nodes = parse_size_list(v->text, "sweep_nodes");
        for (std::size_t n : cfg.sweep_nodes) {
            if (n < 5) throw ValidationError("sweep_nodes", "at least 5 nodes are required");
        }
    }
    if (const auto* v = get("report_nodes")) {
        cfg.report_nodes = parse_index_list(v->text, "report_nodes");
    }
    if (const auto* v = get("snapshot_t")) {
        cfg.snapshot_t = to_double(*v, "snapshot_t");
        if (*cfg.snapshot_t < 0.0) throw ValidationError("snapshot_t", "must be non-negative");
    }
    if (const auto* v = get("outputs")) {
        std::string_view list = v->text;
        std::size_t start = 0;
        while (start <= list.size()) {
            const std::size_t comma = std::min(list.find(',', start), list.size());
            const std::string_view item = trim(list.substr(start, comma - start));
            start = comma + 1;
            if (item == "solution_csv") cfg.outputs.push_back(OutputKind::SolutionCsv);
            else if (item == "rate_table_csv") cfg.outputs.push_back(OutputKind::RateTableCsv);
            else if (item == "diagnostics_csv") cfg.outputs.push_back(OutputKind::DiagnosticsCsv);
            else if (item == "plotdata_csv") cfg.outputs.push_back(OutputKind::PlotdataCsv);
            else if (item == "comparison_csv") cfg.outputs.push_back(OutputKind::ComparisonCsv);
            else throw ValidationError("outputs", "unknown output '" + std::string(item) + "'");
        }
    }
    return cfg;
}

namespace {

Expression compile_field(const SourceExpression& se, double R) {
    return Expression::compile(se.text, R, se.line, se.column);
}

void require(const SourceExpression& se, const char* field, const char* why) {
    if (se.empty()) throw ValidationError(field, why);
}

RateFunction rate_only(const SourceExpression& se, double R, const char* field) {
    auto e = compile_field(se, R);
    if (e.depends_on_t()) throw ValidationError(field, "must not depend on t");
    return [e](double r) { return e(r, 0.0); };
}

}  // namespace

ProblemSpec build_problem(const RunConfig& cfg) {
    if (cfg.is_builtin()) {
        auto spec = builtin_problem(cfg.problem_id, cfg.manufactured, cfg.face_value);
        if (cfg.T) spec.T = *cfg.T;
        return spec;
    }
    const auto& c = cfg.custom;
    constexpr const char* derivative_note =
        "custom problems must supply closed-form derivatives; none are computed numerically";
    require(c.w, "w", "missing volatility expression");
    require(c.theta, "theta", "missing drift expression");
    require(c.lambda, "lambda", "missing market-price-of-risk expression");
    require(c.w_prime, "w_prime", derivative_note);
    require(c.theta_prime, "theta_prime", derivative_note);
    require(c.ww_prime_prime, "ww_prime_prime", derivative_note);

    const double R = cfg.R;
    ProblemSpec spec;
    spec.id = cfg.problem_id;
    spec.R = R;
    spec.T = cfg.T.value_or(1.0);
    spec.w = rate_only(c.w, R, "w");
    spec.w_prime = rate_only(c.w_prime, R, "w_prime");
    spec.theta = rate_only(c.theta, R, "theta");
    spec.theta_prime = rate_only(c.theta_prime, R, "theta_prime");
    spec.ww_prime_prime = rate_only(c.ww_prime_prime, R, "ww_prime_prime");
    {
        auto e = compile_field(c.lambda, R);
        if (e.depends_on_r()) throw ValidationError("lambda", "must not depend on r");
        spec.lambda = [e](double t) { return e(0.0, t); };
    }
    spec.case_tag = c.case_tag;

    if (cfg.manufactured) {
        require(c.exact, "exact", "a manufactured run needs the exact solution");
        auto u = compile_field(c.exact, R);
        ExactSolution exact;
        exact.u = [u](double r, double t) { return u(r, t); };
        if (!c.forcing.empty()) {
            auto f = compile_field(c.forcing, R);
            spec.forcing = [f](double r, double t) { return f(r, t); };
        } else {
            require(c.exact_t, "exact_t", "needed to derive the forcing (or give 'forcing')");
            require(c.exact_r, "exact_r", "needed to derive the forcing (or give 'forcing')");
            require(c.exact_rr, "exact_rr", "needed to derive the forcing (or give 'forcing')");
            auto ut = compile_field(c.exact_t, R);
            auto ur = compile_field(c.exact_r, R);
            auto urr = compile_field(c.exact_rr, R);
            exact.u_t = [ut](double r, double t) { return ut(r, t); };
            exact.u_r = [ur](double r, double t) { return ur(r, t); };
            exact.u_rr = [urr](double r, double t) { return urr(r, t); };
            spec.forcing = manufactured_forcing(spec, exact);
        }
        spec.exact = exact;
        if (!c.initial.empty()) {
            spec.initial = rate_only(c.initial, R, "initial");
        } else {
            spec.initial = [u](double r) { return u(r, 0.0); };
        }
    } else {
        if (!c.forcing.empty()) {
            auto f = compile_field(c.forcing, R);
            spec.forcing = [f](double r, double t) { return f(r, t); };
        }
        if (!c.initial.empty()) {
            spec.initial = rate_only(c.initial, R, "initial");
        } else {
            spec.initial = [z = cfg.face_value](double) { return z; };
        }
    }
    try {
        validate(spec);
    } catch (const InvalidProblem& e) {
        throw ValidationError("problem", e.what());
    }
    return spec;
}

}  // namespace degenbond
