#pragma once

#include <memory>
#include <string>
#include <string_view>

namespace degenbond {

/// Compiled arithmetic expression in the variables r and t.
///
/// Grammar: numbers, r, t, R, + - * / ^ (right associative), unary minus, parentheses,
/// exp(.) and ln(.). R is bound to a constant at compile time. Any other identifier is
/// rejected.
class Expression {
public:
    struct Node;

    /// Throws ParseError; `line` and `first_column` locate the text inside a config file.
    static Expression compile(std::string_view text, double R, int line = 1,
                              int first_column = 1);

    double operator()(double r, double t = 0.0) const;

    const std::string& source() const noexcept { return source_; }
    bool depends_on_t() const noexcept { return uses_t_; }
    bool depends_on_r() const noexcept { return uses_r_; }

private:
    std::shared_ptr<const Node> root_;
    std::string source_;
    bool uses_r_ = false;
    bool uses_t_ = false;
};

}  // namespace degenbond
