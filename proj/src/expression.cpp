#include "degenbond/expression.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <vector>

#include "degenbond/errors.hpp"

namespace degenbond {

struct Expression::Node {
    enum class Kind { Constant, VarR, VarT, Add, Sub, Mul, Div, Pow, Neg, Exp, Ln };
    Kind kind = Kind::Constant;
    double value = 0.0;
    std::shared_ptr<const Node> lhs;
    std::shared_ptr<const Node> rhs;
};

namespace {

using Node = Expression::Node;
using NodePtr = std::shared_ptr<const Node>;

NodePtr make(Node::Kind kind, NodePtr lhs = nullptr, NodePtr rhs = nullptr, double value = 0.0) {
    auto n = std::make_shared<Node>();
    n->kind = kind;
    n->lhs = std::move(lhs);
    n->rhs = std::move(rhs);
    n->value = value;
    return n;
}

double eval(const Node& n, double r, double t) {
    using K = Node::Kind;
    switch (n.kind) {
        case K::Constant: return n.value;
        case K::VarR: return r;
        case K::VarT: return t;
        case K::Add: return eval(*n.lhs, r, t) + eval(*n.rhs, r, t);
        case K::Sub: return eval(*n.lhs, r, t) - eval(*n.rhs, r, t);
        case K::Mul: return eval(*n.lhs, r, t) * eval(*n.rhs, r, t);
        case K::Div: return eval(*n.lhs, r, t) / eval(*n.rhs, r, t);
        case K::Pow: {
            const double base = eval(*n.lhs, r, t);
            const double expo = eval(*n.rhs, r, t);
            return std::pow(base, expo);
        }
        case K::Neg: return -eval(*n.lhs, r, t);
        case K::Exp: return std::exp(eval(*n.lhs, r, t));
        case K::Ln: return std::log(eval(*n.lhs, r, t));
    }
    return 0.0;
}

// expr   := term (('+'|'-') term)*
// term   := unary (('*'|'/') unary)*
// unary  := '-' unary | '+' unary | power
// power  := atom ('^' unary)?
// atom   := number | ident | ident '(' expr ')' | '(' expr ')'
class Parser {
public:
    Parser(std::string_view text, double R, int line, int first_column)
        : text_(text), R_(R), line_(line), first_column_(first_column) {}

    NodePtr parse() {
        auto n = expr();
        skip_ws();
        if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
        return n;
    }

    bool uses_r = false;
    bool uses_t = false;

private:
    [[noreturn]] void fail(const std::string& what) const {
        throw ParseError(what, line_, first_column_ + static_cast<int>(pos_));
    }

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    bool accept(char c) {
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    NodePtr expr() {
        auto lhs = term();
        for (;;) {
            if (accept('+')) {
                lhs = make(Node::Kind::Add, lhs, term());
            } else if (accept('-')) {
                lhs = make(Node::Kind::Sub, lhs, term());
            } else {
                return lhs;
            }
        }
    }

    NodePtr term() {
        auto lhs = unary();
        for (;;) {
            if (accept('*')) {
                lhs = make(Node::Kind::Mul, lhs, unary());
            } else if (accept('/')) {
                lhs = make(Node::Kind::Div, lhs, unary());
            } else {
                return lhs;
            }
        }
    }

    NodePtr unary() {
        if (accept('-')) return make(Node::Kind::Neg, unary());
        if (accept('+')) return unary();
        return power();
    }

    NodePtr power() {
        auto base = atom();
        if (accept('^')) return make(Node::Kind::Pow, base, unary());
        return base;
    }

    NodePtr atom() {
        skip_ws();
        if (pos_ >= text_.size()) fail("unexpected end of expression");
        const char c = text_[pos_];
        if (c == '(') {
            ++pos_;
            auto inner = expr();
            if (!accept(')')) fail("expected ')'");
            return inner;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return identifier();
        fail("unexpected '" + std::string(1, c) + "'");
    }

    NodePtr number() {
        const char* begin = text_.data() + pos_;
        const char* end = text_.data() + text_.size();
        double value = 0.0;
        const auto [ptr, ec] = std::from_chars(begin, end, value);
        if (ec != std::errc() || ptr == begin) fail("malformed number");
        pos_ += static_cast<std::size_t>(ptr - begin);
        return make(Node::Kind::Constant, nullptr, nullptr, value);
    }

    NodePtr identifier() {
        const std::size_t start = pos_;
        while (pos_ < text_.size() &&
               (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
            ++pos_;
        }
        const std::string_view name = text_.substr(start, pos_ - start);
        if (name == "r") {
            uses_r = true;
            return make(Node::Kind::VarR);
        }
        if (name == "t") {
            uses_t = true;
            return make(Node::Kind::VarT);
        }
        if (name == "R") return make(Node::Kind::Constant, nullptr, nullptr, R_);
        if (name == "exp" || name == "ln") {
            if (!accept('(')) fail("expected '(' after " + std::string(name));
            auto arg = expr();
            if (!accept(')')) fail("expected ')'");
            return make(name == "exp" ? Node::Kind::Exp : Node::Kind::Ln, arg);
        }
        pos_ = start;
        fail("unknown identifier '" + std::string(name) + "'");
    }

    std::string_view text_;
    double R_;
    int line_;
    int first_column_;
    std::size_t pos_ = 0;
};

}  // namespace

Expression Expression::compile(std::string_view text, double R, int line, int first_column) {
    Parser parser(text, R, line, first_column);
    Expression e;
    e.root_ = parser.parse();
    e.source_ = std::string(text);
    e.uses_r_ = parser.uses_r;
    e.uses_t_ = parser.uses_t;
    return e;
}

double Expression::operator()(double r, double t) const { return eval(*root_, r, t); }

}  // namespace degenbond
