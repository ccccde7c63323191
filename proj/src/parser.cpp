#include "certint/parser.hpp"

#include <cctype>
#include <charconv>
#include <climits>
#include <cmath>
#include <string>

namespace certint {

ParseError::ParseError(Kind kind, std::size_t position, const std::string& message)
    : std::runtime_error(message + " at position " + std::to_string(position)), kind_(kind), position_(position)
{
}

namespace {

// Literal-ness is tracked so unary minus and integer exponents can be
// recognised without inspecting arbitrary trees.
struct Parsed {
    Expr expr;
    bool literal = false;
};

class Parser {
public:
    explicit Parser(std::string_view text) : text_(text) {}

    Expr run()
    {
        Expr e = expression();
        skip_space();
        if (pos_ != text_.size()) {
            fail("unexpected '" + std::string(1, text_[pos_]) + "'");
        }
        return e;
    }

private:
    std::string_view text_;
    std::size_t pos_ = 0;

    [[noreturn]] void fail(const std::string& what) const
    {
        throw ParseError(ParseError::Kind::syntax, pos_, "syntax error: " + what);
    }

    void skip_space()
    {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) {
            ++pos_;
        }
    }

    bool accept(char c)
    {
        skip_space();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    void expect(char c)
    {
        if (!accept(c)) {
            fail(std::string("expected '") + c + "'");
        }
    }

    Expr expression()
    {
        Expr lhs = term();
        for (;;) {
            if (accept('+')) {
                lhs = lhs + term();
            } else if (accept('-')) {
                lhs = lhs - term();
            } else {
                return lhs;
            }
        }
    }

    Expr term()
    {
        Expr lhs = unary().expr;
        for (;;) {
            if (accept('*')) {
                lhs = lhs * unary().expr;
            } else if (accept('/')) {
                lhs = lhs / unary().expr;
            } else {
                return lhs;
            }
        }
    }

    Parsed unary()
    {
        if (accept('-')) {
            return negate(unary());
        }
        return power();
    }

    static Parsed negate(const Parsed& p)
    {
        if (p.literal) {
            return {Expr::constant(-p.expr.value()), true};
        }
        return {Expr::constant(-1.0) * p.expr, false};
    }

    Parsed exponent()
    {
        if (accept('-')) {
            return negate(exponent());
        }
        return power();
    }

    Parsed power()
    {
        Parsed base = primary();
        if (!accept('^')) {
            return base;
        }
        const Parsed ex = exponent();
        if (ex.literal) {
            const double v = ex.expr.value();
            if (std::trunc(v) == v && std::fabs(v) <= static_cast<double>(INT_MAX)) {
                return {pow(base.expr, static_cast<int>(v)), false};
            }
        }
        return {exp(ex.expr * log(base.expr)), false};
    }

    Parsed primary()
    {
        skip_space();
        if (pos_ >= text_.size()) {
            fail("expected expression");
        }
        const char c = text_[pos_];
        if (c == '(') {
            ++pos_;
            Parsed inner{expression(), false};
            expect(')');
            // A parenthesised literal stays a literal: "(-2)" is an integer exponent.
            inner.literal = inner.expr.is_constant();
            return inner;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            return {Expr::constant(number()), true};
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            return identifier();
        }
        fail("expected expression");
    }

    double number()
    {
        const std::size_t start = pos_;
        auto digits = [&] {
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
                ++pos_;
            }
        };
        digits();
        if (pos_ < text_.size() && text_[pos_] == '.') {
            ++pos_;
            digits();
        }
        if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
            std::size_t save = pos_;
            ++pos_;
            if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) {
                ++pos_;
            }
            if (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
                digits();
            } else {
                pos_ = save;
            }
        }
        double value = 0.0;
        const auto res = std::from_chars(text_.data() + start, text_.data() + pos_, value);
        if (res.ec != std::errc() || res.ptr != text_.data() + pos_ || !std::isfinite(value)) {
            pos_ = start;
            fail("malformed number");
        }
        return value;
    }

    Parsed identifier()
    {
        const std::size_t start = pos_;
        while (pos_ < text_.size() &&
               (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
            ++pos_;
        }
        const std::string name(text_.substr(start, pos_ - start));
        if (name == "x") {
            return {Expr::variable(), false};
        }
        static constexpr std::pair<const char*, Op> functions[] = {
            {"exp", Op::exp}, {"log", Op::log}, {"ln", Op::log}, {"sqrt", Op::sqrt}, {"abs", Op::abs},
            {"sin", Op::sin}, {"cos", Op::cos}, {"sign", Op::sign},
        };
        for (const auto& [fname, op] : functions) {
            if (name == fname) {
                expect('(');
                Expr arg = expression();
                expect(')');
                return {Expr::unary(op, arg), false};
            }
        }
        throw ParseError(ParseError::Kind::unknown_identifier, start, "unknown identifier '" + name + "'");
    }
};

} // namespace

Expr parse(std::string_view text) { return Parser(text).run(); }

} // namespace certint
