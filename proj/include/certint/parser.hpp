#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

#include "certint/expr.hpp"

namespace certint {

class ParseError : public std::runtime_error {
public:
    enum class Kind { syntax, unknown_identifier };

    ParseError(Kind kind, std::size_t position, const std::string& message);

    [[nodiscard]] Kind kind() const { return kind_; }
    /// 0-based character offset into the input.
    [[nodiscard]] std::size_t position() const { return position_; }

private:
    Kind kind_;
    std::size_t position_;
};

/// Parse a function of x. Grammar (docs/grammar.ebnf):
///
///   expr    = term { ("+" | "-") term } ;
///   term    = unary { ("*" | "/") unary } ;
///   unary   = "-" unary | power ;
///   power   = primary [ "^" exponent ] ;
///   exponent= "-" exponent | power ;
///   primary = number | "x" | func "(" expr ")" | "(" expr ")" ;
///
/// An exponent that is an integer literal yields a pow_int node; any other
/// exponent y is desugared to exp(y * log(base)). Unary minus on a numeric
/// literal folds into a negative constant; on anything else it becomes
/// (-1) * operand.
Expr parse(std::string_view text);

} // namespace certint
