#pragma once

#include <memory>
#include <optional>
#include <string>

#include "certint/interval.hpp"

namespace certint {

enum class Op {
    constant,
    variable,
    add,
    sub,
    mul,
    div,
    pow_int,
    exp,
    log,
    sqrt,
    abs,
    sin,
    cos,
    // sign(u) appears in derivatives of abs(u); also accepted by the parser.
    sign,
};

/// Immutable expression tree for a real function of the single variable x.
///
/// Nodes are shared; copying an Expr is cheap. Equality is structural.
class Expr {
public:
    /// The constant 0.
    Expr();

    static Expr constant(double value);
    static Expr variable();

    [[nodiscard]] Op op() const;
    /// Literal value of a constant node.
    [[nodiscard]] double value() const;
    /// Exponent of a pow_int node.
    [[nodiscard]] int exponent() const;
    /// Operand of unary nodes and left operand of binary nodes.
    [[nodiscard]] Expr lhs() const;
    [[nodiscard]] Expr rhs() const;

    [[nodiscard]] bool is_constant() const { return op() == Op::constant; }
    [[nodiscard]] bool is_constant(double v) const { return is_constant() && value() == v; }
    [[nodiscard]] std::size_t node_count() const;

    friend bool operator==(const Expr& a, const Expr& b);

    // Raw constructors: no folding of any kind.
    static Expr binary(Op op, Expr lhs, Expr rhs);
    static Expr unary(Op op, Expr operand);
    static Expr power(Expr base, int exponent);

private:
    struct Node;
    explicit Expr(std::shared_ptr<const Node> node);
    std::shared_ptr<const Node> node_;
};

Expr operator+(Expr a, Expr b);
Expr operator-(Expr a, Expr b);
Expr operator*(Expr a, Expr b);
Expr operator/(Expr a, Expr b);
Expr pow(Expr base, int exponent);
Expr exp(Expr e);
Expr log(Expr e);
Expr sqrt(Expr e);
Expr abs(Expr e);
Expr sin(Expr e);
Expr cos(Expr e);
Expr sign(Expr e);

/// An expression together with an optional zero-extension: when set, the
/// function is base(x) for x != 0 and exactly 0 at x = 0. Models flat
/// functions such as exp(-1/x) that the raw tree cannot evaluate at 0.
struct ExtendedExpr {
    Expr base;
    bool zero_extended = false;

    ExtendedExpr() = default;
    ExtendedExpr(Expr e, bool zero_ext = false) : base(std::move(e)), zero_extended(zero_ext) {}  // NOLINT

    friend bool operator==(const ExtendedExpr&, const ExtendedExpr&) = default;
};

/// Symbolic derivative. Only literal constant arithmetic is folded (together
/// with the 0/1 identities that arise from it); no algebraic rewriting.
/// d|u| = sign(u) * u', which evaluates to 0 where u = 0.
Expr differentiate(const Expr& e);
/// The zero-extension flag is kept: the derivative is taken to be 0 at 0.
ExtendedExpr differentiate(const ExtendedExpr& e);

/// Floating-point evaluation. Throws DomainError outside the domain
/// (log/sqrt of invalid arguments, division by zero, 0 to a negative power).
double eval_point(const Expr& e, double x);
double eval_point(const ExtendedExpr& e, double x);

/// Sound enclosure of the image of e over x. std::nullopt is the
/// indeterminate sentinel (a divisor range containing 0 was met).
/// Throws DomainError when an elementary function's domain is violated.
std::optional<Interval> eval_interval(const Expr& e, const Interval& x);

/// As above; when zero-extended and 0 is in x, the enclosure is the hull of
/// {0} with the base evaluated on x minus (-tiny, tiny), tiny being the
/// smallest positive normal double. This is sound for bases that are
/// monotone on (0, tiny), which covers the flat exemplars.
std::optional<Interval> eval_interval(const ExtendedExpr& e, const Interval& x);

/// Fully parenthesised text that parse() maps back to an equal tree.
std::string to_string(const Expr& e);
std::string to_string(const ExtendedExpr& e);

} // namespace certint
