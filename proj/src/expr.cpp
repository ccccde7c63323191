#include "certint/expr.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace certint {

struct Expr::Node {
    Op op = Op::constant;
    double value = 0.0;
    int exponent = 0;
    std::shared_ptr<const Node> lhs;
    std::shared_ptr<const Node> rhs;
};

namespace {

bool is_unary(Op op)
{
    switch (op) {
    case Op::exp:
    case Op::log:
    case Op::sqrt:
    case Op::abs:
    case Op::sin:
    case Op::cos:
    case Op::sign:
        return true;
    default:
        return false;
    }
}

bool is_binary(Op op) { return op == Op::add || op == Op::sub || op == Op::mul || op == Op::div; }

} // namespace

Expr::Expr() : Expr(constant(0.0)) {}

Expr::Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

Expr Expr::constant(double value)
{
    auto n = std::make_shared<Node>();
    n->op = Op::constant;
    n->value = value;
    return Expr(std::move(n));
}

Expr Expr::variable()
{
    auto n = std::make_shared<Node>();
    n->op = Op::variable;
    return Expr(std::move(n));
}

Expr Expr::binary(Op op, Expr lhs, Expr rhs)
{
    if (!is_binary(op)) {
        throw std::invalid_argument("Expr::binary: not a binary operator");
    }
    auto n = std::make_shared<Node>();
    n->op = op;
    n->lhs = std::move(lhs.node_);
    n->rhs = std::move(rhs.node_);
    return Expr(std::move(n));
}

Expr Expr::unary(Op op, Expr operand)
{
    if (!is_unary(op)) {
        throw std::invalid_argument("Expr::unary: not a unary function");
    }
    auto n = std::make_shared<Node>();
    n->op = op;
    n->lhs = std::move(operand.node_);
    return Expr(std::move(n));
}

Expr Expr::power(Expr base, int exponent)
{
    auto n = std::make_shared<Node>();
    n->op = Op::pow_int;
    n->exponent = exponent;
    n->lhs = std::move(base.node_);
    return Expr(std::move(n));
}

Op Expr::op() const { return node_->op; }
double Expr::value() const { return node_->value; }
int Expr::exponent() const { return node_->exponent; }

Expr Expr::lhs() const
{
    if (!node_->lhs) {
        throw std::logic_error("Expr::lhs: node has no operand");
    }
    return Expr(node_->lhs);
}

Expr Expr::rhs() const
{
    if (!node_->rhs) {
        throw std::logic_error("Expr::rhs: node has no right operand");
    }
    return Expr(node_->rhs);
}

std::size_t Expr::node_count() const
{
    std::size_t n = 1;
    if (node_->lhs) {
        n += lhs().node_count();
    }
    if (node_->rhs) {
        n += rhs().node_count();
    }
    return n;
}

bool operator==(const Expr& a, const Expr& b)
{
    if (a.node_ == b.node_) {
        return true;
    }
    const auto& x = *a.node_;
    const auto& y = *b.node_;
    if (x.op != y.op) {
        return false;
    }
    switch (x.op) {
    case Op::constant:
        return x.value == y.value;
    case Op::variable:
        return true;
    case Op::pow_int:
        return x.exponent == y.exponent && a.lhs() == b.lhs();
    default:
        break;
    }
    if (is_binary(x.op)) {
        return a.lhs() == b.lhs() && a.rhs() == b.rhs();
    }
    return a.lhs() == b.lhs();
}

Expr operator+(Expr a, Expr b) { return Expr::binary(Op::add, std::move(a), std::move(b)); }
Expr operator-(Expr a, Expr b) { return Expr::binary(Op::sub, std::move(a), std::move(b)); }
Expr operator*(Expr a, Expr b) { return Expr::binary(Op::mul, std::move(a), std::move(b)); }
Expr operator/(Expr a, Expr b) { return Expr::binary(Op::div, std::move(a), std::move(b)); }
Expr pow(Expr base, int exponent) { return Expr::power(std::move(base), exponent); }
Expr exp(Expr e) { return Expr::unary(Op::exp, std::move(e)); }
Expr log(Expr e) { return Expr::unary(Op::log, std::move(e)); }
Expr sqrt(Expr e) { return Expr::unary(Op::sqrt, std::move(e)); }
Expr abs(Expr e) { return Expr::unary(Op::abs, std::move(e)); }
Expr sin(Expr e) { return Expr::unary(Op::sin, std::move(e)); }
Expr cos(Expr e) { return Expr::unary(Op::cos, std::move(e)); }
Expr sign(Expr e) { return Expr::unary(Op::sign, std::move(e)); }

// ---------------------------------------------------------------------------
// Differentiation

namespace {

// Builders used by differentiate(): fold literal arithmetic and the 0/1
// identities produced by the derivative rules.
namespace fold {

Expr literal_or(double v, const Expr& fallback) { return std::isfinite(v) ? Expr::constant(v) : fallback; }

Expr add(const Expr& a, const Expr& b)
{
    if (a.is_constant() && b.is_constant()) {
        return literal_or(a.value() + b.value(), a + b);
    }
    if (a.is_constant(0.0)) {
        return b;
    }
    if (b.is_constant(0.0)) {
        return a;
    }
    return a + b;
}

Expr sub(const Expr& a, const Expr& b)
{
    if (a.is_constant() && b.is_constant()) {
        return literal_or(a.value() - b.value(), a - b);
    }
    if (b.is_constant(0.0)) {
        return a;
    }
    return a - b;
}

Expr mul(const Expr& a, const Expr& b)
{
    if (a.is_constant() && b.is_constant()) {
        return literal_or(a.value() * b.value(), a * b);
    }
    if (a.is_constant(0.0) || b.is_constant(0.0)) {
        return Expr::constant(0.0);
    }
    if (a.is_constant(1.0)) {
        return b;
    }
    if (b.is_constant(1.0)) {
        return a;
    }
    return a * b;
}

Expr div(const Expr& a, const Expr& b)
{
    if (a.is_constant() && b.is_constant() && b.value() != 0.0) {
        return literal_or(a.value() / b.value(), a / b);
    }
    if (a.is_constant(0.0)) {
        return Expr::constant(0.0);
    }
    if (b.is_constant(1.0)) {
        return a;
    }
    return a / b;
}

Expr pow(const Expr& a, int n)
{
    if (n == 0) {
        return Expr::constant(1.0);
    }
    if (n == 1) {
        return a;
    }
    if (a.is_constant() && !(a.value() == 0.0 && n < 0)) {
        return literal_or(std::pow(a.value(), n), certint::pow(a, n));
    }
    return certint::pow(a, n);
}

} // namespace fold

} // namespace

Expr differentiate(const Expr& e)
{
    switch (e.op()) {
    case Op::constant:
    case Op::sign:
        return Expr::constant(0.0);
    case Op::variable:
        return Expr::constant(1.0);
    case Op::add:
        return fold::add(differentiate(e.lhs()), differentiate(e.rhs()));
    case Op::sub:
        return fold::sub(differentiate(e.lhs()), differentiate(e.rhs()));
    case Op::mul: {
        const Expr u = e.lhs();
        const Expr v = e.rhs();
        return fold::add(fold::mul(differentiate(u), v), fold::mul(u, differentiate(v)));
    }
    case Op::div: {
        const Expr u = e.lhs();
        const Expr v = e.rhs();
        if (v.is_constant()) {
            return fold::div(differentiate(u), v);
        }
        const Expr num = fold::sub(fold::mul(differentiate(u), v), fold::mul(u, differentiate(v)));
        return fold::div(num, fold::pow(v, 2));
    }
    case Op::pow_int: {
        const int n = e.exponent();
        if (n == 0) {
            return Expr::constant(0.0);
        }
        const Expr u = e.lhs();
        return fold::mul(fold::mul(Expr::constant(n), fold::pow(u, n - 1)), differentiate(u));
    }
    case Op::exp:
        return fold::mul(e, differentiate(e.lhs()));
    case Op::log:
        return fold::div(differentiate(e.lhs()), e.lhs());
    case Op::sqrt:
        return fold::div(differentiate(e.lhs()), fold::mul(Expr::constant(2.0), e));
    case Op::abs:
        return fold::mul(sign(e.lhs()), differentiate(e.lhs()));
    case Op::sin:
        return fold::mul(cos(e.lhs()), differentiate(e.lhs()));
    case Op::cos:
        return fold::mul(fold::mul(Expr::constant(-1.0), sin(e.lhs())), differentiate(e.lhs()));
    }
    throw std::logic_error("differentiate: unknown node");
}

ExtendedExpr differentiate(const ExtendedExpr& e) { return {differentiate(e.base), e.zero_extended}; }

// ---------------------------------------------------------------------------
// Evaluation

double eval_point(const Expr& e, double x)
{
    switch (e.op()) {
    case Op::constant:
        return e.value();
    case Op::variable:
        return x;
    case Op::add:
        return eval_point(e.lhs(), x) + eval_point(e.rhs(), x);
    case Op::sub:
        return eval_point(e.lhs(), x) - eval_point(e.rhs(), x);
    case Op::mul:
        return eval_point(e.lhs(), x) * eval_point(e.rhs(), x);
    case Op::div: {
        const double den = eval_point(e.rhs(), x);
        if (den == 0.0) {
            throw DomainError("division by zero at x = " + std::to_string(x));
        }
        return eval_point(e.lhs(), x) / den;
    }
    case Op::pow_int: {
        const double b = eval_point(e.lhs(), x);
        if (b == 0.0 && e.exponent() < 0) {
            throw DomainError("zero raised to a negative power at x = " + std::to_string(x));
        }
        return std::pow(b, e.exponent());
    }
    case Op::exp:
        return std::exp(eval_point(e.lhs(), x));
    case Op::log: {
        const double u = eval_point(e.lhs(), x);
        if (!(u > 0.0)) {
            throw DomainError("log of non-positive value at x = " + std::to_string(x));
        }
        return std::log(u);
    }
    case Op::sqrt: {
        const double u = eval_point(e.lhs(), x);
        if (u < 0.0) {
            throw DomainError("sqrt of negative value at x = " + std::to_string(x));
        }
        return std::sqrt(u);
    }
    case Op::abs:
        return std::fabs(eval_point(e.lhs(), x));
    case Op::sin:
        return std::sin(eval_point(e.lhs(), x));
    case Op::cos:
        return std::cos(eval_point(e.lhs(), x));
    case Op::sign: {
        const double u = eval_point(e.lhs(), x);
        return u > 0.0 ? 1.0 : (u < 0.0 ? -1.0 : 0.0);
    }
    }
    throw std::logic_error("eval_point: unknown node");
}

double eval_point(const ExtendedExpr& e, double x)
{
    if (e.zero_extended && x == 0.0) {
        return 0.0;
    }
    return eval_point(e.base, x);
}

std::optional<Interval> eval_interval(const Expr& e, const Interval& x)
{
    if (x.is_empty()) {
        return x;
    }
    switch (e.op()) {
    case Op::constant:
        return Interval(e.value());
    case Op::variable:
        return x;
    case Op::add:
    case Op::sub:
    case Op::mul:
    case Op::div: {
        const auto a = eval_interval(e.lhs(), x);
        if (!a) {
            return std::nullopt;
        }
        const auto b = eval_interval(e.rhs(), x);
        if (!b) {
            return std::nullopt;
        }
        switch (e.op()) {
        case Op::add:
            return *a + *b;
        case Op::sub:
            return *a - *b;
        case Op::mul:
            return *a * *b;
        default:
            return div(*a, *b);
        }
    }
    default:
        break;
    }
    const auto u = eval_interval(e.lhs(), x);
    if (!u) {
        return std::nullopt;
    }
    switch (e.op()) {
    case Op::pow_int:
        return pow(*u, e.exponent());
    case Op::exp:
        return exp(*u);
    case Op::log:
        return log(*u);
    case Op::sqrt:
        return sqrt(*u);
    case Op::abs:
        return abs(*u);
    case Op::sin:
        return sin(*u);
    case Op::cos:
        return cos(*u);
    case Op::sign:
        return sign(*u);
    default:
        break;
    }
    throw std::logic_error("eval_interval: unknown node");
}

std::optional<Interval> eval_interval(const ExtendedExpr& e, const Interval& x)
{
    if (!e.zero_extended || !x.contains_zero()) {
        return eval_interval(e.base, x);
    }
    constexpr double tiny = std::numeric_limits<double>::min();
    Interval result(0.0);
    if (x.lo() <= -tiny) {
        const auto left = eval_interval(e.base, Interval(x.lo(), -tiny));
        if (!left) {
            return std::nullopt;
        }
        result = hull(result, *left);
    }
    if (x.hi() >= tiny) {
        const auto right = eval_interval(e.base, Interval(tiny, x.hi()));
        if (!right) {
            return std::nullopt;
        }
        result = hull(result, *right);
    }
    return result;
}

// ---------------------------------------------------------------------------
// Printing

namespace {

std::string format_literal(double v)
{
    std::array<char, 64> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    std::string s(buf.data(), res.ptr);
    if (std::signbit(v)) {
        return "(" + s + ")";
    }
    return s;
}

const char* function_name(Op op)
{
    switch (op) {
    case Op::exp:
        return "exp";
    case Op::log:
        return "log";
    case Op::sqrt:
        return "sqrt";
    case Op::abs:
        return "abs";
    case Op::sin:
        return "sin";
    case Op::cos:
        return "cos";
    case Op::sign:
        return "sign";
    default:
        return "?";
    }
}

const char* operator_symbol(Op op)
{
    switch (op) {
    case Op::add:
        return " + ";
    case Op::sub:
        return " - ";
    case Op::mul:
        return " * ";
    default:
        return " / ";
    }
}

} // namespace

std::string to_string(const Expr& e)
{
    switch (e.op()) {
    case Op::constant:
        return format_literal(e.value());
    case Op::variable:
        return "x";
    case Op::pow_int:
        return "(" + to_string(e.lhs()) + ")^" + (e.exponent() < 0 ? "(" + std::to_string(e.exponent()) + ")"
                                                                    : std::to_string(e.exponent()));
    default:
        break;
    }
    if (is_binary(e.op())) {
        return "(" + to_string(e.lhs()) + operator_symbol(e.op()) + to_string(e.rhs()) + ")";
    }
    return std::string(function_name(e.op())) + "(" + to_string(e.lhs()) + ")";
}

std::string to_string(const ExtendedExpr& e)
{
    return e.zero_extended ? to_string(e.base) + " [zero-extended]" : to_string(e.base);
}

} // namespace certint
