#include "certint/interval.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <numbers>
#include <ostream>

namespace certint {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
} // namespace

namespace rounding {

namespace {

constexpr double kMax = std::numeric_limits<double>::max();
// Below this magnitude FMA residuals may themselves be rounded.
constexpr double kResidualFloor = 0x1p-960;

// Overflowed round-to-nearest results: the exact value is finite, so the
// downward rounding of +inf is DBL_MAX (and symmetrically).
double clamp_overflow_down(double r) { return r == kInf ? kMax : r; }
double clamp_overflow_up(double r) { return r == -kInf ? -kMax : r; }

// Exact residual of s = fl(a + b): a + b == s + err.
double two_sum_err(double a, double b, double s)
{
    const double bb = s - a;
    return (a - (s - bb)) + (b - bb);
}

} // namespace

double add_down(double a, double b)
{
    const double s = a + b;
    if (!std::isfinite(s)) {
        return (std::isfinite(a) && std::isfinite(b)) ? clamp_overflow_down(s) : s;
    }
    return two_sum_err(a, b, s) < 0.0 ? next_down(s) : s;
}

double add_up(double a, double b)
{
    const double s = a + b;
    if (!std::isfinite(s)) {
        return (std::isfinite(a) && std::isfinite(b)) ? clamp_overflow_up(s) : s;
    }
    return two_sum_err(a, b, s) > 0.0 ? next_up(s) : s;
}

double sub_down(double a, double b) { return add_down(a, -b); }
double sub_up(double a, double b) { return add_up(a, -b); }

double mul_down(double a, double b)
{
    if (a == 0.0 || b == 0.0) {
        return 0.0;
    }
    const double p = a * b;
    if (!std::isfinite(p)) {
        return (std::isfinite(a) && std::isfinite(b)) ? clamp_overflow_down(p) : p;
    }
    if (std::fabs(p) < kResidualFloor) {
        return next_down(p);
    }
    return std::fma(a, b, -p) < 0.0 ? next_down(p) : p;
}

double mul_up(double a, double b)
{
    if (a == 0.0 || b == 0.0) {
        return 0.0;
    }
    const double p = a * b;
    if (!std::isfinite(p)) {
        return (std::isfinite(a) && std::isfinite(b)) ? clamp_overflow_up(p) : p;
    }
    if (std::fabs(p) < kResidualFloor) {
        return next_up(p);
    }
    return std::fma(a, b, -p) > 0.0 ? next_up(p) : p;
}

namespace {

// Sign of (a / b - q) for q = fl(a / b), or 0 when exact. Returns 2 when the
// residual cannot be trusted.
int div_residual_sign(double a, double b, double q)
{
    if (!std::isfinite(a) || !std::isfinite(b)) {
        return 0;
    }
    if (std::fabs(q) < kResidualFloor || std::fabs(a) < kResidualFloor) {
        return 2;
    }
    const double r = std::fma(-q, b, a);
    if (r == 0.0) {
        return 0;
    }
    return ((r > 0.0) == (b > 0.0)) ? 1 : -1;
}

} // namespace

double div_down(double a, double b)
{
    if (a == 0.0 && b != 0.0) {
        return 0.0;
    }
    const double q = a / b;
    if (!std::isfinite(q)) {
        return (std::isfinite(a) && b != 0.0) ? clamp_overflow_down(q) : q;
    }
    const int s = div_residual_sign(a, b, q);
    return (s < 0 || s == 2) ? next_down(q) : q;
}

double div_up(double a, double b)
{
    if (a == 0.0 && b != 0.0) {
        return 0.0;
    }
    const double q = a / b;
    if (!std::isfinite(q)) {
        return (std::isfinite(a) && b != 0.0) ? clamp_overflow_up(q) : q;
    }
    const int s = div_residual_sign(a, b, q);
    return (s > 0) ? next_up(q) : q;
}

double sqrt_down(double a)
{
    const double s = std::sqrt(a);
    if (!std::isfinite(s) || s == 0.0) {
        return s;
    }
    if (a < kResidualFloor) {
        return next_down(s);
    }
    return std::fma(-s, s, a) < 0.0 ? next_down(s) : s;
}

double sqrt_up(double a)
{
    const double s = std::sqrt(a);
    if (!std::isfinite(s) || s == 0.0) {
        return s;
    }
    if (a < kResidualFloor) {
        return next_up(s);
    }
    return std::fma(-s, s, a) > 0.0 ? next_up(s) : s;
}

double widen_down(double x, int ulps)
{
    for (int i = 0; i < ulps; ++i) {
        x = next_down(x);
    }
    return x;
}

double widen_up(double x, int ulps)
{
    for (int i = 0; i < ulps; ++i) {
        x = next_up(x);
    }
    return x;
}

} // namespace rounding

using namespace rounding;

namespace {

// Error budget for libm transcendental functions.
constexpr int kTranscendentalUlps = 2;

} // namespace

Interval::Interval(double value) : lo_(value), hi_(value)
{
    if (std::isnan(value) || std::isinf(value)) {
        throw std::invalid_argument("Interval: point value must be finite");
    }
}

Interval::Interval(double lo, double hi) : lo_(lo), hi_(hi)
{
    if (std::isnan(lo) || std::isnan(hi) || lo > hi || lo == kInf || hi == -kInf) {
        throw std::invalid_argument("Interval: invalid endpoints [" + std::to_string(lo) + ", " +
                                    std::to_string(hi) + "]");
    }
}

Interval Interval::empty()
{
    Interval r;
    r.empty_ = true;
    return r;
}

Interval Interval::entire() { return {-kInf, kInf}; }

double Interval::width() const
{
    if (empty_) {
        return 0.0;
    }
    return sub_up(hi_, lo_);
}

double Interval::mid() const
{
    if (lo_ == hi_) {
        return lo_;
    }
    const double m = lo_ + (hi_ - lo_) / 2.0;
    return std::clamp(m, lo_, hi_);
}

double Interval::mag() const { return std::max(std::fabs(lo_), std::fabs(hi_)); }

bool Interval::contains(const Interval& other) const
{
    if (other.empty_) {
        return true;
    }
    return !empty_ && lo_ <= other.lo_ && other.hi_ <= hi_;
}

bool Interval::overlaps(const Interval& other) const
{
    return !empty_ && !other.empty_ && lo_ <= other.hi_ && other.lo_ <= hi_;
}

bool operator==(const Interval& a, const Interval& b)
{
    if (a.empty_ || b.empty_) {
        return a.empty_ == b.empty_;
    }
    return a.lo_ == b.lo_ && a.hi_ == b.hi_;
}

Interval operator-(const Interval& x)
{
    if (x.is_empty()) {
        return x;
    }
    return {-x.hi(), -x.lo()};
}

Interval operator+(const Interval& a, const Interval& b)
{
    if (a.is_empty() || b.is_empty()) {
        return Interval::empty();
    }
    return {add_down(a.lo(), b.lo()), add_up(a.hi(), b.hi())};
}

Interval operator-(const Interval& a, const Interval& b)
{
    if (a.is_empty() || b.is_empty()) {
        return Interval::empty();
    }
    return {sub_down(a.lo(), b.hi()), sub_up(a.hi(), b.lo())};
}

Interval operator*(const Interval& a, const Interval& b)
{
    if (a.is_empty() || b.is_empty()) {
        return Interval::empty();
    }
    const std::array<std::pair<double, double>, 4> pairs{
        {{a.lo(), b.lo()}, {a.lo(), b.hi()}, {a.hi(), b.lo()}, {a.hi(), b.hi()}}};
    double lo = kInf;
    double hi = -kInf;
    for (const auto& [x, y] : pairs) {
        lo = std::min(lo, mul_down(x, y));
        hi = std::max(hi, mul_up(x, y));
    }
    return {lo, hi};
}

namespace {

// num / den for den strictly positive.
Interval div_positive(const Interval& num, const Interval& den)
{
    const double lo = num.lo() >= 0.0 ? div_down(num.lo(), den.hi()) : div_down(num.lo(), den.lo());
    const double hi = num.hi() >= 0.0 ? div_up(num.hi(), den.lo()) : div_up(num.hi(), den.hi());
    return {lo, hi};
}

} // namespace

std::optional<Interval> div(const Interval& num, const Interval& den)
{
    if (num.is_empty() || den.is_empty()) {
        return Interval::empty();
    }
    if (den.contains_zero()) {
        return std::nullopt;
    }
    if (den.lo() > 0.0) {
        return div_positive(num, den);
    }
    return -div_positive(num, -den);
}

Interval hull(const Interval& a, const Interval& b)
{
    if (a.is_empty()) {
        return b;
    }
    if (b.is_empty()) {
        return a;
    }
    return {std::min(a.lo(), b.lo()), std::max(a.hi(), b.hi())};
}

Interval intersect(const Interval& a, const Interval& b)
{
    if (!a.overlaps(b)) {
        return Interval::empty();
    }
    return {std::max(a.lo(), b.lo()), std::min(a.hi(), b.hi())};
}

namespace {

// Upper bound of x^n for x >= 0.
double pow_up_nonneg(double x, int n)
{
    double r = 1.0;
    for (int i = 0; i < n; ++i) {
        r = mul_up(r, x);
    }
    return r;
}

double pow_down_nonneg(double x, int n)
{
    double r = 1.0;
    for (int i = 0; i < n; ++i) {
        r = mul_down(r, x);
    }
    return r;
}

// Enclosure of x^n, n >= 0.
Interval pow_nonneg_exponent(const Interval& x, int n)
{
    if (n == 0) {
        return {1.0, 1.0};
    }
    if (n % 2 == 1) {
        const double lo = x.lo() >= 0.0 ? pow_down_nonneg(x.lo(), n) : -pow_up_nonneg(-x.lo(), n);
        const double hi = x.hi() >= 0.0 ? pow_up_nonneg(x.hi(), n) : -pow_down_nonneg(-x.hi(), n);
        return {lo, hi};
    }
    const Interval a = abs(x);
    return {pow_down_nonneg(a.lo(), n), pow_up_nonneg(a.hi(), n)};
}

double lower_transcendental(double v) { return widen_down(v, kTranscendentalUlps); }
double upper_transcendental(double v) { return widen_up(v, kTranscendentalUlps); }

// True if some point offset + 2*k*pi may lie in [lo, hi]. May answer true
// spuriously near the boundary, never false spuriously.
bool may_contain_phase(double lo, double hi, double offset)
{
    constexpr double two_pi = 2.0 * std::numbers::pi;
    constexpr double slack = 1e-9;
    const double t_lo = (lo - offset) / two_pi;
    const double t_hi = (hi - offset) / two_pi;
    return std::ceil(t_lo - slack) <= std::floor(t_hi + slack);
}

Interval trig_image(const Interval& x, double (*fn)(double), double max_offset, double min_offset)
{
    constexpr double kLargeArgument = 1e6;
    if (!x.is_finite() || x.mag() > kLargeArgument || x.width() >= 2.0 * std::numbers::pi) {
        return {-1.0, 1.0};
    }
    const double a = fn(x.lo());
    const double b = fn(x.hi());
    double lo = lower_transcendental(std::min(a, b));
    double hi = upper_transcendental(std::max(a, b));
    if (may_contain_phase(x.lo(), x.hi(), max_offset)) {
        hi = 1.0;
    }
    if (may_contain_phase(x.lo(), x.hi(), min_offset)) {
        lo = -1.0;
    }
    return {std::max(lo, -1.0), std::min(hi, 1.0)};
}

} // namespace

Interval exp(const Interval& x)
{
    if (x.is_empty()) {
        return x;
    }
    const double lo = std::max(0.0, lower_transcendental(std::exp(x.lo())));
    const double hi = upper_transcendental(std::exp(x.hi()));
    return {lo, hi};
}

Interval log(const Interval& x)
{
    if (x.is_empty()) {
        return x;
    }
    if (x.lo() <= 0.0) {
        throw DomainError("log: argument interval " + to_string(x) + " touches non-positive values");
    }
    const double lo = lower_transcendental(std::log(x.lo()));
    const double hi = x.hi() == kInf ? kInf : upper_transcendental(std::log(x.hi()));
    return {lo, hi};
}

Interval sqrt(const Interval& x)
{
    if (x.is_empty()) {
        return x;
    }
    if (x.lo() < 0.0) {
        throw DomainError("sqrt: argument interval " + to_string(x) + " contains negative values");
    }
    return {sqrt_down(x.lo()), sqrt_up(x.hi())};
}

Interval abs(const Interval& x)
{
    if (x.is_empty()) {
        return x;
    }
    if (x.lo() >= 0.0) {
        return x;
    }
    if (x.hi() <= 0.0) {
        return -x;
    }
    return {0.0, std::max(-x.lo(), x.hi())};
}

Interval sin(const Interval& x)
{
    if (x.is_empty()) {
        return x;
    }
    constexpr double half_pi = std::numbers::pi / 2.0;
    return trig_image(x, [](double v) { return std::sin(v); }, half_pi, -half_pi);
}

Interval cos(const Interval& x)
{
    if (x.is_empty()) {
        return x;
    }
    return trig_image(x, [](double v) { return std::cos(v); }, 0.0, std::numbers::pi);
}

Interval sign(const Interval& x)
{
    if (x.is_empty()) {
        return x;
    }
    auto sgn = [](double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); };
    return {sgn(x.lo()), sgn(x.hi())};
}

std::optional<Interval> pow(const Interval& x, int n)
{
    if (x.is_empty()) {
        return x;
    }
    if (n >= 0) {
        return pow_nonneg_exponent(x, n);
    }
    return div(Interval(1.0), pow_nonneg_exponent(x, -n));
}

Interval monotone_env(MonotoneFn fn, const Interval& x, int power)
{
    switch (fn) {
    case MonotoneFn::exp:
        return exp(x);
    case MonotoneFn::log:
        return log(x);
    case MonotoneFn::sqrt:
        return sqrt(x);
    case MonotoneFn::abs:
        return abs(x);
    case MonotoneFn::sin:
        return sin(x);
    case MonotoneFn::cos:
        return cos(x);
    case MonotoneFn::pow:
        if (power < 0) {
            throw std::invalid_argument("monotone_env: negative powers are not monotone envelopes; use pow()");
        }
        return *pow(x, power);
    }
    throw std::invalid_argument("monotone_env: unknown function tag");
}

namespace {

std::string format_double(double v)
{
    std::array<char, 64> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return {buf.data(), res.ptr};
}

} // namespace

std::string to_string(const Interval& x)
{
    if (x.is_empty()) {
        return "[empty]";
    }
    return "[" + format_double(x.lo()) + ", " + format_double(x.hi()) + "]";
}

std::ostream& operator<<(std::ostream& os, const Interval& x) { return os << to_string(x); }

} // namespace certint
