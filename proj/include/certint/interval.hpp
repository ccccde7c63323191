#pragma once

#include <cmath>
#include <iosfwd>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>

namespace certint {

/// Raised when an operation is applied outside its mathematical domain
/// (log of a non-positive interval, sqrt of a negative one, ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Directed rounding on doubles.
///
/// Each primitive returns the exact result rounded toward -inf (`*_down`)
/// or +inf (`*_up`). The error of the round-to-nearest result is recovered
/// with an error-free transformation (TwoSum / FMA residual); when that is
/// not exact (underflow range) the result is nudged by one ulp instead.
namespace rounding {

inline double next_down(double x) { return std::nextafter(x, -std::numeric_limits<double>::infinity()); }
inline double next_up(double x) { return std::nextafter(x, std::numeric_limits<double>::infinity()); }

double add_down(double a, double b);
double add_up(double a, double b);
double sub_down(double a, double b);
double sub_up(double a, double b);
double mul_down(double a, double b);
double mul_up(double a, double b);
double div_down(double a, double b);
double div_up(double a, double b);
double sqrt_down(double a);
double sqrt_up(double a);

/// Widen by `ulps` representable values in each direction.
double widen_down(double x, int ulps);
double widen_up(double x, int ulps);

} // namespace rounding

/// Closed real interval [lo, hi] with lo <= hi. Endpoints may be infinite
/// (lo = -inf, hi = +inf). The empty set is a separate state, never encoded
/// as lo > hi.
class Interval {
public:
    /// Degenerate interval {0}.
    constexpr Interval() = default;
    /// Degenerate interval {value}. Throws std::invalid_argument on NaN.
    Interval(double value);  // NOLINT(google-explicit-constructor)
    /// Throws std::invalid_argument unless lo <= hi, lo < +inf and hi > -inf.
    Interval(double lo, double hi);

    static Interval empty();
    static Interval entire();

    [[nodiscard]] double lo() const { return lo_; }
    [[nodiscard]] double hi() const { return hi_; }
    [[nodiscard]] bool is_empty() const { return empty_; }
    [[nodiscard]] bool is_point() const { return !empty_ && lo_ == hi_; }
    [[nodiscard]] bool is_finite() const { return !empty_ && std::isfinite(lo_) && std::isfinite(hi_); }

    /// Upper bound on hi - lo.
    [[nodiscard]] double width() const;
    /// A representable point inside the interval (finite intervals only).
    [[nodiscard]] double mid() const;
    /// max(|lo|, |hi|).
    [[nodiscard]] double mag() const;

    [[nodiscard]] bool contains(double x) const { return !empty_ && lo_ <= x && x <= hi_; }
    [[nodiscard]] bool contains(const Interval& other) const;
    [[nodiscard]] bool contains_zero() const { return contains(0.0); }
    [[nodiscard]] bool overlaps(const Interval& other) const;

    friend bool operator==(const Interval& a, const Interval& b);

private:
    double lo_ = 0.0;
    double hi_ = 0.0;
    bool empty_ = false;
};

Interval operator-(const Interval& x);
Interval operator+(const Interval& a, const Interval& b);
Interval operator-(const Interval& a, const Interval& b);
Interval operator*(const Interval& a, const Interval& b);

/// Quotient enclosure. std::nullopt is the indeterminate sentinel returned
/// when the divisor contains zero; callers are expected to subdivide.
std::optional<Interval> div(const Interval& num, const Interval& den);

Interval hull(const Interval& a, const Interval& b);
Interval intersect(const Interval& a, const Interval& b);

enum class MonotoneFn { exp, log, sqrt, abs, pow, sin, cos };

/// Image enclosure of an elementary function. `power` is only read for
/// MonotoneFn::pow and must be >= 0 there (negative powers go through pow()).
/// Throws DomainError outside the function's domain.
Interval monotone_env(MonotoneFn fn, const Interval& x, int power = 0);

Interval exp(const Interval& x);
Interval log(const Interval& x);
Interval sqrt(const Interval& x);
Interval abs(const Interval& x);
Interval sin(const Interval& x);
Interval cos(const Interval& x);
/// Sign function image: [sign(lo), sign(hi)].
Interval sign(const Interval& x);
/// Integer power; negative exponents are reciprocals and can be indeterminate.
std::optional<Interval> pow(const Interval& x, int n);

std::string to_string(const Interval& x);
std::ostream& operator<<(std::ostream& os, const Interval& x);

} // namespace certint
