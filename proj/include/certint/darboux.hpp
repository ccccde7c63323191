#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "certint/expr.hpp"
#include "certint/interval.hpp"

namespace certint {

/// Certified bounds m <= inf f and sup f <= M over a subinterval.
struct Bounds {
    double lower;
    double upper;
};

/// Source of certified range bounds for a bounded function.
class RangeOracle {
public:
    virtual ~RangeOracle() = default;
    /// std::nullopt means the oracle cannot bound f on `sub` (indeterminate);
    /// callers treat that as (-inf, +inf) and subdivide.
    [[nodiscard]] virtual std::optional<Bounds> bounds(const Interval& sub) const = 0;
    [[nodiscard]] virtual std::string name() const = 0;
};

/// Bounds from interval evaluation of an expression.
class ExprOracle final : public RangeOracle {
public:
    explicit ExprOracle(ExtendedExpr f) : f_(std::move(f)) {}
    [[nodiscard]] std::optional<Bounds> bounds(const Interval& sub) const override;
    [[nodiscard]] std::string name() const override;
    [[nodiscard]] const ExtendedExpr& function() const { return f_; }

private:
    ExtendedExpr f_;
};

/// Returns the same stated bounds on every subinterval. With (0, 1) this is
/// the Dirichlet function (indicator of the rationals): bounded, nowhere
/// continuous, not Riemann integrable.
class ConstantBoundsOracle final : public RangeOracle {
public:
    ConstantBoundsOracle(double lower, double upper, std::string name);
    static ConstantBoundsOracle dirichlet() { return {0.0, 1.0, "dirichlet"}; }
    [[nodiscard]] std::optional<Bounds> bounds(const Interval& sub) const override;
    [[nodiscard]] std::string name() const override { return name_; }

private:
    double lower_;
    double upper_;
    std::string name_;
};

/// Thomae-type function: 1/q at reduced rationals p/q, 0 at irrationals.
/// Riemann integrable with integral 0, so its Darboux gap closes, unlike
/// the Dirichlet oracle. The supremum over [l, h] is 1/q_min where q_min is
/// the least denominator of a rational in [l, h]; the search is capped and
/// falls back to the bound 1/cap.
class ThomaeOracle final : public RangeOracle {
public:
    explicit ThomaeOracle(long max_denominator = 1L << 20) : max_denominator_(max_denominator) {}
    [[nodiscard]] std::optional<Bounds> bounds(const Interval& sub) const override;
    [[nodiscard]] std::string name() const override { return "thomae-like"; }

private:
    long max_denominator_;
};

/// Piecewise-constant function: value[i] on (breaks[i], breaks[i+1]).
/// At a breakpoint either adjacent value may be taken.
class StepOracle final : public RangeOracle {
public:
    StepOracle(std::vector<double> breaks, std::vector<double> values);
    [[nodiscard]] std::optional<Bounds> bounds(const Interval& sub) const override;
    [[nodiscard]] std::string name() const override { return "step"; }

private:
    std::vector<double> breaks_;
    std::vector<double> values_;
};

/// Strictly increasing breakpoints a = p[0] < ... < p[k] = b, k >= 1.
class Partition {
public:
    /// Throws std::invalid_argument if fewer than 2 points, not strictly
    /// increasing, or non-finite.
    explicit Partition(std::vector<double> points);

    /// n equal blocks; the last point is exactly b.
    static Partition uniform(double a, double b, std::size_t n);

    [[nodiscard]] std::span<const double> points() const { return points_; }
    [[nodiscard]] std::size_t size() const { return points_.size(); }
    [[nodiscard]] std::size_t blocks() const { return points_.size() - 1; }
    [[nodiscard]] double a() const { return points_.front(); }
    [[nodiscard]] double b() const { return points_.back(); }
    [[nodiscard]] Interval block(std::size_t i) const { return {points_[i], points_[i + 1]}; }
    /// Every point of `coarser` is a point of this partition.
    [[nodiscard]] bool refines(const Partition& coarser) const;

    friend bool operator==(const Partition&, const Partition&) = default;

private:
    std::vector<double> points_;
};

/// Σ m_i Δx_i accumulated with downward rounding: a certified lower bound on
/// the lower Darboux sum and hence on the lower integral.
double lower_sum(const RangeOracle& f, const Partition& p);
/// Σ M_i Δx_i rounded upward.
double upper_sum(const RangeOracle& f, const Partition& p);

/// Smallest block width refinement may produce: 2^-40 (b - a).
double min_block_width(double a, double b);

struct RefineResult {
    Partition partition;
    /// The selected block was already at minimum width; partition unchanged.
    bool at_min_width = false;
};

/// Bisects the block with the largest (M_i - m_i) Δx_i, leftmost on ties.
RefineResult refine_once(const RangeOracle& f, const Partition& p);

enum class EnclosureStatus {
    converged,
    /// max_steps exhausted with the gap above tolerance.
    not_converged,
    /// A block that still needed refinement reached the minimum width.
    inconclusive,
};

std::string to_string(EnclosureStatus s);

struct HistoryEntry {
    std::size_t step;
    double lower_sum;
    double upper_sum;
};

/// Brackets for the lower and upper Darboux integrals.
///
/// lower_integral.lo is a certified lower bound of the lower integral and
/// upper_integral.hi a certified upper bound of the upper integral. The other
/// two ends are the current upper/lower sums, which also bound both integrals
/// since lower integral <= upper integral; for non-integrable functions these
/// are conservative.
struct DarbouxEnclosure {
    Interval lower_integral;
    Interval upper_integral;
    std::size_t partition_size = 0;
    /// Number of bisections performed.
    std::size_t refinement_steps = 0;
    EnclosureStatus status = EnclosureStatus::not_converged;
    /// One entry per sum evaluation, best-so-far values: lower sums are
    /// non-decreasing and upper sums non-increasing.
    std::vector<HistoryEntry> history;

    [[nodiscard]] bool converged() const { return status == EnclosureStatus::converged; }
    [[nodiscard]] double gap() const;
};

inline constexpr double kDefaultTolerance = 1e-6;
inline constexpr std::size_t kDefaultMaxSteps = 100000;

/// kDefaultMaxSteps, or the value of DARBOUX_MAX_STEPS when set to a
/// positive integer.
std::size_t default_max_steps();

/// Adaptive greedy refinement until upper - lower <= tol or max_steps
/// bisections. Throws std::invalid_argument for tol <= 0, max_steps == 0 or a
/// domain that is not a finite interval of positive width.
DarbouxEnclosure enclose(const RangeOracle& f, const Interval& domain, double tol = kDefaultTolerance,
                         std::size_t max_steps = kDefaultMaxSteps);

/// CSV with header "step,lower_sum,upper_sum".
void write_history_csv(std::ostream& os, const DarbouxEnclosure& enc);

} // namespace certint
