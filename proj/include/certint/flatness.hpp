#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "certint/expr.hpp"
#include "certint/interval.hpp"

namespace certint {

// Thresholds of the flatness checks.
inline constexpr double kStoicaFloor = 0x1p-20;   // blockwise proof of |x f'| <= C|f| starts here
inline constexpr double kTailFloor = 0x1p-40;     // smallest delta tried; below it only tail lemmas apply
inline constexpr double kBracketWidth = 0x1p-30;  // target width of the min E_n bracket
inline constexpr int kWitnessMarginUlps = 8;

/// A function on [0, 1] together with the constant C of |x f'(x)| <= C |f(x)|.
struct FlatCandidate {
    /// Throws std::invalid_argument unless C is finite and positive.
    FlatCandidate(ExtendedExpr f, double C);

    ExtendedExpr f;
    double C;
};

/// Closed-form families for which the behaviour on (0, tail floor) and the
/// ratio |x f'(x)| / |f(x)| are known symbolically.
struct ExemplarFamily {
    enum class Kind {
        zero,      // f = 0
        power,     // f = scale * x^k, k >= 1
        flat_exp,  // f = scale * exp(-a / x), a > 0
    };
    Kind kind;
    double scale = 1.0;
    int k = 0;
    double a = 0.0;
};

std::optional<ExemplarFamily> recognize_family(const Expr& e);

enum class Condition {
    zero,    // f(0) = 0
    uno,     // exists delta: |f(x)| < x^n on (0, delta)
    stoica,  // |x f'(x)| <= C |f(x)| on [0, 1]
};

enum class ConditionStatus {
    certified,
    /// Certified on [floor, ...] by interval arithmetic; the (0, floor) tail
    /// has no symbolic argument.
    certified_modulo_tail,
    falsified,
    inconclusive,
};

std::string to_string(Condition c);
std::string to_string(ConditionStatus s);

struct ConditionReport {
    Condition condition = Condition::zero;
    /// Exponent for Condition::uno, 0 otherwise.
    int n = 0;
    ConditionStatus status = ConditionStatus::inconclusive;
    /// Point where the inequality fails by more than kWitnessMarginUlps.
    std::optional<double> witness;
    /// Largest certified delta for Condition::uno.
    std::optional<double> delta;
    std::string detail;

    [[nodiscard]] bool certified() const
    {
        return status == ConditionStatus::certified || status == ConditionStatus::certified_modulo_tail;
    }
};

/// Structural: certified iff f evaluates to exactly 0 at 0.
ConditionReport check_zero(const FlatCandidate& cand);

/// Tries delta = 2^-1, ..., 2^-40 (and delta = 1 first when 1/2 succeeds),
/// proving x^n - |f(x)| > 0 blockwise on [2^-40, delta], then bisects between
/// the largest certified delta and the next failed one. Throws
/// std::invalid_argument for n <= 1.
ConditionReport check_uno(const FlatCandidate& cand, int n);

/// Dense-sample falsification on (0, 1], then the closed-form ratio for
/// exemplar families, otherwise a blockwise proof of C|f| - |x f'| >= 0 on
/// [2^-20, 1].
ConditionReport check_stoica(const FlatCandidate& cand);

/// Evaluates the violated inequality at a report's witness with plain
/// floating-point arithmetic; true when it fails by more than
/// kWitnessMarginUlps.
bool witness_reverifies(const FlatCandidate& cand, const ConditionReport& report);

enum class LevelSetStatus {
    /// |f(x)| - x^n has no zero on the scanned range.
    empty,
    /// x_bar brackets the smallest zero.
    bracket,
    inconclusive,
};

std::string to_string(LevelSetStatus s);

/// Location of min E_n, E_n = {x > 0 : |f(x)| = x^n}.
struct MinLevelSet {
    LevelSetStatus status = LevelSetStatus::inconclusive;
    std::optional<Interval> x_bar;
    /// A zero where |f| touches x^n from below without crossing (|f| < x^n on
    /// both sides, or on the left at x = 1). Not counted as a member of E_n.
    std::optional<Interval> tangency;
    /// Left end of the scan: the certified delta_n, or the tail floor.
    double scan_start = 0.0;
    /// (0, scan_start) is known to contain no zero.
    bool tail_verified = false;
    std::size_t evaluations = 0;
};

MinLevelSet locate_min_en(const FlatCandidate& cand, int n);
/// Reuses an existing check_uno report for the scan start.
MinLevelSet locate_min_en(const FlatCandidate& cand, int n, const ConditionReport& uno);

enum class StepStatus {
    /// The relation holds between the computed enclosures.
    verified,
    /// The enclosures overlap; the relation is not contradicted.
    consistent,
    /// Not computed numerically; justified by a certified hypothesis.
    justified,
    /// Relies on a hypothesis that could not be decided.
    unverified,
    /// Relies on a hypothesis that was falsified.
    unjustified,
    /// The enclosures contradict the relation.
    refuted,
};

std::string to_string(StepStatus s);

struct ChainStep {
    std::string label;
    std::optional<Interval> lhs;
    std::string relation;
    std::optional<Interval> rhs;
    StepStatus status = StepStatus::unverified;
    bool holds = true;
    /// Hypothesis the step relies on.
    std::string hypothesis;
    std::string note;
};

/// The contradiction argument for one n, step by step:
///   |f(x_n)| = g(x_n) - g(0) <= upper int |g'| = upper int |f'|
///            <= int C|f|/x < (C/n) x_n^n < x_n^n,   g = |f|.
struct ChainTrace {
    int n = 0;
    double C = 0.0;
    MinLevelSet level_set;
    bool en_empty = false;
    std::vector<ChainStep> steps;
    std::optional<std::size_t> first_failure;
    std::string conclusion;
};

class PreconditionViolated : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Throws PreconditionViolated when n <= C.
ChainTrace chain_evaluate(const FlatCandidate& cand, int n);

/// Finite bound on |f'| over [2^-20, 1], if interval evaluation yields one.
std::optional<Interval> derivative_bound(const FlatCandidate& cand);

} // namespace certint
