#pragma once

#include <cstddef>
#include <stdexcept>

#include "certint/darboux.hpp"
#include "certint/expr.hpp"
#include "certint/interval.hpp"

namespace certint {

/// Comparisons between sums and increments are widened by this many ulps.
inline constexpr int kComparisonUlps = 4;

/// Outcome of bounding h over a domain by interval evaluation with uniform
/// subdivision into up to 2^10 blocks.
struct BoundednessCheck {
    bool certified = false;
    /// Hull of the block enclosures when certified.
    Interval bound;
    std::size_t blocks = 0;
};

BoundednessCheck certify_bounded(const ExtendedExpr& h, const Interval& domain);

enum class SandwichOutcome {
    pass,
    /// The derivative could not be certified bounded; nothing is claimed.
    unverified_hypothesis,
    /// lower sum > increment or increment > upper sum. Only reachable through
    /// an unsound computation.
    fail,
};

std::string to_string(SandwichOutcome o);

/// lower_sum(h, P) <= H(b) - H(a) <= upper_sum(h, P) with h = H'.
struct SandwichVerdict {
    double lower_sum = 0.0;
    /// Midpoint of increment_enclosure.
    double increment = 0.0;
    double upper_sum = 0.0;
    Interval increment_enclosure;
    bool pass = false;
    std::size_t partition_size = 0;
    SandwichOutcome outcome = SandwichOutcome::fail;
    /// Bound on h over the domain (set when the hypothesis was certified).
    Interval derivative_bound;
};

/// Throws std::invalid_argument when P does not span `domain`, and
/// DomainError when H cannot be evaluated at the domain endpoints.
SandwichVerdict sandwich_check(const ExtendedExpr& H, const Interval& domain, const Partition& p);

/// Thrown when the Darboux gap of the derivative did not close.
class NotConverged : public std::runtime_error {
public:
    explicit NotConverged(DarbouxEnclosure enclosure);
    [[nodiscard]] const DarbouxEnclosure& enclosure() const { return enclosure_; }

private:
    DarbouxEnclosure enclosure_;
};

inline constexpr std::size_t kReconstructionMaxSteps = 2'000'000;

/// Bracket of the integral of h over `domain` with width <= tol. Throws
/// NotConverged when the lower and upper sums stay apart, carrying the
/// final enclosure (which still brackets every antiderivative increment).
Interval integral_bracket(const RangeOracle& h, const Interval& domain, double tol,
                          std::size_t max_steps = kReconstructionMaxSteps);

/// Integral of H' over `domain`, which contains H(b) - H(a) whenever H' is
/// integrable.
Interval ftc_reconstruct(const ExtendedExpr& H, const Interval& domain, double tol,
                         std::size_t max_steps = kReconstructionMaxSteps);

/// Enclosure of H(b) - H(a) by interval evaluation at the endpoints.
Interval increment_enclosure(const ExtendedExpr& H, const Interval& domain);

} // namespace certint
