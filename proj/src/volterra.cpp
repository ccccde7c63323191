#include "certint/volterra.hpp"

#include <cmath>
#include <limits>

namespace certint {

using namespace rounding;

namespace {

constexpr std::size_t kMaxBoundednessBlocks = 1024;

std::optional<Interval> bound_on_uniform_blocks(const ExtendedExpr& h, const Interval& domain, std::size_t n)
{
    const Partition p = Partition::uniform(domain.lo(), domain.hi(), n);
    std::optional<Interval> total;
    for (std::size_t i = 0; i < p.blocks(); ++i) {
        const auto r = eval_interval(h, p.block(i));
        if (!r || !r->is_finite()) {
            return std::nullopt;
        }
        total = total ? hull(*total, *r) : *r;
    }
    return total;
}

} // namespace

BoundednessCheck certify_bounded(const ExtendedExpr& h, const Interval& domain)
{
    for (std::size_t n = 1; n <= kMaxBoundednessBlocks; n *= 2) {
        if (const auto b = bound_on_uniform_blocks(h, domain, n)) {
            return {true, *b, n};
        }
    }
    return {false, Interval::entire(), kMaxBoundednessBlocks};
}

std::string to_string(SandwichOutcome o)
{
    switch (o) {
    case SandwichOutcome::pass:
        return "pass";
    case SandwichOutcome::unverified_hypothesis:
        return "unverified-hypothesis";
    case SandwichOutcome::fail:
        return "fail";
    }
    return "unknown";
}

Interval increment_enclosure(const ExtendedExpr& H, const Interval& domain)
{
    const auto hb = eval_interval(H, Interval(domain.hi()));
    const auto ha = eval_interval(H, Interval(domain.lo()));
    if (!hb || !ha) {
        throw DomainError("antiderivative is undefined at a domain endpoint");
    }
    return *hb - *ha;
}

SandwichVerdict sandwich_check(const ExtendedExpr& H, const Interval& domain, const Partition& p)
{
    if (p.a() != domain.lo() || p.b() != domain.hi()) {
        throw std::invalid_argument("sandwich_check: partition does not span the domain");
    }
    SandwichVerdict v;
    v.partition_size = p.blocks();
    v.increment_enclosure = increment_enclosure(H, domain);
    v.increment = v.increment_enclosure.mid();

    const ExtendedExpr h = differentiate(H);
    const BoundednessCheck bounded = certify_bounded(h, domain);
    if (!bounded.certified) {
        v.outcome = SandwichOutcome::unverified_hypothesis;
        v.pass = false;
        v.lower_sum = -std::numeric_limits<double>::infinity();
        v.upper_sum = std::numeric_limits<double>::infinity();
        return v;
    }
    v.derivative_bound = bounded.bound;

    const ExprOracle oracle(h);
    v.lower_sum = lower_sum(oracle, p);
    v.upper_sum = upper_sum(oracle, p);
    const bool lower_ok = widen_down(v.lower_sum, kComparisonUlps) <= widen_up(v.increment_enclosure.hi(), kComparisonUlps);
    const bool upper_ok = widen_down(v.increment_enclosure.lo(), kComparisonUlps) <= widen_up(v.upper_sum, kComparisonUlps);
    v.pass = lower_ok && upper_ok;
    v.outcome = v.pass ? SandwichOutcome::pass : SandwichOutcome::fail;
    return v;
}

NotConverged::NotConverged(DarbouxEnclosure enclosure)
    : std::runtime_error("Darboux sums did not converge: gap " + std::to_string(enclosure.gap()) + " after " +
                         std::to_string(enclosure.refinement_steps) + " refinements (" +
                         to_string(enclosure.status) + ")"),
      enclosure_(std::move(enclosure))
{
}

Interval integral_bracket(const RangeOracle& h, const Interval& domain, double tol, std::size_t max_steps)
{
    DarbouxEnclosure enc = enclose(h, domain, tol, max_steps);
    if (!enc.converged()) {
        throw NotConverged(std::move(enc));
    }
    return {enc.lower_integral.lo(), enc.upper_integral.hi()};
}

Interval ftc_reconstruct(const ExtendedExpr& H, const Interval& domain, double tol, std::size_t max_steps)
{
    const ExprOracle oracle(differentiate(H));
    return integral_bracket(oracle, domain, tol, max_steps);
}

} // namespace certint
