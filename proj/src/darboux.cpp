#include "certint/darboux.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <ostream>
#include <queue>
#include <stdexcept>

namespace certint {

using namespace rounding;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string format_double(double v)
{
    std::array<char, 64> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return {buf.data(), res.ptr};
}

// A representable point strictly inside (lo, hi), if there is one.
std::optional<double> split_point(double lo, double hi)
{
    double m = lo + (hi - lo) / 2.0;
    if (!std::isfinite(m)) {
        m = lo / 2.0 + hi / 2.0;
    }
    if (!(lo < m && m < hi)) {
        return std::nullopt;
    }
    return m;
}

// Bounds on the true product v * (hi - lo).
struct Term {
    double down;
    double up;
};

Term weighted(double v, double lo, double hi)
{
    const double dx_lo = sub_down(hi, lo);
    const double dx_hi = sub_up(hi, lo);
    if (v >= 0.0) {
        return {mul_down(v, dx_lo), mul_up(v, dx_hi)};
    }
    return {mul_down(v, dx_hi), mul_up(v, dx_lo)};
}

Bounds bounds_or_unbounded(const RangeOracle& f, const Interval& sub)
{
    const auto b = f.bounds(sub);
    if (!b) {
        return {-kInf, kInf};
    }
    return *b;
}

double oscillation(const Bounds& b, double lo, double hi)
{
    if (!std::isfinite(b.lower) || !std::isfinite(b.upper)) {
        return kInf;
    }
    return (b.upper - b.lower) * (hi - lo);
}

} // namespace

// ---------------------------------------------------------------------------
// Oracles

std::optional<Bounds> ExprOracle::bounds(const Interval& sub) const
{
    const auto r = eval_interval(f_, sub);
    if (!r) {
        return std::nullopt;
    }
    return Bounds{r->lo(), r->hi()};
}

std::string ExprOracle::name() const { return to_string(f_); }

ConstantBoundsOracle::ConstantBoundsOracle(double lower, double upper, std::string name)
    : lower_(lower), upper_(upper), name_(std::move(name))
{
    if (!(lower <= upper)) {
        throw std::invalid_argument("ConstantBoundsOracle: lower bound exceeds upper bound");
    }
}

std::optional<Bounds> ConstantBoundsOracle::bounds(const Interval& /*sub*/) const { return Bounds{lower_, upper_}; }

std::optional<Bounds> ThomaeOracle::bounds(const Interval& sub) const
{
    // Some rational p/q lies in [l, h] iff ceil(l q) <= floor(h q). Rounding
    // the products outward can only report spurious hits, which loosens M.
    for (long q = 1; q <= max_denominator_; ++q) {
        const auto dq = static_cast<double>(q);
        if (std::ceil(mul_down(sub.lo(), dq)) <= std::floor(mul_up(sub.hi(), dq))) {
            return Bounds{0.0, div_up(1.0, dq)};
        }
    }
    return Bounds{0.0, div_up(1.0, static_cast<double>(max_denominator_))};
}

StepOracle::StepOracle(std::vector<double> breaks, std::vector<double> values)
    : breaks_(std::move(breaks)), values_(std::move(values))
{
    if (breaks_.size() < 2 || values_.size() + 1 != breaks_.size()) {
        throw std::invalid_argument("StepOracle: need k+1 breakpoints for k values");
    }
    if (!std::is_sorted(breaks_.begin(), breaks_.end(), std::less_equal<>())) {
        throw std::invalid_argument("StepOracle: breakpoints must be strictly increasing");
    }
}

std::optional<Bounds> StepOracle::bounds(const Interval& sub) const
{
    if (sub.lo() < breaks_.front() || sub.hi() > breaks_.back()) {
        throw DomainError("StepOracle: query " + to_string(sub) + " outside the support");
    }
    double lo = kInf;
    double hi = -kInf;
    for (std::size_t i = 0; i < values_.size(); ++i) {
        if (breaks_[i] <= sub.hi() && sub.lo() <= breaks_[i + 1]) {
            lo = std::min(lo, values_[i]);
            hi = std::max(hi, values_[i]);
        }
    }
    return Bounds{lo, hi};
}

// ---------------------------------------------------------------------------
// Partition

Partition::Partition(std::vector<double> points) : points_(std::move(points))
{
    if (points_.size() < 2) {
        throw std::invalid_argument("Partition: need at least two points");
    }
    for (std::size_t i = 0; i < points_.size(); ++i) {
        if (!std::isfinite(points_[i])) {
            throw std::invalid_argument("Partition: points must be finite");
        }
        if (i > 0 && !(points_[i - 1] < points_[i])) {
            throw std::invalid_argument("Partition: points must be strictly increasing");
        }
    }
}

Partition Partition::uniform(double a, double b, std::size_t n)
{
    if (n == 0) {
        throw std::invalid_argument("Partition::uniform: need at least one block");
    }
    std::vector<double> pts(n + 1);
    for (std::size_t i = 0; i <= n; ++i) {
        pts[i] = a + (b - a) * static_cast<double>(i) / static_cast<double>(n);
    }
    pts.front() = a;
    pts.back() = b;
    return Partition(std::move(pts));
}

bool Partition::refines(const Partition& coarser) const
{
    return std::includes(points_.begin(), points_.end(), coarser.points_.begin(), coarser.points_.end());
}

// ---------------------------------------------------------------------------
// Sums

double lower_sum(const RangeOracle& f, const Partition& p)
{
    double sum = 0.0;
    for (std::size_t i = 0; i < p.blocks(); ++i) {
        const double lo = p.points()[i];
        const double hi = p.points()[i + 1];
        const Bounds b = bounds_or_unbounded(f, {lo, hi});
        sum = add_down(sum, weighted(b.lower, lo, hi).down);
    }
    return sum;
}

double upper_sum(const RangeOracle& f, const Partition& p)
{
    double sum = 0.0;
    for (std::size_t i = 0; i < p.blocks(); ++i) {
        const double lo = p.points()[i];
        const double hi = p.points()[i + 1];
        const Bounds b = bounds_or_unbounded(f, {lo, hi});
        sum = add_up(sum, weighted(b.upper, lo, hi).up);
    }
    return sum;
}

double min_block_width(double a, double b) { return std::ldexp(b - a, -40); }

RefineResult refine_once(const RangeOracle& f, const Partition& p)
{
    std::size_t best = 0;
    double best_osc = -1.0;
    for (std::size_t i = 0; i < p.blocks(); ++i) {
        const double lo = p.points()[i];
        const double hi = p.points()[i + 1];
        const double osc = oscillation(bounds_or_unbounded(f, {lo, hi}), lo, hi);
        if (osc > best_osc) {
            best_osc = osc;
            best = i;
        }
    }
    const double lo = p.points()[best];
    const double hi = p.points()[best + 1];
    const auto mid = split_point(lo, hi);
    if (hi - lo <= min_block_width(p.a(), p.b()) || !mid) {
        return {p, true};
    }
    std::vector<double> pts(p.points().begin(), p.points().end());
    pts.insert(pts.begin() + static_cast<std::ptrdiff_t>(best) + 1, *mid);
    return {Partition(std::move(pts)), false};
}

// ---------------------------------------------------------------------------
// Adaptive enclosure

std::string to_string(EnclosureStatus s)
{
    switch (s) {
    case EnclosureStatus::converged:
        return "converged";
    case EnclosureStatus::not_converged:
        return "not-converged";
    case EnclosureStatus::inconclusive:
        return "inconclusive";
    }
    return "unknown";
}

double DarbouxEnclosure::gap() const { return sub_up(upper_integral.hi(), lower_integral.lo()); }

std::size_t default_max_steps()
{
    const char* env = std::getenv("DARBOUX_MAX_STEPS");
    if (env == nullptr) {
        return kDefaultMaxSteps;
    }
    const std::string_view text(env);
    std::size_t value = 0;
    const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
    if (res.ec != std::errc() || res.ptr != text.data() + text.size() || value == 0) {
        return kDefaultMaxSteps;
    }
    return value;
}

namespace {

struct Block {
    double lo;
    double hi;
    double osc;
    Term lower;  // m * dx
    Term upper;  // M * dx
};

struct HeapItem {
    double osc;
    double lo;
    std::size_t index;

    // Max-heap on oscillation; among equals the leftmost block wins.
    friend bool operator<(const HeapItem& a, const HeapItem& b)
    {
        if (a.osc != b.osc) {
            return a.osc < b.osc;
        }
        return a.lo > b.lo;
    }
};

// Directed running sums over the current blocks, updated in O(1) per split.
// Removing a block subtracts the outward bound of its term, so the running
// values stay certified; they are periodically recomputed to shed drift.
class RunningSums {
public:
    void add(const Block& b)
    {
        if (std::isfinite(b.lower.down)) {
            lower_ = add_down(lower_, b.lower.down);
        } else {
            ++infinite_lower_;
        }
        if (std::isfinite(b.upper.up)) {
            upper_ = add_up(upper_, b.upper.up);
        } else {
            ++infinite_upper_;
        }
    }

    void remove(const Block& b)
    {
        if (std::isfinite(b.lower.down)) {
            lower_ = sub_down(lower_, b.lower.up);
        } else {
            --infinite_lower_;
        }
        if (std::isfinite(b.upper.up)) {
            upper_ = sub_up(upper_, b.upper.down);
        } else {
            --infinite_upper_;
        }
    }

    void reset(const std::vector<Block>& blocks)
    {
        *this = RunningSums();
        for (const auto& b : blocks) {
            add(b);
        }
    }

    [[nodiscard]] double lower() const { return infinite_lower_ > 0 ? -kInf : lower_; }
    [[nodiscard]] double upper() const { return infinite_upper_ > 0 ? kInf : upper_; }

private:
    double lower_ = 0.0;
    double upper_ = 0.0;
    std::size_t infinite_lower_ = 0;
    std::size_t infinite_upper_ = 0;
};

Block make_block(const RangeOracle& f, double lo, double hi)
{
    const Bounds b = bounds_or_unbounded(f, {lo, hi});
    if (b.lower > b.upper) {
        throw std::logic_error("range oracle returned lower > upper on " + to_string(Interval(lo, hi)));
    }
    return {lo, hi, oscillation(b, lo, hi), weighted(b.lower, lo, hi), weighted(b.upper, lo, hi)};
}

} // namespace

DarbouxEnclosure enclose(const RangeOracle& f, const Interval& domain, double tol, std::size_t max_steps)
{
    if (!(tol > 0.0)) {
        throw std::invalid_argument("enclose: tolerance must be positive");
    }
    if (max_steps == 0) {
        throw std::invalid_argument("enclose: max_steps must be at least 1");
    }
    if (domain.is_empty() || !domain.is_finite() || !(domain.lo() < domain.hi())) {
        throw std::invalid_argument("enclose: domain must be a finite interval of positive width");
    }

    const double min_width = min_block_width(domain.lo(), domain.hi());
    std::vector<Block> blocks{make_block(f, domain.lo(), domain.hi())};
    std::priority_queue<HeapItem> heap;
    heap.push({blocks[0].osc, blocks[0].lo, 0});
    RunningSums sums;
    sums.reset(blocks);

    DarbouxEnclosure out;
    double best_lower = -kInf;
    double best_upper = kInf;
    std::size_t steps = 0;
    std::size_t since_reset = 0;

    auto record = [&] {
        best_lower = std::max(best_lower, sums.lower());
        best_upper = std::min(best_upper, sums.upper());
        out.history.push_back({steps, best_lower, best_upper});
    };

    for (;;) {
        record();
        if (sub_up(best_upper, best_lower) <= tol) {
            out.status = EnclosureStatus::converged;
            break;
        }
        if (steps >= max_steps) {
            out.status = EnclosureStatus::not_converged;
            break;
        }
        const HeapItem top = heap.top();
        const Block block = blocks[top.index];
        const auto mid = split_point(block.lo, block.hi);
        if (block.hi - block.lo <= min_width || !mid) {
            out.status = EnclosureStatus::inconclusive;
            break;
        }
        heap.pop();
        const Block left = make_block(f, block.lo, *mid);
        const Block right = make_block(f, *mid, block.hi);
        sums.remove(block);
        sums.add(left);
        sums.add(right);
        blocks[top.index] = left;
        blocks.push_back(right);
        heap.push({left.osc, left.lo, top.index});
        heap.push({right.osc, right.lo, blocks.size() - 1});
        ++steps;
        if (++since_reset >= blocks.size()) {
            sums.reset(blocks);
            since_reset = 0;
        }
    }

    sums.reset(blocks);
    best_lower = std::max(best_lower, sums.lower());
    best_upper = std::min(best_upper, sums.upper());
    if (!out.history.empty()) {
        out.history.back().lower_sum = best_lower;
        out.history.back().upper_sum = best_upper;
    }
    if (out.status != EnclosureStatus::converged && sub_up(best_upper, best_lower) <= tol) {
        out.status = EnclosureStatus::converged;
    }
    if (best_lower > best_upper) {
        throw std::logic_error("enclose: lower sum exceeds upper sum; range oracle is unsound");
    }

    out.lower_integral = Interval(best_lower, best_upper);
    out.upper_integral = Interval(best_lower, best_upper);
    out.partition_size = blocks.size();
    out.refinement_steps = steps;
    return out;
}

void write_history_csv(std::ostream& os, const DarbouxEnclosure& enc)
{
    os << "step,lower_sum,upper_sum\n";
    for (const auto& h : enc.history) {
        os << h.step << ',' << format_double(h.lower_sum) << ',' << format_double(h.upper_sum) << '\n';
    }
}

} // namespace certint
