#include "pcx/interval.hpp"

#include <algorithm>
#include <numbers>

namespace pcx {

namespace {

double ipow(double x, int n) {
    double r = 1.0;
    double base = x;
    while (n > 0) {
        if (n & 1) r *= base;
        base *= base;
        n >>= 1;
    }
    return r;
}

} // namespace

Interval iv_add(const Interval& a, const Interval& b) {
    return {a.lo + b.lo, a.hi + b.hi};
}

Interval iv_sub(const Interval& a, const Interval& b) {
    return {a.lo - b.hi, a.hi - b.lo};
}

Interval iv_mul(const Interval& a, const Interval& b) {
    const double p1 = a.lo * b.lo;
    const double p2 = a.lo * b.hi;
    const double p3 = a.hi * b.lo;
    const double p4 = a.hi * b.hi;
    return {std::min(std::min(p1, p2), std::min(p3, p4)),
            std::max(std::max(p1, p2), std::max(p3, p4))};
}

Interval iv_div(const Interval& a, const Interval& b) {
    if (b.contains_zero())
        throw DomainError("interval division by an interval containing zero");
    return iv_mul(a, Interval(1.0 / b.hi, 1.0 / b.lo));
}

Interval iv_neg(const Interval& a) { return {-a.hi, -a.lo}; }

Interval iv_pow(const Interval& a, int n) {
    if (n < 0) throw PreconditionError("iv_pow requires n >= 0");
    if (n == 0) return Interval::point(1.0);
    if (n % 2 == 1 || a.lo >= 0.0)
        return {ipow(a.lo, n), ipow(a.hi, n)};
    if (a.hi <= 0.0)
        return {ipow(a.hi, n), ipow(a.lo, n)};
    // even power over a sign-changing interval
    return {0.0, std::max(ipow(a.lo, n), ipow(a.hi, n))};
}

Interval iv_exp(const Interval& a) { return {std::exp(a.lo), std::exp(a.hi)}; }

Interval iv_sqrt(const Interval& a) {
    if (a.lo < 0.0)
        throw DomainError("interval sqrt of an interval with a negative part");
    return {std::sqrt(a.lo), std::sqrt(a.hi)};
}

Interval iv_sin(const Interval& a) {
    constexpr double two_pi = 2.0 * std::numbers::pi;
    if (a.width() >= two_pi) return {-1.0, 1.0};
    // Shift so the lower endpoint lands in [0, 2*pi); the example arguments
    // stay below 10*pi, so the double-precision reduction is adequate here.
    const double k = std::floor(a.lo / two_pi);
    const double lo = a.lo - k * two_pi;
    const double hi = lo + (a.hi - a.lo);
    double smin = std::min(std::sin(a.lo), std::sin(a.hi));
    double smax = std::max(std::sin(a.lo), std::sin(a.hi));
    constexpr double half_pi = 0.5 * std::numbers::pi;
    for (int j = 0; j < 2; ++j) {
        const double peak = half_pi + j * two_pi;
        const double trough = 3.0 * half_pi + j * two_pi;
        if (lo <= peak && peak <= hi) smax = 1.0;
        if (lo <= trough && trough <= hi) smin = -1.0;
    }
    return {smin, smax};
}

Interval iv_intersect(const Interval& a, const Interval& b) {
    const double lo = std::max(a.lo, b.lo);
    const double hi = std::min(a.hi, b.hi);
    if (lo > hi) throw PreconditionError("intersection of disjoint intervals");
    return {lo, hi};
}

namespace {

std::size_t longest_edge(const Box& b) {
    std::size_t l = 0;
    double w = b.dims[0].width();
    for (std::size_t i = 1; i < b.dim(); ++i) {
        if (b.dims[i].width() > w) {
            w = b.dims[i].width();
            l = i;
        }
    }
    return l;
}

} // namespace

std::pair<Box, Box> bisect(const Box& b) {
    const std::size_t l = longest_edge(b);
    if (b.dims[l].width() <= 0.0)
        throw DegenerateBoxError("cannot bisect a box with no positive-width dimension");
    const double mid = b.dims[l].midpoint();
    Box lower = b;
    Box upper = b;
    lower.dims[l] = Interval(b.dims[l].lo, mid);
    upper.dims[l] = Interval(mid, b.dims[l].hi);
    return {std::move(lower), std::move(upper)};
}

namespace {

void subdivide_rec(const Box& b, int t, std::vector<Box>& out) {
    if (t == 0) {
        out.push_back(b);
        return;
    }
    auto [y1, y2] = bisect(b);
    subdivide_rec(y1, t - 1, out);
    subdivide_rec(y2, t - 1, out);
}

} // namespace

Subdivision subdivide(const Box& root, int t) {
    if (t < 0) throw PreconditionError("subdivide requires t >= 0");
    Subdivision s;
    s.t = t;
    s.boxes.reserve(std::size_t{1} << std::min(t, 30));
    subdivide_rec(root, t, s.boxes);
    return s;
}

double subdivision_length(const Subdivision& s) {
    double m = 0.0;
    for (const auto& b : s.boxes) m = std::max(m, b.diag_sq());
    return m;
}

std::vector<double> level_widths(const Box& root, int t) {
    std::vector<double> w(root.dim());
    for (std::size_t i = 0; i < root.dim(); ++i) w[i] = root.dims[i].width();
    for (int k = 0; k < t; ++k) {
        std::size_t l = 0;
        for (std::size_t i = 1; i < w.size(); ++i)
            if (w[i] > w[l]) l = i;
        w[l] *= 0.5;
    }
    return w;
}

} // namespace pcx
