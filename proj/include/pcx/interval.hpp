#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "pcx/errors.hpp"

namespace pcx {

/// A closed real interval [lo, hi]. Degenerate point intervals are legal.
/// Endpoints are computed with nearest rounding; the enclosures are not
/// outward-rounded (ulp-level looseness is accepted, see README).
struct Interval {
    double lo = 0.0;
    double hi = 0.0;

    Interval() = default;
    Interval(double lo_, double hi_) : lo(lo_), hi(hi_) {
        if (!(std::isfinite(lo) && std::isfinite(hi)))
            throw PreconditionError("interval endpoints must be finite");
        if (lo > hi)
            throw PreconditionError("interval requires lo <= hi");
    }
    static Interval point(double v) { return Interval(v, v); }

    double width() const { return hi - lo; }
    double midpoint() const { return 0.5 * (lo + hi); }
    bool contains(double v) const { return lo <= v && v <= hi; }
    bool contains_zero() const { return lo <= 0.0 && 0.0 <= hi; }
};

/// max(|lo|, |hi|)
inline double mag(const Interval& a) { return std::fmax(std::fabs(a.lo), std::fabs(a.hi)); }

Interval iv_add(const Interval& a, const Interval& b);
Interval iv_sub(const Interval& a, const Interval& b);
Interval iv_mul(const Interval& a, const Interval& b);
/// Throws DomainError when 0 is contained in b.
Interval iv_div(const Interval& a, const Interval& b);
Interval iv_neg(const Interval& a);
/// n >= 0. Even powers fold the sign: iv_pow([-2,1], 2) = [0,4].
Interval iv_pow(const Interval& a, int n);
Interval iv_exp(const Interval& a);
/// Throws DomainError when a.lo < 0.
Interval iv_sqrt(const Interval& a);
/// Exact range via quarter-period critical points; [-1,1] when width >= 2*pi.
Interval iv_sin(const Interval& a);
/// Intersection; both operands must overlap.
Interval iv_intersect(const Interval& a, const Interval& b);

/// An m-dimensional product of intervals.
struct Box {
    std::vector<Interval> dims;

    Box() = default;
    explicit Box(std::vector<Interval> d) : dims(std::move(d)) {
        if (dims.empty())
            throw PreconditionError("box needs at least one dimension");
    }

    std::size_t dim() const { return dims.size(); }

    /// Euclidean norm of the per-dimension widths: omega(Y) = ||b - a||.
    double width() const {
        double s = 0.0;
        for (const auto& d : dims) s += d.width() * d.width();
        return std::sqrt(s);
    }

    /// Squared diagonal ||b - a||^2.
    double diag_sq() const {
        double s = 0.0;
        for (const auto& d : dims) s += d.width() * d.width();
        return s;
    }

    double volume() const {
        double v = 1.0;
        for (const auto& d : dims) v *= d.width();
        return v;
    }

    std::vector<double> midpoint() const {
        std::vector<double> m(dims.size());
        for (std::size_t i = 0; i < dims.size(); ++i) m[i] = dims[i].midpoint();
        return m;
    }

    bool contains(std::span<const double> x) const {
        if (x.size() != dims.size()) return false;
        for (std::size_t i = 0; i < dims.size(); ++i)
            if (!dims[i].contains(x[i])) return false;
        return true;
    }
};

/// Splits the longest edge (lowest index on ties) at its midpoint and
/// returns (lower half, upper half). Throws DegenerateBoxError when every
/// dimension is a point.
std::pair<Box, Box> bisect(const Box& b);

/// The boxes produced by t recursive longest-edge bisections of one root.
struct Subdivision {
    int t = 0;
    std::vector<Box> boxes;
};

/// Recursive interval division: ID(X,0) = {X},
/// ID(X,t) = ID(Y1,t-1) u ID(Y2,t-1), listed depth-first (Y1 before Y2).
/// |boxes| = 2^t.
Subdivision subdivide(const Box& root, int t);

/// max over boxes of the squared diagonal.
double subdivision_length(const Subdivision& s);

/// Per-dimension widths shared by all boxes of ID(root, t). All boxes at a
/// level have the same shape, so the subdivision never has to be
/// materialized to reason about widths.
std::vector<double> level_widths(const Box& root, int t);

} // namespace pcx
