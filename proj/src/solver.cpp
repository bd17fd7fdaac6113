#include "pcx/solver.hpp"

#include <algorithm>
#include <cmath>

#include "pcx/errors.hpp"

namespace pcx {

WeightVector::WeightVector(std::vector<double> weights) : w(std::move(weights)) {
    if (w.empty()) throw PreconditionError("weight vector must be non-empty");
    double sum = 0.0;
    for (const double v : w) {
        if (!(v > 0.0)) throw PreconditionError("weights must be strictly positive");
        sum += v;
    }
    if (std::fabs(sum - 1.0) > 1e-12)
        throw PreconditionError("weights must sum to 1");
}

WeightVector WeightVector::uniform(int p) {
    if (p < 1) throw PreconditionError("weight vector needs p >= 1");
    std::vector<double> w(static_cast<std::size_t>(p), 1.0 / p);
    // nudge the last entry so the sum is exactly 1 in floating point
    double sum = 0.0;
    for (std::size_t i = 0; i + 1 < w.size(); ++i) sum += w[i];
    w.back() = 1.0 - sum;
    return WeightVector(std::move(w));
}

std::vector<double> project(std::span<const double> x, const Box& b) {
    if (x.size() != b.dim()) throw PreconditionError("project: dimension mismatch");
    std::vector<double> out(x.begin(), x.end());
    for (std::size_t i = 0; i < b.dim(); ++i)
        out[i] = std::clamp(out[i], b.dims[i].lo, b.dims[i].hi);
    return out;
}

namespace {

double weighted_value(std::span<const RelaxedObjective> relaxed, const WeightVector& lambda,
                      std::span<const double> x) {
    double g = 0.0;
    for (std::size_t j = 0; j < relaxed.size(); ++j) g += lambda[j] * relaxed[j].eval(x);
    return g;
}

void weighted_grad(std::span<const RelaxedObjective> relaxed, const WeightVector& lambda,
                   std::span<const double> x, std::span<double> out,
                   std::span<double> scratch) {
    std::fill(out.begin(), out.end(), 0.0);
    for (std::size_t j = 0; j < relaxed.size(); ++j) {
        relaxed[j].grad(x, scratch);
        for (std::size_t i = 0; i < out.size(); ++i) out[i] += lambda[j] * scratch[i];
    }
}

} // namespace

SolveReport solve_weighted_sum(std::span<const RelaxedObjective> relaxed,
                               const WeightVector& lambda, const Box& box,
                               const SolveOptions& opts) {
    if (relaxed.empty() || relaxed.size() != lambda.size())
        throw PreconditionError("solver needs one weight per relaxed objective");
    const std::size_t m = box.dim();
    for (const auto& r : relaxed)
        if (r.box.dims.size() != m)
            throw PreconditionError("relaxed objectives must share the solve box");

    std::vector<double> x = box.midpoint();
    std::vector<double> g(m), scratch(m), trial(m), residual(m);

    double fx = weighted_value(relaxed, lambda, x);
    if (!std::isfinite(fx)) throw NumericalError("non-finite objective at start point");
    if (opts.trace) opts.trace->push_back(fx);

    double step = 1.0;
    int iter = 0;
    double pg_norm = 0.0;

    for (; iter < opts.max_iter; ++iter) {
        weighted_grad(relaxed, lambda, x, g, scratch);
        for (const double v : g)
            if (!std::isfinite(v)) throw NumericalError("non-finite gradient");

        // unit-step projected gradient residual
        for (std::size_t i = 0; i < m; ++i) residual[i] = x[i] - g[i];
        auto proj = project(residual, box);
        pg_norm = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            const double d = x[i] - proj[i];
            pg_norm += d * d;
        }
        pg_norm = std::sqrt(pg_norm);
        if (pg_norm <= opts.tol) break;

        // Armijo backtracking along the projection arc
        double t = step;
        bool accepted = false;
        for (int bt = 0; bt < 80; ++bt) {
            for (std::size_t i = 0; i < m; ++i) trial[i] = x[i] - t * g[i];
            auto xt = project(trial, box);
            double dir_dot = 0.0;
            for (std::size_t i = 0; i < m; ++i) dir_dot += g[i] * (xt[i] - x[i]);
            const double ft = weighted_value(relaxed, lambda, xt);
            if (!std::isfinite(ft)) throw NumericalError("non-finite objective in line search");
            if (ft <= fx + opts.armijo_c * dir_dot) {
                x = std::move(xt);
                fx = ft;
                accepted = true;
                step = std::min((bt == 0) ? t * 2.0 : t, 1e12);
                break;
            }
            t *= opts.backtrack;
        }
        if (!accepted) break; // step underflow; report whatever residual we have
        if (opts.trace) opts.trace->push_back(fx);
    }

    SolveReport rep;
    rep.minimizer = std::move(x);
    rep.value = fx;
    rep.iterations = iter;
    rep.projected_gradient_norm = pg_norm;
    rep.converged = pg_norm <= opts.tol;
    return rep;
}

} // namespace pcx
