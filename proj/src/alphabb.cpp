#include "pcx/alphabb.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "pcx/errors.hpp"

namespace pcx {

double gershgorin_lambda_min(const IntervalMatrix& h) {
    double out = std::numeric_limits<double>::infinity();
    for (int i = 0; i < h.n; ++i) {
        double row = h.at(i, i).lo;
        for (int j = 0; j < h.n; ++j) {
            if (j == i) continue;
            row -= mag(h.at(i, j));
        }
        out = std::min(out, row);
    }
    return out;
}

double compute_alpha(const Expr& f, const Box& b) {
    return std::max(0.0, -gershgorin_lambda_min(f.interval_hessian(b)));
}

RelaxedObjective::RelaxedObjective(Expr base_, Box box_, double alpha_)
    : base(std::move(base_)), box(std::move(box_)), alpha(alpha_) {
    if (alpha < 0.0) throw PreconditionError("relaxation alpha must be >= 0");
    base_grad.reserve(box.dim());
    for (int i = 1; i <= static_cast<int>(box.dim()); ++i) base_grad.push_back(base.diff(i));
}

RelaxedObjective::RelaxedObjective(Expr base_, std::vector<Expr> grad_, Box box_, double alpha_)
    : base(std::move(base_)), box(std::move(box_)), alpha(alpha_), base_grad(std::move(grad_)) {
    if (alpha < 0.0) throw PreconditionError("relaxation alpha must be >= 0");
    if (base_grad.size() != box.dim())
        throw PreconditionError("relaxation gradient arity mismatch");
}

void RelaxedObjective::check_point(std::span<const double> x) const {
    if (!box.contains(x))
        throw PreconditionError("relaxation evaluated outside its box");
}

double RelaxedObjective::eval(std::span<const double> x) const {
    check_point(x);
    double err = 0.0;
    for (std::size_t i = 0; i < box.dim(); ++i)
        err += (box.dims[i].lo - x[i]) * (box.dims[i].hi - x[i]);
    return base.eval(x) + 0.5 * alpha * err;
}

void RelaxedObjective::grad(std::span<const double> x, std::span<double> out) const {
    check_point(x);
    for (std::size_t i = 0; i < box.dim(); ++i) {
        const double base_di = base_grad[i].eval(x);
        out[i] = base_di + 0.5 * alpha * (2.0 * x[i] - box.dims[i].lo - box.dims[i].hi);
    }
}

namespace {
constexpr double kLipschitzFloor = 1e-12;
}

double lipschitz_bound(std::span<const Expr> grad, const Box& b) {
    double worst = 0.0;
    for (const Expr& g : grad) worst = std::max(worst, mag(g.interval_eval(b)));
    const double l = std::sqrt(static_cast<double>(b.dim())) * worst;
    return std::max(l, kLipschitzFloor);
}

double lipschitz_bound(const Expr& f, const Box& b) {
    std::vector<Expr> grad;
    grad.reserve(b.dim());
    for (int i = 1; i <= static_cast<int>(b.dim()); ++i) grad.push_back(f.diff(i));
    return lipschitz_bound(grad, b);
}

double width_threshold(std::span<const double> lipschitz, double alpha_tilde, double eps) {
    if (alpha_tilde <= 0.0) throw PreconditionError("width_threshold needs alpha_tilde > 0");
    if (eps <= 0.0) throw PreconditionError("width_threshold needs eps > 0");
    double out = std::numeric_limits<double>::infinity();
    for (const double l : lipschitz) {
        if (l <= 0.0) throw PreconditionError("width_threshold needs L > 0");
        const double r = 4.0 * l / alpha_tilde;
        const double term = -r + std::sqrt(2.0 * eps / alpha_tilde + r * r);
        out = std::min(out, term);
    }
    return out;
}

AlphaProfile make_alpha_profile(std::span<const Expr> objectives, const Box& root) {
    AlphaProfile p;
    p.alpha0.reserve(objectives.size());
    double worst = 0.0;
    for (const Expr& f : objectives) {
        const double a = compute_alpha(f, root);
        p.alpha0.push_back(a);
        worst = std::max(worst, a);
    }
    p.alpha_tilde = worst + 0.01;
    return p;
}

ObjectiveDerivatives::ObjectiveDerivatives(const Expr& f_) : f(f_) {
    const int m = f.dim();
    grad.reserve(m);
    for (int i = 1; i <= m; ++i) grad.push_back(f.diff(i));
    hessian.resize(static_cast<std::size_t>(m) * m);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
            hessian[static_cast<std::size_t>(i) * m + j] = grad[i].diff(j + 1);
}

IntervalMatrix ObjectiveDerivatives::interval_hessian(const Box& b) const {
    const int m = f.dim();
    IntervalMatrix h(m);
    for (int i = 0; i < m; ++i) {
        for (int j = i; j < m; ++j) {
            Interval hij = hessian[static_cast<std::size_t>(i) * m + j].interval_eval(b);
            if (j > i) {
                const Interval hji = hessian[static_cast<std::size_t>(j) * m + i].interval_eval(b);
                hij = iv_intersect(hij, hji);
            }
            h.at(i, j) = hij;
            h.at(j, i) = hij;
        }
    }
    return h;
}

double ObjectiveDerivatives::alpha(const Box& b) const {
    return std::max(0.0, -gershgorin_lambda_min(interval_hessian(b)));
}

double ObjectiveDerivatives::lipschitz(const Box& b) const {
    return lipschitz_bound(grad, b);
}

} // namespace pcx
