#pragma once

#include <span>
#include <vector>

#include "pcx/expr.hpp"
#include "pcx/interval.hpp"

namespace pcx {

/// Lower bound on the smallest eigenvalue of every symmetric matrix drawn
/// from the interval matrix H:
///   min_i ( H_ii.lo - sum_{j != i} max(|H_ij.lo|, |H_ij.hi|) ).
double gershgorin_lambda_min(const IntervalMatrix& h);

/// Convexification parameter alpha = max{0, -lambda_min bound} for f over b,
/// where the eigenvalue bound is Gershgorin applied to the interval Hessian.
double compute_alpha(const Expr& f, const Box& b);

/// One relaxed objective f^{k_t}: base(x) + (alpha/2) sum_i (a_i-x_i)(b_i-x_i).
/// alpha >= max{0, -gershgorin bound} makes it convex on box.
struct RelaxedObjective {
    Expr base;
    Box box;
    double alpha = 0.0;
    std::vector<Expr> base_grad; // symbolic partials of base, cached

    RelaxedObjective(Expr base_, Box box_, double alpha_);
    RelaxedObjective(Expr base_, std::vector<Expr> grad_, Box box_, double alpha_);

    /// Underestimator value at x; x must lie inside box.
    double eval(std::span<const double> x) const;

    /// Gradient: grad base(x) + (alpha/2)(2 x_i - a_i - b_i) per coordinate.
    void grad(std::span<const double> x, std::span<double> out) const;

private:
    void check_point(std::span<const double> x) const;
};

/// L >= sqrt(m) * max_i sup_{x in b} |df/dx_i|, via interval gradient
/// magnitudes, floored at 1e-12 so it is strictly positive.
double lipschitz_bound(const Expr& f, const Box& b);
/// Same bound from precomputed symbolic partials.
double lipschitz_bound(std::span<const Expr> grad, const Box& b);

/// Width threshold
///   min_j ( -4 L_j / alpha_tilde
///           + sqrt(2 eps / alpha_tilde + 16 L_j^2 / alpha_tilde^2) ),
/// the largest box width for which each relaxed objective's minimum stays
/// within eps/4 of the original objective over the box.
double width_threshold(std::span<const double> lipschitz, double alpha_tilde, double eps);

/// Root-box alphas per objective plus alpha_tilde = max alpha + 0.01.
struct AlphaProfile {
    std::vector<double> alpha0;
    double alpha_tilde = 0.0;
};

AlphaProfile make_alpha_profile(std::span<const Expr> objectives, const Box& root);

/// Symbolic first and second derivatives of one objective, prepared once and
/// evaluated per box by the driver.
struct ObjectiveDerivatives {
    Expr f;
    std::vector<Expr> grad;    // m entries
    std::vector<Expr> hessian; // m*m entries, row-major

    explicit ObjectiveDerivatives(const Expr& f_);

    IntervalMatrix interval_hessian(const Box& b) const;
    double alpha(const Box& b) const;
    double lipschitz(const Box& b) const;
};

} // namespace pcx
