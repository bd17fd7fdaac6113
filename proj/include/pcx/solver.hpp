#pragma once

#include <span>
#include <vector>

#include "pcx/alphabb.hpp"
#include "pcx/interval.hpp"

namespace pcx {

/// Strictly positive weights summing to 1 (tolerance 1e-12).
struct WeightVector {
    std::vector<double> w;

    explicit WeightVector(std::vector<double> weights);

    std::size_t size() const { return w.size(); }
    double operator[](std::size_t i) const { return w[i]; }

    static WeightVector uniform(int p);
};

struct SolveOptions {
    double tol = 1e-8;
    int max_iter = 10000;
    double armijo_c = 1e-4;
    double backtrack = 0.5;
    /// When set, accepted objective values are appended (used by tests to
    /// check monotone descent).
    std::vector<double>* trace = nullptr;
};

struct SolveReport {
    std::vector<double> minimizer;
    double value = 0.0;
    int iterations = 0;
    bool converged = false;
    double projected_gradient_norm = 0.0;
};

/// Componentwise clamp of x onto the box. Idempotent.
std::vector<double> project(std::span<const double> x, const Box& b);

/// Minimizes sum_j lambda_j * relaxed_j(x) over the box by projected
/// gradient descent with Armijo backtracking, starting from the box
/// midpoint. Convergence criterion: ||x - proj(x - grad g(x))|| <= tol.
/// Throws NumericalError when the objective turns non-finite.
SolveReport solve_weighted_sum(std::span<const RelaxedObjective> relaxed,
                               const WeightVector& lambda, const Box& box,
                               const SolveOptions& opts = {});

} // namespace pcx
