#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pcx/alphabb.hpp"
#include "pcx/expr.hpp"
#include "pcx/interval.hpp"
#include "pcx/pareto.hpp"
#include "pcx/solver.hpp"

namespace pcx {

/// A box-constrained multi-objective minimization problem.
struct Problem {
    std::string name;
    int m = 0;
    int p = 0;
    std::vector<Expr> objectives;
    Box box;
};

/// Validates dimensions and that every objective interval-evaluates over the
/// box. Throws on violation.
void validate_problem(const Problem& prob);

struct RunConfig {
    double eps = 0.02;
    std::optional<WeightVector> lambda; // default: uniform 1/p
    std::optional<int> t0;              // unset = start from t_eps (capped)
    /// Seeding-depth ceiling for the t0 >= t_eps clamp. Interval Hessians can
    /// make t_eps astronomically large on spiky objectives; the honest t_eps
    /// is still computed and reported, but seeding never exceeds this depth.
    int max_seed_depth = 12;
    int threads = 1;
    SolveOptions solver;
};

/// One box on which a weighted-sum subproblem was solved, with the
/// per-objective alphas and the Eq.-style width threshold that were in
/// effect.
struct ProcessedBox {
    Box box;
    std::vector<double> alphas;
    double width = 0.0;
    double l_tilde = 0.0;
};

struct RunStats {
    std::int64_t boxes_solved = 0;
    std::int64_t boxes_split = 0;
    std::int64_t solver_nonconverged = 0;
    std::int64_t depth_capped = 0;
    double wall_seconds = 0.0;
};

struct RunResult {
    ParetoArchive solutions;                // dominance-filtered archive
    std::vector<ProcessedBox> processed_boxes; // tiles the root box
    int t_eps = 0;
    int t0_used = 0;
    bool t0_clamped = false;   // user t0 was raised to meet t_eps
    bool t_eps_capped = false; // t_eps exceeded max_seed_depth
    AlphaProfile profile;
    RunStats stats;
};

/// Smallest t such that every box of subdivide(root, t) satisfies
/// (alpha_tilde/8) * omega^2 <= eps/8. Computed from the shared per-level
/// edge widths; the subdivision is never materialized.
int estimate_t_eps(double alpha_tilde, const Box& root, double eps);

/// The piecewise convexification driver. Deterministic: identical inputs
/// produce identical results for any thread count.
RunResult run(const Problem& prob, const RunConfig& config);

/// Uniform grid samples of the objectives, corners included.
struct GridSample {
    int m = 0;
    int p = 0;
    std::int64_t count = 0;   // rows kept
    std::int64_t skipped = 0; // rows dropped due to DomainError
    std::vector<double> points; // count*m, row-major
    std::vector<double> values; // count*p, row-major
};

GridSample grid_oracle(const Problem& prob, int resolution);

/// Grid rows that are ⪯-nondominated within the sample (reference front).
GridSample grid_front(const GridSample& grid);

/// Result of checking candidates against the grid: a candidate x is violated
/// when some grid point y has f(y) + eps*e ⪯ f(x). The margin of x is
/// max_y min_i (f_i(x) - f_i(y) - eps); positive means violated. A violation
/// counts as a failure only when every objective gap also exceeds its slack.
struct CertifyReport {
    std::int64_t candidates = 0;
    std::int64_t violations = 0;
    std::int64_t failures = 0;
    double worst_margin = 0.0; // over candidates; -inf when no candidates
    std::vector<std::int64_t> failing_rows;
};

CertifyReport certify_eps_efficient(const ParetoArchive& candidates, const GridSample& grid,
                                    double eps, std::span<const double> slack_per_objective);

} // namespace pcx
