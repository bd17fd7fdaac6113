#include "pcx/algorithm.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <limits>
#include <mutex>
#include <sstream>
#include <thread>
#include <variant>

#include "pcx/errors.hpp"

namespace pcx {

void validate_problem(const Problem& prob) {
    if (prob.m < 1) throw PreconditionError("problem needs m >= 1");
    if (prob.p < 2) throw PreconditionError("problem needs p >= 2 objectives");
    if (static_cast<int>(prob.objectives.size()) != prob.p)
        throw PreconditionError("objective count does not match p");
    if (static_cast<int>(prob.box.dim()) != prob.m)
        throw PreconditionError("box dimension does not match m");
    for (const auto& d : prob.box.dims)
        if (!(d.lo < d.hi)) throw PreconditionError("box bounds require lo < hi per dimension");
    for (const Expr& f : prob.objectives) {
        if (f.dim() != prob.m) throw PreconditionError("objective dimension mismatch");
        (void)f.interval_eval(prob.box); // throws DomainError when invalid over the box
    }
}

int estimate_t_eps(double alpha_tilde, const Box& root, double eps) {
    if (alpha_tilde <= 0.0) throw PreconditionError("estimate_t_eps needs alpha_tilde > 0");
    if (eps <= 0.0) throw PreconditionError("estimate_t_eps needs eps > 0");
    std::vector<double> w(root.dim());
    for (std::size_t i = 0; i < root.dim(); ++i) w[i] = root.dims[i].width();
    constexpr int kMaxT = 400;
    for (int t = 0; t <= kMaxT; ++t) {
        double omega_sq = 0.0;
        for (const double wi : w) omega_sq += wi * wi;
        if (alpha_tilde * omega_sq <= eps) return t; // (a/8) w^2 <= eps/8
        std::size_t l = 0;
        for (std::size_t i = 1; i < w.size(); ++i)
            if (w[i] > w[l]) l = i;
        w[l] *= 0.5;
    }
    throw NumericalError("estimate_t_eps did not terminate within 400 levels");
}

namespace {

std::string describe_box(const Box& b) {
    std::ostringstream os;
    os << "[";
    for (std::size_t i = 0; i < b.dim(); ++i) {
        if (i) os << " x ";
        os << "[" << b.dims[i].lo << ", " << b.dims[i].hi << "]";
    }
    os << "]";
    return os.str();
}

struct WorkItem {
    Box box;
    int depth = 0;
};

struct SolvedBox {
    ProcessedBox meta;
    SolutionRecord record; // box_index assigned at merge time
    bool nonconverged_flagged = false;
    bool depth_capped = false;
};

struct SplitBox {
    Box lower, upper;
    int depth = 0;
};

using BoxOutcome = std::variant<SolvedBox, SplitBox>;

// Splits beyond this depth (relative to the seed) solve-and-flag instead of
// recursing further; unreachable for C^2 objectives on valid boxes.
constexpr int kHardDepthCap = 60;

class Driver {
public:
    Driver(const Problem& prob, const RunConfig& config)
        : prob_(prob), config_(config),
          lambda_(config.lambda ? *config.lambda : WeightVector::uniform(prob.p)) {
        if (static_cast<int>(lambda_.size()) != prob.p)
            throw PreconditionError("weight vector length does not match p");
        if (config.eps <= 0.0) throw PreconditionError("eps must be > 0");
        derivs_.reserve(prob.p);
        for (const Expr& f : prob.objectives) derivs_.emplace_back(f);
    }

    RunResult execute() {
        const auto t_start = std::chrono::steady_clock::now();
        RunResult out;
        out.profile = make_alpha_profile(prob_.objectives, prob_.box);
        profile_alpha_tilde_ = out.profile.alpha_tilde;
        out.t_eps = estimate_t_eps(out.profile.alpha_tilde, prob_.box, config_.eps);

        const int seed_target = std::min(out.t_eps, config_.max_seed_depth);
        out.t_eps_capped = out.t_eps > config_.max_seed_depth;
        const int user_t0 = config_.t0.value_or(0);
        out.t0_used = std::max(config_.t0 ? user_t0 : seed_target, seed_target);
        out.t0_clamped = config_.t0 && user_t0 < out.t0_used;
        if (out.t0_used > 24)
            throw PreconditionError("t0 = " + std::to_string(out.t0_used) +
                                    " would seed 2^t0 boxes; refusing beyond t0 = 24");

        std::vector<WorkItem> current;
        {
            Subdivision seed = subdivide(prob_.box, out.t0_used);
            current.reserve(seed.boxes.size());
            for (auto& b : seed.boxes) current.push_back({std::move(b), 0});
        }

        std::vector<SolutionRecord> records;
        while (!current.empty()) {
            std::vector<BoxOutcome> outcomes = process_round(current);
            std::vector<WorkItem> next;
            for (auto& oc : outcomes) {
                if (auto* solved = std::get_if<SolvedBox>(&oc)) {
                    solved->record.box_index =
                        static_cast<std::int64_t>(out.processed_boxes.size());
                    out.processed_boxes.push_back(std::move(solved->meta));
                    records.push_back(std::move(solved->record));
                    out.stats.boxes_solved++;
                    if (solved->nonconverged_flagged) out.stats.solver_nonconverged++;
                    if (solved->depth_capped) out.stats.depth_capped++;
                } else {
                    auto& split = std::get<SplitBox>(oc);
                    next.push_back({std::move(split.lower), split.depth});
                    next.push_back({std::move(split.upper), split.depth});
                    out.stats.boxes_split++;
                }
            }
            current = std::move(next);
        }

        out.solutions = filter_nondominated(std::move(records), Relation::weak());
        out.stats.wall_seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
        return out;
    }

private:
    std::vector<BoxOutcome> process_round(const std::vector<WorkItem>& items) {
        std::vector<BoxOutcome> outcomes(items.size());
        const int threads = std::max(1, config_.threads);
        if (threads == 1 || items.size() < 2) {
            for (std::size_t i = 0; i < items.size(); ++i)
                outcomes[i] = process_box(items[i]);
            return outcomes;
        }
        std::atomic<std::size_t> cursor{0};
        std::atomic<bool> failed{false};
        std::exception_ptr error;
        std::mutex error_mu;
        auto worker = [&] {
            for (;;) {
                const std::size_t i = cursor.fetch_add(1);
                if (i >= items.size() || failed.load(std::memory_order_relaxed)) return;
                try {
                    outcomes[i] = process_box(items[i]);
                } catch (...) {
                    {
                        std::lock_guard<std::mutex> lk(error_mu);
                        if (!error) error = std::current_exception();
                    }
                    failed.store(true, std::memory_order_relaxed);
                    return;
                }
            }
        };
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(threads));
        for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
        if (error) std::rethrow_exception(error);
        return outcomes;
    }

    BoxOutcome process_box(const WorkItem& item) const {
        try {
            return process_box_inner(item);
        } catch (const DomainError& e) {
            throw DomainError(std::string(e.what()) + " while processing box " +
                              describe_box(item.box));
        }
    }

    BoxOutcome process_box_inner(const WorkItem& item) const {
        const Box& box = item.box;
        const double omega = box.width();

        std::vector<double> alphas(prob_.p);
        std::vector<double> lips(prob_.p);
        double alpha_max = 0.0;
        for (int j = 0; j < prob_.p; ++j) {
            alphas[j] = derivs_[j].alpha(box);
            lips[j] = derivs_[j].lipschitz(box);
            alpha_max = std::max(alpha_max, alphas[j]);
        }
        const double l_tilde = width_threshold(lips, profile_alpha_tilde(), config_.eps);

        // Solve when the Lemma-grade width test passes, or when the per-box
        // relaxation gap is within the condition-(12) budget:
        // (alpha_max/8) omega^2 <= eps/8.
        const bool lemma_ok = omega <= l_tilde;
        const bool gap_ok = alpha_max * omega * omega <= config_.eps;
        const bool capped = item.depth >= kHardDepthCap;
        if (!(lemma_ok || gap_ok || capped)) {
            auto [lower, upper] = bisect(box);
            return SplitBox{std::move(lower), std::move(upper), item.depth + 1};
        }

        std::vector<RelaxedObjective> relaxed;
        relaxed.reserve(prob_.p);
        for (int j = 0; j < prob_.p; ++j)
            relaxed.emplace_back(prob_.objectives[j], derivs_[j].grad, box, alphas[j]);

        SolvedBox solved;
        solved.depth_capped = capped && !(lemma_ok || gap_ok);
        solved.meta = ProcessedBox{box, std::move(alphas), omega, l_tilde};

        std::vector<double> x;
        bool converged = false;
        try {
            SolveReport rep = solve_weighted_sum(relaxed, lambda_, box, config_.solver);
            x = std::move(rep.minimizer);
            converged = rep.converged;
        } catch (const NumericalError&) {
            x = box.midpoint();
            converged = false;
            solved.nonconverged_flagged = true;
        }
        if (!converged && !solved.nonconverged_flagged) solved.nonconverged_flagged = true;

        SolutionRecord rec;
        rec.fx.resize(prob_.p);
        for (int j = 0; j < prob_.p; ++j) rec.fx[j] = prob_.objectives[j].eval(x);
        rec.x = std::move(x);
        rec.converged = converged;
        solved.record = std::move(rec);
        return solved;
    }

    double profile_alpha_tilde() const { return profile_alpha_tilde_; }

    const Problem& prob_;
    const RunConfig& config_;
    WeightVector lambda_;
    std::vector<ObjectiveDerivatives> derivs_;
    double profile_alpha_tilde_ = 0.0;
};

} // namespace

RunResult run(const Problem& prob, const RunConfig& config) {
    validate_problem(prob);
    Driver driver(prob, config);
    return driver.execute();
}

GridSample grid_oracle(const Problem& prob, int resolution) {
    validate_problem(prob);
    if (resolution < 2) throw PreconditionError("grid resolution must be >= 2");
    const int m = prob.m;
    const int p = prob.p;

    GridSample out;
    out.m = m;
    out.p = p;

    std::vector<int> idx(static_cast<std::size_t>(m), 0);
    std::vector<double> x(static_cast<std::size_t>(m));
    std::vector<double> fx(static_cast<std::size_t>(p));
    double total = 1.0;
    for (int i = 0; i < m; ++i) total *= resolution;
    out.points.reserve(static_cast<std::size_t>(total) * m);
    out.values.reserve(static_cast<std::size_t>(total) * p);

    for (;;) {
        for (int i = 0; i < m; ++i) {
            const auto& d = prob.box.dims[static_cast<std::size_t>(i)];
            x[static_cast<std::size_t>(i)] =
                d.lo + (d.hi - d.lo) * (static_cast<double>(idx[static_cast<std::size_t>(i)]) /
                                        (resolution - 1));
        }
        bool ok = true;
        try {
            for (int j = 0; j < p; ++j)
                fx[static_cast<std::size_t>(j)] = prob.objectives[static_cast<std::size_t>(j)].eval(x);
        } catch (const DomainError&) {
            ok = false;
        }
        if (ok) {
            out.points.insert(out.points.end(), x.begin(), x.end());
            out.values.insert(out.values.end(), fx.begin(), fx.end());
            out.count++;
        } else {
            out.skipped++;
        }
        // odometer increment
        int i = m - 1;
        for (; i >= 0; --i) {
            if (++idx[static_cast<std::size_t>(i)] < resolution) break;
            idx[static_cast<std::size_t>(i)] = 0;
        }
        if (i < 0) break;
    }
    return out;
}

GridSample grid_front(const GridSample& grid) {
    std::vector<SolutionRecord> recs;
    recs.reserve(static_cast<std::size_t>(grid.count));
    for (std::int64_t r = 0; r < grid.count; ++r) {
        SolutionRecord rec;
        rec.x.assign(grid.points.begin() + r * grid.m, grid.points.begin() + (r + 1) * grid.m);
        rec.fx.assign(grid.values.begin() + r * grid.p, grid.values.begin() + (r + 1) * grid.p);
        rec.box_index = r;
        recs.push_back(std::move(rec));
    }
    ParetoArchive front = filter_nondominated(std::move(recs), Relation::weak());

    GridSample out;
    out.m = grid.m;
    out.p = grid.p;
    out.skipped = grid.skipped;
    out.count = static_cast<std::int64_t>(front.records.size());
    out.points.reserve(static_cast<std::size_t>(out.count) * grid.m);
    out.values.reserve(static_cast<std::size_t>(out.count) * grid.p);
    for (const auto& rec : front.records) {
        out.points.insert(out.points.end(), rec.x.begin(), rec.x.end());
        out.values.insert(out.values.end(), rec.fx.begin(), rec.fx.end());
    }
    return out;
}

CertifyReport certify_eps_efficient(const ParetoArchive& candidates, const GridSample& grid,
                                    double eps, std::span<const double> slack_per_objective) {
    if (!slack_per_objective.empty() &&
        static_cast<int>(slack_per_objective.size()) != grid.p)
        throw PreconditionError("certify: slack vector length must equal p");

    CertifyReport rep;
    rep.candidates = static_cast<std::int64_t>(candidates.records.size());
    rep.worst_margin = -std::numeric_limits<double>::infinity();

    const int p = grid.p;
    for (std::size_t c = 0; c < candidates.records.size(); ++c) {
        const auto& fx = candidates.records[c].fx;
        if (static_cast<int>(fx.size()) != p)
            throw PreconditionError("certify: candidate objective arity mismatch");
        double margin = -std::numeric_limits<double>::infinity();
        bool fails_slack = false;
        for (std::int64_t r = 0; r < grid.count; ++r) {
            const double* y = grid.values.data() + r * p;
            double row_min = std::numeric_limits<double>::infinity();
            bool beyond_slack = true;
            for (int j = 0; j < p; ++j) {
                const double gap = fx[static_cast<std::size_t>(j)] - y[j] - eps;
                row_min = std::min(row_min, gap);
                if (!slack_per_objective.empty() &&
                    gap <= slack_per_objective[static_cast<std::size_t>(j)])
                    beyond_slack = false;
            }
            margin = std::max(margin, row_min);
            if (row_min >= 0.0 && (slack_per_objective.empty() || beyond_slack))
                fails_slack = true;
        }
        rep.worst_margin = std::max(rep.worst_margin, margin);
        if (margin > 0.0) rep.violations++;
        if (fails_slack) {
            rep.failures++;
            rep.failing_rows.push_back(static_cast<std::int64_t>(c));
        }
    }
    return rep;
}

} // namespace pcx
