#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "pcx/algorithm.hpp"
#include "pcx/problem_io.hpp"

namespace fs = std::filesystem;

namespace {

// exit codes: 0 ok, 1 parse/validation, 2 runtime domain error, 3 verify failures
constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitDomain = 2;
constexpr int kExitViolations = 3;

std::vector<double> parse_lambda(const std::string& text) {
    std::vector<double> out;
    std::size_t start = 0;
    while (start <= text.size()) {
        const std::size_t comma = text.find(',', start);
        const std::string cell =
            text.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
        try {
            std::size_t used = 0;
            const double v = std::stod(cell, &used);
            if (used != cell.size()) throw std::invalid_argument(cell);
            out.push_back(v);
        } catch (const std::exception&) {
            throw pcx::PreconditionError("bad --lambda entry '" + cell + "'");
        }
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return out;
}

pcx::WeightVector make_lambda(const std::vector<double>& raw) {
    double sum = 0.0;
    for (const double v : raw) {
        if (!(v > 0.0)) throw pcx::PreconditionError("lambda weights must be > 0");
        sum += v;
    }
    if (std::fabs(sum - 1.0) > 1e-9)
        throw pcx::PreconditionError("lambda weights must sum to 1 (within 1e-9)");
    std::vector<double> w = raw;
    for (double& v : w) v /= sum; // exact unit sum for the solver contract
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < w.size(); ++i) acc += w[i];
    w.back() = 1.0 - acc;
    return pcx::WeightVector(std::move(w));
}

int resolve_threads(int flag_value) {
    if (flag_value > 0) return flag_value;
    if (const char* env = std::getenv("PCX_THREADS")) {
        try {
            const int v = std::stoi(env);
            if (v > 0) return v;
        } catch (const std::exception&) {
        }
        std::cerr << "warning: ignoring unparsable PCX_THREADS='" << env << "'\n";
    }
    return 1;
}

int cmd_solve(const std::string& problem_path, std::optional<double> eps,
              const std::string& lambda_text, std::optional<int> t0,
              const std::string& out_dir, int threads_flag, int max_seed) {
    auto loaded = pcx::load_problem_file(problem_path);
    const auto& prob = loaded.problem;

    pcx::RunConfig config;
    config.eps = eps ? *eps : loaded.defaults.eps.value_or(0.02);
    if (!lambda_text.empty())
        config.lambda = make_lambda(parse_lambda(lambda_text));
    else if (loaded.defaults.lambda)
        config.lambda = make_lambda(*loaded.defaults.lambda);
    if (t0)
        config.t0 = *t0;
    else if (loaded.defaults.t0)
        config.t0 = *loaded.defaults.t0;
    config.threads = resolve_threads(threads_flag);
    config.max_seed_depth = max_seed;

    if (config.lambda && static_cast<int>(config.lambda->size()) != prob.p)
        throw pcx::PreconditionError("lambda length must equal the number of objectives");

    pcx::RunResult result = pcx::run(prob, config);

    fs::create_directories(out_dir);
    pcx::write_solutions_csv(fs::path(out_dir) / "solutions.csv", result.solutions, prob.m,
                             prob.p);
    pcx::write_boxes_csv(fs::path(out_dir) / "boxes.csv", result.processed_boxes, prob.m,
                         prob.p);
    pcx::write_meta_json(fs::path(out_dir) / "meta.json", prob, config, result);

    std::cout << prob.name << ": " << result.solutions.records.size() << " solutions from "
              << result.processed_boxes.size() << " boxes (t_eps = " << result.t_eps
              << ", t0 = " << result.t0_used;
    if (result.t0_clamped) std::cout << ", clamped";
    std::cout << ", " << result.stats.wall_seconds << " s)\n";
    return kExitOk;
}

int cmd_oracle(const std::string& problem_path, int resolution, double eps,
               const std::string& out_file) {
    if (eps < 0.0) throw pcx::PreconditionError("--eps must be >= 0");
    auto loaded = pcx::load_problem_file(problem_path);
    pcx::GridSample grid = pcx::grid_oracle(loaded.problem, resolution);
    pcx::GridSample front = pcx::grid_front(grid);
    pcx::write_grid_csv(out_file, front);
    std::cout << loaded.problem.name << ": " << front.count << " nondominated grid points of "
              << grid.count << " sampled";
    if (grid.skipped) std::cout << " (" << grid.skipped << " skipped)";
    std::cout << '\n';
    return kExitOk;
}

int cmd_verify(const std::string& solutions_path, const std::string& problem_path,
               int resolution, double eps) {
    auto loaded = pcx::load_problem_file(problem_path);
    const auto& prob = loaded.problem;
    auto records = pcx::read_solutions_csv(solutions_path, prob.m, prob.p);
    if (records.empty()) {
        std::cout << "warning: no candidate rows; vacuously certified\n";
        return kExitOk;
    }
    pcx::ParetoArchive candidates;
    candidates.records = std::move(records);
    candidates.relation = pcx::Relation::weak();

    pcx::GridSample grid = pcx::grid_oracle(prob, resolution);

    // slack: 2 x grid spacing x per-objective Lipschitz estimate
    double spacing = 0.0;
    for (const auto& d : prob.box.dims)
        spacing = std::max(spacing, d.width() / (resolution - 1));
    std::vector<double> slack(static_cast<std::size_t>(prob.p));
    for (int j = 0; j < prob.p; ++j)
        slack[static_cast<std::size_t>(j)] =
            2.0 * spacing * pcx::lipschitz_bound(prob.objectives[static_cast<std::size_t>(j)],
                                                 prob.box);

    pcx::CertifyReport rep = pcx::certify_eps_efficient(candidates, grid, eps, slack);
    std::cout << "candidates: " << rep.candidates << ", grid points: " << grid.count
              << ", eps = " << eps << "\n";
    std::cout << "violations: " << rep.violations << " (failures beyond slack: " << rep.failures
              << "), worst margin: " << rep.worst_margin << "\n";
    if (rep.failures > 0) {
        std::cout << "failing rows:";
        for (const auto r : rep.failing_rows) std::cout << ' ' << r;
        std::cout << '\n';
        return kExitViolations;
    }
    return kExitOk;
}

int cmd_front(const std::string& solutions_path, const std::string& out_file) {
    std::ifstream probe(solutions_path);
    if (!probe) throw pcx::PreconditionError("cannot open " + solutions_path);
    std::string header;
    std::getline(probe, header);
    probe.close();
    // column counts from the header: box_index,x_1..x_m,f_1..f_p,converged
    int m = 0, p = 0;
    {
        std::istringstream hs(header);
        std::string cell;
        while (std::getline(hs, cell, ',')) {
            if (cell.rfind("x_", 0) == 0) ++m;
            if (cell.rfind("f_", 0) == 0) ++p;
        }
    }
    if (m == 0 || p == 0)
        throw pcx::PreconditionError("unrecognized solutions header: " + header);
    auto records = pcx::read_solutions_csv(solutions_path, m, p);
    pcx::ParetoArchive front = pcx::filter_nondominated(std::move(records), pcx::Relation::weak());
    pcx::write_solutions_csv(out_file, front, m, p);
    std::cout << front.records.size() << " nondominated rows -> " << out_file << '\n';
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"piecewise convexification solver for box-constrained multi-objective problems"};
    app.require_subcommand(1);

    std::string problem_path, solutions_path;
    std::string lambda_text;
    std::string out_dir = ".";
    std::string out_file;
    std::optional<double> eps_opt;
    std::optional<int> t0_opt;
    int threads = 0;
    int max_seed = 12;
    int resolution = 100;
    double eps_value = 0.02;

    auto* solve = app.add_subcommand("solve", "run the solver on a problem file");
    solve->add_option("problem", problem_path, "problem JSON file")->required();
    solve->add_option("--eps", eps_opt, "epsilon (default: file default or 0.02)");
    solve->add_option("--lambda", lambda_text, "comma-separated weights summing to 1");
    solve->add_option("--t0", t0_opt, "initial subdivision depth");
    solve->add_option("--out-dir", out_dir, "output directory (default .)");
    solve->add_option("--threads", threads, "worker threads (default PCX_THREADS or 1)");
    solve->add_option("--max-seed", max_seed, "seeding-depth cap for the t0 >= t_eps clamp");

    auto* oracle = app.add_subcommand("oracle", "write the grid-sampled reference front");
    oracle->add_option("problem", problem_path, "problem JSON file")->required();
    oracle->add_option("--resolution", resolution, "grid points per dimension")->required();
    oracle->add_option("--eps", eps_value, "recorded epsilon (not used by the front)");
    oracle->add_option("--out", out_file, "output CSV (default oracle_front.csv)");

    auto* verify = app.add_subcommand("verify", "check solutions for eps-efficiency on a grid");
    verify->add_option("solutions", solutions_path, "solutions.csv from solve")->required();
    verify->add_option("problem", problem_path, "problem JSON file")->required();
    verify->add_option("--resolution", resolution, "grid points per dimension")->required();
    verify->add_option("--eps", eps_value, "epsilon for the dominance test");

    auto* front = app.add_subcommand("front", "filter a solutions CSV to its nondominated rows");
    front->add_option("solutions", solutions_path, "solutions.csv")->required();
    front->add_option("--out", out_file, "output CSV (default front.csv)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e); // --help
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (solve->parsed())
            return cmd_solve(problem_path, eps_opt, lambda_text, t0_opt, out_dir, threads,
                             max_seed);
        if (oracle->parsed())
            return cmd_oracle(problem_path, resolution, eps_value,
                              out_file.empty() ? "oracle_front.csv" : out_file);
        if (verify->parsed())
            return cmd_verify(solutions_path, problem_path, resolution, eps_value);
        if (front->parsed())
            return cmd_front(solutions_path, out_file.empty() ? "front.csv" : out_file);
    } catch (const pcx::DomainError& e) {
        std::cerr << "domain error: " << e.what() << '\n';
        return kExitDomain;
    } catch (const pcx::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    }
    return kExitUsage;
}
