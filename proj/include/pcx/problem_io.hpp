#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "pcx/algorithm.hpp"

namespace pcx {

/// Optional run settings carried by a problem file.
struct ProblemDefaults {
    std::optional<double> eps;
    std::optional<std::vector<double>> lambda;
    std::optional<int> t0;
};

struct LoadedProblem {
    Problem problem;
    ProblemDefaults defaults;
};

/// Loads and validates a problem file:
/// { "name": ..., "m": ..., "p": ...,
///   "objectives": ["expr", ...],
///   "box": {"lo": [...], "hi": [...]},
///   "defaults": {"eps": ..., "lambda": [...], "t0": ...} }   (optional)
LoadedProblem load_problem_file(const std::filesystem::path& path);

/// Shortest decimal digits that round-trip a double (17 significant digits).
std::string format_g17(double v);

void write_solutions_csv(const std::filesystem::path& path, const ParetoArchive& archive,
                         int m, int p);
std::vector<SolutionRecord> read_solutions_csv(const std::filesystem::path& path, int m, int p);

void write_boxes_csv(const std::filesystem::path& path,
                     const std::vector<ProcessedBox>& boxes, int m, int p);

void write_meta_json(const std::filesystem::path& path, const Problem& prob,
                     const RunConfig& config, const RunResult& result);

/// x_1..x_m,f_1..f_p rows of a grid sample (used for the oracle front).
void write_grid_csv(const std::filesystem::path& path, const GridSample& grid);

} // namespace pcx
