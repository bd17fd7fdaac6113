#include "pcx/problem_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "pcx/errors.hpp"

namespace pcx {

using nlohmann::json;

LoadedProblem load_problem_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw PreconditionError("cannot open problem file: " + path.string());
    json doc;
    try {
        in >> doc;
    } catch (const json::exception& e) {
        throw PreconditionError("problem file is not valid JSON: " + std::string(e.what()));
    }

    LoadedProblem out;
    try {
        out.problem.name = doc.at("name").get<std::string>();
        out.problem.m = doc.at("m").get<int>();
        out.problem.p = doc.at("p").get<int>();
        const auto exprs = doc.at("objectives").get<std::vector<std::string>>();
        for (const auto& text : exprs)
            out.problem.objectives.push_back(parse(text, out.problem.m));
        const auto lo = doc.at("box").at("lo").get<std::vector<double>>();
        const auto hi = doc.at("box").at("hi").get<std::vector<double>>();
        if (lo.size() != hi.size())
            throw PreconditionError("box lo/hi arrays must have equal length");
        std::vector<Interval> dims;
        dims.reserve(lo.size());
        for (std::size_t i = 0; i < lo.size(); ++i) dims.emplace_back(lo[i], hi[i]);
        out.problem.box = Box(std::move(dims));

        if (doc.contains("defaults")) {
            const auto& d = doc.at("defaults");
            if (d.contains("eps")) out.defaults.eps = d.at("eps").get<double>();
            if (d.contains("lambda"))
                out.defaults.lambda = d.at("lambda").get<std::vector<double>>();
            if (d.contains("t0")) out.defaults.t0 = d.at("t0").get<int>();
        }
    } catch (const json::exception& e) {
        throw PreconditionError("problem file schema error: " + std::string(e.what()));
    }
    validate_problem(out.problem);
    return out;
}

std::string format_g17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw PreconditionError("cannot open output file: " + path.string());
    return out;
}

void write_solution_header(std::ofstream& out, int m, int p) {
    out << "box_index";
    for (int i = 1; i <= m; ++i) out << ",x_" << i;
    for (int j = 1; j <= p; ++j) out << ",f_" << j;
    out << ",converged\n";
}

void write_solution_row(std::ofstream& out, const SolutionRecord& rec) {
    out << rec.box_index;
    for (const double v : rec.x) out << ',' << format_g17(v);
    for (const double v : rec.fx) out << ',' << format_g17(v);
    out << ',' << (rec.converged ? 1 : 0) << '\n';
}

} // namespace

void write_solutions_csv(const std::filesystem::path& path, const ParetoArchive& archive,
                         int m, int p) {
    auto out = open_out(path);
    write_solution_header(out, m, p);
    for (const auto& rec : archive.records) write_solution_row(out, rec);
}

std::vector<SolutionRecord> read_solutions_csv(const std::filesystem::path& path, int m, int p) {
    std::ifstream in(path);
    if (!in) throw PreconditionError("cannot open solutions file: " + path.string());
    std::string line;
    if (!std::getline(in, line))
        throw PreconditionError("solutions file is empty (missing header)");

    std::vector<SolutionRecord> records;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::istringstream row(line);
        std::string cell;
        std::vector<std::string> cells;
        while (std::getline(row, cell, ',')) cells.push_back(cell);
        if (static_cast<int>(cells.size()) != 1 + m + p + 1)
            throw PreconditionError("solutions file row " + std::to_string(lineno) +
                                    " has wrong column count");
        SolutionRecord rec;
        try {
            rec.box_index = std::stoll(cells[0]);
            for (int i = 0; i < m; ++i)
                rec.x.push_back(std::stod(cells[static_cast<std::size_t>(1 + i)]));
            for (int j = 0; j < p; ++j)
                rec.fx.push_back(std::stod(cells[static_cast<std::size_t>(1 + m + j)]));
            rec.converged = std::stoi(cells[static_cast<std::size_t>(1 + m + p)]) != 0;
        } catch (const std::exception&) {
            throw PreconditionError("solutions file row " + std::to_string(lineno) +
                                    " has a malformed value");
        }
        records.push_back(std::move(rec));
    }
    return records;
}

void write_boxes_csv(const std::filesystem::path& path,
                     const std::vector<ProcessedBox>& boxes, int m, int p) {
    auto out = open_out(path);
    out << "box_index";
    for (int i = 1; i <= m; ++i) out << ",lo_" << i;
    for (int i = 1; i <= m; ++i) out << ",hi_" << i;
    for (int j = 1; j <= p; ++j) out << ",alpha_" << j;
    out << ",width,L_tilde\n";
    for (std::size_t k = 0; k < boxes.size(); ++k) {
        const auto& b = boxes[k];
        out << k;
        for (const auto& d : b.box.dims) out << ',' << format_g17(d.lo);
        for (const auto& d : b.box.dims) out << ',' << format_g17(d.hi);
        for (const double a : b.alphas) out << ',' << format_g17(a);
        out << ',' << format_g17(b.width) << ',' << format_g17(b.l_tilde) << '\n';
    }
}

void write_meta_json(const std::filesystem::path& path, const Problem& prob,
                     const RunConfig& config, const RunResult& result) {
    json doc;
    doc["problem"] = {{"name", prob.name}, {"m", prob.m}, {"p", prob.p}};
    doc["eps"] = config.eps;
    std::vector<double> lambda =
        config.lambda ? config.lambda->w : WeightVector::uniform(prob.p).w;
    doc["lambda"] = lambda;
    doc["t_eps"] = result.t_eps;
    doc["t0_requested"] = config.t0 ? json(*config.t0) : json("auto");
    doc["t0_used"] = result.t0_used;
    doc["t0_clamped"] = result.t0_clamped;
    doc["t_eps_capped"] = result.t_eps_capped;
    doc["max_seed_depth"] = config.max_seed_depth;
    doc["alpha0"] = result.profile.alpha0;
    doc["alpha_tilde"] = result.profile.alpha_tilde;
    doc["threads"] = config.threads;
    doc["solver"] = {{"tol", config.solver.tol}, {"max_iter", config.solver.max_iter}};
    doc["stats"] = {{"boxes_solved", result.stats.boxes_solved},
                    {"boxes_split", result.stats.boxes_split},
                    {"solver_nonconverged", result.stats.solver_nonconverged},
                    {"depth_capped", result.stats.depth_capped},
                    {"wall_seconds", result.stats.wall_seconds}};
    doc["solutions"] = result.solutions.records.size();
    auto out = open_out(path);
    out << doc.dump(2) << '\n';
}

void write_grid_csv(const std::filesystem::path& path, const GridSample& grid) {
    auto out = open_out(path);
    for (int i = 1; i <= grid.m; ++i) out << (i == 1 ? "" : ",") << "x_" << i;
    for (int j = 1; j <= grid.p; ++j) out << ",f_" << j;
    out << '\n';
    for (std::int64_t r = 0; r < grid.count; ++r) {
        for (int i = 0; i < grid.m; ++i)
            out << (i == 0 ? "" : ",") << format_g17(grid.points[r * grid.m + i]);
        for (int j = 0; j < grid.p; ++j) out << ',' << format_g17(grid.values[r * grid.p + j]);
        out << '\n';
    }
}

} // namespace pcx
