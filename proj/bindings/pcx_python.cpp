#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "pcx/algorithm.hpp"
#include "pcx/problem_io.hpp"

namespace py = pybind11;

namespace {

pcx::Box box_from_bounds(const std::vector<double>& lo, const std::vector<double>& hi) {
    if (lo.size() != hi.size())
        throw pcx::PreconditionError("lo/hi must have equal length");
    std::vector<pcx::Interval> dims;
    dims.reserve(lo.size());
    for (std::size_t i = 0; i < lo.size(); ++i) dims.emplace_back(lo[i], hi[i]);
    return pcx::Box(std::move(dims));
}

pcx::Problem make_problem(const std::string& name, int m,
                          const std::vector<std::string>& objectives,
                          const std::vector<double>& lo, const std::vector<double>& hi) {
    pcx::Problem prob;
    prob.name = name;
    prob.m = m;
    prob.p = static_cast<int>(objectives.size());
    for (const auto& text : objectives) prob.objectives.push_back(pcx::parse(text, m));
    prob.box = box_from_bounds(lo, hi);
    pcx::validate_problem(prob);
    return prob;
}

py::dict result_to_dict(const pcx::RunResult& result) {
    py::dict out;
    py::list sols;
    for (const auto& rec : result.solutions.records) {
        py::dict r;
        r["x"] = rec.x;
        r["fx"] = rec.fx;
        r["box_index"] = rec.box_index;
        r["converged"] = rec.converged;
        sols.append(r);
    }
    out["solutions"] = sols;
    out["t_eps"] = result.t_eps;
    out["t0_used"] = result.t0_used;
    out["t0_clamped"] = result.t0_clamped;
    out["alpha_tilde"] = result.profile.alpha_tilde;
    out["alpha0"] = result.profile.alpha0;
    out["boxes_solved"] = result.stats.boxes_solved;
    out["boxes_split"] = result.stats.boxes_split;
    out["wall_seconds"] = result.stats.wall_seconds;
    return out;
}

} // namespace

PYBIND11_MODULE(pcxpy, m) {
    m.doc() = "piecewise convexification solver for box-constrained multi-objective problems";

    py::register_exception<pcx::DomainError>(m, "DomainError");
    py::register_exception<pcx::ParseError>(m, "ParseError");

    py::class_<pcx::Interval>(m, "Interval")
        .def(py::init<double, double>(), py::arg("lo"), py::arg("hi"))
        .def_readonly("lo", &pcx::Interval::lo)
        .def_readonly("hi", &pcx::Interval::hi)
        .def("width", &pcx::Interval::width)
        .def("__repr__", [](const pcx::Interval& a) {
            return "Interval(" + std::to_string(a.lo) + ", " + std::to_string(a.hi) + ")";
        });

    py::class_<pcx::Box>(m, "Box")
        .def(py::init(&box_from_bounds), py::arg("lo"), py::arg("hi"))
        .def_property_readonly("dim", &pcx::Box::dim)
        .def("width", &pcx::Box::width)
        .def("midpoint", &pcx::Box::midpoint);

    py::class_<pcx::Expr>(m, "Expr")
        .def_property_readonly("dim", &pcx::Expr::dim)
        .def("eval",
             [](const pcx::Expr& e, const std::vector<double>& x) { return e.eval(x); })
        .def("diff", &pcx::Expr::diff, py::arg("i"))
        .def("interval_eval",
             [](const pcx::Expr& e, const pcx::Box& b) {
                 const auto r = e.interval_eval(b);
                 return py::make_tuple(r.lo, r.hi);
             })
        .def("__repr__", &pcx::Expr::to_string);

    m.def("parse", &pcx::parse, py::arg("text"), py::arg("m"),
          "parse an expression over x1..xm");

    m.def("iv_add", &pcx::iv_add);
    m.def("iv_mul", &pcx::iv_mul);
    m.def("iv_sin", &pcx::iv_sin);

    m.def("compute_alpha", &pcx::compute_alpha, py::arg("f"), py::arg("box"));
    m.def(
        "width_threshold",
        [](const std::vector<double>& lipschitz, double alpha_tilde, double eps) {
            return pcx::width_threshold(lipschitz, alpha_tilde, eps);
        },
        py::arg("lipschitz"), py::arg("alpha_tilde"), py::arg("eps"));
    m.def("estimate_t_eps", &pcx::estimate_t_eps, py::arg("alpha_tilde"), py::arg("root"),
          py::arg("eps"));

    m.def("dominates_weak", [](const std::vector<double>& u, const std::vector<double>& v) {
        return pcx::dominates_weak(u, v);
    });
    m.def("dominates_strict", [](const std::vector<double>& u, const std::vector<double>& v) {
        return pcx::dominates_strict(u, v);
    });
    m.def(
        "filter_nondominated",
        [](const std::vector<std::vector<double>>& fxs) {
            std::vector<pcx::SolutionRecord> recs;
            for (std::size_t i = 0; i < fxs.size(); ++i) {
                pcx::SolutionRecord r;
                r.fx = fxs[i];
                r.box_index = static_cast<std::int64_t>(i);
                recs.push_back(std::move(r));
            }
            auto archive = pcx::filter_nondominated(std::move(recs), pcx::Relation::weak());
            std::vector<std::size_t> kept;
            for (const auto& r : archive.records)
                kept.push_back(static_cast<std::size_t>(r.box_index));
            return kept;
        },
        "indices of the ⪯-nondominated vectors, in input order");

    py::class_<pcx::Problem>(m, "Problem")
        .def(py::init(&make_problem), py::arg("name"), py::arg("m"), py::arg("objectives"),
             py::arg("lo"), py::arg("hi"))
        .def_readonly("name", &pcx::Problem::name)
        .def_readonly("m", &pcx::Problem::m)
        .def_readonly("p", &pcx::Problem::p);

    m.def(
        "load_problem",
        [](const std::string& path) { return pcx::load_problem_file(path).problem; },
        py::arg("path"));

    m.def(
        "solve",
        [](const pcx::Problem& prob, double eps, std::optional<std::vector<double>> lambda,
           std::optional<int> t0, int threads, int max_seed_depth) {
            pcx::RunConfig config;
            config.eps = eps;
            if (lambda) config.lambda = pcx::WeightVector(*lambda);
            config.t0 = t0;
            config.threads = threads;
            config.max_seed_depth = max_seed_depth;
            return result_to_dict(pcx::run(prob, config));
        },
        py::arg("problem"), py::arg("eps") = 0.02, py::arg("lambda") = py::none(),
        py::arg("t0") = py::none(), py::arg("threads") = 1, py::arg("max_seed_depth") = 12);

    m.def(
        "grid_front",
        [](const pcx::Problem& prob, int resolution) {
            const auto front = pcx::grid_front(pcx::grid_oracle(prob, resolution));
            py::dict out;
            out["points"] = front.points;
            out["values"] = front.values;
            out["count"] = front.count;
            return out;
        },
        py::arg("problem"), py::arg("resolution"));
}
