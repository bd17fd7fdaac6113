#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace pcx {

/// u weakly dominates v: u_i <= v_i for all i and u != v.
bool dominates_weak(std::span<const double> u, std::span<const double> v);

/// u strictly dominates v: u_i < v_i for all i.
bool dominates_strict(std::span<const double> u, std::span<const double> v);

enum class DomMode { Strict, Weak };

/// u + eps*e dominates v under the given mode; eps = 0 reduces to the plain
/// relations.
bool eps_dominates(std::span<const double> u, std::span<const double> v, double eps,
                   DomMode mode);

/// Dominance relation used by an archive filter.
struct Relation {
    DomMode mode = DomMode::Weak;
    double eps = 0.0;

    static Relation weak() { return {DomMode::Weak, 0.0}; }
    static Relation strict() { return {DomMode::Strict, 0.0}; }
    static Relation eps_weak(double e) { return {DomMode::Weak, e}; }
    static Relation eps_strict(double e) { return {DomMode::Strict, e}; }

    bool dominates(std::span<const double> u, std::span<const double> v) const {
        return eps_dominates(u, v, eps, mode);
    }
};

/// One candidate solution: the point, its objective vector (always the
/// original objectives, never the relaxation), the index of the processed
/// box it came from, and the subsolver convergence flag.
struct SolutionRecord {
    std::vector<double> x;
    std::vector<double> fx;
    std::int64_t box_index = -1;
    bool converged = true;
};

/// Records surviving dominance filtering; no member is dominated by another
/// under `relation`. Input order is preserved among survivors.
struct ParetoArchive {
    std::vector<SolutionRecord> records;
    Relation relation;
};

/// Keeps exactly the records not dominated by any other record. Records with
/// equal objective vectors are all kept (neither weakly dominates the other).
ParetoArchive filter_nondominated(std::vector<SolutionRecord> records, Relation relation);

} // namespace pcx
