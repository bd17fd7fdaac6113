#include "pcx/pareto.hpp"

#include <algorithm>

#include "pcx/errors.hpp"

namespace pcx {

bool dominates_weak(std::span<const double> u, std::span<const double> v) {
    if (u.size() != v.size()) throw PreconditionError("dominance: length mismatch");
    bool some_strict = false;
    for (std::size_t i = 0; i < u.size(); ++i) {
        if (u[i] > v[i]) return false;
        if (u[i] < v[i]) some_strict = true;
    }
    return some_strict;
}

bool dominates_strict(std::span<const double> u, std::span<const double> v) {
    if (u.size() != v.size()) throw PreconditionError("dominance: length mismatch");
    for (std::size_t i = 0; i < u.size(); ++i)
        if (!(u[i] < v[i])) return false;
    return true;
}

bool eps_dominates(std::span<const double> u, std::span<const double> v, double eps,
                   DomMode mode) {
    if (u.size() != v.size()) throw PreconditionError("dominance: length mismatch");
    if (eps < 0.0) throw PreconditionError("eps must be >= 0");
    if (mode == DomMode::Strict) {
        for (std::size_t i = 0; i < u.size(); ++i)
            if (!(u[i] + eps < v[i])) return false;
        return true;
    }
    bool some_strict = false;
    for (std::size_t i = 0; i < u.size(); ++i) {
        if (u[i] + eps > v[i]) return false;
        if (u[i] + eps < v[i]) some_strict = true;
    }
    return some_strict;
}

ParetoArchive filter_nondominated(std::vector<SolutionRecord> records, Relation relation) {
    // Incremental archive update. Dominance is transitive, so a record
    // dominated by a later-removed survivor is still dominated by whatever
    // removed that survivor; the final set equals the all-pairs filter.
    std::vector<SolutionRecord> front;
    front.reserve(records.size() / 4 + 1);
    for (auto& rec : records) {
        bool dominated = false;
        for (const auto& s : front) {
            if (relation.dominates(s.fx, rec.fx)) {
                dominated = true;
                break;
            }
        }
        if (dominated) continue;
        std::erase_if(front, [&](const SolutionRecord& s) {
            return relation.dominates(rec.fx, s.fx);
        });
        front.push_back(std::move(rec));
    }
    ParetoArchive archive;
    archive.records = std::move(front);
    archive.relation = relation;
    return archive;
}

} // namespace pcx
