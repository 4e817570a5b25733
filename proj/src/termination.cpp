#include "snnprob/termination.hpp"

#include <cmath>
#include <stdexcept>

namespace snnprob {

Strategy strategy_from_name(const std::string& name) {
    if (name == "det") return Strategy::Det;
    if (name == "scan") return Strategy::Scan;
    if (name == "bs") return Strategy::BinarySearch;
    if (name == "ri") return Strategy::RandomIndex;
    if (name == "tr") return Strategy::Transform;
    if (name == "pwl") return Strategy::Pwl;
    throw std::invalid_argument("unknown strategy '" + name +
                                "' (expected det|scan|bs|ri|tr|pwl)");
}

const char* strategy_name(Strategy s) {
    switch (s) {
        case Strategy::Det: return "det";
        case Strategy::Scan: return "scan";
        case Strategy::BinarySearch: return "bs";
        case Strategy::RandomIndex: return "ri";
        case Strategy::Transform: return "tr";
        case Strategy::Pwl: return "pwl";
    }
    return "?";
}

double draw_r(const SortedSynapseList& list, Pcg32& rng) {
    return rng.next_double() * std::fabs(list.w_extreme);
}

TerminationResult termpt_scan(const SortedSynapseList& list, double r) {
    TerminationResult result;
    result.applied_weight = list.w_extreme;
    const std::uint32_t n = list.n_max();
    std::uint32_t t = 0;
    while (t < n && std::fabs(list.weights[t]) >= r) ++t;
    result.termpt = t;
    // The comparison that fails is a read too; at t == n there is none left.
    result.sequential_weight_reads = std::min(t + 1u, n);
    return result;
}

TerminationResult termpt_binary_search(const SortedSynapseList& list, double r) {
    TerminationResult result;
    result.applied_weight = list.w_extreme;
    // Invariant: positions <= lo satisfy |w| >= r, positions > hi do not.
    std::uint32_t lo = 0, hi = list.n_max();
    while (lo < hi) {
        std::uint32_t mid = lo + (hi - lo + 1u) / 2u;
        result.add_probe(mid);
        if (std::fabs(list.weights[mid - 1u]) >= r) {
            lo = mid;
        } else {
            hi = mid - 1u;
        }
    }
    result.termpt = lo;
    return result;
}

TerminationResult termpt_random_index(const SortedSynapseList& list, Pcg32& rng) {
    TerminationResult result;
    result.applied_weight = list.w_extreme;
    result.termpt = rng.next_below(list.n_max() + 1u);
    return result;
}

TerminationResult termpt_transform_at(const SortedSynapseList& list, std::uint32_t x) {
    TerminationResult result;
    result.applied_weight = list.w_extreme;
    const std::uint32_t n = list.n_max();
    result.add_probe(x);
    double scaled =
        std::fabs(list.weights[x - 1u]) * static_cast<double>(n) / std::fabs(list.w_extreme);
    auto termpt = static_cast<std::uint32_t>(std::floor(scaled + 0.5)); // round half up
    result.termpt = std::min(termpt, n);
    return result;
}

TerminationResult termpt_transform(const SortedSynapseList& list, Pcg32& rng) {
    return termpt_transform_at(list, rng.next_between(1u, list.n_max()));
}

TerminationResult termpt_pwl_at(const SortedSynapseList& list, double r) {
    TerminationResult result;
    result.applied_weight = list.w_extreme;
    result.termpt = pwl_invert(list.pwl, r, list.n_max());
    return result;
}

TerminationResult termpt_pwl(const SortedSynapseList& list, Pcg32& rng) {
    return termpt_pwl_at(list, draw_r(list, rng));
}

} // namespace snnprob
