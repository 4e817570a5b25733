#pragma once

#include <array>
#include <cstdint>
#include <string>

#include "snnprob/rng.hpp"
#include "snnprob/synapses.hpp"

namespace snnprob {

/// How the termination point on a sorted synapse list is decided.
enum class Strategy {
    Det,          ///< deterministic baseline: every synapse, true weights
    Scan,         ///< linear scan of the sorted weights until one drops below r
    BinarySearch, ///< binary search for the same point
    RandomIndex,  ///< uniform random point, no weight reads
    Transform,    ///< single random weight lookup mapped through the profile
    Pwl,          ///< inversion of the 5-segment piecewise-linear profile
};

Strategy strategy_from_name(const std::string& name);
const char* strategy_name(Strategy s);

/// Outcome of one termination-point computation on one sign-list.
/// `termpt` counts the synapses that receive the spike (0 = none).
/// Weight reads are reported as a contiguous prefix (scan) plus individual
/// probed slots (binary search / transform); index reads are always the
/// prefix 1..termpt and are charged when the result is applied.
struct TerminationResult {
    static constexpr int kMaxProbes = 40;

    std::uint32_t termpt = 0;
    double applied_weight = 0.0;
    std::uint32_t sequential_weight_reads = 0; // positions 1..k
    std::array<std::uint32_t, kMaxProbes> probes{};
    std::uint32_t probe_count = 0;

    std::uint32_t weight_reads() const { return sequential_weight_reads + probe_count; }

    void add_probe(std::uint32_t position) { probes[probe_count++] = position; }
};

/// One uniform draw in [0, |w_extreme|] for a non-empty list.
double draw_r(const SortedSynapseList& list, Pcg32& rng);

/// Scan: termpt = number of leading positions with |w| >= r. Reads
/// min(termpt + 1, n_max) weights (the failing comparison is also a read).
TerminationResult termpt_scan(const SortedSynapseList& list, double r);

/// Binary search for the same point; reads at most ceil(log2 n) + 1 weights
/// at the probed positions.
TerminationResult termpt_binary_search(const SortedSynapseList& list, double r);

/// Uniform termpt over the integers [0, n_max]; reads no weights.
TerminationResult termpt_random_index(const SortedSynapseList& list, Pcg32& rng);

/// Weight-transform: draw slot x uniformly from [1, n_max], read the one
/// weight there, map it through termpt = round(|w[x]| * n_max / |w_extreme|).
TerminationResult termpt_transform(const SortedSynapseList& list, Pcg32& rng);

/// Deterministic variant of the transform for a fixed slot x in [1, n_max].
TerminationResult termpt_transform_at(const SortedSynapseList& list, std::uint32_t x);

/// Piecewise-linear: draw r, invert the stored profile. No weight reads;
/// breakpoints count as on-chip metadata.
TerminationResult termpt_pwl(const SortedSynapseList& list, Pcg32& rng);

/// PWL inversion with a caller-supplied r (used by tests and analysis).
TerminationResult termpt_pwl_at(const SortedSynapseList& list, double r);

} // namespace snnprob
