#pragma once

#include <cstdint>
#include <utility>
#include <vector>

namespace snnprob {

using NeuronId = std::uint32_t;

/// One breakpoint of the piecewise-linear profile: `pos` is a 0-based slot
/// on the sorted list (0 = before the largest weight, n_max = past the end),
/// `mag` is the approximated weight magnitude at that slot.
struct PwlBreakpoint {
    std::uint32_t pos = 0;
    double mag = 0.0;

    bool operator==(const PwlBreakpoint&) const = default;
};

/// Piecewise-linear approximation of a sorted magnitude curve with at most
/// kPwlSegments segments. The curve maps slot p to the magnitude of the
/// (p+1)-th largest weight; the final breakpoint sits at (n_max, 0) so that
/// a linearly decaying list is reproduced exactly.
struct PwlProfile {
    static constexpr int kPwlSegments = 5;

    std::vector<PwlBreakpoint> points;

    bool empty() const { return points.empty(); }

    bool operator==(const PwlProfile&) const = default;
};

/// Per-neuron, per-sign synapse storage: weights sorted by descending
/// magnitude with the original target ids kept aligned. Excitatory lists
/// hold only positive weights, inhibitory lists only negative ones; zero
/// weights never enter a list. `w_extreme` is the signed first entry
/// (the per-neuron maximum for excitatory, minimum for inhibitory).
struct SortedSynapseList {
    std::vector<double> weights;
    std::vector<NeuronId> targets;
    double w_extreme = 0.0;
    PwlProfile pwl;

    std::uint32_t n_max() const { return static_cast<std::uint32_t>(weights.size()); }
    bool empty() const { return weights.empty(); }

    bool operator==(const SortedSynapseList&) const = default;
};

/// Splits a dense weight row by sign and sorts each half by descending
/// magnitude (ties keep ascending target order). Zero entries are dropped.
/// `first_target` is the global id of column 0.
/// Throws std::invalid_argument on non-finite input.
std::pair<SortedSynapseList, SortedSynapseList>
build_sorted_lists(const std::vector<double>& dense_row, NeuronId first_target = 0);

/// Fits the piecewise-linear profile with breakpoints at slots
/// {0, n/5, 2n/5, 3n/5, 4n/5, n} (rounded and deduplicated for small n).
/// Slot p < n samples the (p+1)-th magnitude; the end breakpoint is (n, 0).
PwlProfile fit_pwl(const SortedSynapseList& list, int segments = PwlProfile::kPwlSegments);

/// Evaluates the fitted curve at a (fractional) slot position, clamping
/// outside [first, last] breakpoints.
double pwl_eval(const PwlProfile& profile, double position);

/// Inverts the fitted curve under the scan convention: the count of slots
/// whose approximated magnitude is >= r. Flat segments resolve to their
/// largest position. Empty profile yields 0; r == 0 yields n_max.
std::uint32_t pwl_invert(const PwlProfile& profile, double r, std::uint32_t n_max);

/// Sum of |w| / |w_extreme| over the list: the analytic expectation of the
/// scan termination point under r ~ Uniform[0, |w_extreme|]. Empty list -> 0.
double expected_termpt(const SortedSynapseList& list);

} // namespace snnprob
