#pragma once

#include <cstdint>
#include <optional>

namespace snnprob {

/// Which prefix of every sorted list (weights and targets alike) is held
/// in fast local memory. Reads at positions 1..floor(fraction * n_max)
/// count as on-chip, the rest as off-chip.
struct PlacementPolicy {
    double onchip_fraction = 0.0;

    /// floor(fraction * n); the small epsilon undoes the binary
    /// representation error of decimal fractions like 0.6 so that exact
    /// products stay exact.
    std::uint64_t onchip_prefix(std::uint64_t n_max) const {
        double scaled = onchip_fraction * static_cast<double>(n_max);
        return static_cast<std::uint64_t>(scaled + 1e-9);
    }
};

enum class ReadKind { Weight, Index };

/// Counters for one instrumented run. MAPS (memory accesses per spike) is
/// the figure of merit: all weight and index reads divided by the number of
/// spikes processed.
struct AccessLedger {
    std::uint64_t spikes = 0;
    std::uint64_t weight_reads_on = 0;
    std::uint64_t weight_reads_off = 0;
    std::uint64_t index_reads_on = 0;
    std::uint64_t index_reads_off = 0;

    std::uint64_t total_reads() const {
        return weight_reads_on + weight_reads_off + index_reads_on + index_reads_off;
    }
    std::uint64_t offchip_reads() const { return weight_reads_off + index_reads_off; }

    /// Total reads per spike; 0 when no spike was processed (callers can
    /// detect the degenerate case via spikes == 0).
    double maps() const {
        if (spikes == 0) return 0.0;
        return static_cast<double>(total_reads()) / static_cast<double>(spikes);
    }

    void merge(const AccessLedger& other) {
        spikes += other.spikes;
        weight_reads_on += other.weight_reads_on;
        weight_reads_off += other.weight_reads_off;
        index_reads_on += other.index_reads_on;
        index_reads_off += other.index_reads_off;
    }

    bool operator==(const AccessLedger&) const = default;
};

/// Records a single read at a 1-based position of a list of length n_max.
/// Positions outside [1, n_max] indicate an instrumentation bug and throw.
void record_read(AccessLedger& ledger, const PlacementPolicy& policy, ReadKind kind,
                 std::uint64_t position, std::uint64_t n_max);

/// Batch form of record_read for the contiguous prefix 1..count; same
/// arithmetic, one call.
void record_prefix_reads(AccessLedger& ledger, const PlacementPolicy& policy, ReadKind kind,
                         std::uint64_t count, std::uint64_t n_max);

/// Off-chip reads of a strategy run relative to every read the
/// deterministic baseline performs with nothing on-chip (the normalized
/// quantity the MAPS tables report). Empty baseline -> nullopt.
std::optional<double> normalized_offchip(const AccessLedger& strategy,
                                         const AccessLedger& det_fraction0);

} // namespace snnprob
