#include "snnprob/ledger.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace snnprob {

void record_read(AccessLedger& ledger, const PlacementPolicy& policy, ReadKind kind,
                 std::uint64_t position, std::uint64_t n_max) {
    if (position < 1 || position > n_max) {
        throw std::logic_error("record_read: position " + std::to_string(position) +
                               " outside [1, " + std::to_string(n_max) + "]");
    }
    bool onchip = position <= policy.onchip_prefix(n_max);
    if (kind == ReadKind::Weight) {
        (onchip ? ledger.weight_reads_on : ledger.weight_reads_off) += 1;
    } else {
        (onchip ? ledger.index_reads_on : ledger.index_reads_off) += 1;
    }
}

void record_prefix_reads(AccessLedger& ledger, const PlacementPolicy& policy, ReadKind kind,
                         std::uint64_t count, std::uint64_t n_max) {
    if (count > n_max) {
        throw std::logic_error("record_prefix_reads: count " + std::to_string(count) +
                               " exceeds n_max " + std::to_string(n_max));
    }
    std::uint64_t on = std::min(count, policy.onchip_prefix(n_max));
    std::uint64_t off = count - on;
    if (kind == ReadKind::Weight) {
        ledger.weight_reads_on += on;
        ledger.weight_reads_off += off;
    } else {
        ledger.index_reads_on += on;
        ledger.index_reads_off += off;
    }
}

std::optional<double> normalized_offchip(const AccessLedger& strategy,
                                         const AccessLedger& det_fraction0) {
    std::uint64_t baseline = det_fraction0.total_reads();
    if (baseline == 0) return std::nullopt;
    return static_cast<double>(strategy.offchip_reads()) / static_cast<double>(baseline);
}

} // namespace snnprob
