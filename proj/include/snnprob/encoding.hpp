#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "snnprob/rng.hpp"
#include "snnprob/synapses.hpp"

namespace snnprob {

/// Bernoulli rate coder: input neuron i spikes in a timestep with
/// probability clamp(intensity[i] * rate_scale, 0, 1). Intensities are
/// pre-normalized to [0, 1] at ingestion.
struct RateEncoder {
    double rate_scale = 1.0;

    /// Returns the spiking input ids for one timestep, in ascending order.
    /// One draw is consumed per input neuron regardless of intensity, so
    /// the stream stays aligned across inputs.
    std::vector<NeuronId> encode_step(std::span<const double> intensities, Pcg32& rng) const;
};

/// Rows of normalized input intensities with integer class labels.
struct Dataset {
    std::size_t feature_count = 0;
    std::vector<double> intensities; // row-major, rows * feature_count
    std::vector<int> labels;

    std::size_t size() const { return labels.size(); }
    std::span<const double> row(std::size_t i) const {
        return {intensities.data() + i * feature_count, feature_count};
    }
};

/// Loads the flat CSV dataset format: one sample per line,
/// `label,intensity0,intensity1,...` with intensities in [0, 1].
/// Lines starting with '#' and an optional non-numeric header line are
/// skipped. Malformed rows and out-of-range intensities are reported with
/// their line number.
Dataset load_dataset(const std::string& path);

/// Deterministic dataset of uniform random intensities (labels all 0);
/// used to drive memory-accounting runs on synthetic networks.
Dataset random_dataset(std::size_t features, std::size_t rows, std::uint64_t seed);

} // namespace snnprob
