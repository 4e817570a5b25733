#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "snnprob/encoding.hpp"
#include "snnprob/ledger.hpp"
#include "snnprob/network.hpp"

namespace snnprob {

/// Shape of the per-neuron sorted magnitude curve of a generated network.
enum class WeightProfile { Linear, Exponential };

WeightProfile profile_from_name(const std::string& name);
const char* profile_name(WeightProfile p);

/// Parameters for synthesizing a benchmark network whose sorted weight
/// curves follow a known shape, with random sign assignment and shuffled
/// target order.
struct GenSpec {
    WeightProfile profile = WeightProfile::Linear;
    std::vector<std::uint32_t> layers;
    std::uint64_t seed = 1;
    double w_max = 1.0;
    double exc_fraction = 0.8;    ///< probability a synapse is excitatory
    double threshold_scale = 1.0; ///< threshold = scale * mean positive fan-in sum
    ResetRule reset = ResetRule::ToZero;
};

std::shared_ptr<const NetworkModel> gen_network(const GenSpec& spec);

/// Grid for the accuracy and memory-access experiments. Checkpoints must be
/// strictly increasing; fractions lie in [0, 1]; the strategy list must
/// contain the deterministic baseline.
struct ExperimentSpec {
    std::shared_ptr<const NetworkModel> model;
    Dataset dataset;
    std::vector<Strategy> strategies;
    std::vector<std::uint32_t> checkpoints = {100, 200, 300, 1000}; // accuracy readouts
    std::vector<double> onchip_fractions = {0.0, 0.2, 0.4, 0.6, 0.8};
    std::vector<std::uint64_t> seeds = {1};
    std::uint32_t steps = 100;  ///< timesteps per sample in the MAPS run
    std::size_t samples = 0;    ///< 0 = whole dataset
    double rate_scale = 1.0;
    unsigned threads = 1;

    std::string network_name = "network";
    std::string dataset_name = "dataset";

    void validate() const;
    std::size_t effective_samples() const;
};

struct AccuracyRow {
    Strategy strategy;
    std::uint64_t seed;
    std::uint32_t checkpoint;
    std::size_t samples = 0;
    std::size_t correct = 0;
    std::size_t agree_with_det = 0;
    std::size_t no_activity = 0;

    double accuracy() const { return static_cast<double>(correct) / samples; }
    double agreement() const { return static_cast<double>(agree_with_det) / samples; }
};

struct AccuracyTable {
    std::vector<AccuracyRow> rows;

    const AccuracyRow& find(Strategy s, std::uint64_t seed, std::uint32_t checkpoint) const;
};

struct MapsRow {
    Strategy strategy;
    double onchip_fraction = 0.0;
    std::uint64_t seed = 0;
    std::size_t samples = 0;
    std::uint32_t steps = 0;
    AccessLedger ledger;
    std::optional<double> offchip_vs_det0;
};

struct MapsTable {
    std::vector<MapsRow> rows;

    const MapsRow& find(Strategy s, double fraction) const;
};

/// Runs every (strategy, seed) cell of the grid: each sample is simulated
/// once up to the last checkpoint and classified at every checkpoint along
/// the way. Per-sample random streams depend only on (seed, sample), so the
/// baseline and the probabilistic strategies see identical input spike
/// trains and results are independent of the thread count.
AccuracyTable run_accuracy_experiment(const ExperimentSpec& spec);

/// Runs every (strategy, on-chip fraction) cell for the first seed and
/// reports per-cell ledgers plus their off-chip reads normalized by the
/// deterministic fraction-0 baseline.
MapsTable run_maps_experiment(const ExperimentSpec& spec);

/// RFC-4180-style CSV renderings (stable across runs for identical specs).
std::string accuracy_csv(const ExperimentSpec& spec, const AccuracyTable& table);
std::string maps_csv(const ExperimentSpec& spec, const MapsTable& table);

/// Per-list profile statistics for the `inspect` report.
struct ListStats {
    NeuronId neuron = 0;
    std::uint32_t layer = 0;
    bool excitatory = true;
    std::uint32_t n_max = 0;
    double w_extreme = 0.0;
    double expected_termpt = 0.0;
    double pwl_max_error = 0.0; ///< max |pwl - true magnitude| over integer slots
};

std::vector<ListStats> network_stats(const NetworkModel& model);
std::string stats_csv(const std::vector<ListStats>& stats);
std::string stats_summary(const NetworkModel& model, const std::vector<ListStats>& stats);

} // namespace snnprob
