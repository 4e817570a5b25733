#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "snnprob/ledger.hpp"
#include "snnprob/rng.hpp"
#include "snnprob/synapses.hpp"
#include "snnprob/termination.hpp"

namespace snnprob {

/// What happens to the membrane potential when a neuron fires.
enum class ResetRule : std::uint32_t {
    ToZero = 0,       ///< v_mem := 0
    BySubtraction = 1 ///< v_mem := v_mem - threshold
};

struct NeuronSynapses {
    SortedSynapseList excitatory;
    SortedSynapseList inhibitory;

    bool operator==(const NeuronSynapses&) const = default;
};

/// Immutable description of a feed-forward network: layer sizes, per-neuron
/// outgoing synapse lists (already sign-split and sorted) and thresholds.
/// Shared read-only between any number of concurrently running Network
/// instances.
struct NetworkModel {
    std::vector<std::uint32_t> layer_sizes;
    std::vector<std::uint32_t> layer_offsets; // prefix sums, layer_sizes.size() + 1 entries
    std::vector<NeuronSynapses> synapses;     // one entry per neuron, empty for the last layer
    std::vector<double> thresholds;           // per neuron; input-layer values are unused
    ResetRule reset_rule = ResetRule::ToZero;

    std::uint32_t neuron_count() const { return layer_offsets.back(); }
    std::uint32_t layer_count() const { return static_cast<std::uint32_t>(layer_sizes.size()); }
    std::uint32_t input_size() const { return layer_sizes.front(); }
    std::uint32_t output_size() const { return layer_sizes.back(); }
    std::uint32_t output_offset() const { return layer_offsets[layer_sizes.size() - 1]; }
    std::uint32_t layer_of(NeuronId id) const;

    /// Recomputes layer_offsets from layer_sizes.
    void rebuild_offsets();

    bool operator==(const NetworkModel&) const = default;
};

/// Assembles a model from dense per-layer weight matrices
/// (matrices[l][src][dst] connects layer l to layer l+1) and one threshold
/// per non-input layer. Sorting, sign-splitting and PWL fitting happen here.
std::shared_ptr<const NetworkModel>
build_network(const std::vector<std::uint32_t>& layer_sizes,
              const std::vector<std::vector<std::vector<double>>>& matrices,
              const std::vector<double>& layer_thresholds,
              ResetRule reset_rule = ResetRule::ToZero);

/// Read-only view of one integrate-and-fire unit.
struct NeuronState {
    double v_mem;
    double threshold;
    bool spiked_this_step;
};

struct ClassifyResult {
    std::uint32_t label = 0;
    bool no_activity = false; ///< every output count was zero
};

/// Mutable simulation state over a shared immutable model. One instance is
/// driven by one thread; independent instances (one per test image) can run
/// in parallel, each with its own ledger.
class Network {
public:
    explicit Network(std::shared_ptr<const NetworkModel> model, std::uint64_t seed = 0);

    /// Clears membrane potentials, queues and counters and re-derives the
    /// per-neuron random streams from the seed.
    void reset(std::uint64_t seed);

    /// Runs one timestep: propagates the spikes queued by the previous step
    /// plus the injected input spikes, then resolves firing once per neuron.
    /// Fired neurons are reset and queued for the next step; output-layer
    /// fires increment the spike counts. Returns the neurons that fired.
    /// Input ids outside the input layer throw std::out_of_range.
    std::vector<NeuronId> step(const std::vector<NeuronId>& input_spikes, Strategy strategy,
                               AccessLedger& ledger, const PlacementPolicy& policy = {});

    /// Adds w to the membrane potential of neuron j. Firing is resolved
    /// once per timestep after all updates, never here.
    void update_neuron(NeuronId j, double w);

    /// Argmax over output spike counts; ties break to the lowest index.
    /// Requires at least one simulated step.
    ClassifyResult classify() const;

    const NetworkModel& model() const { return *model_; }
    NeuronState neuron(NeuronId id) const;
    double v_mem(NeuronId id) const { return v_mem_.at(id); }
    const std::vector<std::uint64_t>& output_spike_counts() const { return output_counts_; }
    const std::vector<NeuronId>& pending_spikes() const { return pending_; }
    std::uint64_t steps_run() const { return steps_; }

private:
    void propagate_spike(NeuronId source, Strategy strategy, AccessLedger& ledger,
                         const PlacementPolicy& policy);

    std::shared_ptr<const NetworkModel> model_;
    std::vector<double> v_mem_;
    std::vector<std::uint8_t> spiked_;
    std::vector<NeuronId> pending_; // spikes generated last step, due this step
    std::vector<std::uint64_t> output_counts_;
    std::vector<Pcg32> streams_; // one propagation stream per neuron
    std::uint64_t steps_ = 0;
};

/// Deterministic baseline propagation of one sign-list: every target gets
/// its true weight; charges one weight read per synapse and no index reads
/// (in the dense baseline layout targets are implicit).
void propagate_deterministic(const SortedSynapseList& list, Network& net, AccessLedger& ledger,
                             const PlacementPolicy& policy);

/// Applies a termination result: positions 1..termpt receive the extremal
/// weight. Charges the weight reads recorded in the result and one index
/// read per applied position.
void apply_termination(const SortedSynapseList& list, const TerminationResult& result,
                       Network& net, AccessLedger& ledger, const PlacementPolicy& policy);

} // namespace snnprob
