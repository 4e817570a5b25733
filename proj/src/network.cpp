#include "snnprob/network.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace snnprob {

namespace {
constexpr std::uint64_t kPropagationTag = 0x70726f7061676174ULL; // "propagat"
}

std::uint32_t NetworkModel::layer_of(NeuronId id) const {
    for (std::uint32_t l = 0; l < layer_sizes.size(); ++l) {
        if (id < layer_offsets[l + 1]) return l;
    }
    throw std::out_of_range("neuron id " + std::to_string(id) + " outside network");
}

void NetworkModel::rebuild_offsets() {
    layer_offsets.assign(1, 0u);
    for (std::uint32_t size : layer_sizes) {
        layer_offsets.push_back(layer_offsets.back() + size);
    }
}

std::shared_ptr<const NetworkModel>
build_network(const std::vector<std::uint32_t>& layer_sizes,
              const std::vector<std::vector<std::vector<double>>>& matrices,
              const std::vector<double>& layer_thresholds, ResetRule reset_rule) {
    if (layer_sizes.size() < 2) {
        throw std::invalid_argument("build_network: need at least input and output layers");
    }
    if (matrices.size() + 1 != layer_sizes.size()) {
        throw std::invalid_argument("build_network: expected one weight matrix per layer pair");
    }
    if (layer_thresholds.size() + 1 != layer_sizes.size()) {
        throw std::invalid_argument("build_network: expected one threshold per non-input layer");
    }

    auto model = std::make_shared<NetworkModel>();
    model->layer_sizes = layer_sizes;
    model->rebuild_offsets();
    model->reset_rule = reset_rule;
    model->synapses.resize(model->neuron_count());
    model->thresholds.assign(model->neuron_count(), 1.0);

    for (std::size_t l = 0; l + 1 < layer_sizes.size(); ++l) {
        const auto& matrix = matrices[l];
        if (matrix.size() != layer_sizes[l]) {
            throw std::invalid_argument("build_network: matrix " + std::to_string(l) + " has " +
                                        std::to_string(matrix.size()) + " rows, expected " +
                                        std::to_string(layer_sizes[l]));
        }
        NeuronId first_target = model->layer_offsets[l + 1];
        for (std::uint32_t i = 0; i < layer_sizes[l]; ++i) {
            if (matrix[i].size() != layer_sizes[l + 1]) {
                throw std::invalid_argument("build_network: matrix " + std::to_string(l) +
                                            " row " + std::to_string(i) + " has " +
                                            std::to_string(matrix[i].size()) +
                                            " columns, expected " +
                                            std::to_string(layer_sizes[l + 1]));
            }
            auto [exc, inh] = build_sorted_lists(matrix[i], first_target);
            NeuronId id = model->layer_offsets[l] + i;
            model->synapses[id] = {std::move(exc), std::move(inh)};
        }
        for (std::uint32_t j = 0; j < layer_sizes[l + 1]; ++j) {
            model->thresholds[first_target + j] = layer_thresholds[l];
        }
    }
    return model;
}

Network::Network(std::shared_ptr<const NetworkModel> model, std::uint64_t seed)
    : model_(std::move(model)) {
    reset(seed);
}

void Network::reset(std::uint64_t seed) {
    const std::uint32_t n = model_->neuron_count();
    v_mem_.assign(n, 0.0);
    spiked_.assign(n, 0);
    pending_.clear();
    output_counts_.assign(model_->output_size(), 0);
    streams_.clear();
    streams_.reserve(n);
    std::uint64_t base = mix64(seed, kPropagationTag);
    for (std::uint32_t id = 0; id < n; ++id) {
        streams_.push_back(make_stream(base, id));
    }
    steps_ = 0;
}

void Network::update_neuron(NeuronId j, double w) {
    if (j >= v_mem_.size()) {
        throw std::out_of_range("update_neuron: neuron id " + std::to_string(j) +
                                " outside network of size " + std::to_string(v_mem_.size()));
    }
    v_mem_[j] += w;
}

NeuronState Network::neuron(NeuronId id) const {
    return {v_mem_.at(id), model_->thresholds.at(id), spiked_.at(id) != 0};
}

void Network::propagate_spike(NeuronId source, Strategy strategy, AccessLedger& ledger,
                              const PlacementPolicy& policy) {
    ledger.spikes += 1;
    const NeuronSynapses& lists = model_->synapses[source];
    for (const SortedSynapseList* list : {&lists.excitatory, &lists.inhibitory}) {
        if (list->empty()) continue;
        switch (strategy) {
            case Strategy::Det:
                propagate_deterministic(*list, *this, ledger, policy);
                break;
            case Strategy::Scan:
                apply_termination(*list, termpt_scan(*list, draw_r(*list, streams_[source])),
                                  *this, ledger, policy);
                break;
            case Strategy::BinarySearch:
                apply_termination(
                    *list, termpt_binary_search(*list, draw_r(*list, streams_[source])), *this,
                    ledger, policy);
                break;
            case Strategy::RandomIndex:
                apply_termination(*list, termpt_random_index(*list, streams_[source]), *this,
                                  ledger, policy);
                break;
            case Strategy::Transform:
                apply_termination(*list, termpt_transform(*list, streams_[source]), *this,
                                  ledger, policy);
                break;
            case Strategy::Pwl:
                apply_termination(*list, termpt_pwl(*list, streams_[source]), *this, ledger,
                                  policy);
                break;
        }
    }
}

std::vector<NeuronId> Network::step(const std::vector<NeuronId>& input_spikes,
                                    Strategy strategy, AccessLedger& ledger,
                                    const PlacementPolicy& policy) {
    const std::uint32_t input_size = model_->input_size();
    for (NeuronId id : input_spikes) {
        if (id >= input_size) {
            throw std::out_of_range("step: input spike id " + std::to_string(id) +
                                    " outside input layer of size " + std::to_string(input_size));
        }
    }

    // Propagation: last step's generated spikes, then this step's injections.
    for (NeuronId id : pending_) {
        propagate_spike(id, strategy, ledger, policy);
    }
    pending_.clear();

    NeuronId previous = 0;
    bool ordered = true;
    for (std::size_t k = 0; k < input_spikes.size(); ++k) {
        if (k > 0 && input_spikes[k] <= previous) {
            ordered = false;
            break;
        }
        previous = input_spikes[k];
    }
    if (ordered) {
        for (NeuronId id : input_spikes) {
            propagate_spike(id, strategy, ledger, policy);
        }
    } else {
        // Tolerate unsorted callers; a neuron still spikes at most once per step.
        std::vector<NeuronId> unique_inputs(input_spikes);
        std::sort(unique_inputs.begin(), unique_inputs.end());
        unique_inputs.erase(std::unique(unique_inputs.begin(), unique_inputs.end()),
                            unique_inputs.end());
        for (NeuronId id : unique_inputs) {
            propagate_spike(id, strategy, ledger, policy);
        }
    }

    // Firing is resolved once per neuron per step, after every update of the
    // step has landed. Input neurons spike only by injection.
    std::fill(spiked_.begin(), spiked_.end(), 0);
    std::vector<NeuronId> fired;
    const std::uint32_t output_offset = model_->output_offset();
    const std::uint32_t n = model_->neuron_count();
    for (NeuronId id = input_size; id < n; ++id) {
        double threshold = model_->thresholds[id];
        if (v_mem_[id] >= threshold) {
            if (model_->reset_rule == ResetRule::ToZero) {
                v_mem_[id] = 0.0;
            } else {
                v_mem_[id] -= threshold;
            }
            spiked_[id] = 1;
            pending_.push_back(id);
            fired.push_back(id);
            if (id >= output_offset) {
                output_counts_[id - output_offset] += 1;
            }
        }
    }
    steps_ += 1;
    return fired;
}

ClassifyResult Network::classify() const {
    if (steps_ == 0) {
        throw std::logic_error("classify: no timestep has been simulated");
    }
    ClassifyResult result;
    std::uint64_t best = 0;
    for (std::uint32_t i = 0; i < output_counts_.size(); ++i) {
        if (output_counts_[i] > best) {
            best = output_counts_[i];
            result.label = i;
        }
    }
    result.no_activity = (best == 0);
    return result;
}

void propagate_deterministic(const SortedSynapseList& list, Network& net, AccessLedger& ledger,
                             const PlacementPolicy& policy) {
    const std::uint32_t n = list.n_max();
    record_prefix_reads(ledger, policy, ReadKind::Weight, n, n);
    for (std::uint32_t pos = 0; pos < n; ++pos) {
        net.update_neuron(list.targets[pos], list.weights[pos]);
    }
}

void apply_termination(const SortedSynapseList& list, const TerminationResult& result,
                       Network& net, AccessLedger& ledger, const PlacementPolicy& policy) {
    const std::uint32_t n = list.n_max();
    record_prefix_reads(ledger, policy, ReadKind::Weight, result.sequential_weight_reads, n);
    for (std::uint32_t k = 0; k < result.probe_count; ++k) {
        record_read(ledger, policy, ReadKind::Weight, result.probes[k], n);
    }
    record_prefix_reads(ledger, policy, ReadKind::Index, result.termpt, n);
    for (std::uint32_t pos = 0; pos < result.termpt; ++pos) {
        net.update_neuron(list.targets[pos], result.applied_weight);
    }
}

} // namespace snnprob
