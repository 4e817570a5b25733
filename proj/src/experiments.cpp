#include "snnprob/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <functional>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace snnprob {

namespace {

constexpr std::uint64_t kGenTag = 0x67656e6e6574ULL;  // "gennet"
constexpr std::uint64_t kEncodeTag = 0x656e636f6465ULL; // "encode"

std::string fmt(double v) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& fn) {
    if (threads <= 1 || count <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        while (true) {
            std::size_t i = next.fetch_add(1);
            if (i >= count) break;
            fn(i);
        }
    };
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
}

Pcg32 encoder_stream(std::uint64_t seed, std::size_t sample) {
    return make_stream(mix64(seed, kEncodeTag), sample);
}

std::uint64_t sample_seed(std::uint64_t seed, std::size_t sample) {
    return mix64(seed, sample);
}

} // namespace

WeightProfile profile_from_name(const std::string& name) {
    if (name == "linear") return WeightProfile::Linear;
    if (name == "exponential" || name == "exp") return WeightProfile::Exponential;
    throw std::invalid_argument("unknown profile '" + name + "' (expected linear|exponential)");
}

const char* profile_name(WeightProfile p) {
    return p == WeightProfile::Linear ? "linear" : "exponential";
}

std::shared_ptr<const NetworkModel> gen_network(const GenSpec& spec) {
    if (spec.layers.size() < 2) {
        throw std::invalid_argument("gen_network: need at least two layers");
    }
    for (std::uint32_t size : spec.layers) {
        if (size == 0) throw std::invalid_argument("gen_network: empty layer");
    }
    if (!(spec.w_max > 0.0)) throw std::invalid_argument("gen_network: w_max must be positive");
    if (spec.exc_fraction < 0.0 || spec.exc_fraction > 1.0) {
        throw std::invalid_argument("gen_network: exc_fraction outside [0, 1]");
    }

    auto model = std::make_shared<NetworkModel>();
    model->layer_sizes = spec.layers;
    model->rebuild_offsets();
    model->reset_rule = spec.reset;
    model->synapses.resize(model->neuron_count());
    model->thresholds.assign(model->neuron_count(), 1.0);

    std::vector<double> positive_fan_in(model->neuron_count(), 0.0);
    std::uint64_t base = mix64(spec.seed, kGenTag);

    for (std::size_t l = 0; l + 1 < spec.layers.size(); ++l) {
        const std::uint32_t n = spec.layers[l + 1];
        const NeuronId first_target = model->layer_offsets[l + 1];
        for (std::uint32_t i = 0; i < spec.layers[l]; ++i) {
            NeuronId id = model->layer_offsets[l] + i;
            Pcg32 rng = make_stream(base, id);

            // Sorted magnitude curve of the requested shape (t = 1..n).
            std::vector<double> magnitude(n);
            for (std::uint32_t t = 1; t <= n; ++t) {
                if (spec.profile == WeightProfile::Linear) {
                    magnitude[t - 1] = spec.w_max * static_cast<double>(n + 1 - t) / n;
                } else {
                    magnitude[t - 1] =
                        spec.w_max * std::exp(-5.0 * static_cast<double>(t - 1) / n);
                }
            }

            std::vector<std::uint32_t> target_of(n);
            for (std::uint32_t t = 0; t < n; ++t) target_of[t] = t;
            for (std::uint32_t t = n - 1; t > 0; --t) {
                std::uint32_t swap_with = rng.next_below(t + 1);
                std::swap(target_of[t], target_of[swap_with]);
            }

            std::vector<double> row(n, 0.0);
            for (std::uint32_t t = 0; t < n; ++t) {
                bool excitatory = rng.next_double() < spec.exc_fraction;
                double w = excitatory ? magnitude[t] : -magnitude[t];
                row[target_of[t]] = w;
                if (w > 0.0) positive_fan_in[first_target + target_of[t]] += w;
            }

            auto [exc, inh] = build_sorted_lists(row, first_target);
            model->synapses[id] = {std::move(exc), std::move(inh)};
        }
    }

    // Per-layer threshold: scale times the layer's mean positive fan-in sum.
    for (std::size_t l = 1; l < spec.layers.size(); ++l) {
        double sum = 0.0;
        for (std::uint32_t j = 0; j < spec.layers[l]; ++j) {
            sum += positive_fan_in[model->layer_offsets[l] + j];
        }
        double threshold = spec.threshold_scale * sum / spec.layers[l];
        if (!(threshold > 0.0)) threshold = spec.threshold_scale;
        for (std::uint32_t j = 0; j < spec.layers[l]; ++j) {
            model->thresholds[model->layer_offsets[l] + j] = threshold;
        }
    }
    return model;
}

void ExperimentSpec::validate() const {
    if (!model) throw std::invalid_argument("experiment: no network");
    if (dataset.size() == 0) throw std::invalid_argument("experiment: empty dataset");
    if (dataset.feature_count != model->input_size()) {
        throw std::invalid_argument("experiment: dataset has " +
                                    std::to_string(dataset.feature_count) +
                                    " features but the network input layer has " +
                                    std::to_string(model->input_size()) + " neurons");
    }
    if (strategies.empty()) throw std::invalid_argument("experiment: no strategies");
    if (std::find(strategies.begin(), strategies.end(), Strategy::Det) == strategies.end()) {
        throw std::invalid_argument("experiment: strategy list must include det (the baseline)");
    }
    for (std::size_t i = 1; i < checkpoints.size(); ++i) {
        if (checkpoints[i] <= checkpoints[i - 1]) {
            throw std::invalid_argument("experiment: checkpoints must be strictly increasing");
        }
    }
    if (checkpoints.empty() || checkpoints.front() == 0) {
        throw std::invalid_argument("experiment: need at least one nonzero checkpoint");
    }
    for (double f : onchip_fractions) {
        if (f < 0.0 || f > 1.0) {
            throw std::invalid_argument("experiment: on-chip fraction outside [0, 1]");
        }
    }
    if (onchip_fractions.empty()) {
        throw std::invalid_argument("experiment: need at least one on-chip fraction");
    }
    if (seeds.empty()) throw std::invalid_argument("experiment: need at least one seed");
    if (steps == 0) throw std::invalid_argument("experiment: steps must be positive");
    if (!(rate_scale > 0.0) || rate_scale > 1.0) {
        throw std::invalid_argument("experiment: rate_scale must be in (0, 1]");
    }
}

std::size_t ExperimentSpec::effective_samples() const {
    if (samples == 0) return dataset.size();
    return std::min(samples, dataset.size());
}

const AccuracyRow& AccuracyTable::find(Strategy s, std::uint64_t seed,
                                       std::uint32_t checkpoint) const {
    for (const AccuracyRow& row : rows) {
        if (row.strategy == s && row.seed == seed && row.checkpoint == checkpoint) return row;
    }
    throw std::out_of_range("accuracy table: no such row");
}

const MapsRow& MapsTable::find(Strategy s, double fraction) const {
    for (const MapsRow& row : rows) {
        if (row.strategy == s && row.onchip_fraction == fraction) return row;
    }
    throw std::out_of_range("maps table: no such row");
}

AccuracyTable run_accuracy_experiment(const ExperimentSpec& spec) {
    spec.validate();
    const std::size_t samples = spec.effective_samples();
    const std::size_t n_cp = spec.checkpoints.size();
    const RateEncoder encoder{spec.rate_scale};

    // Deterministic baseline first so agreement can be scored per seed.
    std::vector<Strategy> order = spec.strategies;
    std::stable_partition(order.begin(), order.end(),
                          [](Strategy s) { return s == Strategy::Det; });
    order.erase(std::unique(order.begin(), order.end()), order.end());

    AccuracyTable table;
    for (std::uint64_t seed : spec.seeds) {
        std::vector<std::uint32_t> det_preds(samples * n_cp, 0);
        for (Strategy strategy : order) {
            std::vector<std::uint32_t> preds(samples * n_cp, 0);
            std::vector<std::uint8_t> noact(samples * n_cp, 0);

            parallel_for(samples, spec.threads, [&](std::size_t s) {
                Network net(spec.model, sample_seed(seed, s));
                Pcg32 enc = encoder_stream(seed, s);
                AccessLedger scratch;
                PlacementPolicy policy{};
                auto row = spec.dataset.row(s);
                std::uint32_t t = 0;
                for (std::size_t c = 0; c < n_cp; ++c) {
                    while (t < spec.checkpoints[c]) {
                        net.step(encoder.encode_step(row, enc), strategy, scratch, policy);
                        ++t;
                    }
                    ClassifyResult res = net.classify();
                    preds[s * n_cp + c] = res.label;
                    noact[s * n_cp + c] = res.no_activity ? 1 : 0;
                }
            });

            if (strategy == Strategy::Det) det_preds = preds;

            for (std::size_t c = 0; c < n_cp; ++c) {
                AccuracyRow row;
                row.strategy = strategy;
                row.seed = seed;
                row.checkpoint = spec.checkpoints[c];
                row.samples = samples;
                for (std::size_t s = 0; s < samples; ++s) {
                    std::uint32_t pred = preds[s * n_cp + c];
                    if (static_cast<int>(pred) == spec.dataset.labels[s]) row.correct += 1;
                    if (pred == det_preds[s * n_cp + c]) row.agree_with_det += 1;
                    row.no_activity += noact[s * n_cp + c];
                }
                table.rows.push_back(row);
            }
        }
    }

    // Emit rows in the caller's strategy order.
    AccuracyTable ordered;
    for (std::uint64_t seed : spec.seeds) {
        for (Strategy strategy : spec.strategies) {
            for (std::uint32_t cp : spec.checkpoints) {
                ordered.rows.push_back(table.find(strategy, seed, cp));
            }
        }
    }
    return ordered;
}

MapsTable run_maps_experiment(const ExperimentSpec& spec) {
    spec.validate();
    const std::size_t samples = spec.effective_samples();
    const std::uint64_t seed = spec.seeds.front();
    const RateEncoder encoder{spec.rate_scale};

    auto run_cell = [&](Strategy strategy, double fraction) {
        PlacementPolicy policy{fraction};
        std::vector<AccessLedger> partial(samples);
        parallel_for(samples, spec.threads, [&](std::size_t s) {
            Network net(spec.model, sample_seed(seed, s));
            Pcg32 enc = encoder_stream(seed, s);
            auto row = spec.dataset.row(s);
            for (std::uint32_t t = 0; t < spec.steps; ++t) {
                net.step(encoder.encode_step(row, enc), strategy, partial[s], policy);
            }
        });
        AccessLedger merged;
        for (const AccessLedger& ledger : partial) merged.merge(ledger);
        return merged;
    };

    AccessLedger det_baseline = run_cell(Strategy::Det, 0.0);

    MapsTable table;
    for (Strategy strategy : spec.strategies) {
        for (double fraction : spec.onchip_fractions) {
            MapsRow row;
            row.strategy = strategy;
            row.onchip_fraction = fraction;
            row.seed = seed;
            row.samples = samples;
            row.steps = spec.steps;
            row.ledger = (strategy == Strategy::Det && fraction == 0.0)
                             ? det_baseline
                             : run_cell(strategy, fraction);
            row.offchip_vs_det0 = normalized_offchip(row.ledger, det_baseline);
            table.rows.push_back(row);
        }
    }
    return table;
}

std::string accuracy_csv(const ExperimentSpec& spec, const AccuracyTable& table) {
    std::ostringstream out;
    out << "network,dataset,strategy,seed,rate_scale,samples,checkpoint,correct,accuracy,"
           "agree_with_det,agreement,no_activity\n";
    for (const AccuracyRow& row : table.rows) {
        out << spec.network_name << ',' << spec.dataset_name << ','
            << strategy_name(row.strategy) << ',' << row.seed << ',' << fmt(spec.rate_scale)
            << ',' << row.samples << ',' << row.checkpoint << ',' << row.correct << ','
            << fmt(row.accuracy()) << ',' << row.agree_with_det << ',' << fmt(row.agreement())
            << ',' << row.no_activity << '\n';
    }
    return out.str();
}

std::string maps_csv(const ExperimentSpec& spec, const MapsTable& table) {
    std::ostringstream out;
    out << "network,dataset,strategy,onchip_fraction,seed,rate_scale,samples,steps,spikes,"
           "weight_reads_on,weight_reads_off,index_reads_on,index_reads_off,maps,"
           "offchip_vs_det0\n";
    for (const MapsRow& row : table.rows) {
        out << spec.network_name << ',' << spec.dataset_name << ','
            << strategy_name(row.strategy) << ',' << fmt(row.onchip_fraction) << ',' << row.seed
            << ',' << fmt(spec.rate_scale) << ',' << row.samples << ',' << row.steps << ','
            << row.ledger.spikes << ',' << row.ledger.weight_reads_on << ','
            << row.ledger.weight_reads_off << ',' << row.ledger.index_reads_on << ','
            << row.ledger.index_reads_off << ',' << fmt(row.ledger.maps()) << ','
            << (row.offchip_vs_det0 ? fmt(*row.offchip_vs_det0) : "nan") << '\n';
    }
    return out.str();
}

std::vector<ListStats> network_stats(const NetworkModel& model) {
    std::vector<ListStats> stats;
    for (NeuronId id = 0; id < model.neuron_count(); ++id) {
        std::uint32_t layer = model.layer_of(id);
        for (bool excit : {true, false}) {
            const SortedSynapseList& list =
                excit ? model.synapses[id].excitatory : model.synapses[id].inhibitory;
            if (list.empty()) continue;
            ListStats s;
            s.neuron = id;
            s.layer = layer;
            s.excitatory = excit;
            s.n_max = list.n_max();
            s.w_extreme = list.w_extreme;
            s.expected_termpt = expected_termpt(list);
            double max_err = 0.0;
            for (std::uint32_t p = 0; p < list.n_max(); ++p) {
                double approx = pwl_eval(list.pwl, static_cast<double>(p));
                max_err = std::max(max_err, std::fabs(approx - std::fabs(list.weights[p])));
            }
            s.pwl_max_error = max_err;
            stats.push_back(s);
        }
    }
    return stats;
}

std::string stats_csv(const std::vector<ListStats>& stats) {
    std::ostringstream out;
    out << "neuron,layer,sign,n_max,w_extreme,expected_termpt,expected_fraction,pwl_max_error\n";
    for (const ListStats& s : stats) {
        out << s.neuron << ',' << s.layer << ',' << (s.excitatory ? "exc" : "inh") << ','
            << s.n_max << ',' << fmt(s.w_extreme) << ',' << fmt(s.expected_termpt) << ','
            << fmt(s.expected_termpt / s.n_max) << ',' << fmt(s.pwl_max_error) << '\n';
    }
    return out.str();
}

std::string stats_summary(const NetworkModel& model, const std::vector<ListStats>& stats) {
    std::ostringstream out;
    out << "layers:";
    for (std::uint32_t size : model.layer_sizes) out << ' ' << size;
    out << "\nneurons: " << model.neuron_count() << "\nreset: "
        << (model.reset_rule == ResetRule::ToZero ? "zero" : "subtract") << '\n';
    for (std::uint32_t l = 0; l + 1 < model.layer_count(); ++l) {
        double sum_frac = 0.0, sum_err = 0.0, sum_fan = 0.0;
        std::size_t lists = 0;
        for (const ListStats& s : stats) {
            if (s.layer != l) continue;
            sum_frac += s.expected_termpt / s.n_max;
            sum_err += s.pwl_max_error;
            sum_fan += s.n_max;
            lists += 1;
        }
        out << "layer " << l << " -> " << (l + 1) << ": lists " << lists;
        if (lists > 0) {
            out << ", mean fan-out " << fmt(sum_fan / lists) << ", mean expected termpt fraction "
                << fmt(sum_frac / lists) << ", mean pwl max error " << fmt(sum_err / lists);
        }
        out << '\n';
    }
    return out.str();
}

} // namespace snnprob
