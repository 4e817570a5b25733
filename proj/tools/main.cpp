#include <CLI11.hpp>

#include <cmath>

#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "snnprob/experiments.hpp"
#include "snnprob/netio.hpp"

namespace {

using namespace snnprob;

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
    out << content;
    if (!out) throw std::runtime_error("failed writing '" + path + "'");
}

std::vector<Strategy> parse_strategies(const std::vector<std::string>& names) {
    std::vector<Strategy> out;
    for (const std::string& name : names) out.push_back(strategy_from_name(name));
    return out;
}

struct CommonOpts {
    std::string network;
    std::string dataset;
    std::vector<std::string> strategies = {"det", "scan", "bs", "ri", "tr", "pwl"};
    std::vector<std::uint64_t> seeds = {1};
    std::size_t samples = 0;
    double rate_scale = 1.0;
    unsigned threads = 1;
    std::string out;
};

int cmd_gen(const std::string& profile, const std::string& import_path,
            const std::vector<std::uint32_t>& layers, std::uint64_t seed, double w_max,
            double exc_fraction, double threshold_scale, const std::string& reset,
            const std::string& out) {
    std::shared_ptr<const NetworkModel> model;
    if (!import_path.empty()) {
        model = import_text_network(import_path);
    } else {
        GenSpec spec;
        spec.profile = profile_from_name(profile);
        spec.layers = layers;
        spec.seed = seed;
        spec.w_max = w_max;
        spec.exc_fraction = exc_fraction;
        spec.threshold_scale = threshold_scale;
        spec.reset = reset == "subtract" ? ResetRule::BySubtraction : ResetRule::ToZero;
        model = gen_network(spec);
    }
    save_network(*model, out);
    std::cout << "wrote " << out << ": ";
    for (std::size_t l = 0; l < model->layer_sizes.size(); ++l) {
        std::cout << (l ? "-" : "") << model->layer_sizes[l];
    }
    std::cout << " (" << model->neuron_count() << " neurons)\n";
    return 0;
}

ExperimentSpec make_spec(const CommonOpts& opts, std::size_t random_inputs,
                         std::uint64_t data_seed) {
    ExperimentSpec spec;
    spec.model = load_network(opts.network);
    if (!opts.dataset.empty()) {
        spec.dataset = load_dataset(opts.dataset);
        spec.dataset_name = opts.dataset;
    } else if (random_inputs > 0) {
        spec.dataset = random_dataset(spec.model->input_size(), random_inputs, data_seed);
        spec.dataset_name = "random";
    } else {
        throw std::runtime_error("need --dataset or --random-inputs");
    }
    spec.network_name = opts.network;
    spec.strategies = parse_strategies(opts.strategies);
    spec.seeds = opts.seeds;
    spec.samples = opts.samples;
    spec.rate_scale = opts.rate_scale;
    spec.threads = opts.threads;
    return spec;
}

int cmd_run_accuracy(const CommonOpts& opts, const std::vector<std::uint32_t>& checkpoints) {
    ExperimentSpec spec = make_spec(opts, 0, 0);
    spec.checkpoints = checkpoints;
    AccuracyTable table = run_accuracy_experiment(spec);
    std::string csv = accuracy_csv(spec, table);
    if (!opts.out.empty()) write_file(opts.out, csv);

    std::cout << "accuracy over " << spec.effective_samples() << " samples, "
              << spec.seeds.size() << " seed(s)\n";
    for (Strategy s : spec.strategies) {
        std::cout << "  " << strategy_name(s) << ":";
        for (std::uint32_t cp : spec.checkpoints) {
            double acc = 0.0, agree = 0.0;
            for (std::uint64_t seed : spec.seeds) {
                const AccuracyRow& row = table.find(s, seed, cp);
                acc += row.accuracy();
                agree += row.agreement();
            }
            acc /= spec.seeds.size();
            agree /= spec.seeds.size();
            std::cout << "  @" << cp << " acc " << acc << " agree " << agree;
        }
        std::cout << '\n';
    }
    if (!opts.out.empty()) std::cout << "wrote " << opts.out << '\n';
    return 0;
}

int cmd_run_maps(const CommonOpts& opts, const std::vector<double>& fractions,
                 std::uint32_t steps, std::size_t random_inputs) {
    ExperimentSpec spec = make_spec(opts, random_inputs, opts.seeds.front());
    spec.onchip_fractions = fractions;
    spec.steps = steps;
    MapsTable table = run_maps_experiment(spec);
    std::string csv = maps_csv(spec, table);
    if (!opts.out.empty()) write_file(opts.out, csv);

    std::cout << "maps over " << spec.effective_samples() << " samples x " << steps
              << " steps\n";
    for (const MapsRow& row : table.rows) {
        std::cout << "  " << strategy_name(row.strategy) << " f=" << row.onchip_fraction
                  << " maps " << row.ledger.maps() << " offchip/det0 "
                  << (row.offchip_vs_det0 ? std::to_string(*row.offchip_vs_det0) : "n/a")
                  << '\n';
    }
    if (!opts.out.empty()) std::cout << "wrote " << opts.out << '\n';
    return 0;
}

int cmd_inspect(const std::string& network, const std::string& csv_out, int curve_neuron) {
    auto model = load_network(network);
    auto stats = network_stats(*model);
    std::cout << stats_summary(*model, stats);
    if (!csv_out.empty()) {
        write_file(csv_out, stats_csv(stats));
        std::cout << "wrote " << csv_out << '\n';
    }
    if (curve_neuron >= 0) {
        // Normalized sorted weight curve of one neuron: position and weight
        // both scaled to [0, 1], plus the expected termination fraction.
        auto id = static_cast<NeuronId>(curve_neuron);
        if (id >= model->neuron_count()) {
            throw std::runtime_error("curve neuron " + std::to_string(id) +
                                     " outside network of size " +
                                     std::to_string(model->neuron_count()));
        }
        std::cout << "sign,position_fraction,weight_fraction\n";
        for (bool excit : {true, false}) {
            const SortedSynapseList& list =
                excit ? model->synapses[id].excitatory : model->synapses[id].inhibitory;
            if (list.empty()) continue;
            const char* sign = excit ? "exc" : "inh";
            double w_max = std::fabs(list.w_extreme);
            for (std::uint32_t t = 0; t < list.n_max(); ++t) {
                std::cout << sign << ',' << double(t + 1) / list.n_max() << ','
                          << std::fabs(list.weights[t]) / w_max << '\n';
            }
            std::cout << "# " << sign << " expected termination fraction: "
                      << expected_termpt(list) / list.n_max() << '\n';
        }
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"probabilistic spike propagation engine"};
    app.require_subcommand(1);

    // gen
    auto* gen = app.add_subcommand("gen", "generate or import a network file");
    std::string profile = "linear", import_path, reset = "zero", gen_out;
    std::vector<std::uint32_t> layers = {64, 256, 10};
    std::uint64_t gen_seed = 1;
    double w_max = 1.0, exc_fraction = 0.8, threshold_scale = 1.0;
    gen->add_option("--profile", profile, "weight profile: linear|exponential");
    gen->add_option("--import", import_path, "import a plain-text network instead");
    gen->add_option("--layers", layers, "layer sizes")->delimiter(',');
    gen->add_option("--seed", gen_seed, "generator seed");
    gen->add_option("--w-max", w_max, "largest weight magnitude");
    gen->add_option("--exc-fraction", exc_fraction, "probability a synapse is excitatory");
    gen->add_option("--threshold-scale", threshold_scale,
                    "threshold = scale * mean positive fan-in");
    gen->add_option("--reset", reset, "reset rule: zero|subtract");
    gen->add_option("--out", gen_out, "output .snn path")->required();

    // shared options builder
    auto add_common = [](CLI::App* cmd, CommonOpts& opts, bool dataset_required) {
        cmd->add_option("--network", opts.network, "SNNPROB1 network file")->required();
        auto* ds = cmd->add_option("--dataset", opts.dataset, "CSV dataset file");
        if (dataset_required) ds->required();
        cmd->add_option("--strategy", opts.strategies, "strategies (det scan bs ri tr pwl)")
            ->delimiter(',');
        cmd->add_option("--seed", opts.seeds, "seeds (repeatable)")->delimiter(',');
        cmd->add_option("--samples", opts.samples, "sample count (0 = whole dataset)");
        cmd->add_option("--rate-scale", opts.rate_scale, "input spike rate scale in (0,1]");
        cmd->add_option("--threads", opts.threads, "worker threads");
        cmd->add_option("--out", opts.out, "output CSV path");
    };

    auto* acc = app.add_subcommand("run-accuracy", "accuracy/agreement vs timestep checkpoints");
    CommonOpts acc_opts;
    std::vector<std::uint32_t> checkpoints = {100, 200, 300, 1000};
    add_common(acc, acc_opts, true);
    acc->add_option("--checkpoints", checkpoints, "timestep checkpoints")->delimiter(',');

    auto* maps = app.add_subcommand("run-maps", "memory accesses per spike vs on-chip fraction");
    CommonOpts maps_opts;
    std::vector<double> fractions = {0.0, 0.2, 0.4, 0.6, 0.8};
    std::uint32_t steps = 100;
    std::size_t random_inputs = 0;
    add_common(maps, maps_opts, false);
    maps->add_option("--onchip", fractions, "on-chip fractions")->delimiter(',');
    maps->add_option("--steps", steps, "timesteps per sample");
    maps->add_option("--random-inputs", random_inputs,
                     "use N random-intensity samples instead of a dataset");

    auto* inspect = app.add_subcommand("inspect", "per-neuron profile statistics");
    std::string inspect_network, inspect_csv;
    int curve_neuron = -1;
    inspect->add_option("--network", inspect_network, "SNNPROB1 network file")->required();
    inspect->add_option("--csv", inspect_csv, "write per-list stats CSV");
    inspect->add_option("--curve", curve_neuron, "print one neuron's normalized sorted curve");

    CLI11_PARSE(app, argc, argv);

    try {
        if (gen->parsed()) {
            return cmd_gen(profile, import_path, layers, gen_seed, w_max, exc_fraction,
                           threshold_scale, reset, gen_out);
        }
        if (acc->parsed()) return cmd_run_accuracy(acc_opts, checkpoints);
        if (maps->parsed()) return cmd_run_maps(maps_opts, fractions, steps, random_inputs);
        if (inspect->parsed()) return cmd_inspect(inspect_network, inspect_csv, curve_neuron);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
