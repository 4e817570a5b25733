#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <memory>

#include "snnprob/experiments.hpp"
#include "snnprob/netio.hpp"

namespace py = pybind11;
using namespace snnprob;

namespace {

// pybind11 holds mutable shared_ptrs; the model stays immutable because no
// mutating member is exposed.
std::shared_ptr<NetworkModel> unconst(std::shared_ptr<const NetworkModel> model) {
    return std::const_pointer_cast<NetworkModel>(std::move(model));
}

ExperimentSpec spec_from_args(std::shared_ptr<NetworkModel> model, const Dataset& dataset,
                              const std::vector<std::string>& strategies,
                              const std::vector<std::uint64_t>& seeds, std::size_t samples,
                              double rate_scale, unsigned threads) {
    ExperimentSpec spec;
    spec.model = model;
    spec.dataset = dataset;
    for (const std::string& name : strategies) {
        spec.strategies.push_back(strategy_from_name(name));
    }
    spec.seeds = seeds;
    spec.samples = samples;
    spec.rate_scale = rate_scale;
    spec.threads = threads;
    return spec;
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Spiking-network inference with probabilistic spike propagation";

    py::register_exception<ParseError>(m, "ParseError");

    py::class_<Pcg32>(m, "Rng")
        .def(py::init([](std::uint64_t seed, std::uint64_t key) {
                 return make_stream(seed, key);
             }),
             py::arg("seed"), py::arg("key") = 0)
        .def("next_double", &Pcg32::next_double)
        .def("next_below", &Pcg32::next_below, py::arg("bound"));

    py::class_<PlacementPolicy>(m, "PlacementPolicy")
        .def(py::init([](double fraction) { return PlacementPolicy{fraction}; }),
             py::arg("onchip_fraction") = 0.0)
        .def_readwrite("onchip_fraction", &PlacementPolicy::onchip_fraction)
        .def("onchip_prefix", &PlacementPolicy::onchip_prefix, py::arg("n_max"));

    py::class_<AccessLedger>(m, "AccessLedger")
        .def(py::init<>())
        .def_readonly("spikes", &AccessLedger::spikes)
        .def_readonly("weight_reads_on", &AccessLedger::weight_reads_on)
        .def_readonly("weight_reads_off", &AccessLedger::weight_reads_off)
        .def_readonly("index_reads_on", &AccessLedger::index_reads_on)
        .def_readonly("index_reads_off", &AccessLedger::index_reads_off)
        .def("total_reads", &AccessLedger::total_reads)
        .def("offchip_reads", &AccessLedger::offchip_reads)
        .def("maps", &AccessLedger::maps)
        .def("merge", &AccessLedger::merge, py::arg("other"));

    m.def("normalized_offchip", &normalized_offchip, py::arg("strategy"), py::arg("det_f0"));

    py::class_<PwlBreakpoint>(m, "PwlBreakpoint")
        .def_readonly("pos", &PwlBreakpoint::pos)
        .def_readonly("mag", &PwlBreakpoint::mag);

    py::class_<PwlProfile>(m, "PwlProfile")
        .def_readonly("points", &PwlProfile::points)
        .def("empty", &PwlProfile::empty);

    py::class_<SortedSynapseList>(m, "SortedSynapseList")
        .def_readonly("weights", &SortedSynapseList::weights)
        .def_readonly("targets", &SortedSynapseList::targets)
        .def_readonly("w_extreme", &SortedSynapseList::w_extreme)
        .def_readonly("pwl", &SortedSynapseList::pwl)
        .def("n_max", &SortedSynapseList::n_max)
        .def("empty", &SortedSynapseList::empty);

    m.def(
        "build_sorted_lists",
        [](const std::vector<double>& dense_row, NeuronId first_target) {
            return build_sorted_lists(dense_row, first_target);
        },
        py::arg("dense_row"), py::arg("first_target") = 0);
    m.def("expected_termpt", &expected_termpt, py::arg("list"));
    m.def("pwl_invert", &pwl_invert, py::arg("profile"), py::arg("r"), py::arg("n_max"));

    m.def("termpt_scan",
          [](const SortedSynapseList& list, double r) { return termpt_scan(list, r).termpt; });
    m.def("termpt_binary_search", [](const SortedSynapseList& list, double r) {
        return termpt_binary_search(list, r).termpt;
    });
    m.def("termpt_pwl", [](const SortedSynapseList& list, double r) {
        return termpt_pwl_at(list, r).termpt;
    });
    m.def("termpt_random_index", [](const SortedSynapseList& list, Pcg32& rng) {
        return termpt_random_index(list, rng).termpt;
    });
    m.def("termpt_transform", [](const SortedSynapseList& list, Pcg32& rng) {
        return termpt_transform(list, rng).termpt;
    });
    m.def("draw_r", &draw_r, py::arg("list"), py::arg("rng"));

    py::class_<NetworkModel, std::shared_ptr<NetworkModel>>(m, "NetworkModel")
        .def_property_readonly("layer_sizes",
                               [](const NetworkModel& model) { return model.layer_sizes; })
        .def_property_readonly("reset_rule",
                               [](const NetworkModel& model) {
                                   return model.reset_rule == ResetRule::ToZero ? "zero"
                                                                                : "subtract";
                               })
        .def("neuron_count", &NetworkModel::neuron_count)
        .def("input_size", &NetworkModel::input_size)
        .def("output_size", &NetworkModel::output_size)
        .def("threshold", [](const NetworkModel& model, NeuronId id) {
            return model.thresholds.at(id);
        })
        .def("synapses",
             [](const NetworkModel& model, NeuronId id) {
                 const NeuronSynapses& lists = model.synapses.at(id);
                 return py::make_tuple(lists.excitatory, lists.inhibitory);
             })
        .def("__eq__", [](const NetworkModel& a, const NetworkModel& b) { return a == b; });

    py::class_<ClassifyResult>(m, "ClassifyResult")
        .def_readonly("label", &ClassifyResult::label)
        .def_readonly("no_activity", &ClassifyResult::no_activity);

    py::class_<Network>(m, "Network")
        .def(py::init([](std::shared_ptr<NetworkModel> model, std::uint64_t seed) {
                 return Network(std::move(model), seed);
             }),
             py::arg("model"), py::arg("seed") = 0)
        .def("reset", &Network::reset, py::arg("seed"))
        .def(
            "step",
            [](Network& net, const std::vector<NeuronId>& inputs, const std::string& strategy,
               AccessLedger& ledger, const PlacementPolicy& policy) {
                return net.step(inputs, strategy_from_name(strategy), ledger, policy);
            },
            py::arg("input_spikes"), py::arg("strategy"), py::arg("ledger"),
            py::arg("policy") = PlacementPolicy{})
        .def("update_neuron", &Network::update_neuron, py::arg("neuron"), py::arg("weight"))
        .def("classify", &Network::classify)
        .def("v_mem", &Network::v_mem, py::arg("neuron"))
        .def("output_spike_counts", &Network::output_spike_counts)
        .def("steps_run", &Network::steps_run);

    py::class_<Dataset>(m, "Dataset")
        .def_readonly("feature_count", &Dataset::feature_count)
        .def_readonly("labels", &Dataset::labels)
        .def("__len__", &Dataset::size)
        .def("row", [](const Dataset& ds, std::size_t i) {
            auto row = ds.row(i);
            return std::vector<double>(row.begin(), row.end());
        });

    m.def("load_dataset", &load_dataset, py::arg("path"));
    m.def("random_dataset", &random_dataset, py::arg("features"), py::arg("rows"),
          py::arg("seed"));

    m.def(
        "load_network",
        [](const std::string& path) { return unconst(load_network(path)); }, py::arg("path"));
    m.def(
        "save_network",
        [](std::shared_ptr<NetworkModel> model, const std::string& path) {
            save_network(*model, path);
        },
        py::arg("model"), py::arg("path"));
    m.def(
        "import_text_network",
        [](const std::string& path) { return unconst(import_text_network(path)); },
        py::arg("path"));

    m.def(
        "gen_network",
        [](const std::string& profile, const std::vector<std::uint32_t>& layers,
           std::uint64_t seed, double w_max, double exc_fraction, double threshold_scale,
           const std::string& reset) {
            GenSpec spec;
            spec.profile = profile_from_name(profile);
            spec.layers = layers;
            spec.seed = seed;
            spec.w_max = w_max;
            spec.exc_fraction = exc_fraction;
            spec.threshold_scale = threshold_scale;
            spec.reset = reset == "subtract" ? ResetRule::BySubtraction : ResetRule::ToZero;
            return unconst(gen_network(spec));
        },
        py::arg("profile"), py::arg("layers"), py::arg("seed") = 1, py::arg("w_max") = 1.0,
        py::arg("exc_fraction") = 0.8, py::arg("threshold_scale") = 1.0,
        py::arg("reset") = "zero");

    m.def(
        "run_accuracy",
        [](std::shared_ptr<NetworkModel> model, const Dataset& dataset,
           const std::vector<std::string>& strategies,
           const std::vector<std::uint32_t>& checkpoints, const std::vector<std::uint64_t>& seeds,
           std::size_t samples, double rate_scale, unsigned threads) {
            ExperimentSpec spec = spec_from_args(std::move(model), dataset, strategies, seeds,
                                                 samples, rate_scale, threads);
            spec.checkpoints = checkpoints;
            AccuracyTable table = run_accuracy_experiment(spec);
            py::list rows;
            for (const AccuracyRow& row : table.rows) {
                py::dict d;
                d["strategy"] = strategy_name(row.strategy);
                d["seed"] = row.seed;
                d["checkpoint"] = row.checkpoint;
                d["samples"] = row.samples;
                d["correct"] = row.correct;
                d["accuracy"] = row.accuracy();
                d["agree_with_det"] = row.agree_with_det;
                d["agreement"] = row.agreement();
                d["no_activity"] = row.no_activity;
                rows.append(d);
            }
            return py::make_tuple(rows, accuracy_csv(spec, table));
        },
        py::arg("model"), py::arg("dataset"), py::arg("strategies"),
        py::arg("checkpoints") = std::vector<std::uint32_t>{100, 200, 300, 1000},
        py::arg("seeds") = std::vector<std::uint64_t>{1}, py::arg("samples") = 0,
        py::arg("rate_scale") = 1.0, py::arg("threads") = 1);

    m.def(
        "run_maps",
        [](std::shared_ptr<NetworkModel> model, const Dataset& dataset,
           const std::vector<std::string>& strategies, const std::vector<double>& fractions,
           std::uint32_t steps, const std::vector<std::uint64_t>& seeds, std::size_t samples,
           double rate_scale, unsigned threads) {
            ExperimentSpec spec = spec_from_args(std::move(model), dataset, strategies, seeds,
                                                 samples, rate_scale, threads);
            spec.onchip_fractions = fractions;
            spec.steps = steps;
            MapsTable table = run_maps_experiment(spec);
            py::list rows;
            for (const MapsRow& row : table.rows) {
                py::dict d;
                d["strategy"] = strategy_name(row.strategy);
                d["onchip_fraction"] = row.onchip_fraction;
                d["seed"] = row.seed;
                d["samples"] = row.samples;
                d["steps"] = row.steps;
                d["spikes"] = row.ledger.spikes;
                d["weight_reads_on"] = row.ledger.weight_reads_on;
                d["weight_reads_off"] = row.ledger.weight_reads_off;
                d["index_reads_on"] = row.ledger.index_reads_on;
                d["index_reads_off"] = row.ledger.index_reads_off;
                d["maps"] = row.ledger.maps();
                if (row.offchip_vs_det0) {
                    d["offchip_vs_det0"] = *row.offchip_vs_det0;
                } else {
                    d["offchip_vs_det0"] = py::none();
                }
                rows.append(d);
            }
            return py::make_tuple(rows, maps_csv(spec, table));
        },
        py::arg("model"), py::arg("dataset"), py::arg("strategies"),
        py::arg("fractions") = std::vector<double>{0.0, 0.2, 0.4, 0.6, 0.8},
        py::arg("steps") = 100, py::arg("seeds") = std::vector<std::uint64_t>{1},
        py::arg("samples") = 0, py::arg("rate_scale") = 1.0, py::arg("threads") = 1);

    m.def(
        "network_stats_csv",
        [](std::shared_ptr<NetworkModel> model) { return stats_csv(network_stats(*model)); },
        py::arg("model"));
}
