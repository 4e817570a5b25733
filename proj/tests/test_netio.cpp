#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "snnprob/experiments.hpp"
#include "snnprob/netio.hpp"
#include "snnprob/rng.hpp"

using namespace snnprob;

namespace {

struct TempPath {
    std::string path;
    explicit TempPath(const std::string& name) : path("netio_test_" + name) {}
    ~TempPath() { std::remove(path.c_str()); }
};

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(in), {});
}

std::shared_ptr<const NetworkModel> random_model(std::uint64_t seed,
                                                 std::vector<std::uint32_t> layers,
                                                 ResetRule rule = ResetRule::ToZero) {
    Pcg32 rng = make_stream(seed, 0);
    std::vector<std::vector<std::vector<double>>> matrices;
    for (std::size_t l = 0; l + 1 < layers.size(); ++l) {
        std::vector<std::vector<double>> m(layers[l], std::vector<double>(layers[l + 1]));
        for (auto& row : m) {
            for (auto& w : row) {
                double u = rng.next_double();
                w = u < 0.2 ? 0.0 : (u < 0.7 ? 1.0 : -1.0) * rng.next_double();
            }
        }
        matrices.push_back(std::move(m));
    }
    std::vector<double> thresholds(layers.size() - 1, 1.0);
    return build_network(layers, matrices, thresholds, rule);
}

} // namespace

TEST_CASE("binary round trip reproduces the model exactly") {
    for (ResetRule rule : {ResetRule::ToZero, ResetRule::BySubtraction}) {
        auto model = random_model(1, {5, 9, 4}, rule);
        TempPath file("roundtrip.snn");
        save_network(*model, file.path);
        auto loaded = load_network(file.path);
        REQUIRE(*loaded == *model);

        // and save(load(f)) is byte-identical to f
        TempPath file2("roundtrip2.snn");
        save_network(*loaded, file2.path);
        REQUIRE(slurp(file.path) == slurp(file2.path));
    }
}

TEST_CASE("mnist1-shaped random network survives a round trip") {
    auto model = random_model(2, {49, 120, 120, 10});
    TempPath file("big.snn");
    save_network(*model, file.path);
    auto loaded = load_network(file.path);
    REQUIRE(*loaded == *model);
}

TEST_CASE("generated networks round trip including profiles and thresholds") {
    GenSpec spec;
    spec.profile = WeightProfile::Exponential;
    spec.layers = {12, 40, 6};
    spec.seed = 7;
    auto model = gen_network(spec);
    TempPath file("gen.snn");
    save_network(*model, file.path);
    auto loaded = load_network(file.path);
    REQUIRE(*loaded == *model);
}

TEST_CASE("truncated files fail with a parse error, not a crash") {
    auto model = random_model(3, {4, 7, 3});
    TempPath file("trunc.snn");
    save_network(*model, file.path);
    std::string bytes = slurp(file.path);
    for (std::size_t cut : {std::size_t{4}, std::size_t{15}, bytes.size() / 2,
                            bytes.size() - 3}) {
        TempPath partial("partial.snn");
        std::ofstream out(partial.path, std::ios::binary);
        out.write(bytes.data(), static_cast<std::streamsize>(cut));
        out.close();
        CHECK_THROWS_AS((void)load_network(partial.path), ParseError);
    }
}

TEST_CASE("bad magic and unknown flags are rejected") {
    TempPath file("magic.snn");
    std::ofstream(file.path, std::ios::binary) << "NOTModel-at-all-here";
    CHECK_THROWS_AS((void)load_network(file.path), ParseError);
    CHECK_THROWS_AS((void)load_network("no_such_file.snn"), ParseError);
}

TEST_CASE("out-of-bounds targets name the offending neuron") {
    // all-positive weights so neuron 0 certainly stores an excitatory pair first
    std::vector<std::vector<double>> m = {{0.5, 0.4, 0.3}, {0.2, 0.1, 0.6}, {0.9, 0.8, 0.7}};
    auto model = build_network({3, 3}, {m}, {1.0});
    TempPath file("target.snn");
    save_network(*model, file.path);
    std::string bytes = slurp(file.path);

    // Header: magic(8) count(4) sizes(8) flags(4). First neuron record starts
    // at 24: threshold(8) exc_count(4) then the first pair (weight f64,
    // target u32). Overwrite the first stored target with an invalid id.
    std::size_t pos = 24 + 8 + 4 + 8;
    std::uint32_t bogus = 900;
    bytes.replace(pos, 4, reinterpret_cast<const char*>(&bogus), 4);
    std::ofstream(file.path, std::ios::binary) << bytes;
    try {
        load_network(file.path);
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        std::string msg = e.what();
        CHECK(msg.find("neuron 0") != std::string::npos);
        CHECK(msg.find("900") != std::string::npos);
    }
}

TEST_CASE("targets in the same or earlier layer are rejected") {
    std::vector<std::vector<double>> m = {{0.5, 0.4, 0.3}, {0.2, 0.1, 0.6}, {0.9, 0.8, 0.7}};
    auto model = build_network({3, 3}, {m}, {1.0});
    TempPath file("selfloop.snn");
    save_network(*model, file.path);
    std::string bytes = slurp(file.path);
    std::size_t pos = 24 + 8 + 4 + 8;
    std::uint32_t same_layer = 1; // neuron 1 is in the input layer
    bytes.replace(pos, 4, reinterpret_cast<const char*>(&same_layer), 4);
    std::ofstream(file.path, std::ios::binary) << bytes;
    CHECK_THROWS_AS((void)load_network(file.path), ParseError);
}

TEST_CASE("text import builds the documented example") {
    TempPath file("net.txt");
    std::ofstream(file.path) << "# toy network\n"
                                "layers: 2 3 1\n"
                                "thresholds: 0.5 1.0\n"
                                "0.2 -0.5 0.9\n"
                                "0.0 0.3 0.3\n"
                                "1.0\n"
                                "-1.0\n"
                                "0.25\n";
    auto model = import_text_network(file.path);
    CHECK(model->layer_sizes == std::vector<std::uint32_t>{2, 3, 1});
    CHECK(model->thresholds[2] == 0.5);
    CHECK(model->thresholds[5] == 1.0);
    const SortedSynapseList& exc = model->synapses[0].excitatory;
    CHECK(exc.weights == std::vector<double>{0.9, 0.2});
    CHECK(exc.targets == std::vector<NeuronId>{4, 2});
    const SortedSynapseList& inh = model->synapses[0].inhibitory;
    CHECK(inh.weights == std::vector<double>{-0.5});

    // round trip through the binary format
    TempPath bin("net.snn");
    save_network(*model, bin.path);
    REQUIRE(*load_network(bin.path) == *model);
}

TEST_CASE("text import validates structure") {
    TempPath missing("missing.txt");
    std::ofstream(missing.path) << "layers: 2 2\nthresholds: 1.0\n0.1 0.2\n";
    CHECK_THROWS_AS((void)import_text_network(missing.path), ParseError); // short matrix

    TempPath trailing("trailing.txt");
    std::ofstream(trailing.path) << "layers: 1 1\nthresholds: 1.0\n0.5\nextra\n";
    CHECK_THROWS_AS((void)import_text_network(trailing.path), ParseError);

    TempPath header("header.txt");
    std::ofstream(header.path) << "sizes: 1 1\n";
    CHECK_THROWS_AS((void)import_text_network(header.path), ParseError);

    TempPath reset("reset.txt");
    std::ofstream(reset.path) << "layers: 1 1\nthresholds: 0.75\nreset: subtract\n0.5\n";
    CHECK(import_text_network(reset.path)->reset_rule == ResetRule::BySubtraction);
}
