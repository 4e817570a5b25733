#include "snnprob/netio.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <sstream>
#include <vector>

namespace snnprob {

namespace {

constexpr char kMagic[8] = {'S', 'N', 'N', 'P', 'R', 'O', 'B', '1'};
constexpr int kPwlSlots = PwlProfile::kPwlSegments + 1;

static_assert(std::endian::native == std::endian::little,
              "SNNPROB1 reader/writer assumes a little-endian host");

class Writer {
public:
    explicit Writer(const std::string& path) : out_(path, std::ios::binary) {
        if (!out_) throw std::runtime_error("cannot open '" + path + "' for writing");
    }
    void u32(std::uint32_t v) { out_.write(reinterpret_cast<const char*>(&v), 4); }
    void f64(double v) { out_.write(reinterpret_cast<const char*>(&v), 8); }
    void raw(const char* data, std::size_t n) { out_.write(data, n); }
    bool ok() const { return static_cast<bool>(out_); }

private:
    std::ofstream out_;
};

class Reader {
public:
    explicit Reader(const std::string& path) : in_(path, std::ios::binary), path_(path) {
        if (!in_) throw ParseError("cannot open network file '" + path + "'");
    }
    std::uint32_t u32(const std::string& what) {
        std::uint32_t v;
        read(&v, 4, what);
        return v;
    }
    double f64(const std::string& what) {
        double v;
        read(&v, 8, what);
        return v;
    }
    void raw(char* data, std::size_t n, const std::string& what) { read(data, n, what); }

private:
    void read(void* dst, std::size_t n, const std::string& what) {
        in_.read(reinterpret_cast<char*>(dst), static_cast<std::streamsize>(n));
        if (static_cast<std::size_t>(in_.gcount()) != n) {
            throw ParseError(path_ + ": unexpected end of file while reading " + what);
        }
    }
    std::ifstream in_;
    std::string path_;
};

void write_pairs(Writer& w, const SortedSynapseList& list) {
    w.u32(list.n_max());
    for (std::uint32_t i = 0; i < list.n_max(); ++i) {
        w.f64(list.weights[i]);
        w.u32(list.targets[i]);
    }
}

void write_profile(Writer& w, const PwlProfile& profile) {
    PwlBreakpoint last{0, 0.0};
    for (int slot = 0; slot < kPwlSlots; ++slot) {
        if (slot < static_cast<int>(profile.points.size())) last = profile.points[slot];
        w.u32(last.pos);
        w.f64(last.mag);
    }
}

SortedSynapseList read_pairs(Reader& r, const NetworkModel& model, NeuronId source, bool exc) {
    const std::string what =
        "neuron " + std::to_string(source) + (exc ? " excitatory list" : " inhibitory list");
    std::uint32_t count = r.u32(what + " synapse count");
    SortedSynapseList list;
    if (count > model.neuron_count()) {
        throw ParseError(what + ": synapse count " + std::to_string(count) +
                         " exceeds network size " + std::to_string(model.neuron_count()));
    }
    list.weights.reserve(count);
    list.targets.reserve(count);
    const std::uint32_t source_layer = model.layer_of(source);
    double prev_mag = std::numeric_limits<double>::infinity();
    for (std::uint32_t i = 0; i < count; ++i) {
        double weight = r.f64(what + " weight");
        std::uint32_t target = r.u32(what + " target");
        if (!std::isfinite(weight) || weight == 0.0 || (exc ? weight < 0.0 : weight > 0.0)) {
            throw ParseError(what + " entry " + std::to_string(i) + ": invalid weight " +
                             std::to_string(weight));
        }
        double mag = std::fabs(weight);
        if (mag > prev_mag) {
            throw ParseError(what + " entry " + std::to_string(i) +
                             ": weights not sorted by descending magnitude");
        }
        prev_mag = mag;
        if (target >= model.neuron_count()) {
            throw ParseError(what + " entry " + std::to_string(i) + ": target index " +
                             std::to_string(target) + " out of layer bounds (network has " +
                             std::to_string(model.neuron_count()) + " neurons)");
        }
        if (model.layer_of(target) <= source_layer) {
            throw ParseError(what + " entry " + std::to_string(i) + ": target " +
                             std::to_string(target) + " is not in a later layer");
        }
        list.weights.push_back(weight);
        list.targets.push_back(target);
    }
    list.w_extreme = list.weights.empty() ? 0.0 : list.weights.front();
    return list;
}

PwlProfile read_profile(Reader& r, std::uint32_t n_max, const std::string& what) {
    PwlProfile profile;
    for (int slot = 0; slot < kPwlSlots; ++slot) {
        PwlBreakpoint bp;
        bp.pos = r.u32(what + " breakpoint position");
        bp.mag = r.f64(what + " breakpoint weight");
        // Short profiles are padded by repeating their last breakpoint.
        if (!profile.points.empty() && bp.pos <= profile.points.back().pos) continue;
        profile.points.push_back(bp);
    }
    if (profile.points.size() == 1 && profile.points[0] == PwlBreakpoint{0, 0.0}) {
        profile.points.clear(); // empty-profile marker
    }
    if (n_max == 0) {
        if (!profile.points.empty()) {
            throw ParseError(what + ": profile present for an empty synapse list");
        }
        return profile;
    }
    if (profile.points.empty() || profile.points.front().pos != 0 ||
        profile.points.back().pos != n_max) {
        throw ParseError(what + ": breakpoints must span positions 0.." + std::to_string(n_max));
    }
    double prev = std::numeric_limits<double>::infinity();
    for (const PwlBreakpoint& bp : profile.points) {
        if (!std::isfinite(bp.mag) || bp.mag < 0.0 || bp.mag > prev) {
            throw ParseError(what + ": breakpoint weights must be non-increasing and finite");
        }
        prev = bp.mag;
    }
    return profile;
}

} // namespace

void save_network(const NetworkModel& model, const std::string& path) {
    Writer w(path);
    w.raw(kMagic, sizeof(kMagic));
    w.u32(model.layer_count());
    for (std::uint32_t size : model.layer_sizes) w.u32(size);
    w.u32(model.reset_rule == ResetRule::BySubtraction ? 1u : 0u);
    for (NeuronId id = 0; id < model.neuron_count(); ++id) {
        w.f64(model.thresholds[id]);
        const NeuronSynapses& lists = model.synapses[id];
        write_pairs(w, lists.excitatory);
        write_pairs(w, lists.inhibitory);
        write_profile(w, lists.excitatory.pwl);
        write_profile(w, lists.inhibitory.pwl);
    }
    if (!w.ok()) throw std::runtime_error("failed writing network to '" + path + "'");
}

std::shared_ptr<const NetworkModel> load_network(const std::string& path) {
    Reader r(path);
    char magic[8];
    r.raw(magic, sizeof(magic), "magic");
    if (std::memcmp(magic, kMagic, sizeof(magic)) != 0) {
        throw ParseError(path + ": not an SNNPROB1 file (bad magic)");
    }
    std::uint32_t layer_count = r.u32("layer count");
    if (layer_count < 2 || layer_count > 1024) {
        throw ParseError(path + ": implausible layer count " + std::to_string(layer_count));
    }

    auto model = std::make_shared<NetworkModel>();
    for (std::uint32_t l = 0; l < layer_count; ++l) {
        std::uint32_t size = r.u32("layer size");
        if (size == 0) throw ParseError(path + ": layer " + std::to_string(l) + " is empty");
        model->layer_sizes.push_back(size);
    }
    std::uint32_t flags = r.u32("reset flags");
    if (flags > 1u) {
        throw ParseError(path + ": unknown flag bits " + std::to_string(flags));
    }
    model->reset_rule = (flags & 1u) ? ResetRule::BySubtraction : ResetRule::ToZero;
    model->rebuild_offsets();
    model->synapses.resize(model->neuron_count());
    model->thresholds.assign(model->neuron_count(), 1.0);

    for (NeuronId id = 0; id < model->neuron_count(); ++id) {
        model->thresholds[id] = r.f64("neuron " + std::to_string(id) + " threshold");
        NeuronSynapses& lists = model->synapses[id];
        lists.excitatory = read_pairs(r, *model, id, true);
        lists.inhibitory = read_pairs(r, *model, id, false);
        lists.excitatory.pwl = read_profile(r, lists.excitatory.n_max(),
                                            "neuron " + std::to_string(id) + " excitatory pwl");
        lists.inhibitory.pwl = read_profile(r, lists.inhibitory.n_max(),
                                            "neuron " + std::to_string(id) + " inhibitory pwl");
    }
    return model;
}

std::shared_ptr<const NetworkModel> import_text_network(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open network file '" + path + "'");

    std::stringstream filtered;
    std::string line;
    while (std::getline(in, line)) {
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        filtered << line << '\n';
    }

    std::string token;
    std::vector<std::uint32_t> layers;
    std::vector<double> thresholds;
    ResetRule reset = ResetRule::ToZero;

    if (!(filtered >> token) || token != "layers:") {
        throw ParseError(path + ": expected 'layers:' header");
    }
    while (filtered >> token && token != "thresholds:") {
        try {
            layers.push_back(static_cast<std::uint32_t>(std::stoul(token)));
        } catch (const std::exception&) {
            throw ParseError(path + ": bad layer size '" + token + "'");
        }
    }
    if (layers.size() < 2) throw ParseError(path + ": need at least two layers");
    if (token != "thresholds:") throw ParseError(path + ": expected 'thresholds:' header");
    for (std::size_t l = 0; l + 1 < layers.size(); ++l) {
        double value;
        if (!(filtered >> value)) {
            throw ParseError(path + ": expected " + std::to_string(layers.size() - 1) +
                             " thresholds");
        }
        thresholds.push_back(value);
    }

    std::streampos before_reset = filtered.tellg();
    if (filtered >> token && token == "reset:") {
        if (!(filtered >> token)) throw ParseError(path + ": missing reset rule");
        if (token == "zero") {
            reset = ResetRule::ToZero;
        } else if (token == "subtract") {
            reset = ResetRule::BySubtraction;
        } else {
            throw ParseError(path + ": unknown reset rule '" + token + "'");
        }
    } else {
        filtered.clear();
        filtered.seekg(before_reset);
    }

    std::vector<std::vector<std::vector<double>>> matrices;
    for (std::size_t l = 0; l + 1 < layers.size(); ++l) {
        std::vector<std::vector<double>> matrix(layers[l],
                                                std::vector<double>(layers[l + 1], 0.0));
        for (std::uint32_t i = 0; i < layers[l]; ++i) {
            for (std::uint32_t j = 0; j < layers[l + 1]; ++j) {
                if (!(filtered >> matrix[i][j])) {
                    throw ParseError(path + ": matrix " + std::to_string(l) + " row " +
                                     std::to_string(i) + ": expected " +
                                     std::to_string(layers[l + 1]) + " weights");
                }
            }
        }
        matrices.push_back(std::move(matrix));
    }
    if (filtered >> token) {
        throw ParseError(path + ": trailing content '" + token + "' after last matrix");
    }
    return build_network(layers, matrices, thresholds, reset);
}

} // namespace snnprob
