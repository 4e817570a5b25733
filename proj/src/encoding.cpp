#include "snnprob/encoding.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace snnprob {

std::vector<NeuronId> RateEncoder::encode_step(std::span<const double> intensities,
                                               Pcg32& rng) const {
    std::vector<NeuronId> spikes;
    for (std::size_t i = 0; i < intensities.size(); ++i) {
        double p = std::min(intensities[i] * rate_scale, 1.0);
        double u = rng.next_double();
        if (u < p) {
            spikes.push_back(static_cast<NeuronId>(i));
        }
    }
    return spikes;
}

namespace {

bool parse_double(const std::string& field, double& out) {
    try {
        std::size_t used = 0;
        out = std::stod(field, &used);
        while (used < field.size() && std::isspace(static_cast<unsigned char>(field[used]))) {
            ++used;
        }
        return used == field.size();
    } catch (const std::exception&) {
        return false;
    }
}

} // namespace

Dataset load_dataset(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open dataset file '" + path + "'");
    }
    Dataset ds;
    std::string line;
    std::size_t line_no = 0;
    bool first_data_line = true;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#') continue;
        if (!line.empty() && line.back() == '\r') line.pop_back();

        std::vector<std::string> fields;
        std::stringstream ss(line);
        std::string field;
        while (std::getline(ss, field, ',')) fields.push_back(field);
        if (fields.empty()) continue;

        double label_value = 0.0;
        if (!parse_double(fields[0], label_value)) {
            if (first_data_line) continue; // header line
            throw std::runtime_error(path + ":" + std::to_string(line_no) +
                                     ": label '" + fields[0] + "' is not a number");
        }
        if (label_value != std::floor(label_value)) {
            throw std::runtime_error(path + ":" + std::to_string(line_no) +
                                     ": label must be an integer, got '" + fields[0] + "'");
        }

        if (first_data_line) {
            ds.feature_count = fields.size() - 1;
            if (ds.feature_count == 0) {
                throw std::runtime_error(path + ":" + std::to_string(line_no) +
                                         ": row has a label but no intensities");
            }
            first_data_line = false;
        } else if (fields.size() - 1 != ds.feature_count) {
            throw std::runtime_error(path + ":" + std::to_string(line_no) + ": expected " +
                                     std::to_string(ds.feature_count) + " intensities, got " +
                                     std::to_string(fields.size() - 1));
        }

        for (std::size_t c = 1; c < fields.size(); ++c) {
            double v = 0.0;
            if (!parse_double(fields[c], v)) {
                throw std::runtime_error(path + ":" + std::to_string(line_no) + ": column " +
                                         std::to_string(c) + " ('" + fields[c] +
                                         "') is not a number");
            }
            if (v < 0.0 || v > 1.0) {
                throw std::runtime_error(path + ":" + std::to_string(line_no) + ": column " +
                                         std::to_string(c) + " intensity " + fields[c] +
                                         " outside [0, 1]");
            }
            ds.intensities.push_back(v);
        }
        ds.labels.push_back(static_cast<int>(label_value));
    }
    if (ds.labels.empty()) {
        throw std::runtime_error("dataset '" + path + "' contains no samples");
    }
    return ds;
}

Dataset random_dataset(std::size_t features, std::size_t rows, std::uint64_t seed) {
    Dataset ds;
    ds.feature_count = features;
    ds.intensities.reserve(features * rows);
    Pcg32 rng = make_stream(seed, 0x64617461ULL); // "data"
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < features; ++c) {
            ds.intensities.push_back(rng.next_double());
        }
        ds.labels.push_back(0);
    }
    return ds;
}

} // namespace snnprob
