#pragma once

#include <memory>
#include <stdexcept>
#include <string>

#include "snnprob/network.hpp"

namespace snnprob {

/// Raised for malformed, truncated or inconsistent network files; the
/// message names the offending record.
class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Writes the SNNPROB1 binary container. Layout (all little-endian,
/// integers 32-bit, reals IEEE-754 64-bit):
///   magic "SNNPROB1" | layer count | layer sizes | flags |
///   per neuron: threshold, excitatory count, (weight, target) pairs in
///   sorted order, inhibitory count, pairs, 6 PWL breakpoints per sign
///   (short profiles pad by repeating their last breakpoint).
/// flags bit 0: reset-by-subtraction (otherwise reset-to-zero).
void save_network(const NetworkModel& model, const std::string& path);

/// Reads an SNNPROB1 file back; save(load(f)) is byte-identical to f.
/// Validates sortedness, signs, and that every target lies in a strictly
/// later layer.
std::shared_ptr<const NetworkModel> load_network(const std::string& path);

/// Imports the plain-text authoring format:
///   layers: <size> <size> ...
///   thresholds: <value per non-input layer>
///   reset: zero|subtract            (optional)
/// followed by one dense weight matrix per layer pair, row per source
/// neuron, whitespace-separated. '#' starts a comment.
std::shared_ptr<const NetworkModel> import_text_network(const std::string& path);

} // namespace snnprob
