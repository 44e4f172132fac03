#pragma once

#include <iosfwd>
#include <string>

#include "tfqkd/protosim.hpp"

namespace tfqkd::sim {

inline constexpr const char* kCountsSchema = "tfqkd-counts/1";

// Versioned JSON serialization of a simulation run: schema tag, parameter
// echo, round count, seed, sampler, and the category -> count map.
std::string counts_to_json(const ObservedCounts& counts,
                           const channel::PhysicalParams& params);

struct LoadedCounts {
  ObservedCounts counts;
  channel::PhysicalParams params;
};

// Parses and validates a counts document. Throws std::runtime_error on a
// schema mismatch or malformed payload.
LoadedCounts counts_from_json(const std::string& text);

}  // namespace tfqkd::sim
