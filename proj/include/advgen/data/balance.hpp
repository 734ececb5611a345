#pragma once

#include <span>
#include <string>
#include <vector>

#include "advgen/core/rng.hpp"
#include "advgen/data/record.hpp"

namespace advgen::data {

struct BalanceResult {
    std::vector<std::size_t> kept;       // indices into the input, ascending
    std::vector<std::string> excluded;   // groups missing one label class
    std::vector<std::string> warnings;
};

/// Per group, keeps a uniform random subset of the majority label equal in
/// size to the minority label. Groups lacking either label are dropped.
BalanceResult enforce_balance(std::span<const GenerationRecord> records, Rng& rng);

std::vector<GenerationRecord> select(std::span<const GenerationRecord> records, std::span<const std::size_t> ids);

}  // namespace advgen::data
