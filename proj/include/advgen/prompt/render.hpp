#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "advgen/core/rng.hpp"
#include "advgen/prompt/pool.hpp"

namespace advgen::prompt {

inline constexpr std::size_t kDefaultDemos = 5;

/// Uniform sample of n distinct pool sentences, in sampled order.
std::vector<std::string> sample_demos(const DemonstrationPool& pool, std::size_t n, Rng& rng);

/// "- s1\n- s2\n...- sn\n-"
std::string render_prompt(std::span<const std::string> demos);

/// Inverse of render_prompt; a string not in that format is a validation error.
std::vector<std::string> parse_prompt(std::string_view rendered);

}  // namespace advgen::prompt
