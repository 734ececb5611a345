#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "advgen/core/io.hpp"
#include "advgen/core/journal.hpp"
#include "advgen/prompt/pool.hpp"

namespace advgen::prompt {

enum class Decision { accept, reject };

std::string_view decision_name(Decision d) noexcept;
Decision parse_decision(std::string_view s);

struct DecisionEntry {
    std::string group;
    Label label = Label::benign;
    std::string candidate;
    Decision decision = Decision::reject;
    std::string actor;
    std::string session;  // empty outside the curation service

    json to_json() const;  // tagged {"type": "decision", ...}
    static DecisionEntry from_json(const json& j);
    friend bool operator==(const DecisionEntry&, const DecisionEntry&) = default;
};

/// Applies one curation decision. Accept appends the candidate as
/// human_accepted; reject leaves the pool as is. Both are journaled when a
/// log is given. A duplicate accept raises E_DUPLICATE, leaves the pool
/// unchanged and writes nothing.
DemonstrationPool grow_pool(const DemonstrationPool& pool, const std::string& candidate, Decision decision,
                            const std::string& actor, AppendLog* journal = nullptr, const std::string& session = {});

/// Re-applies the accepted decisions for this pool's (group, label), in order.
/// Entries of other types or other pools are ignored.
DemonstrationPool replay(const DemonstrationPool& base, const std::vector<json>& entries);

}  // namespace advgen::prompt
