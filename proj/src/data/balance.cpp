#include "advgen/data/balance.hpp"

#include <algorithm>
#include <array>
#include <map>

namespace advgen::data {

BalanceResult enforce_balance(std::span<const GenerationRecord> records, Rng& rng) {
    // group -> [benign ids, toxic ids]
    std::map<std::string, std::array<std::vector<std::size_t>, 2>> by_group;
    for (std::size_t i = 0; i < records.size(); ++i) {
        by_group[records[i].group][static_cast<std::size_t>(label_value(records[i].prompt_label))].push_back(i);
    }

    BalanceResult out;
    for (auto& [group, ids] : by_group) {
        if (ids[0].empty() || ids[1].empty()) {
            out.excluded.push_back(group);
            out.warnings.push_back("group '" + group + "' has no " + (ids[0].empty() ? "benign" : "toxic") +
                                   " records; excluded");
            continue;
        }
        const std::size_t m = std::min(ids[0].size(), ids[1].size());
        for (auto& side : ids) {
            if (side.size() > m) {
                rng.shuffle(std::span(side));
                side.resize(m);
            }
            out.kept.insert(out.kept.end(), side.begin(), side.end());
        }
    }
    std::sort(out.kept.begin(), out.kept.end());
    return out;
}

std::vector<GenerationRecord> select(std::span<const GenerationRecord> records, std::span<const std::size_t> ids) {
    std::vector<GenerationRecord> out;
    out.reserve(ids.size());
    for (auto i : ids) out.push_back(records[i]);
    return out;
}

}  // namespace advgen::data
