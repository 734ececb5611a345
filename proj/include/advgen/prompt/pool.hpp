#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "advgen/core/io.hpp"
#include "advgen/core/label.hpp"

namespace advgen::prompt {

enum class Provenance { seed, human_accepted };

std::string_view provenance_name(Provenance p) noexcept;
Provenance parse_provenance(std::string_view s);

inline constexpr std::size_t kRecommendedMinPool = 20;
inline constexpr std::size_t kRecommendedMaxPool = 50;

/// Demonstration sentences for one (group, label). Append-only; sentences are
/// unique by exact match.
class DemonstrationPool {
public:
    DemonstrationPool() = default;
    DemonstrationPool(std::string group, Label label) : group_(std::move(group)), label_(label) {}

    /// Raises validation on newline-bearing or empty sentences and duplicate on repeats.
    static DemonstrationPool from_sentences(std::string group, Label label, const std::vector<std::string>& sentences,
                                            Provenance provenance = Provenance::seed);

    const std::string& group() const noexcept { return group_; }
    Label label() const noexcept { return label_; }
    const std::vector<std::string>& sentences() const noexcept { return sentences_; }
    const std::vector<Provenance>& provenance() const noexcept { return provenance_; }
    std::size_t size() const noexcept { return sentences_.size(); }
    bool contains(std::string_view sentence) const;

    void add(std::string sentence, Provenance provenance);

    /// True when the size is outside the recommended 20-50 range.
    bool size_warning() const noexcept {
        return size() < kRecommendedMinPool || size() > kRecommendedMaxPool;
    }

    json to_json() const;  // {group, label, sentences, provenance}
    static DemonstrationPool from_json(const json& j);

    friend bool operator==(const DemonstrationPool&, const DemonstrationPool&) = default;

private:
    std::string group_;
    Label label_ = Label::benign;
    std::vector<std::string> sentences_;
    std::vector<Provenance> provenance_;
};

/// Demonstration text must be a single non-blank line.
void validate_sentence(std::string_view sentence);

/// File stem "<group>.<label>" with the group lowercased and every character
/// outside [a-z0-9_-] replaced by '_'.
std::string pool_file_stem(std::string_view group, Label label);

/// Reads <stem>.txt and the <stem>.json manifest. A missing manifest means all
/// sentences are seeds; a missing text file is not_found.
DemonstrationPool load_pool(const std::filesystem::path& dir, std::string_view group, Label label);
DemonstrationPool load_pool_files(const std::filesystem::path& txt, const std::filesystem::path& manifest);
void save_pool(const std::filesystem::path& dir, const DemonstrationPool& pool);

/// Every pool whose manifest is in `dir`, sorted by (group, label).
std::vector<DemonstrationPool> load_pools(const std::filesystem::path& dir);

}  // namespace advgen::prompt
