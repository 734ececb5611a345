#include "advgen/prompt/pool.hpp"

#include <algorithm>

#include "advgen/core/error.hpp"

namespace advgen::prompt {

std::string_view provenance_name(Provenance p) noexcept {
    return p == Provenance::seed ? "seed" : "human_accepted";
}

Provenance parse_provenance(std::string_view s) {
    if (s == "seed") return Provenance::seed;
    if (s == "human_accepted") return Provenance::human_accepted;
    fail(ErrorCode::validation, "unknown provenance '" + std::string(s) + "'");
}

void validate_sentence(std::string_view sentence) {
    require(sentence.find('\n') == std::string_view::npos && sentence.find('\r') == std::string_view::npos,
            "demonstration sentences must not contain newlines");
    require(sentence.find_first_not_of(" \t") != std::string_view::npos, "demonstration sentence is empty");
}

DemonstrationPool DemonstrationPool::from_sentences(std::string group, Label label,
                                                    const std::vector<std::string>& sentences, Provenance provenance) {
    DemonstrationPool pool(std::move(group), label);
    for (const auto& s : sentences) pool.add(s, provenance);
    return pool;
}

bool DemonstrationPool::contains(std::string_view sentence) const {
    return std::find(sentences_.begin(), sentences_.end(), sentence) != sentences_.end();
}

void DemonstrationPool::add(std::string sentence, Provenance provenance) {
    validate_sentence(sentence);
    if (contains(sentence)) fail(ErrorCode::duplicate, "sentence already in pool: " + sentence);
    sentences_.push_back(std::move(sentence));
    provenance_.push_back(provenance);
}

json DemonstrationPool::to_json() const {
    json prov = json::array();
    for (auto p : provenance_) prov.push_back(provenance_name(p));
    return {{"group", group_}, {"label", label_name(label_)}, {"sentences", sentences_}, {"provenance", prov}};
}

DemonstrationPool DemonstrationPool::from_json(const json& j) {
    try {
        DemonstrationPool pool(j.at("group").get<std::string>(), parse_label(j.at("label").get<std::string>()));
        const auto sentences = j.at("sentences").get<std::vector<std::string>>();
        const auto prov = j.value("provenance", std::vector<std::string>(sentences.size(), "seed"));
        require(prov.size() == sentences.size(), "provenance list length differs from sentence count");
        for (std::size_t i = 0; i < sentences.size(); ++i) pool.add(sentences[i], parse_provenance(prov[i]));
        return pool;
    } catch (const json::exception& e) {
        fail(ErrorCode::validation, std::string("bad pool json: ") + e.what());
    }
}

std::string pool_file_stem(std::string_view group, Label label) {
    std::string stem;
    for (unsigned char c : group) {
        c = static_cast<unsigned char>(std::tolower(c));
        const bool keep = (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_' || c == '-';
        stem += keep ? static_cast<char>(c) : '_';
    }
    require(!stem.empty(), "group name is empty");
    return stem + "." + std::string(label_name(label));
}

DemonstrationPool load_pool_files(const std::filesystem::path& txt, const std::filesystem::path& manifest) {
    if (!std::filesystem::exists(txt)) fail(ErrorCode::not_found, "no pool file " + txt.string());
    const auto sentences = read_lines(txt);
    json meta = read_json(manifest);
    meta["sentences"] = sentences;
    if (!meta.contains("provenance")) meta["provenance"] = std::vector<std::string>(sentences.size(), "seed");
    return DemonstrationPool::from_json(meta);
}

DemonstrationPool load_pool(const std::filesystem::path& dir, std::string_view group, Label label) {
    const auto stem = pool_file_stem(group, label);
    const auto txt = dir / (stem + ".txt");
    const auto manifest = dir / (stem + ".json");
    if (!std::filesystem::exists(txt)) {
        fail(ErrorCode::not_found, "no pool for " + std::string(group) + "/" + std::string(label_name(label)));
    }
    if (!std::filesystem::exists(manifest)) {
        return DemonstrationPool::from_sentences(std::string(group), label, read_lines(txt));
    }
    auto pool = load_pool_files(txt, manifest);
    require(pool.group() == group && pool.label() == label, "pool manifest does not match its file name");
    return pool;
}

void save_pool(const std::filesystem::path& dir, const DemonstrationPool& pool) {
    const auto stem = pool_file_stem(pool.group(), pool.label());
    std::string text;
    for (const auto& s : pool.sentences()) text += s + "\n";
    write_text(dir / (stem + ".txt"), text);
    auto manifest = pool.to_json();
    manifest.erase("sentences");
    write_json(dir / (stem + ".json"), manifest);
}

std::vector<DemonstrationPool> load_pools(const std::filesystem::path& dir) {
    std::vector<DemonstrationPool> pools;
    if (!std::filesystem::is_directory(dir)) fail(ErrorCode::not_found, "no pool directory " + dir.string());
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
        const auto& p = entry.path();
        if (p.extension() != ".json") continue;
        auto txt = p;
        txt.replace_extension(".txt");
        if (!std::filesystem::exists(txt)) continue;
        const json meta = read_json(p);
        if (!meta.is_object() || !meta.contains("group") || !meta.contains("label")) continue;
        pools.push_back(load_pool_files(txt, p));
    }
    std::sort(pools.begin(), pools.end(), [](const auto& a, const auto& b) {
        return std::pair(a.group(), label_value(a.label())) < std::pair(b.group(), label_value(b.label()));
    });
    return pools;
}

}  // namespace advgen::prompt
