#include "advgen/data/stats.hpp"

#include <cmath>
#include <map>
#include <sstream>

#include <fmt/format.h>

#include "advgen/core/error.hpp"

namespace advgen::data {

namespace {

struct Accumulator {
    std::size_t n = 0;
    double sum = 0.0;
    double sum_sq = 0.0;
    std::size_t implicit = 0;

    void add(double chars, bool is_implicit) {
        ++n;
        sum += chars;
        sum_sq += chars * chars;
        implicit += is_implicit;
    }

    StatsRow row(std::string key, std::string label) const {
        StatsRow r{std::move(key), std::move(label), n, 0.0, 0.0, 0.0};
        if (n == 0) return r;
        const double dn = static_cast<double>(n);
        r.mean_chars = sum / dn;
        r.std_chars = std::sqrt(std::max(0.0, sum_sq / dn - r.mean_chars * r.mean_chars));
        r.implicit_pct = 100.0 * static_cast<double>(implicit) / dn;
        return r;
    }
};

json row_json(const StatsRow& r) {
    json j{{"count", r.count}, {"mean_chars", r.mean_chars}, {"std_chars", r.std_chars},
           {"implicit_pct", r.implicit_pct}};
    return j;
}

}  // namespace

std::size_t char_count(std::string_view utf8) noexcept {
    std::size_t n = 0;
    for (unsigned char c : utf8) n += (c & 0xC0) != 0x80;
    return n;
}

DatasetStats dataset_stats(std::span<const GenerationRecord> records, const ProfanityLexicon& lexicon) {
    require(!records.empty(), "dataset_stats needs at least one record");
    std::map<std::pair<std::string, int>, Accumulator> groups;
    std::map<std::string, Accumulator> methods;
    Accumulator total;

    for (const auto& r : records) {
        const auto chars = static_cast<double>(char_count(r.generation));
        const bool imp = lexicon.is_implicit(r.generation);
        groups[{r.group, label_value(r.prompt_label)}].add(chars, imp);
        methods[std::string(method_name(r.method))].add(chars, imp);
        total.add(chars, imp);
    }

    DatasetStats s;
    for (const auto& [key, acc] : groups) {
        s.by_group_label.push_back(acc.row(key.first, std::string(label_name(label_from_int(key.second)))));
    }
    for (const auto& [name, acc] : methods) s.by_method.push_back(acc.row(name, ""));
    s.total = total.row("total", "");
    return s;
}

json to_json(const DatasetStats& s) {
    json groups = json::array();
    for (const auto& r : s.by_group_label) {
        auto j = row_json(r);
        j["group"] = r.key;
        j["label"] = r.label;
        groups.push_back(std::move(j));
    }
    json methods = json::array();
    for (const auto& r : s.by_method) {
        auto j = row_json(r);
        j["method"] = r.key;
        methods.push_back(std::move(j));
    }
    return {{"groups", std::move(groups)}, {"methods", std::move(methods)}, {"total", row_json(s.total)}};
}

std::string format_table(const DatasetStats& s) {
    std::ostringstream out;
    auto line = [&](const std::string& name, const StatsRow& r) {
        out << fmt::format("{:<28} {:>9} {:>9.2f} +- {:<7.2f} {:>7.1f}\n", name, r.count, r.mean_chars, r.std_chars,
                           r.implicit_pct);
    };
    out << fmt::format("{:<28} {:>9} {:>20} {:>8}\n", "group / label", "count", "avg chars (+- std)", "% impl");
    for (const auto& r : s.by_group_label) line(r.key + " / " + r.label, r);
    for (const auto& r : s.by_method) line(r.key + " (all)", r);
    line("total", s.total);
    return out.str();
}

}  // namespace advgen::data
