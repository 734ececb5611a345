#include "advgen/eval/corpus_reports.hpp"

#include <sstream>

#include <fmt/format.h>

#include "advgen/core/error.hpp"
#include "advgen/data/lexicon.hpp"
#include "advgen/lm/tokenizer.hpp"

namespace advgen::eval {

std::vector<PerplexityRow> perplexity_report(const lm::NGramModel& model,
                                             std::span<const data::GenerationRecord> records, double cutoff) {
    struct Acc {
        std::size_t n = 0, dropped = 0;
        double sum = 0.0;
    };
    std::map<std::pair<std::string, std::string>, Acc> acc;
    for (const auto& r : records) {
        auto& a = acc[{r.group, std::string(data::method_name(r.method))}];
        const auto seq = lm::tokenize(r.generation, model.vocabulary());
        if (seq.empty()) {
            ++a.dropped;
            continue;
        }
        const double ppl = model.perplexity(seq.ids);
        if (ppl > cutoff) {
            ++a.dropped;
            continue;
        }
        ++a.n;
        a.sum += ppl;
    }
    std::vector<PerplexityRow> rows;
    for (const auto& [key, a] : acc) {
        rows.push_back({key.first, key.second, a.n, a.dropped, a.n == 0 ? 0.0 : a.sum / static_cast<double>(a.n)});
    }
    return rows;
}

MentionReport group_mention_rate(std::span<const data::GenerationRecord> records,
                                 const std::map<std::string, std::vector<std::string>>& group_terms) {
    std::map<std::string, data::TermMatcher> matchers;
    for (const auto& [group, terms] : group_terms) {
        data::TermMatcher m(terms);
        require(!m.empty(), "group '" + group + "' has an empty term list");
        matchers.emplace(group, std::move(m));
    }
    MentionReport report;
    std::map<std::pair<std::string, std::string>, std::pair<std::size_t, std::size_t>> acc;
    std::map<std::string, bool> warned;
    for (const auto& r : records) {
        auto it = matchers.find(r.group);
        if (it == matchers.end()) {
            if (!warned[r.group]) report.warnings.push_back("no term list for group '" + r.group + "'; skipped");
            warned[r.group] = true;
            continue;
        }
        auto& a = acc[{r.group, std::string(data::method_name(r.method))}];
        ++a.first;
        a.second += it->second.matches(r.generation);
    }
    for (const auto& [key, a] : acc) {
        report.rows.push_back({key.first, key.second, a.first, a.second,
                               static_cast<double>(a.second) / static_cast<double>(a.first)});
    }
    return report;
}

std::map<std::string, std::vector<std::string>> load_group_terms(const std::filesystem::path& path) {
    try {
        return read_json(path).get<std::map<std::string, std::vector<std::string>>>();
    } catch (const json::exception& e) {
        fail(ErrorCode::validation, path.string() + ": expected {group: [terms]}: " + e.what());
    }
}

json to_json(const std::vector<PerplexityRow>& rows, double cutoff) {
    json out = json::array();
    for (const auto& r : rows) {
        out.push_back({{"group", r.group}, {"method", r.method}, {"count", r.count}, {"dropped", r.dropped},
                       {"mean_perplexity", r.mean}});
    }
    return {{"cutoff", cutoff}, {"rows", out}};
}

json to_json(const MentionReport& r) {
    json out = json::array();
    for (const auto& row : r.rows) {
        out.push_back({{"group", row.group}, {"method", row.method}, {"count", row.count},
                       {"mentions", row.mentions}, {"rate", row.rate}});
    }
    return {{"measure", "lexicon proxy: whole-word match of the group's own term list"},
            {"rows", out},
            {"warnings", r.warnings}};
}

std::string format_table(const std::vector<PerplexityRow>& rows, double cutoff) {
    std::ostringstream out;
    out << fmt::format("{:<24} {:<8} {:>7} {:>8} {:>10}\n", "group", "method", "kept", "dropped", "mean ppl");
    for (const auto& r : rows) {
        out << fmt::format("{:<24} {:<8} {:>7} {:>8} {:>10.2f}\n", r.group, r.method, r.count, r.dropped, r.mean);
    }
    out << fmt::format("values above {:.0f} dropped\n", cutoff);
    return out.str();
}

std::string format_table(const MentionReport& r) {
    std::ostringstream out;
    out << "group mentions (lexicon proxy, not human-judged)\n";
    out << fmt::format("{:<24} {:<8} {:>7} {:>9} {:>7}\n", "group", "method", "n", "mentions", "rate");
    for (const auto& row : r.rows) {
        out << fmt::format("{:<24} {:<8} {:>7} {:>9} {:>7.3f}\n", row.group, row.method, row.count, row.mentions,
                           row.rate);
    }
    for (const auto& w : r.warnings) out << "warning: " << w << "\n";
    return out.str();
}

}  // namespace advgen::eval
