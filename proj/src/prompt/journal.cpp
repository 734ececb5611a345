#include "advgen/prompt/journal.hpp"

#include "advgen/core/error.hpp"

namespace advgen::prompt {

std::string_view decision_name(Decision d) noexcept { return d == Decision::accept ? "accept" : "reject"; }

Decision parse_decision(std::string_view s) {
    if (s == "accept") return Decision::accept;
    if (s == "reject") return Decision::reject;
    fail(ErrorCode::validation, "decision must be accept or reject, got '" + std::string(s) + "'");
}

json DecisionEntry::to_json() const {
    json j{{"type", "decision"},     {"group", group},   {"label", label_name(label)},
           {"candidate", candidate}, {"actor", actor},   {"decision", decision_name(decision)}};
    if (!session.empty()) j["session"] = session;
    return j;
}

DecisionEntry DecisionEntry::from_json(const json& j) {
    try {
        DecisionEntry e;
        e.group = j.at("group").get<std::string>();
        e.label = parse_label(j.at("label").get<std::string>());
        e.candidate = j.at("candidate").get<std::string>();
        e.decision = parse_decision(j.at("decision").get<std::string>());
        e.actor = j.value("actor", std::string());
        e.session = j.value("session", std::string());
        return e;
    } catch (const json::exception& ex) {
        fail(ErrorCode::validation, std::string("bad decision entry: ") + ex.what());
    }
}

DemonstrationPool grow_pool(const DemonstrationPool& pool, const std::string& candidate, Decision decision,
                            const std::string& actor, AppendLog* journal, const std::string& session) {
    validate_sentence(candidate);
    DemonstrationPool next = pool;
    if (decision == Decision::accept) next.add(candidate, Provenance::human_accepted);
    if (journal != nullptr) {
        journal->append(DecisionEntry{pool.group(), pool.label(), candidate, decision, actor, session}.to_json());
    }
    return next;
}

DemonstrationPool replay(const DemonstrationPool& base, const std::vector<json>& entries) {
    DemonstrationPool pool = base;
    for (const auto& j : entries) {
        if (j.value("type", std::string()) != "decision") continue;
        const auto e = DecisionEntry::from_json(j);
        if (e.group != pool.group() || e.label != pool.label() || e.decision != Decision::accept) continue;
        pool.add(e.candidate, Provenance::human_accepted);
    }
    return pool;
}

}  // namespace advgen::prompt
