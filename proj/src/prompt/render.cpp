#include "advgen/prompt/render.hpp"

#include "advgen/core/error.hpp"

namespace advgen::prompt {

std::vector<std::string> sample_demos(const DemonstrationPool& pool, std::size_t n, Rng& rng) {
    require(n >= 1, "need at least one demonstration");
    if (pool.size() < n) {
        fail(ErrorCode::validation, "pool " + pool.group() + "/" + std::string(label_name(pool.label())) + " has " +
                                        std::to_string(pool.size()) + " sentences, " + std::to_string(n) +
                                        " requested");
    }
    // Partial Fisher-Yates: the first n slots are a uniform ordered sample.
    std::vector<std::size_t> idx(pool.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    std::vector<std::string> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t j = i + rng.uniform_index(idx.size() - i);
        std::swap(idx[i], idx[j]);
        out.push_back(pool.sentences()[idx[i]]);
    }
    return out;
}

std::string render_prompt(std::span<const std::string> demos) {
    require(!demos.empty(), "cannot render an empty prompt");
    std::string out;
    for (const auto& s : demos) {
        require(s.find('\n') == std::string::npos, "demonstration contains a newline: " + s);
        out += "- ";
        out += s;
        out += '\n';
    }
    out += '-';
    return out;
}

std::vector<std::string> parse_prompt(std::string_view rendered) {
    require(rendered.size() >= 2 && rendered.substr(rendered.size() - 2) == "\n-", "prompt must end with \"\\n-\"");
    std::vector<std::string> demos;
    std::size_t start = 0;
    const std::size_t body_end = rendered.size() - 1;
    while (start < body_end) {
        const std::size_t end = rendered.find('\n', start);
        const auto line = rendered.substr(start, end - start);
        require(line.substr(0, 2) == "- ", "prompt line does not start with \"- \"");
        demos.emplace_back(line.substr(2));
        start = end + 1;
    }
    require(!demos.empty(), "prompt has no demonstrations");
    return demos;
}

}  // namespace advgen::prompt
