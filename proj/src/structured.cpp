#include "stgen/structured.hpp"

#include "stgen/text.hpp"

namespace stgen::structured {

std::optional<std::string> first_fenced_block(const std::string& text) {
    const std::string fence = "```";
    const size_t open = text.find(fence);
    if (open == std::string::npos) return std::nullopt;
    size_t content = text.find('\n', open);
    if (content == std::string::npos) return std::nullopt;
    ++content;
    const size_t close = text.find(fence, content);
    if (close == std::string::npos) return std::nullopt;
    return text.substr(content, close - content);
}

namespace {

std::optional<nlohmann::json> try_parse(const std::string& s) {
    const std::string trimmed = stgen::text::trim(s);
    if (trimmed.empty()) return std::nullopt;
    auto j = nlohmann::json::parse(trimmed, nullptr, /*allow_exceptions=*/false);
    if (j.is_discarded()) return std::nullopt;
    return j;
}

std::optional<nlohmann::json> first_balanced(const std::string& text, char open, char close) {
    const size_t start = text.find(open);
    if (start == std::string::npos) return std::nullopt;
    int depth = 0;
    bool in_string = false;
    for (size_t i = start; i < text.size(); ++i) {
        const char c = text[i];
        if (in_string) {
            if (c == '\\') ++i;
            else if (c == '"') in_string = false;
            continue;
        }
        if (c == '"') in_string = true;
        else if (c == open) ++depth;
        else if (c == close && --depth == 0)
            return try_parse(text.substr(start, i - start + 1));
    }
    return std::nullopt;
}

}  // namespace

std::optional<nlohmann::json> extract_json(const std::string& text) {
    if (auto block = first_fenced_block(text))
        if (auto j = try_parse(*block)) return j;
    if (auto j = first_balanced(text, '{', '}')) return j;
    if (auto j = first_balanced(text, '[', ']')) return j;
    return try_parse(text);
}

}  // namespace stgen::structured
