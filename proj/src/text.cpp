#include "stgen/text.hpp"

#include <algorithm>
#include <cctype>

namespace stgen::text {

namespace {
char lower(char c) { return static_cast<char>(std::tolower(static_cast<unsigned char>(c))); }
char upper(char c) { return static_cast<char>(std::toupper(static_cast<unsigned char>(c))); }
bool is_upper(char c) { return std::isupper(static_cast<unsigned char>(c)) != 0; }
bool is_lower(char c) { return std::islower(static_cast<unsigned char>(c)) != 0; }
}  // namespace

std::string to_lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(), lower);
    return out;
}

std::string to_upper(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(), upper);
    return out;
}

std::string trim(std::string_view s) {
    size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return std::string(s.substr(b, e - b));
}

bool iequals(std::string_view a, std::string_view b) {
    if (a.size() != b.size()) return false;
    for (size_t i = 0; i < a.size(); ++i)
        if (lower(a[i]) != lower(b[i])) return false;
    return true;
}

bool icontains(std::string_view haystack, std::string_view needle) {
    if (needle.empty()) return true;
    if (needle.size() > haystack.size()) return false;
    const std::string h = to_lower(haystack);
    const std::string n = to_lower(needle);
    return h.find(n) != std::string::npos;
}

std::vector<std::string> split_identifier(std::string_view ident) {
    std::vector<std::string> parts;
    std::string cur;
    auto flush = [&] {
        if (!cur.empty()) parts.push_back(cur);
        cur.clear();
    };
    for (size_t i = 0; i < ident.size(); ++i) {
        const char c = ident[i];
        if (c == '_') {
            flush();
            continue;
        }
        // Boundary at lower->Upper and at the last capital of an acronym
        // run ("HTMLParser" -> "html","parser").
        if (is_upper(c) && !cur.empty()) {
            const char prev = ident[i - 1];
            const bool next_lower = i + 1 < ident.size() && is_lower(ident[i + 1]);
            if (is_lower(prev) || (is_upper(prev) && next_lower)) flush();
        }
        cur.push_back(lower(c));
    }
    flush();
    return parts;
}

std::string join(const std::vector<std::string>& parts, std::string_view sep) {
    std::string out;
    for (size_t i = 0; i < parts.size(); ++i) {
        if (i) out += sep;
        out += parts[i];
    }
    return out;
}

std::string render_template(std::string_view tpl,
                            const std::vector<std::pair<std::string, std::string>>& vars) {
    std::string out(tpl);
    for (const auto& [name, value] : vars) {
        const std::string key = "{{" + name + "}}";
        size_t pos = 0;
        while ((pos = out.find(key, pos)) != std::string::npos) {
            out.replace(pos, key.size(), value);
            pos += value.size();
        }
    }
    return out;
}

}  // namespace stgen::text
