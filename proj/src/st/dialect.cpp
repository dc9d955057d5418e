#include "stgen/st/dialect.hpp"

#include <fstream>

#include "stgen/text.hpp"

namespace stgen::st {

std::vector<const ParamSpec*> BuiltinSignature::inputs() const {
    std::vector<const ParamSpec*> out;
    for (const auto& p : params)
        if (p.direction != ParamDirection::Out) out.push_back(&p);
    return out;
}

const ParamSpec* BuiltinSignature::find_param(std::string_view name) const {
    for (const auto& p : params)
        if (text::iequals(p.name, name)) return &p;
    return nullptr;
}

bool DialectProfile::is_elementary(std::string_view type_name) const {
    return elementary_types.count(text::to_upper(type_name)) > 0;
}

bool DialectProfile::is_complex(std::string_view type_name) const {
    return complex_types.count(text::to_upper(type_name)) > 0;
}

bool DialectProfile::is_known_type(std::string_view type_name) const {
    return is_elementary(type_name) || is_complex(type_name);
}

bool DialectProfile::is_reserved(std::string_view word) const {
    return reserved_words.count(text::to_upper(word)) > 0;
}

bool DialectProfile::widens_to(std::string_view src, std::string_view dst) const {
    const std::string s = text::to_upper(src), d = text::to_upper(dst);
    if (s == d) return true;
    auto it = implicit_widening.find(s);
    return it != implicit_widening.end() && it->second.count(d) > 0;
}

void DialectProfile::build_index() const {
    if (!builtin_index_.empty() || builtins.empty()) return;
    for (const auto& b : builtins) builtin_index_.emplace(text::to_upper(b.name), &b);
}

const BuiltinSignature* DialectProfile::find_builtin(std::string_view name) const {
    build_index();
    auto it = builtin_index_.find(text::to_upper(name));
    return it == builtin_index_.end() ? nullptr : it->second;
}

std::set<std::string> DialectProfile::nl_keyword_blacklist() const {
    static const std::set<std::string> common_words = {"AND", "OR", "NOT", "TO", "AT"};
    std::set<std::string> out;
    for (const auto& w : reserved_words)
        if (!common_words.count(w)) out.insert(w);
    return out;
}

DialectProfile DialectProfile::from_json(const nlohmann::json& j) {
    DialectProfile p;
    p.id = j.at("id").get<std::string>();
    for (const auto& w : j.value("reserved_words", std::vector<std::string>{}))
        p.reserved_words.insert(text::to_upper(w));
    for (const auto& t : j.value("elementary_types", std::vector<std::string>{}))
        p.elementary_types.insert(text::to_upper(t));
    for (const auto& t : j.value("complex_types", std::vector<std::string>{}))
        p.complex_types.insert(text::to_upper(t));
    for (const auto& t : p.complex_types)
        if (p.elementary_types.count(t))
            throw std::runtime_error("profile '" + p.id + "': type '" + t +
                                     "' is both elementary and complex");
    if (j.contains("implicit_widening")) {
        for (const auto& [src, targets] : j.at("implicit_widening").items()) {
            auto& set = p.implicit_widening[text::to_upper(src)];
            for (const auto& t : targets) set.insert(text::to_upper(t.get<std::string>()));
        }
    }
    for (const auto& bj : j.value("builtins", nlohmann::json::array())) {
        BuiltinSignature sig;
        sig.name = bj.at("name").get<std::string>();
        sig.kind = unit_kind_from_string(bj.value("kind", "FUNCTION"));
        sig.return_type = text::to_upper(bj.value("return_type", ""));
        for (const auto& pj : bj.value("params", nlohmann::json::array())) {
            ParamSpec ps;
            ps.name = pj.at("name").get<std::string>();
            ps.type_name = text::to_upper(pj.at("type").get<std::string>());
            ps.direction = param_direction_from_string(pj.value("direction", "IN"));
            sig.params.push_back(std::move(ps));
        }
        p.builtins.push_back(std::move(sig));
    }
    if (j.contains("conversion")) {
        const auto& c = j.at("conversion");
        p.conversions_require_source_type = c.value("require_source_type", true);
    }
    if (j.contains("extensions")) {
        const auto& e = j.at("extensions");
        p.allows_region = e.value("allows_region", false);
        p.allows_variant = e.value("allows_variant", false);
    }
    for (const auto& rj : j.value("class_rules", nlohmann::json::array())) {
        ClassRule r;
        r.pattern = rj.at("pattern").get<std::string>();
        r.error_class = error_class_from_string(rj.at("class").get<std::string>());
        p.class_rules.push_back(std::move(r));
    }
    return p;
}

DialectProfile DialectProfile::load(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw std::runtime_error("cannot open dialect profile: " + file.string());
    nlohmann::json j;
    in >> j;
    return from_json(j);
}

DialectProfile load_profile(const std::filesystem::path& profiles_dir, const std::string& id) {
    const auto file = profiles_dir / (id + ".json");
    if (!std::filesystem::exists(file))
        throw std::runtime_error("dialect profile '" + id + "' not found under " +
                                 profiles_dir.string());
    return DialectProfile::load(file);
}

}  // namespace stgen::st
