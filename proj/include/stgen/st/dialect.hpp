#pragma once
// Declarative description of one vendor's ST variant: reserved words,
// type universe, implicit widening rules, builtin signatures, conversion
// naming rules and feature flags. Profiles load from JSON files so a new
// dialect is a data change, not a code change.

#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "stgen/st/diagnostic.hpp"
#include "stgen/types.hpp"

namespace stgen::st {

// Builtin and vendor-API callables share one signature shape.
// Param types may use the pseudo-types ANY, ANY_NUM, ANY_INT, ANY_BIT and
// ANY_STRING; a return type of "PROMOTED" means "widest numeric argument".
struct BuiltinSignature {
    std::string name;
    UnitKind kind = UnitKind::Function;
    std::vector<ParamSpec> params;
    std::string return_type;  // empty: no value (vendor instruction / FB)

    std::vector<const ParamSpec*> inputs() const;
    const ParamSpec* find_param(std::string_view name) const;  // case-insensitive
};

// Ordered first-match rules classifying external-compiler messages.
struct ClassRule {
    std::string pattern;  // case-insensitive ECMAScript regex
    ErrorClass error_class = ErrorClass::Other;
};

class DialectProfile {
public:
    std::string id;
    std::set<std::string> reserved_words;    // uppercase
    std::set<std::string> elementary_types;  // uppercase
    std::set<std::string> complex_types;     // uppercase
    // src -> set of types it implicitly widens to (uppercase, closed).
    std::map<std::string, std::set<std::string>> implicit_widening;
    std::vector<BuiltinSignature> builtins;
    // true: conversions must name the source type (REAL_TO_INT); a bare
    // TO_INT form is a diagnostic. false: both forms accepted.
    bool conversions_require_source_type = true;
    bool allows_region = false;
    bool allows_variant = false;
    std::vector<ClassRule> class_rules;

    bool is_elementary(std::string_view type_name) const;
    bool is_complex(std::string_view type_name) const;
    bool is_known_type(std::string_view type_name) const;
    bool is_reserved(std::string_view word) const;
    bool widens_to(std::string_view src, std::string_view dst) const;
    const BuiltinSignature* find_builtin(std::string_view name) const;

    // Reserved words minus short common English words; used by the
    // planner to reject plans that drift into code.
    std::set<std::string> nl_keyword_blacklist() const;

    static DialectProfile from_json(const nlohmann::json& j);
    static DialectProfile load(const std::filesystem::path& file);

private:
    mutable std::map<std::string, const BuiltinSignature*> builtin_index_;
    void build_index() const;
};

// Loads <dir>/<id>.json; throws std::runtime_error naming the id when the
// profile does not resolve.
DialectProfile load_profile(const std::filesystem::path& profiles_dir, const std::string& id);

}  // namespace stgen::st
