#pragma once
// Small string helpers used throughout: case folding, identifier
// splitting, and {{placeholder}} template rendering.

#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace stgen::text {

std::string to_lower(std::string_view s);
std::string to_upper(std::string_view s);
std::string trim(std::string_view s);
bool iequals(std::string_view a, std::string_view b);
// Case-insensitive substring containment.
bool icontains(std::string_view haystack, std::string_view needle);

// Split an identifier on underscores and camelCase boundaries.
// "readFile" -> {"read","file"}; "MOVE_BLK_VARIANT" -> {"move","blk","variant"}.
// Parts are lowercased; empty parts are dropped.
std::vector<std::string> split_identifier(std::string_view ident);

std::string join(const std::vector<std::string>& parts, std::string_view sep);

// Replaces {{name}} with the paired value. Unknown placeholders are left
// intact so missing substitutions are visible in rendered output.
std::string render_template(std::string_view tpl,
                            const std::vector<std::pair<std::string, std::string>>& vars);

}  // namespace stgen::text
