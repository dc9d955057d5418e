#pragma once
// Parsing of structured gateway responses. Models are asked for fenced
// JSON; replies that drop the fence but still contain one JSON value are
// accepted too. Anything else is a parse failure the caller retries.

#include <optional>
#include <string>

#include <json.hpp>

namespace stgen::structured {

// Contents of the first ``` fenced block (any info string), if present.
std::optional<std::string> first_fenced_block(const std::string& text);

// First JSON value in the response: fenced block first, then the first
// balanced {...} or [...] region, then the whole text.
std::optional<nlohmann::json> extract_json(const std::string& text);

}  // namespace stgen::structured
