#pragma once
// Prompt templates for every gateway interaction. Defaults are embedded;
// any template can be overridden by a file of the same name under a
// templates directory (--templates). Rendering is plain {{placeholder}}
// substitution, deterministic by construction.

#include <filesystem>
#include <string>

namespace stgen::prompts {

struct PromptSet {
    std::string classify;
    std::string plan_linear;
    std::string plan_state_machine;
    std::string plan_retry_suffix;
    std::string rerank;
    std::string api_filter;
    std::string generate_system;
    std::string generate;
    std::string generate_fence_retry;
    std::string repair_declaration;
    std::string repair_implementation;
    std::string index_api;

    static PromptSet defaults();
    // defaults() with per-file overrides: <dir>/classify.txt,
    // <dir>/plan_linear.txt, ... Missing files keep the default.
    static PromptSet load(const std::filesystem::path& templates_dir);
    void save(const std::filesystem::path& templates_dir) const;
};

}  // namespace stgen::prompts
