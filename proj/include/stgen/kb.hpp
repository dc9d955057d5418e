#pragma once
// The two vendor knowledge bases: the API library (one JSON record per
// line, keyed by unique name) and the case store of
// requirement/plan/code/APIs records. Both are immutable after load and
// safe to share across concurrent pipeline runs. The leakage filter
// returns non-owning views; the underlying store never changes.

#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "stgen/st/dialect.hpp"
#include "stgen/types.hpp"

namespace stgen::llm {
class LlmGateway;
}

namespace stgen::prompts {
struct PromptSet;
}

namespace stgen::kb {

struct KbError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Retrieval index of one API: summary, usage scenarios and keywords.
struct ApiIndex {
    std::string summary;
    std::vector<std::string> scenarios;
    std::vector<std::string> keywords;  // lowercase, deduplicated
    bool indexed = false;

    bool operator==(const ApiIndex&) const = default;
};

struct ApiEntry {
    std::string name;
    std::string description;
    std::vector<ParamSpec> params;
    std::vector<std::string> examples;
    ApiIndex index;

    // Text the BM25 ranker sees: summary, scenarios and keywords.
    std::string index_text() const;
    // Prompt rendering of the full signature.
    std::string signature_text() const;
    st::BuiltinSignature signature() const;

    bool operator==(const ApiEntry&) const = default;
};

struct RejectedRecord {
    size_t ordinal = 0;  // 1-based record position in the file
    std::string reason;
};

class ApiLib {
public:
    ApiLib() = default;

    // Throws KbError when any record is malformed or a name repeats.
    static ApiLib load(const std::filesystem::path& path);
    // Collecting variant for validation tooling: keeps good entries,
    // reports the rest.
    struct LoadResult {
        ApiLib lib;
        std::vector<RejectedRecord> rejected;
    };
    static LoadResult load_collecting(const std::filesystem::path& path);
    static ApiLib from_entries(std::vector<ApiEntry> entries);  // throws on duplicates

    const ApiEntry* find(std::string_view name) const;  // case-insensitive
    bool contains(std::string_view name) const { return find(name) != nullptr; }
    size_t size() const { return entries_.size(); }
    const std::vector<ApiEntry>& entries() const { return entries_; }
    std::set<std::string> names() const;

    std::vector<st::BuiltinSignature> signatures() const;

    std::string serialize() const;  // JSONL, same schema load() reads
    void save(const std::filesystem::path& path) const;

private:
    static ApiLib from_entries_unchecked(std::vector<ApiEntry> entries);

    std::vector<ApiEntry> entries_;               // sorted by name
    std::map<std::string, size_t> index_;         // uppercase name -> position
};

void to_json(nlohmann::json& j, const ApiIndex& x);
void from_json(const nlohmann::json& j, ApiIndex& x);
void to_json(nlohmann::json& j, const ApiEntry& e);
void from_json(const nlohmann::json& j, ApiEntry& e);

// One proven requirement->code case.
struct CaseRecord {
    std::string id;
    Task task;
    Plan plan;
    std::string code;
    std::vector<std::string> apis;

    // Load-time flags.
    std::vector<std::string> unknown_apis;  // names not present in the APILib
    bool plan_missing = false;

    // Name used by the leakage filter and retrieval metadata.
    const std::string& name() const { return task.name; }
    std::vector<std::string> known_apis() const;
    // Text compared against the task during retrieval.
    std::string metadata_text() const;
};

class CaseStore {
public:
    CaseStore() = default;

    // Malformed records and records with empty code are rejected with a
    // reason; everything else loads. Unknown API references and missing
    // plans are flags, not errors.
    static CaseStore load(const std::filesystem::path& path, const ApiLib* apilib);
    static CaseStore from_cases(std::vector<CaseRecord> cases);

    size_t size() const { return cases_.size(); }
    const std::vector<CaseRecord>& cases() const { return cases_; }
    const std::vector<RejectedRecord>& rejected() const { return rejected_; }
    const CaseRecord* find(std::string_view id) const;

private:
    std::vector<CaseRecord> cases_;
    std::vector<RejectedRecord> rejected_;
};

// Non-owning filtered view; iteration order follows the store.
class CaseView {
public:
    CaseView() = default;
    explicit CaseView(std::vector<const CaseRecord*> cases) : cases_(std::move(cases)) {}

    size_t size() const { return cases_.size(); }
    bool empty() const { return cases_.empty(); }
    const std::vector<const CaseRecord*>& cases() const { return cases_; }
    const CaseRecord* find(std::string_view id) const;

private:
    std::vector<const CaseRecord*> cases_;
};

CaseView full_view(const CaseStore& store);

// Excludes any case whose name and the task's name contain one another
// (case-insensitive, either direction).
CaseView leakage_filter(const Task& task, const CaseStore& store);
bool leaks(std::string_view task_name, std::string_view case_name);

// Asks the gateway for a summary/scenarios/keywords index per entry.
// Unparseable responses are retried once; a second failure leaves that
// entry unindexed and the run continues. Keywords are lowercased,
// deduplicated, and identifier keywords contribute their split parts.
std::vector<ApiIndex> build_index(const std::vector<ApiEntry>& entries,
                                  llm::LlmGateway& gateway,
                                  const prompts::PromptSet& prompt_set);

ApiIndex normalize_index(ApiIndex index);

}  // namespace stgen::kb
