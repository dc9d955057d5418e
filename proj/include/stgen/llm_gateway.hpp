#pragma once
// Uniform chat-completion interface. Two backends ship: an HTTP client
// for any OpenAI-style chat endpoint, and a deterministic replay backend
// that serves recorded transcripts for offline runs. A recording
// decorator captures live traffic into a transcript keyed by
// (tag, content digest) so an identical pipeline run can be replayed
// byte for byte. Token usage and cost accumulate per gateway.

#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace stgen::llm {

struct ChatRequest {
    std::string system;
    std::string user;
    double temperature = 0.0;
    int max_tokens = 4096;
    std::string tag;  // pipeline stage id, e.g. "plan", "repair"
};

struct Usage {
    long prompt_tokens = 0;
    long completion_tokens = 0;

    long total() const { return prompt_tokens + completion_tokens; }
};

struct Completion {
    std::string text;
    Usage usage;
};

struct PriceTable {
    double prompt_per_1k = 0.0;
    double completion_per_1k = 0.0;

    double cost(const Usage& u) const {
        return u.prompt_tokens / 1000.0 * prompt_per_1k +
               u.completion_tokens / 1000.0 * completion_per_1k;
    }
};

struct UsageRecord {
    std::string tag;
    Usage usage;
    double cost = 0.0;
};

struct TransportError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct TranscriptError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A recorded interaction was not found; names the tag and digest so the
// missing fixture is easy to produce. Never falls through silently.
struct ReplayMissError : std::runtime_error {
    ReplayMissError(const std::string& tag, const std::string& digest)
        : std::runtime_error("unrecorded interaction: tag=" + tag + " digest=" + digest),
          tag(tag),
          digest(digest) {}
    std::string tag;
    std::string digest;
};

// SHA-256 hex over the request's system and user texts.
std::string content_digest(const ChatRequest& req);
std::string sha256_hex(std::string_view data);

class Backend {
public:
    virtual ~Backend() = default;
    virtual Completion complete(const ChatRequest& req) = 0;
};

struct HttpBackendConfig {
    std::string endpoint;  // e.g. http://127.0.0.1:8080/v1
    std::string model;
    std::string api_key;
    std::string auth_header = "Authorization";  // value: "Bearer <key>"
    int timeout_seconds = 60;
    int max_retries = 2;  // on transient failures, exponential backoff

    // STGEN_LLM_ENDPOINT / STGEN_LLM_MODEL / STGEN_LLM_API_KEY
    static std::optional<HttpBackendConfig> from_env();
};

class HttpBackend : public Backend {
public:
    explicit HttpBackend(HttpBackendConfig config);
    Completion complete(const ChatRequest& req) override;

private:
    HttpBackendConfig config_;
    std::string host_;
    std::string path_prefix_;
};

struct TranscriptRecord {
    std::string tag;
    std::string digest;
    std::string system;
    std::string user;
    std::string response;
    Usage usage;
};

void to_json(nlohmann::json& j, const TranscriptRecord& r);
void from_json(const nlohmann::json& j, TranscriptRecord& r);

class ReplayBackend : public Backend {
public:
    // Throws TranscriptError on unreadable files or digest collisions
    // (same key, different recorded content).
    static std::unique_ptr<ReplayBackend> from_file(const std::filesystem::path& path);
    static std::unique_ptr<ReplayBackend> from_records(std::vector<TranscriptRecord> records);

    Completion complete(const ChatRequest& req) override;  // throws ReplayMissError
    size_t size() const { return records_.size(); }

private:
    std::map<std::pair<std::string, std::string>, TranscriptRecord> records_;
};

// Wraps a live backend; appends every interaction to the transcript file.
// Write failures are hard errors. Re-recording an identical interaction
// appends again (replay dedupes); the same key with different content is
// refused.
class RecordingBackend : public Backend {
public:
    RecordingBackend(std::shared_ptr<Backend> inner, std::filesystem::path transcript);
    Completion complete(const ChatRequest& req) override;

private:
    std::shared_ptr<Backend> inner_;
    std::filesystem::path path_;
    std::mutex mutex_;
    std::map<std::pair<std::string, std::string>, std::string> seen_;  // key -> response
};

// Per-run usage accounting; thread-safe.
class UsageLedger {
public:
    void add(const std::string& tag, const Usage& usage, double cost);
    std::vector<UsageRecord> records() const;
    Usage totals() const;
    double total_cost() const;

private:
    mutable std::mutex mutex_;
    std::vector<UsageRecord> records_;
};

// The pipeline-facing handle: validates requests, delegates to the
// backend, and records usage. Cheap to construct per task around a
// shared backend so usage attributes to one task.
class LlmGateway {
public:
    explicit LlmGateway(std::shared_ptr<Backend> backend, PriceTable prices = {});

    Completion complete(const ChatRequest& req);
    const UsageLedger& ledger() const { return ledger_; }
    PriceTable prices() const { return prices_; }

private:
    std::shared_ptr<Backend> backend_;
    PriceTable prices_;
    UsageLedger ledger_;
};

}  // namespace stgen::llm
