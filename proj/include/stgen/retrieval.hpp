#pragma once
// Few-shot case selection: up to five candidates by similarity, then a
// gateway rerank down to three. Also home of the shared tokenizer and
// Okapi BM25 ranker the API recommender reuses.
//
// BM25 here is the classic Okapi form with the Robertson/Sparck-Jones
// idf floored at zero:
//   idf(t)  = max(0, ln((N - df + 0.5) / (df + 0.5)))
//   s(D,Q)  = sum_t idf(t) * f * (k1 + 1) / (f + k1 * (1 - b + b*|D|/avgdl))
// The floor keeps scores non-negative, so adding a query term occurrence
// to a document never lowers its score.

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "stgen/kb.hpp"
#include "stgen/llm_gateway.hpp"
#include "stgen/prompts.hpp"
#include "stgen/types.hpp"

namespace stgen::retrieval {

// Lowercase tokens split on non-alphanumerics; identifiers additionally
// contribute their underscore/camelCase parts after the whole token:
// "MOVE_BLK_VARIANT" -> move_blk_variant, move, blk, variant.
std::vector<std::string> tokenize(std::string_view text);

struct Bm25Params {
    double k1 = 1.2;
    double b = 0.75;
};

struct Document {
    std::string id;
    std::vector<std::string> tokens;
};

struct ScoredDoc {
    std::string id;
    double score = 0.0;
};

// Scores every document; descending score, ties by id ascending.
std::vector<ScoredDoc> bm25_rank(const std::vector<std::string>& query_tokens,
                                 const std::vector<Document>& corpus,
                                 const Bm25Params& params = {});

struct RankedCase {
    std::string case_id;
    double similarity = 0.0;
    std::optional<int> rerank_position;  // 1..3 after reranking
};

class EmbeddingProvider {
public:
    virtual ~EmbeddingProvider() = default;
    // id lets fixture providers serve precomputed vectors; live providers
    // embed the text. nullopt means "no vector for this input".
    virtual std::optional<std::vector<double>> embed(std::string_view id,
                                                     std::string_view text) = 0;
};

// Reads {"id": ..., "vector": [...]} JSON lines.
class FixtureEmbeddingProvider : public EmbeddingProvider {
public:
    static FixtureEmbeddingProvider load(const std::filesystem::path& path);
    explicit FixtureEmbeddingProvider(std::map<std::string, std::vector<double>> vectors)
        : vectors_(std::move(vectors)) {}

    std::optional<std::vector<double>> embed(std::string_view id, std::string_view text) override;

private:
    std::map<std::string, std::vector<double>> vectors_;
};

double cosine_similarity(const std::vector<double>& a, const std::vector<double>& b);

inline constexpr int kCandidateCount = 5;
inline constexpr int kSelectedCount = 3;

// Top-5 (or fewer) cases by cosine over provider vectors of the task text
// vs. case metadata. Without a provider, or when any vector is missing,
// ranking falls back to BM25 over the same texts and a warning is noted.
std::vector<RankedCase> candidate_cases(const Task& task, const kb::CaseView& store,
                                        EmbeddingProvider* provider,
                                        std::vector<std::string>* warnings = nullptr);

// Gateway rerank of the candidates; returns min(3, |candidates|) cases in
// rerank order with rerank_position set. Fewer than three candidates
// skip the gateway. Invalid or missing ids fall back to similarity order.
std::vector<RankedCase> rerank_cases(const Task& task, const std::vector<RankedCase>& candidates,
                                     const kb::CaseView& store, llm::LlmGateway& gateway,
                                     const prompts::PromptSet& prompt_set);

}  // namespace stgen::retrieval
