#include "stgen/retrieval.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>

#include "stgen/structured.hpp"
#include "stgen/text.hpp"

namespace stgen::retrieval {

std::vector<std::string> tokenize(std::string_view input) {
    std::vector<std::string> out;
    std::string raw;
    auto flush = [&] {
        if (raw.empty()) return;
        const std::string whole = text::to_lower(raw);
        out.push_back(whole);
        const auto parts = text::split_identifier(raw);
        if (parts.size() > 1 || (parts.size() == 1 && parts[0] != whole))
            for (const auto& p : parts) out.push_back(p);
        raw.clear();
    };
    for (const char c : input) {
        if (std::isalnum(static_cast<unsigned char>(c)) || c == '_') {
            raw.push_back(c);
        } else {
            flush();
        }
    }
    flush();
    return out;
}

std::vector<ScoredDoc> bm25_rank(const std::vector<std::string>& query_tokens,
                                 const std::vector<Document>& corpus,
                                 const Bm25Params& params) {
    std::vector<ScoredDoc> out;
    if (corpus.empty()) return out;

    const size_t n_docs = corpus.size();
    double total_len = 0;
    std::vector<std::map<std::string, long>> term_freqs(n_docs);
    for (size_t i = 0; i < n_docs; ++i) {
        total_len += static_cast<double>(corpus[i].tokens.size());
        for (const auto& t : corpus[i].tokens) ++term_freqs[i][t];
    }
    const double avgdl = total_len / static_cast<double>(n_docs);

    // Each distinct query term scores once; repeating a term in the query
    // does not multiply its weight.
    std::map<std::string, long> doc_freq;
    std::vector<std::string> distinct;
    for (const auto& q : query_tokens) {
        if (doc_freq.count(q)) continue;
        long df = 0;
        for (const auto& tf : term_freqs)
            if (tf.count(q)) ++df;
        doc_freq[q] = df;
        distinct.push_back(q);
    }

    out.reserve(n_docs);
    for (size_t i = 0; i < n_docs; ++i) {
        double score = 0;
        const double dl = static_cast<double>(corpus[i].tokens.size());
        for (const auto& term : distinct) {
            const long df = doc_freq[term];
            if (df == 0) continue;
            auto it = term_freqs[i].find(term);
            if (it == term_freqs[i].end()) continue;
            const double f = static_cast<double>(it->second);
            const double idf = std::max(
                0.0, std::log((static_cast<double>(n_docs) - df + 0.5) / (df + 0.5)));
            const double denom =
                f + params.k1 * (1.0 - params.b + params.b * (avgdl > 0 ? dl / avgdl : 0.0));
            score += idf * f * (params.k1 + 1.0) / denom;
        }
        out.push_back({corpus[i].id, score});
    }

    std::stable_sort(out.begin(), out.end(), [](const ScoredDoc& a, const ScoredDoc& b) {
        if (a.score != b.score) return a.score > b.score;
        return a.id < b.id;
    });
    return out;
}

FixtureEmbeddingProvider FixtureEmbeddingProvider::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open embedding fixture: " + path.string());
    std::map<std::string, std::vector<double>> vectors;
    std::string line;
    while (std::getline(in, line)) {
        if (text::trim(line).empty()) continue;
        const nlohmann::json j = nlohmann::json::parse(line);
        vectors[j.at("id").get<std::string>()] = j.at("vector").get<std::vector<double>>();
    }
    return FixtureEmbeddingProvider(std::move(vectors));
}

std::optional<std::vector<double>> FixtureEmbeddingProvider::embed(std::string_view id,
                                                                   std::string_view) {
    auto it = vectors_.find(std::string(id));
    if (it == vectors_.end()) return std::nullopt;
    return it->second;
}

double cosine_similarity(const std::vector<double>& a, const std::vector<double>& b) {
    const size_t n = std::min(a.size(), b.size());
    double dot = 0, na = 0, nb = 0;
    for (size_t i = 0; i < n; ++i) dot += a[i] * b[i];
    for (const double x : a) na += x * x;
    for (const double x : b) nb += x * x;
    if (na == 0 || nb == 0) return 0;
    return dot / (std::sqrt(na) * std::sqrt(nb));
}

namespace {

std::string task_query_text(const Task& task) { return task.req + "\n" + task.io_summary(); }

std::vector<RankedCase> lexical_ranking(const Task& task, const kb::CaseView& store) {
    std::vector<Document> corpus;
    corpus.reserve(store.size());
    for (const auto* c : store.cases())
        corpus.push_back({c->id, tokenize(c->metadata_text())});
    const auto scored = bm25_rank(tokenize(task_query_text(task)), corpus);
    std::vector<RankedCase> out;
    out.reserve(scored.size());
    for (const auto& s : scored) out.push_back({s.id, s.score, std::nullopt});
    return out;
}

}  // namespace

std::vector<RankedCase> candidate_cases(const Task& task, const kb::CaseView& store,
                                        EmbeddingProvider* provider,
                                        std::vector<std::string>* warnings) {
    std::vector<RankedCase> ranked;
    bool used_embeddings = false;

    if (provider) {
        const auto task_vec = provider->embed(task.name, task_query_text(task));
        if (task_vec) {
            std::vector<RankedCase> scored;
            bool complete = true;
            for (const auto* c : store.cases()) {
                const auto vec = provider->embed(c->id, c->metadata_text());
                if (!vec) {
                    complete = false;
                    break;
                }
                scored.push_back({c->id, cosine_similarity(*task_vec, *vec), std::nullopt});
            }
            if (complete) {
                ranked = std::move(scored);
                used_embeddings = true;
            }
        }
        if (!used_embeddings && warnings)
            warnings->push_back("embedding provider incomplete; using lexical fallback");
    }

    if (!used_embeddings) ranked = lexical_ranking(task, store);

    std::stable_sort(ranked.begin(), ranked.end(), [](const RankedCase& a, const RankedCase& b) {
        if (a.similarity != b.similarity) return a.similarity > b.similarity;
        return a.case_id < b.case_id;
    });
    if (ranked.size() > static_cast<size_t>(kCandidateCount)) ranked.resize(kCandidateCount);
    return ranked;
}

namespace {

std::optional<std::vector<std::string>> parse_rerank_response(const std::string& response) {
    const auto j = structured::extract_json(response);
    if (!j) return std::nullopt;
    std::vector<std::string> ids;
    if (j->is_array()) {
        for (const auto& item : *j) {
            if (item.is_string()) ids.push_back(item.get<std::string>());
            else if (item.is_object() && item.contains("id"))
                ids.push_back(item.at("id").get<std::string>());
            else
                return std::nullopt;
        }
        return ids;
    }
    if (j->is_object() && j->contains("order")) {
        for (const auto& item : j->at("order"))
            if (item.is_string()) ids.push_back(item.get<std::string>());
        return ids;
    }
    return std::nullopt;
}

}  // namespace

std::vector<RankedCase> rerank_cases(const Task& task, const std::vector<RankedCase>& candidates,
                                     const kb::CaseView& store, llm::LlmGateway& gateway,
                                     const prompts::PromptSet& prompt_set) {
    auto finalize = [](std::vector<RankedCase> selected) {
        for (size_t i = 0; i < selected.size(); ++i)
            selected[i].rerank_position = static_cast<int>(i + 1);
        return selected;
    };

    if (candidates.size() <= static_cast<size_t>(kSelectedCount))
        return finalize(candidates);  // selection is forced, no gateway round

    std::string listing;
    for (const auto& c : candidates) {
        const kb::CaseRecord* rec = store.find(c.case_id);
        listing += "- id: " + c.case_id + "\n";
        if (rec) {
            listing += "  requirement: " + rec->task.req + "\n";
            const std::string head = rec->plan.headline();
            if (!head.empty()) listing += "  plan: " + head + "\n";
        }
    }
    const std::string user = text::render_template(
        prompt_set.rerank,
        {{"task_req", task.req}, {"io_summary", task.io_summary()}, {"candidates", listing}});

    std::optional<std::vector<std::string>> order;
    std::string prompt = user;
    for (int attempt = 0; attempt < 2 && !order; ++attempt) {
        llm::ChatRequest req;
        req.system = "You pick the most useful reference implementations.";
        req.user = prompt;
        req.tag = "rerank";
        order = parse_rerank_response(gateway.complete(req).text);
        if (!order)
            prompt = user + "\n\nYour previous reply could not be parsed. Respond with only a "
                            "fenced JSON array of candidate ids, best first.";
    }
    if (!order) return finalize({candidates.begin(), candidates.begin() + kSelectedCount});

    std::vector<RankedCase> selected;
    auto already = [&](const std::string& id) {
        return std::any_of(selected.begin(), selected.end(),
                           [&](const RankedCase& r) { return r.case_id == id; });
    };
    for (const auto& id : *order) {
        if (selected.size() == static_cast<size_t>(kSelectedCount)) break;
        const auto it = std::find_if(candidates.begin(), candidates.end(),
                                     [&](const RankedCase& c) { return c.case_id == id; });
        if (it == candidates.end() || already(id)) continue;  // ids outside the set are skipped
        selected.push_back(*it);
    }
    // Fill remaining slots from similarity order.
    for (const auto& c : candidates) {
        if (selected.size() == static_cast<size_t>(kSelectedCount)) break;
        if (!already(c.case_id)) selected.push_back(c);
    }
    return finalize(std::move(selected));
}

}  // namespace stgen::retrieval
