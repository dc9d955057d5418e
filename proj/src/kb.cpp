#include "stgen/kb.hpp"

#include <algorithm>
#include <fstream>
#include <functional>

#include "stgen/llm_gateway.hpp"
#include "stgen/prompts.hpp"
#include "stgen/structured.hpp"
#include "stgen/text.hpp"

namespace stgen::kb {

namespace {

std::optional<ApiIndex> parse_index_response(const std::string& response) {
    const auto j = structured::extract_json(response);
    if (!j || !j->is_object()) return std::nullopt;
    if (!j->contains("summary") || !j->contains("keywords")) return std::nullopt;
    ApiIndex index;
    try {
        index = j->get<ApiIndex>();
    } catch (const std::exception&) {
        return std::nullopt;
    }
    return index;
}

}  // namespace

std::string ApiEntry::index_text() const {
    std::string out = index.summary;
    for (const auto& s : index.scenarios) {
        out += ' ';
        out += s;
    }
    for (const auto& k : index.keywords) {
        out += ' ';
        out += k;
    }
    return out;
}

std::string ApiEntry::signature_text() const {
    std::string out = name + "(";
    for (size_t i = 0; i < params.size(); ++i) {
        if (i) out += ", ";
        out += params[i].name + " : " + params[i].type_name + " [" +
               to_string(params[i].direction) + "]";
    }
    out += ")";
    if (!index.summary.empty()) out += " - " + index.summary;
    else if (!description.empty()) out += " - " + description;
    return out;
}

st::BuiltinSignature ApiEntry::signature() const {
    st::BuiltinSignature sig;
    sig.name = name;
    sig.kind = UnitKind::Function;
    sig.params = params;
    for (auto& p : sig.params) p.type_name = text::to_upper(p.type_name);
    return sig;
}

void to_json(nlohmann::json& j, const ApiIndex& x) {
    j = nlohmann::json{{"summary", x.summary},
                       {"scenarios", x.scenarios},
                       {"keywords", x.keywords}};
}

void from_json(const nlohmann::json& j, ApiIndex& x) {
    x.summary = j.value("summary", "");
    x.scenarios = j.value("scenarios", std::vector<std::string>{});
    x.keywords = j.value("keywords", std::vector<std::string>{});
    x.indexed = !x.keywords.empty();
}

void to_json(nlohmann::json& j, const ApiEntry& e) {
    j = nlohmann::json{{"name", e.name},
                       {"description", e.description},
                       {"params", e.params},
                       {"examples", e.examples}};
    if (e.index.indexed || !e.index.summary.empty()) j["index"] = e.index;
}

void from_json(const nlohmann::json& j, ApiEntry& e) {
    e.name = j.at("name").get<std::string>();
    e.description = j.value("description", "");
    e.params = j.value("params", std::vector<ParamSpec>{});
    e.examples = j.value("examples", std::vector<std::string>{});
    if (j.contains("index")) {
        e.index = normalize_index(j.at("index").get<ApiIndex>());
    } else {
        e.index = {};
    }
}

namespace {

// Field-precise error strings for load reports: "record 3: io[0].direction ...".
std::string describe_parse_error(const std::exception& e) { return e.what(); }

template <typename Record>
void load_jsonl(const std::filesystem::path& path,
                std::vector<std::pair<size_t, Record>>& out,
                std::vector<RejectedRecord>& rejected,
                const std::function<std::optional<std::string>(const nlohmann::json&, Record&)>&
                    parse_record) {
    std::ifstream in(path);
    if (!in) throw KbError("cannot open knowledge base file: " + path.string());
    std::string line;
    size_t ordinal = 0;
    while (std::getline(in, line)) {
        if (text::trim(line).empty()) continue;
        ++ordinal;
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(line);
        } catch (const std::exception& e) {
            rejected.push_back({ordinal, "record " + std::to_string(ordinal) +
                                             ": invalid JSON: " + describe_parse_error(e)});
            continue;
        }
        Record rec;
        try {
            if (auto reason = parse_record(j, rec)) {
                rejected.push_back(
                    {ordinal, "record " + std::to_string(ordinal) + ": " + *reason});
                continue;
            }
        } catch (const std::exception& e) {
            rejected.push_back({ordinal, "record " + std::to_string(ordinal) + ": " +
                                             describe_parse_error(e)});
            continue;
        }
        out.emplace_back(ordinal, std::move(rec));
    }
}

}  // namespace

ApiLib::LoadResult ApiLib::load_collecting(const std::filesystem::path& path) {
    LoadResult result;
    std::vector<std::pair<size_t, ApiEntry>> entries;
    load_jsonl<ApiEntry>(path, entries, result.rejected,
                         [](const nlohmann::json& j, ApiEntry& e) -> std::optional<std::string> {
                             e = j.get<ApiEntry>();
                             if (text::trim(e.name).empty()) return "field name: must be non-empty";
                             for (size_t i = 0; i < e.params.size(); ++i)
                                 if (text::trim(e.params[i].type_name).empty())
                                     return "field params[" + std::to_string(i) +
                                            "].type: must be non-empty";
                             return std::nullopt;
                         });

    std::map<std::string, size_t> seen;  // uppercase name -> first ordinal
    std::vector<ApiEntry> unique;
    for (auto& [ordinal, e] : entries) {
        const std::string key = text::to_upper(e.name);
        if (seen.count(key)) {
            result.rejected.push_back({ordinal, "record " + std::to_string(ordinal) +
                                                    ": duplicate name '" + e.name + "'"});
            continue;
        }
        seen.emplace(key, ordinal);
        unique.push_back(std::move(e));
    }
    std::sort(result.rejected.begin(), result.rejected.end(),
              [](const RejectedRecord& a, const RejectedRecord& b) { return a.ordinal < b.ordinal; });
    result.lib = from_entries_unchecked(std::move(unique));
    return result;
}

ApiLib ApiLib::load(const std::filesystem::path& path) {
    LoadResult result = load_collecting(path);
    if (!result.rejected.empty()) {
        std::string msg = "failed to load APILib from " + path.string() + ":";
        for (const auto& r : result.rejected) msg += "\n  " + r.reason;
        throw KbError(msg);
    }
    return std::move(result.lib);
}

ApiLib ApiLib::from_entries(std::vector<ApiEntry> entries) {
    std::set<std::string> seen;
    for (const auto& e : entries) {
        const std::string key = text::to_upper(e.name);
        if (!seen.insert(key).second) throw KbError("duplicate API name '" + e.name + "'");
    }
    return from_entries_unchecked(std::move(entries));
}

ApiLib ApiLib::from_entries_unchecked(std::vector<ApiEntry> entries) {
    ApiLib lib;
    lib.entries_ = std::move(entries);
    std::sort(lib.entries_.begin(), lib.entries_.end(),
              [](const ApiEntry& a, const ApiEntry& b) { return a.name < b.name; });
    for (size_t i = 0; i < lib.entries_.size(); ++i)
        lib.index_.emplace(text::to_upper(lib.entries_[i].name), i);
    return lib;
}

const ApiEntry* ApiLib::find(std::string_view name) const {
    auto it = index_.find(text::to_upper(name));
    return it == index_.end() ? nullptr : &entries_[it->second];
}

std::set<std::string> ApiLib::names() const {
    std::set<std::string> out;
    for (const auto& e : entries_) out.insert(e.name);
    return out;
}

std::vector<st::BuiltinSignature> ApiLib::signatures() const {
    std::vector<st::BuiltinSignature> out;
    out.reserve(entries_.size());
    for (const auto& e : entries_) out.push_back(e.signature());
    return out;
}

std::string ApiLib::serialize() const {
    std::string out;
    for (const auto& e : entries_) {
        nlohmann::json j = e;
        out += j.dump();
        out += '\n';
    }
    return out;
}

void ApiLib::save(const std::filesystem::path& path) const {
    std::ofstream out(path);
    if (!out) throw KbError("cannot write " + path.string());
    out << serialize();
}

std::vector<std::string> CaseRecord::known_apis() const {
    std::vector<std::string> out;
    for (const auto& a : apis) {
        const bool unknown =
            std::any_of(unknown_apis.begin(), unknown_apis.end(),
                        [&](const std::string& u) { return text::iequals(u, a); });
        if (!unknown) out.push_back(a);
    }
    return out;
}

std::string CaseRecord::metadata_text() const { return task.name + " " + task.req; }

CaseStore CaseStore::load(const std::filesystem::path& path, const ApiLib* apilib) {
    CaseStore store;
    std::vector<std::pair<size_t, CaseRecord>> loaded;
    load_jsonl<CaseRecord>(
        path, loaded, store.rejected_,
        [&](const nlohmann::json& j, CaseRecord& c) -> std::optional<std::string> {
            c.id = j.value("id", "");
            c.task = j.at("task").get<Task>();
            if (c.id.empty()) c.id = c.task.name;
            c.code = j.value("code", "");
            if (text::trim(c.code).empty()) return "field code: must be non-empty";
            c.apis = j.value("apis", std::vector<std::string>{});
            if (j.contains("plan") && !j.at("plan").is_null()) {
                c.plan = j.at("plan").get<Plan>();
                c.plan_missing = c.plan.empty();
            } else {
                c.plan = Plan{};
                c.plan_missing = true;
            }
            if (apilib) {
                for (const auto& a : c.apis)
                    if (!apilib->contains(a)) c.unknown_apis.push_back(a);
            }
            return std::nullopt;
        });
    store.cases_.reserve(loaded.size());
    for (auto& [ordinal, c] : loaded) store.cases_.push_back(std::move(c));
    return store;
}

CaseStore CaseStore::from_cases(std::vector<CaseRecord> cases) {
    CaseStore store;
    store.cases_ = std::move(cases);
    return store;
}

const CaseRecord* CaseStore::find(std::string_view id) const {
    for (const auto& c : cases_)
        if (c.id == id) return &c;
    return nullptr;
}

const CaseRecord* CaseView::find(std::string_view id) const {
    for (const auto* c : cases_)
        if (c->id == id) return c;
    return nullptr;
}

CaseView full_view(const CaseStore& store) {
    std::vector<const CaseRecord*> all;
    all.reserve(store.size());
    for (const auto& c : store.cases()) all.push_back(&c);
    return CaseView(std::move(all));
}

bool leaks(std::string_view task_name, std::string_view case_name) {
    return text::icontains(task_name, case_name) || text::icontains(case_name, task_name);
}

CaseView leakage_filter(const Task& task, const CaseStore& store) {
    std::vector<const CaseRecord*> kept;
    for (const auto& c : store.cases())
        if (!leaks(task.name, c.name())) kept.push_back(&c);
    return CaseView(std::move(kept));
}

ApiIndex normalize_index(ApiIndex index) {
    std::set<std::string> keywords;
    for (const auto& k : index.keywords) {
        const std::string lower = text::to_lower(text::trim(k));
        if (lower.empty()) continue;
        keywords.insert(lower);
        // Identifier keywords also contribute their split parts so the
        // retrieval tokenizer finds them.
        const auto parts = text::split_identifier(lower);
        if (parts.size() > 1)
            for (const auto& p : parts) keywords.insert(p);
    }
    index.keywords.assign(keywords.begin(), keywords.end());
    index.indexed = !index.keywords.empty();
    return index;
}

std::vector<ApiIndex> build_index(const std::vector<ApiEntry>& entries,
                                  llm::LlmGateway& gateway,
                                  const prompts::PromptSet& prompt_set) {
    std::vector<ApiIndex> out;
    out.reserve(entries.size());
    for (const auto& entry : entries) {
        std::string examples;
        for (const auto& ex : entry.examples) examples += ex + "\n";
        std::string params;
        for (const auto& p : entry.params)
            params += p.name + " : " + p.type_name + " [" + to_string(p.direction) + "] " +
                      p.description + "\n";
        const std::string user = text::render_template(
            prompt_set.index_api, {{"name", entry.name},
                                   {"description", entry.description},
                                   {"params", params},
                                   {"examples", examples}});

        ApiIndex index;
        bool ok = false;
        std::string prompt = user;
        for (int attempt = 0; attempt < 2 && !ok; ++attempt) {
            llm::ChatRequest req;
            req.system = "You index PLC vendor functions for retrieval.";
            req.user = prompt;
            req.tag = "index";
            const llm::Completion completion = gateway.complete(req);
            if (auto parsed = parse_index_response(completion.text)) {
                index = normalize_index(*parsed);
                ok = true;
            } else {
                prompt = user +
                         "\n\nYour previous reply could not be parsed. Respond with only a "
                         "fenced JSON object with fields summary, scenarios, keywords.";
            }
        }
        if (!ok) index = ApiIndex{};  // unindexed, pipeline continues
        out.push_back(std::move(index));
    }
    return out;
}

}  // namespace stgen::kb
