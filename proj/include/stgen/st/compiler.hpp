#pragma once
// Compilation front door for the pipeline. The builtin adapter runs the
// parser and checker; the external adapter shells out to a vendor tool
// and maps its output onto Diagnostics via configured patterns. Adapter
// failures (missing tool, unparseable output) are distinct from compile
// failures.

#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "stgen/st/checker.hpp"
#include "stgen/st/dialect.hpp"
#include "stgen/st/diagnostic.hpp"

namespace stgen::st {

struct CompileReport {
    bool pass = false;
    std::vector<Diagnostic> diagnostics;
};

void to_json(nlohmann::json& j, const CompileReport& r);
void from_json(const nlohmann::json& j, CompileReport& r);

// Tool/infrastructure failure, not a compile failure.
struct AdapterError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

class CompilerAdapter {
public:
    virtual ~CompilerAdapter() = default;
    virtual CompileReport compile(const std::string& source) = 0;
};

class BuiltinCompiler : public CompilerAdapter {
public:
    BuiltinCompiler(DialectProfile dialect, SignatureSet apis);
    CompileReport compile(const std::string& source) override;
    const DialectProfile& dialect() const { return dialect_; }

private:
    DialectProfile dialect_;
    SignatureSet apis_;
};

// One extraction pattern; capture groups are 1-based regex groups.
struct DiagnosticPattern {
    std::string regex;
    int line_group = 0;     // 0: no location captured
    int col_group = 0;
    int message_group = 0;  // 0: whole match is the message
};

struct ExternalAdapterConfig {
    std::string command;  // must contain {source_file}
    std::vector<DiagnosticPattern> patterns;

    static ExternalAdapterConfig from_json(const nlohmann::json& j);
    static ExternalAdapterConfig load(const std::string& path);
};

class ExternalCommandCompiler : public CompilerAdapter {
public:
    ExternalCommandCompiler(ExternalAdapterConfig config, DialectProfile dialect);
    CompileReport compile(const std::string& source) override;

private:
    ExternalAdapterConfig config_;
    DialectProfile dialect_;
};

// Classifies a raw compiler message with the profile's ordered first-match
// rules; Other when nothing matches.
ErrorClass classify_message(const std::string& message, const DialectProfile& dialect);

}  // namespace stgen::st
