#include "stgen/st/compiler.hpp"

#include <sys/wait.h>
#include <unistd.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <regex>
#include <sstream>

#include "stgen/st/parser.hpp"
#include "stgen/text.hpp"

namespace stgen::st {

void to_json(nlohmann::json& j, const CompileReport& r) {
    j = nlohmann::json{{"pass", r.pass}, {"diagnostics", r.diagnostics}};
}

void from_json(const nlohmann::json& j, CompileReport& r) {
    r.pass = j.at("pass").get<bool>();
    r.diagnostics = j.value("diagnostics", std::vector<Diagnostic>{});
}

BuiltinCompiler::BuiltinCompiler(DialectProfile dialect, SignatureSet apis)
    : dialect_(std::move(dialect)), apis_(std::move(apis)) {}

CompileReport BuiltinCompiler::compile(const std::string& source) {
    ParseResult parsed = parse(source, dialect_);
    CompileReport report;
    report.diagnostics = std::move(parsed.diagnostics);
    std::vector<Diagnostic> semantic = check(parsed.unit, dialect_, apis_);
    report.diagnostics.insert(report.diagnostics.end(),
                              std::make_move_iterator(semantic.begin()),
                              std::make_move_iterator(semantic.end()));
    report.pass = report.diagnostics.empty();
    return report;
}

ErrorClass classify_message(const std::string& message, const DialectProfile& dialect) {
    for (const auto& rule : dialect.class_rules) {
        const std::regex re(rule.pattern, std::regex::icase);
        if (std::regex_search(message, re)) return rule.error_class;
    }
    return ErrorClass::Other;
}

ExternalAdapterConfig ExternalAdapterConfig::from_json(const nlohmann::json& j) {
    ExternalAdapterConfig cfg;
    cfg.command = j.at("command").get<std::string>();
    if (cfg.command.find("{source_file}") == std::string::npos)
        throw AdapterError("adapter command must contain the {source_file} placeholder");
    for (const auto& pj : j.value("patterns", nlohmann::json::array())) {
        DiagnosticPattern p;
        p.regex = pj.at("regex").get<std::string>();
        p.line_group = pj.value("line_group", 0);
        p.col_group = pj.value("col_group", 0);
        p.message_group = pj.value("message_group", 0);
        cfg.patterns.push_back(std::move(p));
    }
    if (cfg.patterns.empty())
        throw AdapterError("adapter config needs at least one diagnostic pattern");
    return cfg;
}

ExternalAdapterConfig ExternalAdapterConfig::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw AdapterError("cannot open adapter config: " + path);
    nlohmann::json j;
    in >> j;
    return from_json(j);
}

ExternalCommandCompiler::ExternalCommandCompiler(ExternalAdapterConfig config,
                                                 DialectProfile dialect)
    : config_(std::move(config)), dialect_(std::move(dialect)) {}

namespace {

std::filesystem::path write_temp_source(const std::string& source) {
    static std::mutex mu;
    static int counter = 0;
    int id;
    {
        std::lock_guard<std::mutex> lock(mu);
        id = counter++;
    }
    const auto path = std::filesystem::temp_directory_path() /
                      ("stgen_src_" + std::to_string(::getpid()) + "_" + std::to_string(id) +
                       ".st");
    std::ofstream out(path);
    out << source;
    return path;
}

struct CommandResult {
    int exit_code = -1;
    std::string output;
};

CommandResult run_command(const std::string& command) {
    CommandResult res;
    FILE* pipe = ::popen((command + " 2>&1").c_str(), "r");
    if (!pipe) throw AdapterError("failed to start external compiler: " + command);
    char buf[4096];
    size_t n;
    while ((n = fread(buf, 1, sizeof(buf), pipe)) > 0) res.output.append(buf, n);
    const int status = ::pclose(pipe);
    res.exit_code = status == -1 ? -1 : WEXITSTATUS(status);
    return res;
}

}  // namespace

CompileReport ExternalCommandCompiler::compile(const std::string& source) {
    const auto temp = write_temp_source(source);
    std::string command = config_.command;
    const std::string placeholder = "{source_file}";
    for (size_t pos = 0; (pos = command.find(placeholder, pos)) != std::string::npos;)
        command.replace(pos, placeholder.size(), temp.string());

    CommandResult run;
    try {
        run = run_command(command);
    } catch (...) {
        std::filesystem::remove(temp);
        throw;
    }
    std::filesystem::remove(temp);

    const int decl_end = declaration_end_line(source);
    CompileReport report;
    std::istringstream lines(run.output);
    std::string line;
    while (std::getline(lines, line)) {
        for (const auto& pattern : config_.patterns) {
            std::smatch m;
            if (!std::regex_search(line, m, std::regex(pattern.regex))) continue;
            Diagnostic d;
            d.code = "EXT001";
            d.message = pattern.message_group > 0 &&
                                static_cast<size_t>(pattern.message_group) < m.size()
                            ? m[pattern.message_group].str()
                            : m[0].str();
            if (pattern.line_group > 0 && static_cast<size_t>(pattern.line_group) < m.size())
                d.span.line = d.span.end_line = std::max(1, std::atoi(m[pattern.line_group].str().c_str()));
            if (pattern.col_group > 0 && static_cast<size_t>(pattern.col_group) < m.size())
                d.span.col = d.span.end_col = std::max(1, std::atoi(m[pattern.col_group].str().c_str()));
            d.section = decl_end > 0 && d.span.line <= decl_end ? Section::Declaration
                                                                : Section::Implementation;
            d.error_class = classify_message(d.message, dialect_);
            report.diagnostics.push_back(std::move(d));
            break;
        }
    }

    if (run.exit_code != 0 && report.diagnostics.empty())
        throw AdapterError("external compiler exited with " + std::to_string(run.exit_code) +
                           " and produced no parseable diagnostics: " +
                           run.output.substr(0, 400));

    report.pass = report.diagnostics.empty();
    return report;
}

}  // namespace stgen::st
