#include "stgen/st/diagnostic.hpp"

#include "stgen/text.hpp"

namespace stgen::st {

const char* to_string(ErrorClass c) {
    switch (c) {
        case ErrorClass::Undefined: return "UNDEFINED";
        case ErrorClass::Mismatch: return "MISMATCH";
        case ErrorClass::Call: return "CALL";
        case ErrorClass::TypeConversion: return "TYPE_CONVERSION";
        case ErrorClass::Other: return "OTHER";
    }
    return "OTHER";
}

const char* to_string(Section s) {
    return s == Section::Declaration ? "DECLARATION" : "IMPLEMENTATION";
}

ErrorClass error_class_from_string(std::string_view s) {
    const std::string u = text::to_upper(text::trim(s));
    if (u == "UNDEFINED") return ErrorClass::Undefined;
    if (u == "MISMATCH") return ErrorClass::Mismatch;
    if (u == "CALL") return ErrorClass::Call;
    if (u == "TYPE_CONVERSION") return ErrorClass::TypeConversion;
    if (u == "OTHER") return ErrorClass::Other;
    throw std::invalid_argument("unknown error class '" + std::string(s) + "'");
}

long& ClassCounts::for_class(ErrorClass c) {
    switch (c) {
        case ErrorClass::Undefined: return undefined;
        case ErrorClass::Mismatch: return mismatch;
        case ErrorClass::Call: return call;
        case ErrorClass::TypeConversion: return type_conversion;
        case ErrorClass::Other: return other;
    }
    return other;
}

long ClassCounts::for_class(ErrorClass c) const {
    return const_cast<ClassCounts*>(this)->for_class(c);
}

ClassCounts count_by_class(const std::vector<Diagnostic>& diags) {
    ClassCounts counts;
    for (const auto& d : diags) ++counts.for_class(d.error_class);
    return counts;
}

void to_json(nlohmann::json& j, const Span& s) {
    j = nlohmann::json{
        {"line", s.line}, {"col", s.col}, {"end_line", s.end_line}, {"end_col", s.end_col}};
}

void from_json(const nlohmann::json& j, Span& s) {
    s.line = j.value("line", 1);
    s.col = j.value("col", 1);
    s.end_line = j.value("end_line", s.line);
    s.end_col = j.value("end_col", s.col);
}

void to_json(nlohmann::json& j, const Diagnostic& d) {
    j = nlohmann::json{{"code", d.code},
                       {"message", d.message},
                       {"span", d.span},
                       {"section", to_string(d.section)},
                       {"class", to_string(d.error_class)}};
}

void from_json(const nlohmann::json& j, Diagnostic& d) {
    d.code = j.at("code").get<std::string>();
    d.message = j.at("message").get<std::string>();
    d.span = j.value("span", Span{});
    d.section = text::to_upper(j.value("section", "IMPLEMENTATION")) == "DECLARATION"
                    ? Section::Declaration
                    : Section::Implementation;
    d.error_class = error_class_from_string(j.at("class").get<std::string>());
}

}  // namespace stgen::st
