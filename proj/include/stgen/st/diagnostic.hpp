#pragma once
// Checker findings. Every diagnostic carries exactly one error class and
// is tagged with the source section it belongs to, which drives the
// declaration-first repair ordering downstream.

#include <string>
#include <vector>

#include <json.hpp>

namespace stgen::st {

enum class ErrorClass { Undefined, Mismatch, Call, TypeConversion, Other };

enum class Section { Declaration, Implementation };

const char* to_string(ErrorClass c);
const char* to_string(Section s);
ErrorClass error_class_from_string(std::string_view s);

struct Span {
    int line = 1;
    int col = 1;
    int end_line = 1;
    int end_col = 1;
};

struct Diagnostic {
    std::string code;  // stable identifier, e.g. "ST201"
    std::string message;
    Span span;
    Section section = Section::Implementation;
    ErrorClass error_class = ErrorClass::Other;
};

// Stable diagnostic codes.
//   ST1xx  syntax        ST2xx undefined       ST3xx call
//   ST4xx  conversion    ST5xx other
inline constexpr const char* kCodeSyntax = "ST101";            // Mismatch
inline constexpr const char* kCodeUnclosed = "ST102";          // Mismatch
inline constexpr const char* kCodeUnsupported = "ST110";       // Other
inline constexpr const char* kCodeUndefined = "ST201";         // Undefined
inline constexpr const char* kCodeBadInitializer = "ST202";    // Undefined (failed declaration)
inline constexpr const char* kCodeUnknownMember = "ST203";     // Undefined
inline constexpr const char* kCodeUnknownCallable = "ST301";   // Call
inline constexpr const char* kCodeWrongArity = "ST302";        // Call
inline constexpr const char* kCodeUnknownParam = "ST303";      // Call
inline constexpr const char* kCodeNotCallable = "ST304";       // Call
inline constexpr const char* kCodeBadAssignment = "ST401";     // TypeConversion
inline constexpr const char* kCodeBadConversionName = "ST402"; // TypeConversion
inline constexpr const char* kCodeBadArgument = "ST403";       // TypeConversion
inline constexpr const char* kCodeBadOperand = "ST404";        // TypeConversion
inline constexpr const char* kCodeRedefinition = "ST501";      // Other
inline constexpr const char* kCodeInvalidType = "ST502";       // Other
inline constexpr const char* kCodeExitOutsideLoop = "ST503";   // Other
inline constexpr const char* kCodeAssignToConstant = "ST504";  // Other

void to_json(nlohmann::json& j, const Span& s);
void from_json(const nlohmann::json& j, Span& s);
void to_json(nlohmann::json& j, const Diagnostic& d);
void from_json(const nlohmann::json& j, Diagnostic& d);

// Per-class tally; the sum over classes always equals the input size.
struct ClassCounts {
    long undefined = 0;
    long mismatch = 0;
    long call = 0;
    long type_conversion = 0;
    long other = 0;

    long total() const { return undefined + mismatch + call + type_conversion + other; }
    long& for_class(ErrorClass c);
    long for_class(ErrorClass c) const;
};

ClassCounts count_by_class(const std::vector<Diagnostic>& diags);

}  // namespace stgen::st
