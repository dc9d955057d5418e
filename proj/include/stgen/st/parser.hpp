#pragma once
// Recursive-descent parser for the ST subset: one FUNCTION_BLOCK or
// FUNCTION per source, var sections, structured statements and
// expressions with standard ST precedence. Always returns a best-effort
// tree; errors surface as diagnostics. Recovery happens at statement
// boundaries so several errors can be reported in one pass.

#include <string_view>
#include <vector>

#include "stgen/st/ast.hpp"
#include "stgen/st/dialect.hpp"
#include "stgen/st/diagnostic.hpp"

namespace stgen::st {

struct ParseResult {
    StUnit unit;
    std::vector<Diagnostic> diagnostics;
};

ParseResult parse(std::string_view source, const DialectProfile& dialect);

// Line of the last END_VAR in raw source; 0 when none. Used to section
// external-compiler diagnostics that only carry line numbers.
int declaration_end_line(std::string_view source);

}  // namespace stgen::st
