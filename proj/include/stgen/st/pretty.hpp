#pragma once
// Canonical source rendering of a parsed unit. The printer's output
// reparses to an identical tree, so print-parse-print is a fixpoint on
// well-formed sources.

#include <string>

#include "stgen/st/ast.hpp"

namespace stgen::st {

std::string pretty_print(const StUnit& unit);
std::string pretty_print(const Expr& expr);

}  // namespace stgen::st
