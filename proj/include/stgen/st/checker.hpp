#pragma once
// Semantic checks over a parsed unit: symbol resolution, call and
// signature validation, and a conservative implicit-widening type check.
// Each finding maps to exactly one of the five diagnostic classes.
//
// A declaration that fails (bad initializer, unknown type) marks its
// variable failed-declared: later uses of that name are silent, so one
// broken declaration yields one diagnostic instead of a cascade.

#include <vector>

#include "stgen/st/ast.hpp"
#include "stgen/st/dialect.hpp"
#include "stgen/st/diagnostic.hpp"

namespace stgen::st {

// Extra callable signatures beyond the dialect builtins, e.g. the vendor
// API library. Names resolve case-insensitively.
class SignatureSet {
public:
    SignatureSet() = default;
    explicit SignatureSet(std::vector<BuiltinSignature> sigs);
    const BuiltinSignature* find(std::string_view name) const;
    bool empty() const { return sigs_.empty(); }

private:
    std::vector<BuiltinSignature> sigs_;
    std::map<std::string, size_t> index_;
};

std::vector<Diagnostic> check(const StUnit& unit, const DialectProfile& dialect,
                              const SignatureSet& apis = {});

}  // namespace stgen::st
