#include "stgen/st/checker.hpp"

#include <algorithm>
#include <map>
#include <memory>
#include <optional>
#include <set>

#include "stgen/text.hpp"

namespace stgen::st {

SignatureSet::SignatureSet(std::vector<BuiltinSignature> sigs) : sigs_(std::move(sigs)) {
    for (size_t i = 0; i < sigs_.size(); ++i) index_.emplace(text::to_upper(sigs_[i].name), i);
}

const BuiltinSignature* SignatureSet::find(std::string_view name) const {
    auto it = index_.find(text::to_upper(name));
    return it == index_.end() ? nullptr : &sigs_[it->second];
}

namespace {

// Value types flowing through expression checking.
struct VType {
    enum class K {
        Elementary,  // named standard type
        Complex,     // named vendor type (DTL, VARIANT, ...)
        Array,
        Str,         // STRING / WSTRING
        FbInstance,  // variable of function-block type
        IntLit,      // untyped integer literal
        RealLit,     // untyped real literal
        StrLit,      // string literal (len in lit_len)
        Void,
        Unknown      // silently compatible with everything
    };
    K k = K::Unknown;
    std::string name;  // uppercase type name for Elementary/Complex/Str/FbInstance
    std::shared_ptr<VType> elem;
    const BuiltinSignature* fb_sig = nullptr;
    size_t lit_len = 0;

    static VType unknown() { return {}; }
    static VType of(K k, std::string name = "") {
        VType t;
        t.k = k;
        t.name = std::move(name);
        return t;
    }
    bool is_unknown() const { return k == K::Unknown; }
};

const std::set<std::string>& int_types() {
    static const std::set<std::string> s = {"SINT", "INT",   "DINT", "LINT",
                                            "USINT", "UINT", "UDINT", "ULINT"};
    return s;
}
const std::set<std::string>& real_types() {
    static const std::set<std::string> s = {"REAL", "LREAL"};
    return s;
}
const std::set<std::string>& bit_types() {
    static const std::set<std::string> s = {"BYTE", "WORD", "DWORD", "LWORD"};
    return s;
}
const std::set<std::string>& time_types() {
    static const std::set<std::string> s = {"TIME", "LTIME"};
    return s;
}

int numeric_rank(const std::string& name) {
    static const std::map<std::string, int> ranks = {
        {"SINT", 1}, {"USINT", 1}, {"INT", 2},  {"UINT", 2},  {"DINT", 3},
        {"UDINT", 3}, {"LINT", 4}, {"ULINT", 4}, {"REAL", 5},  {"LREAL", 6}};
    auto it = ranks.find(name);
    return it == ranks.end() ? 0 : it->second;
}

bool is_int_name(const std::string& n) { return int_types().count(n) > 0; }
bool is_real_name(const std::string& n) { return real_types().count(n) > 0; }
bool is_bit_name(const std::string& n) { return bit_types().count(n) > 0; }

bool is_int_like(const VType& t) {
    return t.k == VType::K::IntLit || (t.k == VType::K::Elementary && is_int_name(t.name));
}
bool is_numeric_like(const VType& t) {
    if (t.k == VType::K::IntLit || t.k == VType::K::RealLit) return true;
    return t.k == VType::K::Elementary && (is_int_name(t.name) || is_real_name(t.name));
}
bool is_bool(const VType& t) {
    return t.k == VType::K::Elementary && t.name == "BOOL";
}
bool is_bit_like(const VType& t) {
    return t.k == VType::K::Elementary && is_bit_name(t.name);
}

std::string describe(const VType& t) {
    switch (t.k) {
        case VType::K::Elementary:
        case VType::K::Complex:
        case VType::K::Str: return t.name;
        case VType::K::FbInstance: return t.name;
        case VType::K::Array: return "ARRAY OF " + (t.elem ? describe(*t.elem) : "?");
        case VType::K::IntLit: return "integer literal";
        case VType::K::RealLit: return "real literal";
        case VType::K::StrLit: return "string literal";
        case VType::K::Void: return "no value";
        case VType::K::Unknown: return "unknown";
    }
    return "unknown";
}

// Approximate character count of a quoted ST string literal.
size_t string_literal_length(const std::string& raw) {
    if (raw.size() < 2) return 0;
    size_t n = 0;
    for (size_t i = 1; i + 1 < raw.size(); ++i) {
        if (raw[i] == '$' && i + 2 < raw.size()) ++i;  // $-escape counts once
        ++n;
    }
    return n;
}

class Checker {
public:
    Checker(const StUnit& unit, const DialectProfile& dialect, const SignatureSet& apis)
        : unit_(unit), dialect_(dialect), apis_(apis) {}

    std::vector<Diagnostic> run() {
        collect_declarations();
        in_declarations_ = false;
        for (const auto& s : unit_.body) check_stmt(*s);
        return std::move(diags_);
    }

private:
    struct Symbol {
        VType type;
        bool constant = false;
        bool failed = false;
        bool is_return = false;
    };

    const StUnit& unit_;
    const DialectProfile& dialect_;
    const SignatureSet& apis_;
    std::vector<Diagnostic> diags_;
    std::map<std::string, Symbol> symbols_;  // key: uppercase name
    bool in_declarations_ = true;
    int loop_depth_ = 0;

    void report(const char* code, ErrorClass cls, Span span, std::string message) {
        Diagnostic d;
        d.code = code;
        d.message = std::move(message);
        d.span = span;
        d.section = in_declarations_ ? Section::Declaration : Section::Implementation;
        d.error_class = cls;
        diags_.push_back(std::move(d));
    }

    Symbol* lookup(const std::string& name) {
        auto it = symbols_.find(text::to_upper(name));
        return it == symbols_.end() ? nullptr : &it->second;
    }

    // ---- declarations ---------------------------------------------------

    void collect_declarations() {
        if (unit_.kind == UnitKind::Function && unit_.has_return_type) {
            Symbol ret;
            ret.type = resolve_type(unit_.return_type, /*quiet=*/false);
            ret.is_return = true;
            if (ret.type.is_unknown() && unit_.return_type.kind == TypeRef::Kind::Named)
                ret.failed = true;
            symbols_.emplace(text::to_upper(unit_.name), std::move(ret));
        }
        for (const auto& section : unit_.sections) {
            for (const auto& decl : section.decls) declare(section, decl);
        }
    }

    void declare(const VarSection& section, const VarDecl& decl) {
        const std::string key = text::to_upper(decl.name);
        if (symbols_.count(key)) {
            report(kCodeRedefinition, ErrorClass::Other, decl.name_span,
                   "redefinition of '" + decl.name + "'");
            return;
        }
        Symbol sym;
        sym.constant = section.kind == VarSectionKind::Constant;

        bool failed = false;
        sym.type = resolve_declared_type(decl, failed);

        if (!failed && decl.init) {
            if (sym.type.k == VType::K::FbInstance) {
                report(kCodeBadInitializer, ErrorClass::Undefined, decl.name_span,
                       "'" + decl.name + "' failed to declare: function block instances "
                       "cannot take an initializer");
                failed = true;
            } else {
                const std::optional<VType> init_type = constant_expr_type(*decl.init);
                if (!init_type) {
                    report(kCodeBadInitializer, ErrorClass::Undefined, decl.name_span,
                           "'" + decl.name + "' failed to declare: initializer is not a "
                           "constant expression");
                    failed = true;
                } else if (!assignable(*init_type, sym.type)) {
                    report(kCodeBadInitializer, ErrorClass::Undefined, decl.name_span,
                           "'" + decl.name + "' failed to declare: initializer of type " +
                               describe(*init_type) + " does not fit " + describe(sym.type));
                    failed = true;
                }
            }
        }

        sym.failed = failed;
        if (failed) sym.type = VType::unknown();
        symbols_.emplace(key, std::move(sym));
    }

    VType resolve_declared_type(const VarDecl& decl, bool& failed) {
        if (decl.type.kind == TypeRef::Kind::Named) {
            const std::string upper = text::to_upper(decl.type.name);
            if (upper == "__UNSUPPORTED" || upper == "__MISSING") {
                failed = true;  // parser already reported
                return VType::unknown();
            }
            if (const BuiltinSignature* fb = dialect_.find_builtin(upper);
                fb && fb->kind == UnitKind::FunctionBlock) {
                VType t = VType::of(VType::K::FbInstance, upper);
                t.fb_sig = fb;
                return t;
            }
        }
        VType t = resolve_type(decl.type, /*quiet=*/true);
        if (t.is_unknown() && decl.type.kind == TypeRef::Kind::Named) {
            report(kCodeInvalidType, ErrorClass::Other, decl.name_span,
                   "'" + decl.name + "' has invalid user type '" + decl.type.name + "'");
            failed = true;
        }
        return t;
    }

    VType resolve_type(const TypeRef& t, bool quiet) {
        switch (t.kind) {
            case TypeRef::Kind::String:
                return VType::of(VType::K::Str, text::to_upper(t.name));
            case TypeRef::Kind::Array: {
                VType arr = VType::of(VType::K::Array);
                if (t.elem) arr.elem = std::make_shared<VType>(resolve_type(*t.elem, quiet));
                return arr;
            }
            case TypeRef::Kind::Named: {
                const std::string upper = text::to_upper(t.name);
                if (dialect_.is_elementary(upper)) return VType::of(VType::K::Elementary, upper);
                if (dialect_.is_complex(upper)) return VType::of(VType::K::Complex, upper);
                if (!quiet)
                    report(kCodeInvalidType, ErrorClass::Other, t.span,
                           "invalid user type '" + t.name + "'");
                return VType::unknown();
            }
        }
        return VType::unknown();
    }

    // Initializers must be constant: literals combined by operators, or
    // previously declared constants. nullopt: not constant / not valid.
    std::optional<VType> constant_expr_type(const Expr& e) {
        switch (e.kind) {
            case Expr::Kind::IntLit: return VType::of(VType::K::IntLit);
            case Expr::Kind::RealLit: return VType::of(VType::K::RealLit);
            case Expr::Kind::BoolLit: return VType::of(VType::K::Elementary, "BOOL");
            case Expr::Kind::StringLit: {
                VType t = VType::of(VType::K::StrLit);
                t.lit_len = string_literal_length(e.text);
                return t;
            }
            case Expr::Kind::TypedLit: return typed_literal_type(e);
            case Expr::Kind::Ident: {
                if (Symbol* sym = lookup(e.text); sym && sym->constant && !sym->failed)
                    return sym->type;
                return std::nullopt;
            }
            case Expr::Kind::Unary: {
                auto inner = constant_expr_type(*e.children[0]);
                if (!inner) return std::nullopt;
                return inner;
            }
            case Expr::Kind::Binary: {
                auto lhs = constant_expr_type(*e.children[0]);
                auto rhs = constant_expr_type(*e.children[1]);
                if (!lhs || !rhs) return std::nullopt;
                if (is_numeric_like(*lhs) && is_numeric_like(*rhs)) return promote(*lhs, *rhs);
                return std::nullopt;
            }
            default: return std::nullopt;
        }
    }

    VType typed_literal_type(const Expr& e) {
        const std::string raw = text::to_upper(e.text);
        const size_t hash = raw.find('#');
        const std::string prefix = raw.substr(0, hash);
        if (prefix == "T" || prefix == "TIME" || prefix == "LTIME")
            return VType::of(VType::K::Elementary, "TIME");
        if (prefix == "D" || prefix == "DATE") return VType::of(VType::K::Elementary, "DATE");
        if (prefix == "TOD" || prefix == "TIME_OF_DAY")
            return VType::of(VType::K::Elementary, "TOD");
        if (prefix == "DT" || prefix == "DATE_AND_TIME") {
            if (dialect_.is_complex("DT")) return VType::of(VType::K::Complex, "DT");
            return VType::of(VType::K::Elementary, "DT");
        }
        if (dialect_.is_elementary(prefix)) return VType::of(VType::K::Elementary, prefix);
        if (dialect_.is_complex(prefix)) return VType::of(VType::K::Complex, prefix);
        return VType::unknown();
    }

    // ---- type algebra -----------------------------------------------------

    VType promote(const VType& a, const VType& b) {
        if (a.is_unknown() || b.is_unknown()) return VType::unknown();
        const bool real = a.k == VType::K::RealLit || b.k == VType::K::RealLit ||
                          (a.k == VType::K::Elementary && is_real_name(a.name)) ||
                          (b.k == VType::K::Elementary && is_real_name(b.name));
        const int ra = a.k == VType::K::Elementary ? numeric_rank(a.name) : 0;
        const int rb = b.k == VType::K::Elementary ? numeric_rank(b.name) : 0;
        if (ra == 0 && rb == 0)
            return real ? VType::of(VType::K::RealLit) : VType::of(VType::K::IntLit);
        const VType& named = ra >= rb ? (ra ? a : b) : rb ? b : a;
        if (!real) return named;
        if (named.k == VType::K::Elementary && is_real_name(named.name)) return named;
        // int operand meets real literal/operand: widest real involved, else REAL
        if (a.k == VType::K::Elementary && is_real_name(a.name)) return a;
        if (b.k == VType::K::Elementary && is_real_name(b.name)) return b;
        return VType::of(VType::K::Elementary, "REAL");
    }

    bool assignable(const VType& from, const VType& to) {
        if (from.is_unknown() || to.is_unknown()) return true;
        if (to.k == VType::K::Complex && to.name == "VARIANT" && dialect_.allows_variant)
            return true;
        switch (to.k) {
            case VType::K::Elementary: {
                if (from.k == VType::K::IntLit)
                    return is_int_name(to.name) || is_real_name(to.name) || is_bit_name(to.name);
                if (from.k == VType::K::RealLit) return is_real_name(to.name);
                if (from.k == VType::K::StrLit)
                    return (to.name == "CHAR" || to.name == "WCHAR") && from.lit_len == 1;
                if (from.k != VType::K::Elementary) return false;
                return dialect_.widens_to(from.name, to.name);
            }
            case VType::K::Str:
                if (from.k == VType::K::StrLit) return true;
                return from.k == VType::K::Str && from.name == to.name;
            case VType::K::Complex:
                return from.k == VType::K::Complex && from.name == to.name;
            case VType::K::Array:
                // Arrays assign only from arrays with compatible elements.
                return from.k == VType::K::Array &&
                       (!from.elem || !to.elem || assignable(*from.elem, *to.elem));
            case VType::K::FbInstance:
                return from.k == VType::K::FbInstance && from.name == to.name;
            default:
                return false;
        }
    }

    // Pseudo-types in builtin signatures: ANY, ANY_NUM, ANY_INT, ANY_BIT,
    // ANY_STRING match families instead of one concrete type.
    bool matches_param_type(const VType& arg, const std::string& param_type) {
        if (arg.is_unknown()) return true;
        if (param_type == "ANY") return true;
        if (param_type == "ANY_NUM") return is_numeric_like(arg);
        if (param_type == "ANY_INT") return is_int_like(arg);
        if (param_type == "ANY_BIT")
            return is_bool(arg) || is_bit_like(arg) || arg.k == VType::K::IntLit;
        if (param_type == "ANY_STRING")
            return arg.k == VType::K::Str || arg.k == VType::K::StrLit;
        if (param_type == "VARIANT" && dialect_.allows_variant) return true;
        VType want = named_vtype(param_type);
        return assignable(arg, want);
    }

    VType named_vtype(const std::string& upper_name) {
        if (upper_name == "STRING" || upper_name == "WSTRING")
            return VType::of(VType::K::Str, upper_name);
        if (dialect_.is_elementary(upper_name))
            return VType::of(VType::K::Elementary, upper_name);
        if (dialect_.is_complex(upper_name)) return VType::of(VType::K::Complex, upper_name);
        return VType::unknown();
    }

    VType param_result_type(const std::string& upper_name) {
        if (upper_name.empty()) return VType::of(VType::K::Void);
        return named_vtype(upper_name);
    }

    // ---- statements -------------------------------------------------------

    void check_stmt(const Stmt& stmt) {
        std::visit([&](const auto& node) { check_node(node, stmt.span); }, stmt.node);
    }

    void check_body(const std::vector<StmtPtr>& body) {
        for (const auto& s : body) check_stmt(*s);
    }

    void check_node(const AssignStmt& s, Span span) {
        if (!s.lhs || !s.rhs) return;
        const VType target = check_lvalue(*s.lhs);
        const VType value = type_expr(*s.rhs);
        if (!assignable(value, target)) {
            report(kCodeBadAssignment, ErrorClass::TypeConversion, span,
                   "cannot assign " + describe(value) + " to " + describe(target));
        }
    }

    void check_node(const IfStmt& s, Span) {
        for (const auto& arm : s.arms) {
            if (arm.cond) require_bool(*arm.cond, "IF condition");
            check_body(arm.body);
        }
        check_body(s.else_body);
    }

    void check_node(const CaseStmt& s, Span) {
        if (s.selector) {
            const VType sel = type_expr(*s.selector);
            if (!sel.is_unknown() && !is_int_like(sel))
                report(kCodeBadOperand, ErrorClass::TypeConversion, s.selector->span,
                       "CASE selector must be an integer, got " + describe(sel));
        }
        for (const auto& branch : s.branches) {
            for (const auto& label : branch.labels) {
                if (label.lo) require_int_label(*label.lo);
                if (label.hi) require_int_label(*label.hi);
            }
            check_body(branch.body);
        }
        check_body(s.else_body);
    }

    void require_int_label(const Expr& e) {
        const VType t = type_expr(e);
        if (!t.is_unknown() && !is_int_like(t))
            report(kCodeBadOperand, ErrorClass::TypeConversion, e.span,
                   "case label must be an integer, got " + describe(t));
    }

    void check_node(const ForStmt& s, Span span) {
        if (!s.var.empty()) {
            Symbol* sym = lookup(s.var);
            if (!sym) {
                report(kCodeUndefined, ErrorClass::Undefined, s.var_span,
                       "undefined identifier '" + s.var + "'");
            } else if (!sym->failed && !is_int_like(sym->type) && !sym->type.is_unknown()) {
                report(kCodeBadOperand, ErrorClass::TypeConversion, s.var_span,
                       "FOR variable must be an integer, got " + describe(sym->type));
            }
        }
        for (const Expr* e : {s.from.get(), s.to.get(), s.by.get()}) {
            if (!e) continue;
            const VType t = type_expr(*e);
            if (!t.is_unknown() && !is_int_like(t))
                report(kCodeBadOperand, ErrorClass::TypeConversion, e->span,
                       "FOR bound must be an integer, got " + describe(t));
        }
        ++loop_depth_;
        check_body(s.body);
        --loop_depth_;
        (void)span;
    }

    void check_node(const WhileStmt& s, Span) {
        if (s.cond) require_bool(*s.cond, "WHILE condition");
        ++loop_depth_;
        check_body(s.body);
        --loop_depth_;
    }

    void check_node(const RepeatStmt& s, Span) {
        ++loop_depth_;
        check_body(s.body);
        --loop_depth_;
        if (s.until) require_bool(*s.until, "UNTIL condition");
    }

    void check_node(const ExitStmt&, Span span) {
        if (loop_depth_ == 0)
            report(kCodeExitOutsideLoop, ErrorClass::Other, span, "EXIT outside of a loop");
    }

    void check_node(const ReturnStmt&, Span) {}

    void check_node(const CallStmt& s, Span) {
        if (s.call) type_call(*s.call, /*as_statement=*/true);
    }

    void require_bool(const Expr& e, const char* what) {
        const VType t = type_expr(e);
        if (!t.is_unknown() && !is_bool(t))
            report(kCodeBadOperand, ErrorClass::TypeConversion, e.span,
                   std::string(what) + " must be BOOL, got " + describe(t));
    }

    // ---- expressions ------------------------------------------------------

    VType check_lvalue(const Expr& e) {
        if (e.kind == Expr::Kind::Ident) {
            Symbol* sym = lookup(e.text);
            if (!sym) {
                report(kCodeUndefined, ErrorClass::Undefined, e.span,
                       "undefined identifier '" + e.text + "'");
                return VType::unknown();
            }
            if (sym->failed) return VType::unknown();
            if (sym->constant) {
                report(kCodeAssignToConstant, ErrorClass::Other, e.span,
                       "assignment to constant '" + e.text + "'");
                return VType::unknown();
            }
            return sym->type;
        }
        // Member / index targets share the reading rules.
        return type_expr(e);
    }

    VType type_expr(const Expr& e) {
        switch (e.kind) {
            case Expr::Kind::IntLit: return VType::of(VType::K::IntLit);
            case Expr::Kind::RealLit: return VType::of(VType::K::RealLit);
            case Expr::Kind::BoolLit: return VType::of(VType::K::Elementary, "BOOL");
            case Expr::Kind::StringLit: {
                VType t = VType::of(VType::K::StrLit);
                t.lit_len = string_literal_length(e.text);
                return t;
            }
            case Expr::Kind::TypedLit: return typed_literal_type(e);
            case Expr::Kind::Ident: return type_ident(e);
            case Expr::Kind::Member: return type_member(e);
            case Expr::Kind::Index: return type_index(e);
            case Expr::Kind::Call: return type_call(e, /*as_statement=*/false);
            case Expr::Kind::Unary: return type_unary(e);
            case Expr::Kind::Binary: return type_binary(e);
        }
        return VType::unknown();
    }

    VType type_ident(const Expr& e) {
        if (e.text == "__ADDRESS") return VType::unknown();  // parser already reported
        Symbol* sym = lookup(e.text);
        if (!sym) {
            report(kCodeUndefined, ErrorClass::Undefined, e.span,
                   "undefined identifier '" + e.text + "'");
            return VType::unknown();
        }
        if (sym->failed) return VType::unknown();
        return sym->type;
    }

    VType type_member(const Expr& e) {
        const Expr& base = *e.children[0];
        const VType base_type = type_expr(base);
        if (base_type.is_unknown()) return VType::unknown();
        if (base_type.k == VType::K::FbInstance && base_type.fb_sig) {
            if (const ParamSpec* p = base_type.fb_sig->find_param(e.text))
                return named_vtype(text::to_upper(p->type_name));
            report(kCodeUnknownMember, ErrorClass::Undefined, e.span,
                   "'" + base_type.name + "' has no member '" + e.text + "'");
            return VType::unknown();
        }
        if (base_type.k == VType::K::Complex) return VType::unknown();  // no struct model
        report(kCodeUnknownMember, ErrorClass::Undefined, e.span,
               describe(base_type) + " has no member '" + e.text + "'");
        return VType::unknown();
    }

    VType type_index(const Expr& e) {
        const VType base = type_expr(*e.children[0]);
        for (size_t i = 1; i < e.children.size(); ++i) {
            const VType idx = type_expr(*e.children[i]);
            if (!idx.is_unknown() && !is_int_like(idx))
                report(kCodeBadOperand, ErrorClass::TypeConversion, e.children[i]->span,
                       "array index must be an integer, got " + describe(idx));
        }
        if (base.is_unknown()) return VType::unknown();
        if (base.k == VType::K::Array) return base.elem ? *base.elem : VType::unknown();
        if (base.k == VType::K::Str)
            return VType::of(VType::K::Elementary, base.name == "WSTRING" ? "WCHAR" : "CHAR");
        report(kCodeBadOperand, ErrorClass::TypeConversion, e.span,
               describe(base) + " is not indexable");
        return VType::unknown();
    }

    VType type_unary(const Expr& e) {
        const VType v = type_expr(*e.children[0]);
        if (v.is_unknown()) return v;
        if (e.text == "NOT") {
            if (is_bool(v) || is_bit_like(v)) return v;
            report(kCodeBadOperand, ErrorClass::TypeConversion, e.span,
                   "NOT needs BOOL or a bit string, got " + describe(v));
            return VType::unknown();
        }
        if (is_numeric_like(v)) return v;
        report(kCodeBadOperand, ErrorClass::TypeConversion, e.span,
               "unary " + e.text + " needs a numeric operand, got " + describe(v));
        return VType::unknown();
    }

    VType type_binary(const Expr& e) {
        const std::string& op = e.text;
        const VType lhs = type_expr(*e.children[0]);
        const VType rhs = type_expr(*e.children[1]);
        if (lhs.is_unknown() || rhs.is_unknown()) {
            if (op == "=" || op == "<>" || op == "<" || op == ">" || op == "<=" || op == ">=")
                return VType::of(VType::K::Elementary, "BOOL");
            return VType::unknown();
        }
        if (op == "AND" || op == "OR" || op == "XOR") {
            if (is_bool(lhs) && is_bool(rhs)) return lhs;
            const bool bits = (is_bit_like(lhs) || lhs.k == VType::K::IntLit) &&
                              (is_bit_like(rhs) || rhs.k == VType::K::IntLit);
            if (bits) return is_bit_like(lhs) ? lhs : rhs;
            report(kCodeBadOperand, ErrorClass::TypeConversion, e.span,
                   op + " needs BOOL or bit-string operands, got " + describe(lhs) + " and " +
                       describe(rhs));
            return VType::unknown();
        }
        if (op == "=" || op == "<>" || op == "<" || op == ">" || op == "<=" || op == ">=") {
            if (!comparable(lhs, rhs))
                report(kCodeBadOperand, ErrorClass::TypeConversion, e.span,
                       "cannot compare " + describe(lhs) + " with " + describe(rhs));
            return VType::of(VType::K::Elementary, "BOOL");
        }
        if (op == "MOD") {
            if (is_int_like(lhs) && is_int_like(rhs)) return promote(lhs, rhs);
            report(kCodeBadOperand, ErrorClass::TypeConversion, e.span,
                   "MOD needs integer operands, got " + describe(lhs) + " and " + describe(rhs));
            return VType::unknown();
        }
        if (op == "**") {
            if (is_numeric_like(lhs) && is_numeric_like(rhs)) {
                if (lhs.k == VType::K::Elementary && is_real_name(lhs.name)) return lhs;
                return VType::of(VType::K::Elementary, "REAL");
            }
            report(kCodeBadOperand, ErrorClass::TypeConversion, e.span,
                   "'**' needs numeric operands, got " + describe(lhs) + " and " + describe(rhs));
            return VType::unknown();
        }
        // + - * /
        if (is_numeric_like(lhs) && is_numeric_like(rhs)) return promote(lhs, rhs);
        const bool times = lhs.k == VType::K::Elementary && rhs.k == VType::K::Elementary &&
                           time_types().count(lhs.name) && time_types().count(rhs.name);
        if (times && (op == "+" || op == "-")) return lhs;
        report(kCodeBadOperand, ErrorClass::TypeConversion, e.span,
               "'" + op + "' cannot combine " + describe(lhs) + " and " + describe(rhs));
        return VType::unknown();
    }

    // ---- calls ------------------------------------------------------------

    VType type_call(const Expr& call, bool as_statement) {
        const Expr& callee = *call.children[0];
        if (callee.kind == Expr::Kind::Member) {
            report(kCodeUnsupported, ErrorClass::Other, callee.span,
                   "unsupported construct: method call");
            for (const auto& a : call.args)
                if (a.value) type_expr(*a.value);
            return VType::unknown();
        }
        if (callee.kind != Expr::Kind::Ident) {
            report(kCodeNotCallable, ErrorClass::Call, callee.span, "expression is not callable");
            return VType::unknown();
        }
        const std::string& name = callee.text;

        if (Symbol* sym = lookup(name)) {
            if (sym->failed) return VType::unknown();
            if (sym->type.k == VType::K::FbInstance && sym->type.fb_sig) {
                if (!as_statement)
                    report(kCodeNotCallable, ErrorClass::Call, callee.span,
                           "function block instance '" + name + "' cannot be used as a value");
                check_args(call, *sym->type.fb_sig, /*require_all_inputs=*/false);
                return VType::of(VType::K::Void);
            }
            if (!sym->is_return) {
                report(kCodeNotCallable, ErrorClass::Call, callee.span,
                       "'" + name + "' is not callable");
                return VType::unknown();
            }
        }

        if (const BuiltinSignature* sig = dialect_.find_builtin(name)) {
            if (sig->kind == UnitKind::FunctionBlock) {
                report(kCodeNotCallable, ErrorClass::Call, callee.span,
                       "function block type '" + sig->name + "' needs a declared instance");
                return VType::of(VType::K::Void);
            }
            return check_function_call(call, *sig);
        }

        if (const BuiltinSignature* sig = apis_.find(name)) {
            check_args(call, *sig, /*require_all_inputs=*/false);
            return VType::unknown();  // vendor instructions: result type not modelled
        }

        if (auto conv = conversion_call(call, name)) return *conv;

        report(kCodeUnknownCallable, ErrorClass::Call, callee.span,
               "call to unknown function '" + name + "'");
        for (const auto& a : call.args)
            if (a.value) type_expr(*a.value);
        return VType::unknown();
    }

    VType check_function_call(const Expr& call, const BuiltinSignature& sig) {
        check_args(call, sig, /*require_all_inputs=*/true);
        if (sig.return_type == "PROMOTED") {
            VType acc = VType::unknown();
            bool first = true;
            for (const auto& a : call.args) {
                if (!a.value || a.is_output) continue;
                const VType t = type_expr(*a.value);
                if (!is_numeric_like(t)) continue;
                acc = first ? t : promote(acc, t);
                first = false;
            }
            return first ? VType::unknown() : acc;
        }
        return param_result_type(sig.return_type);
    }

    void check_args(const Expr& call, const BuiltinSignature& sig, bool require_all_inputs) {
        const auto inputs = sig.inputs();
        size_t positional = 0;
        bool any_named = false;

        for (const auto& arg : call.args) {
            const ParamSpec* param = nullptr;
            if (!arg.name.empty()) {
                any_named = true;
                param = sig.find_param(arg.name);
                if (!param) {
                    report(kCodeUnknownParam, ErrorClass::Call, arg.value->span,
                           "'" + sig.name + "' has no parameter '" + arg.name + "'");
                    type_expr(*arg.value);
                    continue;
                }
            } else {
                if (positional < inputs.size()) {
                    param = inputs[positional];
                } else {
                    report(kCodeWrongArity, ErrorClass::Call, arg.value->span,
                           "'" + sig.name + "' takes " + std::to_string(inputs.size()) +
                               " argument(s)");
                    type_expr(*arg.value);
                    continue;
                }
                ++positional;
            }

            const VType got = type_expr(*arg.value);
            if (arg.is_output) {
                if (param->direction == ParamDirection::In)
                    report(kCodeUnknownParam, ErrorClass::Call, arg.value->span,
                           "'" + param->name + "' is an input and cannot use '=>'");
                else if (!got.is_unknown() &&
                         !assignable(named_vtype(text::to_upper(param->type_name)), got))
                    report(kCodeBadArgument, ErrorClass::TypeConversion, arg.value->span,
                           "output '" + param->name + "' of type " + param->type_name +
                               " does not fit " + describe(got));
            } else if (!matches_param_type(got, text::to_upper(param->type_name))) {
                report(kCodeBadArgument, ErrorClass::TypeConversion, arg.value->span,
                       "argument for '" + param->name + "' expects " + param->type_name +
                           ", got " + describe(got));
            }
        }

        if (require_all_inputs && !any_named && positional < inputs.size()) {
            report(kCodeWrongArity, ErrorClass::Call, call.children[0]->span,
                   "'" + sig.name + "' expects " + std::to_string(inputs.size()) +
                       " argument(s), got " + std::to_string(positional));
        }
    }

    // Conversion functions derived from type names: SRC_TO_DST always,
    // TO_DST only when the profile does not demand an explicit source.
    std::optional<VType> conversion_call(const Expr& call, const std::string& name) {
        const std::string upper = text::to_upper(name);
        const Span span = call.children[0]->span;

        auto arg_type = [&]() -> VType {
            if (call.args.size() != 1 || !call.args[0].value || call.args[0].is_output) {
                report(kCodeWrongArity, ErrorClass::Call, span,
                       "conversion '" + name + "' takes exactly one argument");
                for (const auto& a : call.args)
                    if (a.value) type_expr(*a.value);
                return VType::unknown();
            }
            return type_expr(*call.args[0].value);
        };

        if (upper.rfind("TO_", 0) == 0) {
            const std::string dst = upper.substr(3);
            if (!dialect_.is_known_type(dst)) return std::nullopt;
            if (dialect_.conversions_require_source_type) {
                report(kCodeBadConversionName, ErrorClass::TypeConversion, span,
                       "malformed conversion name '" + name + "': this dialect requires the "
                       "source type (<SRC>_TO_" + dst + ")");
                arg_type();
                return named_vtype(dst);
            }
            arg_type();
            return named_vtype(dst);
        }

        // Find a "_TO_" split where both sides name known types.
        size_t pos = upper.find("_TO_");
        while (pos != std::string::npos) {
            const std::string src = upper.substr(0, pos);
            const std::string dst = upper.substr(pos + 4);
            if (dialect_.is_known_type(src) && dialect_.is_known_type(dst)) {
                const VType got = arg_type();
                const VType want = named_vtype(src);
                if (!got.is_unknown() && !assignable(got, want))
                    report(kCodeBadArgument, ErrorClass::TypeConversion, span,
                           "'" + name + "' converts from " + src + ", got " + describe(got));
                return named_vtype(dst);
            }
            pos = upper.find("_TO_", pos + 1);
        }
        return std::nullopt;
    }

    bool comparable(const VType& a, const VType& b) {
        if (is_numeric_like(a) && is_numeric_like(b)) return true;
        if ((a.k == VType::K::Str || a.k == VType::K::StrLit) &&
            (b.k == VType::K::Str || b.k == VType::K::StrLit))
            return true;
        if (is_bool(a) && is_bool(b)) return true;
        if (is_bit_like(a) && (is_bit_like(b) || b.k == VType::K::IntLit)) return true;
        if (is_bit_like(b) && a.k == VType::K::IntLit) return true;
        if (a.k == VType::K::Elementary && b.k == VType::K::Elementary && a.name == b.name)
            return true;
        return false;
    }
};

}  // namespace

std::vector<Diagnostic> check(const StUnit& unit, const DialectProfile& dialect,
                              const SignatureSet& apis) {
    return Checker(unit, dialect, apis).run();
}

}  // namespace stgen::st
