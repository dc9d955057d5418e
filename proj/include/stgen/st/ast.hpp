#pragma once
// Syntax tree for one ST unit. Literals keep their raw spelling; the
// pretty-printer reproduces canonical source from this tree.

#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "stgen/st/diagnostic.hpp"
#include "stgen/types.hpp"

namespace stgen::st {

struct Expr;
using ExprPtr = std::unique_ptr<Expr>;

struct CallArg {
    std::string name;       // empty: positional
    bool is_output = false; // name => target
    ExprPtr value;
};

struct Expr {
    enum class Kind {
        IntLit, RealLit, StringLit, BoolLit, TypedLit,
        Ident, Member, Index, Call, Unary, Binary
    };
    Kind kind;
    // Literal raw text, identifier name, member name, or operator spelling
    // (binary/unary operators are stored uppercase: "AND", "NOT", "+", ...).
    std::string text;
    std::vector<ExprPtr> children;  // Member: base; Index: base, idx...; Unary: operand; Binary: lhs, rhs
    std::vector<CallArg> args;      // Call only; callee is children[0]
    Span span;
};

ExprPtr make_expr(Expr::Kind kind, std::string text, Span span);

struct Stmt;
using StmtPtr = std::unique_ptr<Stmt>;

struct AssignStmt {
    ExprPtr lhs;
    ExprPtr rhs;
};

struct IfStmt {
    struct Arm {
        ExprPtr cond;
        std::vector<StmtPtr> body;
    };
    std::vector<Arm> arms;  // IF + ELSIFs, in order
    bool has_else = false;
    std::vector<StmtPtr> else_body;
};

struct CaseStmt {
    struct Label {
        ExprPtr lo;
        ExprPtr hi;  // null: single value
    };
    struct Branch {
        std::vector<Label> labels;
        std::vector<StmtPtr> body;
    };
    ExprPtr selector;
    std::vector<Branch> branches;
    bool has_else = false;
    std::vector<StmtPtr> else_body;
};

struct ForStmt {
    std::string var;
    Span var_span;
    ExprPtr from;
    ExprPtr to;
    ExprPtr by;  // optional
    std::vector<StmtPtr> body;
};

struct WhileStmt {
    ExprPtr cond;
    std::vector<StmtPtr> body;
};

struct RepeatStmt {
    std::vector<StmtPtr> body;
    ExprPtr until;
};

struct ExitStmt {};
struct ReturnStmt {};

struct CallStmt {
    ExprPtr call;  // Expr::Kind::Call
};

struct Stmt {
    Span span;
    std::variant<AssignStmt, IfStmt, CaseStmt, ForStmt, WhileStmt, RepeatStmt, ExitStmt,
                 ReturnStmt, CallStmt>
        node;
};

struct TypeRef {
    enum class Kind { Named, Array, String };
    Kind kind = Kind::Named;
    std::string name;               // Named: as written; String: STRING or WSTRING
    ExprPtr str_len;                // STRING[n], optional
    ExprPtr lo, hi;                 // Array bounds
    std::unique_ptr<TypeRef> elem;  // Array element type
    Span span;
};

struct VarDecl {
    std::string name;
    Span name_span;
    TypeRef type;
    ExprPtr init;  // optional
};

enum class VarSectionKind { Input, Output, InOut, Var, Temp, Constant };

const char* to_string(VarSectionKind k);

struct VarSection {
    VarSectionKind kind = VarSectionKind::Var;
    std::vector<VarDecl> decls;
    Span span;
};

struct StUnit {
    UnitKind kind = UnitKind::FunctionBlock;
    std::string name;
    bool has_return_type = false;
    TypeRef return_type;  // Function only
    std::vector<VarSection> sections;
    std::vector<StmtPtr> body;
    // Last line of the last END_VAR; 0 when there are no sections.
    // Diagnostics at or before this line belong to the declaration section.
    int decl_end_line = 0;
};

}  // namespace stgen::st
