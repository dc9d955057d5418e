#include "stgen/st/pretty.hpp"

namespace stgen::st {

namespace {

constexpr int kIndentWidth = 4;

int binary_prec(const std::string& op) {
    if (op == "OR") return 1;
    if (op == "XOR") return 2;
    if (op == "AND") return 3;
    if (op == "=" || op == "<>" || op == "<" || op == ">" || op == "<=" || op == ">=") return 4;
    if (op == "+" || op == "-") return 5;
    if (op == "*" || op == "/" || op == "MOD") return 6;
    if (op == "**") return 8;
    return 9;
}

int prec(const Expr& e) {
    switch (e.kind) {
        case Expr::Kind::Binary: return binary_prec(e.text);
        case Expr::Kind::Unary: return 7;
        default: return 10;
    }
}

class Printer {
public:
    std::string print_unit(const StUnit& unit) {
        out_.clear();
        const char* header = unit.kind == UnitKind::FunctionBlock ? "FUNCTION_BLOCK" : "FUNCTION";
        out_ += header;
        out_ += ' ';
        out_ += unit.name;
        if (unit.has_return_type) {
            out_ += " : ";
            print_type(unit.return_type);
        }
        out_ += '\n';
        for (const auto& section : unit.sections) print_section(section);
        if (!unit.body.empty()) {
            out_ += '\n';
            for (const auto& s : unit.body) print_stmt(*s, 0);
        }
        out_ += unit.kind == UnitKind::FunctionBlock ? "END_FUNCTION_BLOCK" : "END_FUNCTION";
        out_ += '\n';
        return out_;
    }

    std::string print_expr_only(const Expr& e) {
        out_.clear();
        print_expr(e);
        return out_;
    }

private:
    std::string out_;

    void indent(int level) { out_.append(static_cast<size_t>(level) * kIndentWidth, ' '); }

    void print_section(const VarSection& s) {
        out_ += to_string(s.kind);
        out_ += '\n';
        for (const auto& d : s.decls) {
            indent(1);
            out_ += d.name;
            out_ += " : ";
            print_type(d.type);
            if (d.init) {
                out_ += " := ";
                print_expr(*d.init);
            }
            out_ += ";\n";
        }
        out_ += "END_VAR\n";
    }

    void print_type(const TypeRef& t) {
        switch (t.kind) {
            case TypeRef::Kind::Named:
                out_ += t.name;
                break;
            case TypeRef::Kind::String:
                out_ += t.name;
                if (t.str_len) {
                    out_ += '[';
                    print_expr(*t.str_len);
                    out_ += ']';
                }
                break;
            case TypeRef::Kind::Array:
                out_ += "ARRAY[";
                if (t.lo) print_expr(*t.lo);
                out_ += "..";
                if (t.hi) print_expr(*t.hi);
                out_ += "] OF ";
                if (t.elem) print_type(*t.elem);
                break;
        }
    }

    void print_body(const std::vector<StmtPtr>& body, int level) {
        for (const auto& s : body) print_stmt(*s, level);
    }

    void print_stmt(const Stmt& stmt, int level) {
        std::visit([&](const auto& node) { print_node(node, level); }, stmt.node);
    }

    void print_node(const AssignStmt& s, int level) {
        indent(level);
        if (s.lhs) print_expr(*s.lhs);
        out_ += " := ";
        if (s.rhs) print_expr(*s.rhs);
        out_ += ";\n";
    }

    void print_node(const IfStmt& s, int level) {
        for (size_t i = 0; i < s.arms.size(); ++i) {
            indent(level);
            out_ += i == 0 ? "IF " : "ELSIF ";
            if (s.arms[i].cond) print_expr(*s.arms[i].cond);
            out_ += " THEN\n";
            print_body(s.arms[i].body, level + 1);
        }
        if (s.has_else) {
            indent(level);
            out_ += "ELSE\n";
            print_body(s.else_body, level + 1);
        }
        indent(level);
        out_ += "END_IF;\n";
    }

    void print_node(const CaseStmt& s, int level) {
        indent(level);
        out_ += "CASE ";
        if (s.selector) print_expr(*s.selector);
        out_ += " OF\n";
        for (const auto& branch : s.branches) {
            indent(level + 1);
            for (size_t i = 0; i < branch.labels.size(); ++i) {
                if (i) out_ += ", ";
                print_expr(*branch.labels[i].lo);
                if (branch.labels[i].hi) {
                    out_ += "..";
                    print_expr(*branch.labels[i].hi);
                }
            }
            out_ += ":\n";
            print_body(branch.body, level + 2);
        }
        if (s.has_else) {
            indent(level);
            out_ += "ELSE\n";
            print_body(s.else_body, level + 1);
        }
        indent(level);
        out_ += "END_CASE;\n";
    }

    void print_node(const ForStmt& s, int level) {
        indent(level);
        out_ += "FOR ";
        out_ += s.var;
        out_ += " := ";
        if (s.from) print_expr(*s.from);
        out_ += " TO ";
        if (s.to) print_expr(*s.to);
        if (s.by) {
            out_ += " BY ";
            print_expr(*s.by);
        }
        out_ += " DO\n";
        print_body(s.body, level + 1);
        indent(level);
        out_ += "END_FOR;\n";
    }

    void print_node(const WhileStmt& s, int level) {
        indent(level);
        out_ += "WHILE ";
        if (s.cond) print_expr(*s.cond);
        out_ += " DO\n";
        print_body(s.body, level + 1);
        indent(level);
        out_ += "END_WHILE;\n";
    }

    void print_node(const RepeatStmt& s, int level) {
        indent(level);
        out_ += "REPEAT\n";
        print_body(s.body, level + 1);
        indent(level);
        out_ += "UNTIL ";
        if (s.until) print_expr(*s.until);
        out_ += " END_REPEAT;\n";
    }

    void print_node(const ExitStmt&, int level) {
        indent(level);
        out_ += "EXIT;\n";
    }

    void print_node(const ReturnStmt&, int level) {
        indent(level);
        out_ += "RETURN;\n";
    }

    void print_node(const CallStmt& s, int level) {
        indent(level);
        if (s.call) print_expr(*s.call);
        out_ += ";\n";
    }

    void print_child(const Expr& child, int parent_prec, bool tighten) {
        const bool parens = prec(child) < parent_prec || (tighten && prec(child) == parent_prec);
        if (parens) out_ += '(';
        print_expr(child);
        if (parens) out_ += ')';
    }

    void print_expr(const Expr& e) {
        switch (e.kind) {
            case Expr::Kind::IntLit:
            case Expr::Kind::RealLit:
            case Expr::Kind::StringLit:
            case Expr::Kind::BoolLit:
            case Expr::Kind::TypedLit:
            case Expr::Kind::Ident:
                out_ += e.text;
                break;
            case Expr::Kind::Member:
                print_child(*e.children[0], 10, false);
                out_ += '.';
                out_ += e.text;
                break;
            case Expr::Kind::Index:
                print_child(*e.children[0], 10, false);
                out_ += '[';
                for (size_t i = 1; i < e.children.size(); ++i) {
                    if (i > 1) out_ += ", ";
                    print_expr(*e.children[i]);
                }
                out_ += ']';
                break;
            case Expr::Kind::Call: {
                print_child(*e.children[0], 10, false);
                out_ += '(';
                for (size_t i = 0; i < e.args.size(); ++i) {
                    if (i) out_ += ", ";
                    const auto& a = e.args[i];
                    if (!a.name.empty()) {
                        out_ += a.name;
                        out_ += a.is_output ? " => " : " := ";
                    }
                    print_expr(*a.value);
                }
                out_ += ')';
                break;
            }
            case Expr::Kind::Unary:
                out_ += e.text;
                if (e.text == "NOT") out_ += ' ';
                print_child(*e.children[0], 7, false);
                break;
            case Expr::Kind::Binary: {
                const int p = binary_prec(e.text);
                const bool right_assoc = e.text == "**";
                print_child(*e.children[0], p, right_assoc);
                out_ += ' ';
                out_ += e.text;
                out_ += ' ';
                // Right operand of '**' may be a unary expression.
                if (right_assoc) {
                    print_child(*e.children[1], 7, false);
                } else {
                    print_child(*e.children[1], p, true);
                }
                break;
            }
        }
    }
};

}  // namespace

std::string pretty_print(const StUnit& unit) { return Printer().print_unit(unit); }

std::string pretty_print(const Expr& expr) { return Printer().print_expr_only(expr); }

}  // namespace stgen::st
