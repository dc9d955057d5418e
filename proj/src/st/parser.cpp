#include "stgen/st/parser.hpp"

#include <algorithm>

#include "stgen/st/lexer.hpp"
#include "stgen/text.hpp"

namespace stgen::st {

ExprPtr make_expr(Expr::Kind kind, std::string text, Span span) {
    auto e = std::make_unique<Expr>();
    e->kind = kind;
    e->text = std::move(text);
    e->span = span;
    return e;
}

const char* to_string(VarSectionKind k) {
    switch (k) {
        case VarSectionKind::Input: return "VAR_INPUT";
        case VarSectionKind::Output: return "VAR_OUTPUT";
        case VarSectionKind::InOut: return "VAR_IN_OUT";
        case VarSectionKind::Var: return "VAR";
        case VarSectionKind::Temp: return "VAR_TEMP";
        case VarSectionKind::Constant: return "VAR CONSTANT";
    }
    return "VAR";
}

namespace {

Span token_span(const Token& t) {
    Span s;
    s.line = s.end_line = t.line;
    s.col = t.col;
    s.end_col = t.col + std::max<int>(1, static_cast<int>(t.text.size()));
    return s;
}

bool is_section_keyword(const Token& t) {
    return t.is_word("VAR") || t.is_word("VAR_INPUT") || t.is_word("VAR_OUTPUT") ||
           t.is_word("VAR_IN_OUT") || t.is_word("VAR_TEMP");
}

bool is_unit_end(const Token& t) {
    return t.is_word("END_FUNCTION_BLOCK") || t.is_word("END_FUNCTION") || t.is(Tok::End);
}

// Keywords that terminate an enclosing construct; statement recovery must
// not swallow them.
bool is_structural(const Token& t) {
    static const char* words[] = {"ELSIF", "ELSE", "END_IF", "END_CASE", "END_FOR",
                                  "END_WHILE", "UNTIL", "END_REPEAT", "END_VAR", "OF"};
    for (const char* w : words)
        if (t.is_word(w)) return true;
    return is_section_keyword(t) || is_unit_end(t);
}

class Parser {
public:
    Parser(std::string_view source, const DialectProfile& dialect)
        : tokens_(lex(source)), dialect_(dialect) {}

    ParseResult run() {
        parse_unit();
        ParseResult res;
        res.unit = std::move(unit_);
        res.diagnostics = std::move(diags_);
        return res;
    }

private:
    std::vector<Token> tokens_;
    size_t pos_ = 0;
    const DialectProfile& dialect_;
    StUnit unit_;
    std::vector<Diagnostic> diags_;
    bool in_declarations_ = false;

    const Token& cur() const { return tokens_[pos_]; }
    const Token& peek(size_t ahead = 1) const {
        return tokens_[std::min(pos_ + ahead, tokens_.size() - 1)];
    }
    void advance() {
        if (pos_ + 1 < tokens_.size()) ++pos_;
    }
    bool at_end() const { return cur().is(Tok::End); }

    bool eat(Tok kind) {
        if (cur().is(kind)) {
            advance();
            return true;
        }
        return false;
    }
    bool eat_word(std::string_view w) {
        if (cur().is_word(w)) {
            advance();
            return true;
        }
        return false;
    }

    void report(const char* code, ErrorClass cls, const Token& at, std::string message) {
        Diagnostic d;
        d.code = code;
        d.message = std::move(message);
        d.span = token_span(at);
        d.section = in_declarations_ ? Section::Declaration : Section::Implementation;
        d.error_class = cls;
        diags_.push_back(std::move(d));
    }

    void mismatch(const Token& at, std::string message) {
        report(kCodeSyntax, ErrorClass::Mismatch, at, std::move(message));
    }
    void unclosed(const Token& at, std::string message) {
        report(kCodeUnclosed, ErrorClass::Mismatch, at, std::move(message));
    }
    void unsupported(const Token& at, const std::string& what) {
        report(kCodeUnsupported, ErrorClass::Other, at, "unsupported construct: " + what);
    }

    // Skips to just past the next ';', stopping before structural keywords.
    void sync_statement() {
        while (!at_end() && !is_structural(cur())) {
            if (eat(Tok::Semicolon)) return;
            advance();
        }
    }

    // ---- unit ----------------------------------------------------------

    void parse_unit() {
        // Find the unit header, reporting anything before it once.
        if (!cur().is_word("FUNCTION_BLOCK") && !cur().is_word("FUNCTION")) {
            mismatch(cur(), "expected FUNCTION_BLOCK or FUNCTION");
            while (!at_end() && !cur().is_word("FUNCTION_BLOCK") && !cur().is_word("FUNCTION"))
                advance();
            if (at_end()) return;
        }
        const bool is_fb = cur().is_word("FUNCTION_BLOCK");
        unit_.kind = is_fb ? UnitKind::FunctionBlock : UnitKind::Function;
        advance();

        if (cur().is(Tok::Ident) && !is_structural(cur())) {
            unit_.name = cur().text;
            advance();
        } else {
            mismatch(cur(), "expected unit name");
        }

        if (!is_fb) {
            if (eat(Tok::Colon)) {
                unit_.return_type = parse_type();
                unit_.has_return_type = true;
            } else {
                mismatch(cur(), "FUNCTION requires a return type");
            }
        }

        in_declarations_ = true;
        while (is_section_keyword(cur())) parse_var_section();
        in_declarations_ = false;

        unit_.body = parse_stmt_list([](const Token& t) { return is_unit_end(t); });

        const char* footer = is_fb ? "END_FUNCTION_BLOCK" : "END_FUNCTION";
        if (cur().is_word(footer)) {
            advance();
        } else if (cur().is_word(is_fb ? "END_FUNCTION" : "END_FUNCTION_BLOCK")) {
            mismatch(cur(), std::string("expected ") + footer);
            advance();
        } else {
            unclosed(cur(), std::string("missing ") + footer);
        }
        eat(Tok::Semicolon);
        if (!at_end()) mismatch(cur(), "unexpected text after end of unit");
    }

    // ---- declarations ---------------------------------------------------

    void parse_var_section() {
        VarSection section;
        section.span = token_span(cur());
        if (eat_word("VAR_INPUT")) section.kind = VarSectionKind::Input;
        else if (eat_word("VAR_OUTPUT")) section.kind = VarSectionKind::Output;
        else if (eat_word("VAR_IN_OUT")) section.kind = VarSectionKind::InOut;
        else if (eat_word("VAR_TEMP")) section.kind = VarSectionKind::Temp;
        else {
            advance();  // VAR
            section.kind = VarSectionKind::Var;
            if (eat_word("CONSTANT")) section.kind = VarSectionKind::Constant;
            else if (cur().is_word("RETAIN") || cur().is_word("NON_RETAIN")) advance();
        }

        while (!at_end() && !cur().is_word("END_VAR") && !is_unit_end(cur()) &&
               !is_section_keyword(cur())) {
            parse_decl_line(section);
        }

        if (cur().is_word("END_VAR")) {
            unit_.decl_end_line = cur().line;
            advance();
            eat(Tok::Semicolon);
        } else {
            unclosed(cur(), std::string("missing END_VAR for ") + to_string(section.kind));
        }
        unit_.sections.push_back(std::move(section));
    }

    void parse_decl_line(VarSection& section) {
        std::vector<std::pair<std::string, Span>> names;
        if (!cur().is(Tok::Ident) || is_structural(cur())) {
            mismatch(cur(), "expected variable name");
            sync_decl();
            return;
        }
        names.emplace_back(cur().text, token_span(cur()));
        advance();
        while (eat(Tok::Comma)) {
            if (cur().is(Tok::Ident) && !is_structural(cur())) {
                names.emplace_back(cur().text, token_span(cur()));
                advance();
            } else {
                mismatch(cur(), "expected variable name after ','");
                sync_decl();
                return;
            }
        }

        if (cur().is_word("AT")) {
            unsupported(cur(), "direct address binding (AT)");
            sync_decl();
            return;
        }
        if (!eat(Tok::Colon)) {
            mismatch(cur(), "expected ':' in declaration");
            sync_decl();
            return;
        }

        TypeRef type = parse_type();
        ExprPtr init;
        if (eat(Tok::Assign)) init = parse_expr();

        if (!eat(Tok::Semicolon)) {
            mismatch(cur(), "expected ';' after declaration");
            sync_decl();
        }

        for (auto& [name, span] : names) {
            VarDecl d;
            d.name = name;
            d.name_span = span;
            d.type = clone_type(type);
            d.init = init && names.size() == 1 ? std::move(init) : clone_expr(init.get());
            section.decls.push_back(std::move(d));
        }
    }

    void sync_decl() {
        while (!at_end() && !cur().is_word("END_VAR") && !is_section_keyword(cur()) &&
               !is_unit_end(cur())) {
            if (eat(Tok::Semicolon)) return;
            advance();
        }
    }

    TypeRef parse_type() {
        TypeRef t;
        t.span = token_span(cur());
        if (cur().is_word("ARRAY")) {
            advance();
            t.kind = TypeRef::Kind::Array;
            t.name = "ARRAY";
            if (!eat(Tok::LBracket)) {
                mismatch(cur(), "expected '[' after ARRAY");
                return t;
            }
            t.lo = parse_expr();
            if (!eat(Tok::DotDot)) mismatch(cur(), "expected '..' in array bounds");
            t.hi = parse_expr();
            if (!eat(Tok::RBracket)) unclosed(cur(), "unmatched '[' in array bounds");
            if (!eat_word("OF")) mismatch(cur(), "expected OF in array type");
            t.elem = std::make_unique<TypeRef>(parse_type());
            return t;
        }
        if (cur().is_word("STRING") || cur().is_word("WSTRING")) {
            t.kind = TypeRef::Kind::String;
            t.name = cur().upper();
            advance();
            if (eat(Tok::LBracket)) {
                t.str_len = parse_expr();
                if (!eat(Tok::RBracket)) unclosed(cur(), "unmatched '[' in string length");
            }
            return t;
        }
        if (cur().is_word("POINTER") || cur().is_word("REF_TO")) {
            unsupported(cur(), "pointer type");
            advance();
            if (eat_word("TO")) {}
            if (cur().is(Tok::Ident)) advance();
            t.name = "__UNSUPPORTED";
            return t;
        }
        if (cur().is(Tok::Ident) && !is_structural(cur())) {
            t.name = cur().text;
            advance();
            return t;
        }
        mismatch(cur(), "expected type name");
        t.name = "__MISSING";
        return t;
    }

    // ---- statements ------------------------------------------------------

    template <typename StopPred>
    std::vector<StmtPtr> parse_stmt_list(StopPred stop) {
        std::vector<StmtPtr> out;
        while (!at_end() && !stop(cur())) {
            if (eat(Tok::Semicolon)) continue;  // empty statement
            if (is_structural(cur())) {
                // A terminator belonging to no open construct.
                mismatch(cur(), "unexpected " + cur().upper());
                advance();
                continue;
            }
            const size_t before = pos_;
            if (auto s = parse_stmt()) out.push_back(std::move(s));
            if (pos_ == before) advance();  // always make progress
        }
        return out;
    }

    StmtPtr parse_stmt() {
        const Token start = cur();
        if (cur().is_word("IF")) return parse_if();
        if (cur().is_word("CASE")) return parse_case();
        if (cur().is_word("FOR")) return parse_for();
        if (cur().is_word("WHILE")) return parse_while();
        if (cur().is_word("REPEAT")) return parse_repeat();
        if (cur().is_word("EXIT")) {
            advance();
            expect_semicolon();
            return finish(ExitStmt{}, start);
        }
        if (cur().is_word("RETURN")) {
            advance();
            expect_semicolon();
            return finish(ReturnStmt{}, start);
        }
        if (cur().is_word("REGION")) {
            if (dialect_.allows_region) {
                skip_region_header();
            } else {
                unsupported(cur(), "REGION directive");
                advance();
            }
            return nullptr;
        }
        if (cur().is_word("END_REGION")) {
            if (!dialect_.allows_region) unsupported(cur(), "REGION directive");
            advance();
            return nullptr;
        }
        if (cur().is(Tok::Percent)) {
            unsupported(cur(), "direct address");
            sync_statement();
            return nullptr;
        }
        return parse_assign_or_call(start);
    }

    void skip_region_header() {
        const int line = cur().line;
        advance();  // REGION
        while (!at_end() && cur().line == line && !cur().is(Tok::Semicolon)) advance();
    }

    StmtPtr parse_assign_or_call(const Token& start) {
        ExprPtr lhs = parse_postfix();
        if (!lhs) {
            mismatch(cur(), "expected statement");
            sync_statement();
            return nullptr;
        }
        if (eat(Tok::Assign)) {
            AssignStmt a;
            a.lhs = std::move(lhs);
            a.rhs = require_expr();
            expect_semicolon();
            return finish(std::move(a), start);
        }
        if (lhs->kind == Expr::Kind::Call) {
            CallStmt c;
            c.call = std::move(lhs);
            expect_semicolon();
            return finish(std::move(c), start);
        }
        mismatch(cur(), "expected ':=' or call");
        sync_statement();
        return nullptr;
    }

    StmtPtr parse_if() {
        const Token start = cur();
        advance();  // IF
        IfStmt node;
        bool closed = false;
        while (true) {
            IfStmt::Arm arm;
            arm.cond = require_expr();
            if (!eat_word("THEN")) mismatch(cur(), "expected THEN");
            arm.body = parse_stmt_list([](const Token& t) {
                return t.is_word("ELSIF") || t.is_word("ELSE") || t.is_word("END_IF") ||
                       is_unit_end(t);
            });
            node.arms.push_back(std::move(arm));
            if (eat_word("ELSIF")) continue;
            break;
        }
        if (eat_word("ELSE")) {
            node.has_else = true;
            node.else_body = parse_stmt_list(
                [](const Token& t) { return t.is_word("END_IF") || is_unit_end(t); });
        }
        if (eat_word("END_IF")) {
            closed = true;
            eat(Tok::Semicolon);
        }
        if (!closed)
            unclosed(start, "missing END_IF for IF at line " + std::to_string(start.line));
        return finish(std::move(node), start);
    }

    StmtPtr parse_case() {
        const Token start = cur();
        advance();  // CASE
        CaseStmt node;
        node.selector = require_expr();
        if (!eat_word("OF")) mismatch(cur(), "expected OF");

        while (!at_end() && !cur().is_word("ELSE") && !cur().is_word("END_CASE") &&
               !is_unit_end(cur())) {
            CaseStmt::Branch branch;
            if (!parse_case_labels(branch.labels)) {
                sync_statement();
                continue;
            }
            branch.body = parse_stmt_list([this](const Token& t) {
                return t.is_word("ELSE") || t.is_word("END_CASE") || is_unit_end(t) ||
                       starts_case_label();
            });
            node.branches.push_back(std::move(branch));
        }
        if (eat_word("ELSE")) {
            node.has_else = true;
            node.else_body = parse_stmt_list(
                [](const Token& t) { return t.is_word("END_CASE") || is_unit_end(t); });
        }
        if (eat_word("END_CASE")) {
            eat(Tok::Semicolon);
        } else {
            unclosed(start, "missing END_CASE for CASE at line " + std::to_string(start.line));
        }
        return finish(std::move(node), start);
    }

    // True when the tokens at the cursor form "label[, label]* :" rather
    // than a statement. Labels end at a top-level ':'; statements reach
    // ';', ':=' or a structural keyword first.
    bool starts_case_label() const {
        size_t i = pos_;
        int depth = 0;
        while (i < tokens_.size()) {
            const Token& t = tokens_[i];
            if (t.is(Tok::End) || t.is(Tok::Semicolon) || t.is(Tok::Assign) || t.is(Tok::Connect))
                return false;
            if (is_structural(t) || t.is_word("THEN") || t.is_word("DO")) return false;
            if (t.is(Tok::LParen) || t.is(Tok::LBracket)) ++depth;
            if (t.is(Tok::RParen) || t.is(Tok::RBracket)) --depth;
            if (t.is(Tok::Colon) && depth == 0) return true;
            ++i;
        }
        return false;
    }

    bool parse_case_labels(std::vector<CaseStmt::Label>& labels) {
        while (true) {
            CaseStmt::Label label;
            label.lo = parse_expr();
            if (!label.lo) {
                mismatch(cur(), "expected case label");
                return false;
            }
            if (eat(Tok::DotDot)) label.hi = parse_expr();
            labels.push_back(std::move(label));
            if (eat(Tok::Comma)) continue;
            break;
        }
        if (!eat(Tok::Colon)) {
            mismatch(cur(), "expected ':' after case label");
            return false;
        }
        return true;
    }

    StmtPtr parse_for() {
        const Token start = cur();
        advance();  // FOR
        ForStmt node;
        if (cur().is(Tok::Ident) && !is_structural(cur())) {
            node.var = cur().text;
            node.var_span = token_span(cur());
            advance();
        } else {
            mismatch(cur(), "expected loop variable");
        }
        if (!eat(Tok::Assign)) mismatch(cur(), "expected ':=' in FOR");
        node.from = require_expr();
        if (!eat_word("TO")) mismatch(cur(), "expected TO in FOR");
        node.to = require_expr();
        if (eat_word("BY")) node.by = require_expr();
        if (!eat_word("DO")) mismatch(cur(), "expected DO");
        node.body = parse_stmt_list(
            [](const Token& t) { return t.is_word("END_FOR") || is_unit_end(t); });
        if (eat_word("END_FOR")) {
            eat(Tok::Semicolon);
        } else {
            unclosed(start, "missing END_FOR for FOR at line " + std::to_string(start.line));
        }
        return finish(std::move(node), start);
    }

    StmtPtr parse_while() {
        const Token start = cur();
        advance();
        WhileStmt node;
        node.cond = require_expr();
        if (!eat_word("DO")) mismatch(cur(), "expected DO");
        node.body = parse_stmt_list(
            [](const Token& t) { return t.is_word("END_WHILE") || is_unit_end(t); });
        if (eat_word("END_WHILE")) {
            eat(Tok::Semicolon);
        } else {
            unclosed(start, "missing END_WHILE for WHILE at line " + std::to_string(start.line));
        }
        return finish(std::move(node), start);
    }

    StmtPtr parse_repeat() {
        const Token start = cur();
        advance();
        RepeatStmt node;
        node.body = parse_stmt_list(
            [](const Token& t) { return t.is_word("UNTIL") || is_unit_end(t); });
        if (eat_word("UNTIL")) {
            node.until = require_expr();
        } else {
            unclosed(start, "missing UNTIL for REPEAT at line " + std::to_string(start.line));
        }
        if (eat_word("END_REPEAT")) {
            eat(Tok::Semicolon);
        } else {
            unclosed(start,
                     "missing END_REPEAT for REPEAT at line " + std::to_string(start.line));
        }
        return finish(std::move(node), start);
    }

    void expect_semicolon() {
        if (!eat(Tok::Semicolon)) {
            mismatch(cur(), "expected ';'");
            sync_statement();
        }
    }

    template <typename Node>
    StmtPtr finish(Node node, const Token& start) {
        auto s = std::make_unique<Stmt>();
        s->span = token_span(start);
        s->node = std::move(node);
        return s;
    }

    // ---- expressions ----------------------------------------------------

    ExprPtr parse_expr() { return parse_or(); }

    ExprPtr require_expr() {
        ExprPtr e = parse_expr();
        if (!e) mismatch(cur(), "expected expression");
        return e;
    }

    ExprPtr binary(std::string op, ExprPtr lhs, ExprPtr rhs, Span span) {
        auto e = make_expr(Expr::Kind::Binary, std::move(op), span);
        e->children.push_back(std::move(lhs));
        e->children.push_back(std::move(rhs));
        return e;
    }

    ExprPtr parse_or() {
        ExprPtr lhs = parse_xor();
        while (lhs && cur().is_word("OR")) {
            const Span sp = token_span(cur());
            advance();
            lhs = binary("OR", std::move(lhs), parse_xor(), sp);
        }
        return lhs;
    }

    ExprPtr parse_xor() {
        ExprPtr lhs = parse_and();
        while (lhs && cur().is_word("XOR")) {
            const Span sp = token_span(cur());
            advance();
            lhs = binary("XOR", std::move(lhs), parse_and(), sp);
        }
        return lhs;
    }

    ExprPtr parse_and() {
        ExprPtr lhs = parse_cmp();
        while (lhs && (cur().is_word("AND") || cur().is(Tok::Ampersand))) {
            const Span sp = token_span(cur());
            advance();
            lhs = binary("AND", std::move(lhs), parse_cmp(), sp);
        }
        return lhs;
    }

    ExprPtr parse_cmp() {
        ExprPtr lhs = parse_add();
        while (lhs) {
            std::string op;
            if (cur().is(Tok::Eq)) op = "=";
            else if (cur().is(Tok::Neq)) op = "<>";
            else if (cur().is(Tok::Lt)) op = "<";
            else if (cur().is(Tok::Gt)) op = ">";
            else if (cur().is(Tok::Le)) op = "<=";
            else if (cur().is(Tok::Ge)) op = ">=";
            else break;
            const Span sp = token_span(cur());
            advance();
            lhs = binary(op, std::move(lhs), parse_add(), sp);
        }
        return lhs;
    }

    ExprPtr parse_add() {
        ExprPtr lhs = parse_mul();
        while (lhs && (cur().is(Tok::Plus) || cur().is(Tok::Minus))) {
            const std::string op = cur().text;
            const Span sp = token_span(cur());
            advance();
            lhs = binary(op, std::move(lhs), parse_mul(), sp);
        }
        return lhs;
    }

    ExprPtr parse_mul() {
        ExprPtr lhs = parse_unary();
        while (lhs && (cur().is(Tok::Star) || cur().is(Tok::Slash) || cur().is_word("MOD"))) {
            const std::string op = cur().is_word("MOD") ? "MOD" : cur().text;
            const Span sp = token_span(cur());
            advance();
            lhs = binary(op, std::move(lhs), parse_unary(), sp);
        }
        return lhs;
    }

    ExprPtr parse_unary() {
        if (cur().is_word("NOT") || cur().is(Tok::Minus) || cur().is(Tok::Plus)) {
            const std::string op = cur().is_word("NOT") ? "NOT" : cur().text;
            const Span sp = token_span(cur());
            advance();
            auto e = make_expr(Expr::Kind::Unary, op, sp);
            e->children.push_back(parse_unary());
            if (!e->children.back()) {
                mismatch(cur(), "expected operand after " + op);
                return nullptr;
            }
            return e;
        }
        return parse_power();
    }

    ExprPtr parse_power() {
        ExprPtr base = parse_postfix();
        if (base && cur().is(Tok::Power)) {
            const Span sp = token_span(cur());
            advance();
            // '**' binds tightest and associates rightwards.
            ExprPtr exp = parse_unary();
            if (!exp) {
                mismatch(cur(), "expected exponent after '**'");
                return base;
            }
            return binary("**", std::move(base), std::move(exp), sp);
        }
        return base;
    }

    ExprPtr parse_postfix() {
        ExprPtr e = parse_primary();
        while (e) {
            if (cur().is(Tok::Dot)) {
                const Span sp = token_span(cur());
                advance();
                if (cur().is(Tok::Ident)) {
                    auto m = make_expr(Expr::Kind::Member, cur().text, sp);
                    advance();
                    m->children.push_back(std::move(e));
                    e = std::move(m);
                } else {
                    mismatch(cur(), "expected member name after '.'");
                    return e;
                }
            } else if (cur().is(Tok::LBracket)) {
                const Token open = cur();
                advance();
                auto idx = make_expr(Expr::Kind::Index, "[]", token_span(open));
                idx->children.push_back(std::move(e));
                idx->children.push_back(parse_expr());
                while (eat(Tok::Comma)) idx->children.push_back(parse_expr());
                if (!eat(Tok::RBracket)) unclosed(open, "unmatched '['");
                e = std::move(idx);
            } else if (cur().is(Tok::LParen)) {
                e = parse_call(std::move(e));
            } else if (cur().is(Tok::Caret)) {
                unsupported(cur(), "pointer dereference");
                advance();
            } else {
                break;
            }
        }
        return e;
    }

    ExprPtr parse_call(ExprPtr callee) {
        const Token open = cur();
        advance();  // (
        auto call = make_expr(Expr::Kind::Call, "", callee->span);
        call->children.push_back(std::move(callee));
        if (!cur().is(Tok::RParen)) {
            while (true) {
                CallArg arg;
                if (cur().is(Tok::Ident) && peek().is(Tok::Assign)) {
                    arg.name = cur().text;
                    advance();
                    advance();
                    arg.value = parse_expr();
                } else if (cur().is(Tok::Ident) && peek().is(Tok::Connect)) {
                    arg.name = cur().text;
                    arg.is_output = true;
                    advance();
                    advance();
                    arg.value = parse_postfix();
                } else {
                    arg.value = parse_expr();
                }
                if (!arg.value) {
                    mismatch(cur(), "expected argument");
                    break;
                }
                call->args.push_back(std::move(arg));
                if (eat(Tok::Comma)) continue;
                break;
            }
        }
        if (!eat(Tok::RParen)) unclosed(open, "unmatched '(' in call");
        return call;
    }

    ExprPtr parse_primary() {
        const Token t = cur();
        switch (t.kind) {
            case Tok::IntLit:
                advance();
                return make_expr(Expr::Kind::IntLit, t.text, token_span(t));
            case Tok::RealLit:
                advance();
                return make_expr(Expr::Kind::RealLit, t.text, token_span(t));
            case Tok::StringLit:
                advance();
                return make_expr(Expr::Kind::StringLit, t.text, token_span(t));
            case Tok::TypedLit:
                advance();
                return make_expr(Expr::Kind::TypedLit, t.text, token_span(t));
            case Tok::LParen: {
                advance();
                ExprPtr inner = parse_expr();
                if (!eat(Tok::RParen)) unclosed(t, "unmatched '('");
                return inner;
            }
            case Tok::Percent:
                unsupported(t, "direct address");
                advance();
                while (cur().is(Tok::Ident) || cur().is(Tok::IntLit) || cur().is(Tok::Dot))
                    advance();
                return make_expr(Expr::Kind::Ident, "__ADDRESS", token_span(t));
            case Tok::Ident: {
                if (t.is_word("TRUE") || t.is_word("FALSE")) {
                    advance();
                    return make_expr(Expr::Kind::BoolLit, t.upper(), token_span(t));
                }
                if (is_structural(t) || t.is_word("THEN") || t.is_word("DO")) return nullptr;
                advance();
                return make_expr(Expr::Kind::Ident, t.text, token_span(t));
            }
            default:
                return nullptr;
        }
    }

    // Deep copies for multi-name declarations sharing one type/init.
    static TypeRef clone_type(const TypeRef& t) {
        TypeRef out;
        out.kind = t.kind;
        out.name = t.name;
        out.span = t.span;
        if (t.str_len) out.str_len = clone_expr(t.str_len.get());
        if (t.lo) out.lo = clone_expr(t.lo.get());
        if (t.hi) out.hi = clone_expr(t.hi.get());
        if (t.elem) out.elem = std::make_unique<TypeRef>(clone_type(*t.elem));
        return out;
    }

    static ExprPtr clone_expr(const Expr* e) {
        if (!e) return nullptr;
        auto out = make_expr(e->kind, e->text, e->span);
        for (const auto& c : e->children) out->children.push_back(clone_expr(c.get()));
        for (const auto& a : e->args) {
            CallArg arg;
            arg.name = a.name;
            arg.is_output = a.is_output;
            arg.value = clone_expr(a.value.get());
            out->args.push_back(std::move(arg));
        }
        return out;
    }
};

}  // namespace

ParseResult parse(std::string_view source, const DialectProfile& dialect) {
    return Parser(source, dialect).run();
}

int declaration_end_line(std::string_view source) {
    int last = 0;
    for (const auto& t : lex(source))
        if (t.is_word("END_VAR")) last = t.line;
    return last;
}

}  // namespace stgen::st
