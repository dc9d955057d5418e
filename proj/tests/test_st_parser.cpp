#include <doctest.h>

#include "stgen/st/parser.hpp"
#include "stgen/st/pretty.hpp"
#include "support/helpers.hpp"

using namespace stgen;
using namespace stgen::st;
using test_support::codesys_profile;
using test_support::siemens_profile;

namespace {

int count_class(const std::vector<Diagnostic>& diags, ErrorClass cls) {
    int n = 0;
    for (const auto& d : diags)
        if (d.error_class == cls) ++n;
    return n;
}

}  // namespace

TEST_CASE("minimal empty function block parses clean") {
    const char* src =
        "FUNCTION_BLOCK Empty\n"
        "VAR_INPUT\n"
        "    enable : BOOL;\n"
        "END_VAR\n"
        "END_FUNCTION_BLOCK\n";
    auto res = parse(src, siemens_profile());
    CHECK(res.diagnostics.empty());
    CHECK(res.unit.kind == UnitKind::FunctionBlock);
    CHECK(res.unit.name == "Empty");
    REQUIRE(res.unit.sections.size() == 1);
    CHECK(res.unit.sections[0].kind == VarSectionKind::Input);
    REQUIRE(res.unit.sections[0].decls.size() == 1);
    CHECK(res.unit.sections[0].decls[0].name == "enable");
    CHECK(res.unit.decl_end_line == 4);
}

TEST_CASE("function header requires return type") {
    auto res = parse("FUNCTION F\nEND_FUNCTION\n", siemens_profile());
    REQUIRE(res.diagnostics.size() >= 1);
    CHECK(res.diagnostics[0].error_class == ErrorClass::Mismatch);
}

TEST_CASE("IF without END_IF reports a mismatch naming the construct") {
    const char* src =
        "FUNCTION_BLOCK Broken\n"
        "VAR_INPUT\n"
        "    x : BOOL;\n"
        "END_VAR\n"
        "VAR_OUTPUT\n"
        "    y : BOOL;\n"
        "END_VAR\n"
        "IF x THEN\n"
        "    y := TRUE;\n"
        "END_FUNCTION_BLOCK\n";
    auto res = parse(src, siemens_profile());
    CHECK(count_class(res.diagnostics, ErrorClass::Mismatch) >= 1);
    bool names_if = false;
    for (const auto& d : res.diagnostics)
        if (d.message.find("END_IF") != std::string::npos) names_if = true;
    CHECK(names_if);
}

TEST_CASE("state-machine style CASE over INT with timer calls parses clean") {
    const char* src =
        "FUNCTION_BLOCK Actuator\n"
        "VAR_INPUT\n"
        "    Execute : BOOL;\n"
        "    Duration : TIME;\n"
        "END_VAR\n"
        "VAR_OUTPUT\n"
        "    Busy : BOOL;\n"
        "    Done : BOOL;\n"
        "    Fault : BOOL;\n"
        "END_VAR\n"
        "VAR\n"
        "    State : INT := 0;\n"
        "    DelayTimer : TON;\n"
        "END_VAR\n"
        "CASE State OF\n"
        "    0:\n"
        "        IF Execute THEN\n"
        "            Busy := TRUE;\n"
        "            State := 1;\n"
        "        END_IF;\n"
        "    1:\n"
        "        DelayTimer(IN := TRUE, PT := Duration);\n"
        "        IF DelayTimer.Q THEN\n"
        "            State := 2;\n"
        "        END_IF;\n"
        "    2:\n"
        "        Busy := FALSE;\n"
        "        Done := TRUE;\n"
        "ELSE\n"
        "    Fault := TRUE;\n"
        "END_CASE;\n"
        "END_FUNCTION_BLOCK\n";
    auto res = parse(src, codesys_profile());
    CHECK(res.diagnostics.empty());
    const auto* cs = std::get_if<CaseStmt>(&res.unit.body.at(0)->node);
    REQUIRE(cs != nullptr);
    CHECK(cs->branches.size() == 3);
    CHECK(cs->has_else);
}

TEST_CASE("case labels support ranges and lists") {
    const char* src =
        "FUNCTION_BLOCK Sel\n"
        "VAR_INPUT\n"
        "    k : INT;\n"
        "END_VAR\n"
        "VAR_OUTPUT\n"
        "    o : INT;\n"
        "END_VAR\n"
        "CASE k OF\n"
        "    1, 3..5:\n"
        "        o := 1;\n"
        "    6:\n"
        "        o := 2;\n"
        "END_CASE;\n"
        "END_FUNCTION_BLOCK\n";
    auto res = parse(src, siemens_profile());
    CHECK(res.diagnostics.empty());
    const auto* cs = std::get_if<CaseStmt>(&res.unit.body.at(0)->node);
    REQUIRE(cs != nullptr);
    REQUIRE(cs->branches.size() == 2);
    CHECK(cs->branches[0].labels.size() == 2);
    CHECK(cs->branches[0].labels[1].hi != nullptr);
}

TEST_CASE("expression precedence follows ST rules") {
    const char* src =
        "FUNCTION F : BOOL\n"
        "VAR_INPUT\n"
        "    a : INT;\n"
        "    b : INT;\n"
        "    c : BOOL;\n"
        "END_VAR\n"
        "F := a + b * 2 > 10 OR c AND NOT c;\n"
        "END_FUNCTION\n";
    auto res = parse(src, siemens_profile());
    REQUIRE(res.diagnostics.empty());
    const auto* assign = std::get_if<AssignStmt>(&res.unit.body.at(0)->node);
    REQUIRE(assign != nullptr);
    // Top node must be OR: (a + b*2 > 10) OR (c AND NOT c)
    CHECK(assign->rhs->kind == Expr::Kind::Binary);
    CHECK(assign->rhs->text == "OR");
    CHECK(assign->rhs->children[1]->text == "AND");
    CHECK(assign->rhs->children[0]->text == ">");
}

TEST_CASE("unbalanced parenthesis is a mismatch") {
    const char* src =
        "FUNCTION_BLOCK P\n"
        "VAR\n"
        "    x : INT;\n"
        "END_VAR\n"
        "x := (1 + 2;\n"
        "END_FUNCTION_BLOCK\n";
    auto res = parse(src, siemens_profile());
    CHECK(count_class(res.diagnostics, ErrorClass::Mismatch) >= 1);
}

TEST_CASE("pointer types and direct addresses are unsupported constructs") {
    const char* src =
        "FUNCTION_BLOCK U\n"
        "VAR\n"
        "    p : POINTER TO INT;\n"
        "END_VAR\n"
        "END_FUNCTION_BLOCK\n";
    auto res = parse(src, codesys_profile());
    REQUIRE(res.diagnostics.size() == 1);
    CHECK(res.diagnostics[0].error_class == ErrorClass::Other);
    CHECK(res.diagnostics[0].message.find("unsupported") != std::string::npos);
}

TEST_CASE("REGION directives are accepted when the dialect allows them") {
    const char* src =
        "FUNCTION_BLOCK R\n"
        "VAR\n"
        "    x : INT;\n"
        "END_VAR\n"
        "REGION Init\n"
        "x := 1;\n"
        "END_REGION\n"
        "END_FUNCTION_BLOCK\n";
    CHECK(parse(src, siemens_profile()).diagnostics.empty());
    auto res = parse(src, codesys_profile());
    CHECK(count_class(res.diagnostics, ErrorClass::Other) == 2);
}

TEST_CASE("typed and time literals lex as single tokens") {
    const char* src =
        "FUNCTION_BLOCK T\n"
        "VAR\n"
        "    d : TIME := T#1h30m;\n"
        "    n : INT := INT#5;\n"
        "    w : WORD := 16#FF;\n"
        "END_VAR\n"
        "END_FUNCTION_BLOCK\n";
    auto res = parse(src, siemens_profile());
    CHECK(res.diagnostics.empty());
    CHECK(res.unit.sections[0].decls[0].init->kind == Expr::Kind::TypedLit);
    CHECK(res.unit.sections[0].decls[0].init->text == "T#1h30m");
    CHECK(res.unit.sections[0].decls[2].init->kind == Expr::Kind::IntLit);
}

TEST_CASE("pretty-print is a fixpoint under reparsing") {
    const char* src =
        "function_block  roundTrip\n"
        "var_input\n"
        "  a:INT; b : REAL := 1.5;\n"
        "  arr : ARRAY[1..8] OF INT;\n"
        "  s : STRING[20];\n"
        "end_var\n"
        "var x : INT; end_var\n"
        "(* comment disappears *)\n"
        "if a > 0 then x := a - 1; elsif a < -2 then x := (a+1)*2; else x := 0; end_if\n"
        "for x := 1 to 8 by 2 do arr[x] := x; exit; end_for\n"
        "while b > 0.0 do b := b - 1.0; end_while\n"
        "repeat x := x + 1; until x >= 3 end_repeat\n"
        "x := a mod 2 ** 3;\n"
        "return;\n"
        "end_function_block\n";
    auto first = parse(src, siemens_profile());
    REQUIRE(first.diagnostics.empty());
    const std::string once = pretty_print(first.unit);
    auto second = parse(once, siemens_profile());
    REQUIRE(second.diagnostics.empty());
    CHECK(pretty_print(second.unit) == once);
}

TEST_CASE("parser recovers at statement boundaries and reports multiple errors") {
    const char* src =
        "FUNCTION_BLOCK Multi\n"
        "VAR\n"
        "    x : INT;\n"
        "END_VAR\n"
        "x := ;\n"
        "x := 1;\n"
        "x := (2;\n"
        "x := 3;\n"
        "END_FUNCTION_BLOCK\n";
    auto res = parse(src, siemens_profile());
    CHECK(res.diagnostics.size() >= 2);
    for (const auto& d : res.diagnostics) CHECK(d.error_class == ErrorClass::Mismatch);
}

TEST_CASE("declaration_end_line finds the last END_VAR") {
    const char* src =
        "FUNCTION_BLOCK D\nVAR_INPUT\nx : BOOL;\nEND_VAR\nVAR\ny : INT;\nEND_VAR\ny := 1;\n"
        "END_FUNCTION_BLOCK\n";
    CHECK(declaration_end_line(src) == 7);
    CHECK(declaration_end_line("no sections here") == 0);
}
