#include <doctest.h>

#include "stgen/st/checker.hpp"
#include "stgen/st/compiler.hpp"
#include "stgen/st/parser.hpp"
#include "support/helpers.hpp"

using namespace stgen;
using namespace stgen::st;
using test_support::codesys_profile;
using test_support::siemens_profile;

namespace {

std::vector<Diagnostic> check_source(const std::string& src,
                                     const DialectProfile& profile,
                                     const SignatureSet& apis = {}) {
    auto parsed = parse(src, profile);
    REQUIRE(parsed.diagnostics.empty());
    return check(parsed.unit, profile, apis);
}

int count_class(const std::vector<Diagnostic>& diags, ErrorClass cls) {
    int n = 0;
    for (const auto& d : diags)
        if (d.error_class == cls) ++n;
    return n;
}

const char* kHeader =
    "FUNCTION_BLOCK T\n"
    "VAR_INPUT\n"
    "    bIn : BOOL;\n"
    "    nIn : INT;\n"
    "    rIn : REAL;\n"
    "END_VAR\n"
    "VAR_OUTPUT\n"
    "    rOut : REAL;\n"
    "    nOut : INT;\n"
    "END_VAR\n";

std::string wrap(const std::string& body) {
    return std::string(kHeader) + body + "END_FUNCTION_BLOCK\n";
}

}  // namespace

TEST_CASE("use of undeclared identifier is one UNDEFINED per use") {
    auto diags = check_source(wrap("nOut := x;\n"), siemens_profile());
    REQUIRE(diags.size() == 1);
    CHECK(diags[0].error_class == ErrorClass::Undefined);
    CHECK(diags[0].section == Section::Implementation);

    auto three = check_source(wrap("nOut := x;\nnOut := x + x;\n"), siemens_profile());
    CHECK(count_class(three, ErrorClass::Undefined) == 3);
}

TEST_CASE("invalid initializer fails the declaration once and suppresses uses") {
    const char* src =
        "FUNCTION_BLOCK S\n"
        "VAR\n"
        "    iX : INT := 'a';\n"
        "END_VAR\n"
        "iX := 1;\n"
        "iX := iX + 1;\n"
        "iX := iX * 2;\n"
        "END_FUNCTION_BLOCK\n";
    auto diags = check_source(src, siemens_profile());
    REQUIRE(diags.size() == 1);
    CHECK(diags[0].error_class == ErrorClass::Undefined);
    CHECK(diags[0].section == Section::Declaration);
    CHECK(diags[0].code == kCodeBadInitializer);
}

TEST_CASE("TO_REAL under a source-typed profile is a TYPE_CONVERSION") {
    auto diags = check_source(wrap("rOut := TO_REAL(nIn);\n"), siemens_profile());
    REQUIRE(diags.size() == 1);
    CHECK(diags[0].error_class == ErrorClass::TypeConversion);
    CHECK(diags[0].code == kCodeBadConversionName);

    // CODESYS accepts the short form.
    auto ok = check_source(wrap("rOut := TO_REAL(nIn);\n"), codesys_profile());
    CHECK(ok.empty());
}

TEST_CASE("well-formed conversion names type-check their argument") {
    CHECK(check_source(wrap("rOut := INT_TO_REAL(nIn);\n"), siemens_profile()).empty());
    CHECK(check_source(wrap("nOut := REAL_TO_INT(rIn);\n"), siemens_profile()).empty());
    auto bad = check_source(wrap("nOut := REAL_TO_INT(bIn);\n"), siemens_profile());
    REQUIRE(bad.size() == 1);
    CHECK(bad[0].error_class == ErrorClass::TypeConversion);
}

TEST_CASE("call to unknown function is a CALL error") {
    auto diags = check_source(wrap("FOO(1, 2);\n"), siemens_profile());
    REQUIRE(diags.size() == 1);
    CHECK(diags[0].error_class == ErrorClass::Call);
    CHECK(diags[0].code == kCodeUnknownCallable);
}

TEST_CASE("builtin arity and named parameters are enforced") {
    auto wrong_arity = check_source(wrap("nOut := MIN(nIn);\n"), siemens_profile());
    REQUIRE(wrong_arity.size() == 1);
    CHECK(wrong_arity[0].error_class == ErrorClass::Call);

    auto bad_param = check_source(wrap("nOut := MIN(IN1 := nIn, BOGUS := 2);\n"),
                                  siemens_profile());
    REQUIRE(bad_param.size() == 1);
    CHECK(bad_param[0].code == kCodeUnknownParam);
}

TEST_CASE("narrowing assignment is a TYPE_CONVERSION, widening is fine") {
    CHECK(check_source(wrap("rOut := nIn;\n"), siemens_profile()).empty());
    auto diags = check_source(wrap("nOut := rIn;\n"), siemens_profile());
    REQUIRE(diags.size() == 1);
    CHECK(diags[0].error_class == ErrorClass::TypeConversion);
    CHECK(diags[0].code == kCodeBadAssignment);
}

TEST_CASE("redefinition and invalid user types map to OTHER") {
    const char* src =
        "FUNCTION_BLOCK O\n"
        "VAR\n"
        "    a : INT;\n"
        "    a : REAL;\n"
        "    b : NO_SUCH_TYPE;\n"
        "END_VAR\n"
        "END_FUNCTION_BLOCK\n";
    auto diags = check_source(src, siemens_profile());
    REQUIRE(diags.size() == 2);
    CHECK(diags[0].code == kCodeRedefinition);
    CHECK(diags[0].error_class == ErrorClass::Other);
    CHECK(diags[1].code == kCodeInvalidType);
    CHECK(diags[1].error_class == ErrorClass::Other);
    // The invalid-type variable is failed-declared: uses stay silent.
    const char* use =
        "FUNCTION_BLOCK O2\n"
        "VAR\n"
        "    b : NO_SUCH_TYPE;\n"
        "END_VAR\n"
        "b := 1;\n"
        "END_FUNCTION_BLOCK\n";
    auto use_diags = check_source(use, siemens_profile());
    CHECK(use_diags.size() == 1);
}

TEST_CASE("FB instance calls resolve members and check argument types") {
    const char* src =
        "FUNCTION_BLOCK FB\n"
        "VAR_INPUT\n"
        "    run : BOOL;\n"
        "END_VAR\n"
        "VAR_OUTPUT\n"
        "    done : BOOL;\n"
        "END_VAR\n"
        "VAR\n"
        "    t : TON;\n"
        "END_VAR\n"
        "t(IN := run, PT := T#5s);\n"
        "done := t.Q;\n"
        "END_FUNCTION_BLOCK\n";
    CHECK(check_source(src, codesys_profile()).empty());

    const char* bad_member =
        "FUNCTION_BLOCK FB2\n"
        "VAR\n"
        "    t : TON;\n"
        "    d : BOOL;\n"
        "END_VAR\n"
        "d := t.BOGUS;\n"
        "END_FUNCTION_BLOCK\n";
    auto diags = check_source(bad_member, codesys_profile());
    REQUIRE(diags.size() == 1);
    CHECK(diags[0].code == kCodeUnknownMember);
    CHECK(diags[0].error_class == ErrorClass::Undefined);

    const char* bad_arg =
        "FUNCTION_BLOCK FB3\n"
        "VAR\n"
        "    t : TON;\n"
        "END_VAR\n"
        "t(IN := TRUE, PT := 5);\n"
        "END_FUNCTION_BLOCK\n";
    auto arg_diags = check_source(bad_arg, codesys_profile());
    REQUIRE(arg_diags.size() == 1);
    CHECK(arg_diags[0].error_class == ErrorClass::TypeConversion);
}

TEST_CASE("vendor API signatures extend the callable set") {
    BuiltinSignature sig;
    sig.name = "MOVE_BLK_VARIANT";
    sig.params = {ParamSpec{"SRC", "VARIANT", ParamDirection::In, ""},
                  ParamSpec{"COUNT", "UDINT", ParamDirection::In, ""},
                  ParamSpec{"DEST", "VARIANT", ParamDirection::InOut, ""}};
    SignatureSet apis({sig});

    auto ok = check_source(wrap("MOVE_BLK_VARIANT(SRC := nIn, COUNT := 3, DEST := nOut);\n"),
                           siemens_profile(), apis);
    CHECK(ok.empty());

    auto bad = check_source(wrap("MOVE_BLK_VARIANT(WRONG := 1);\n"), siemens_profile(), apis);
    REQUIRE(bad.size() == 1);
    CHECK(bad[0].error_class == ErrorClass::Call);
}

TEST_CASE("condition and loop rules") {
    auto if_diags = check_source(wrap("IF nIn THEN\nnOut := 1;\nEND_IF;\n"), siemens_profile());
    REQUIRE(if_diags.size() == 1);
    CHECK(if_diags[0].error_class == ErrorClass::TypeConversion);

    auto exit_diags = check_source(wrap("EXIT;\n"), siemens_profile());
    REQUIRE(exit_diags.size() == 1);
    CHECK(exit_diags[0].error_class == ErrorClass::Other);
    CHECK(exit_diags[0].code == kCodeExitOutsideLoop);
}

TEST_CASE("assignment to constant is OTHER") {
    const char* src =
        "FUNCTION_BLOCK C\n"
        "VAR CONSTANT\n"
        "    LIMIT_HI : INT := 10;\n"
        "END_VAR\n"
        "LIMIT_HI := 11;\n"
        "END_FUNCTION_BLOCK\n";
    auto diags = check_source(src, siemens_profile());
    REQUIRE(diags.size() == 1);
    CHECK(diags[0].code == kCodeAssignToConstant);
}

TEST_CASE("function return variable is assignable and typed") {
    const char* src =
        "FUNCTION Scale : REAL\n"
        "VAR_INPUT\n"
        "    x : INT;\n"
        "END_VAR\n"
        "Scale := INT_TO_REAL(x) * 2.0;\n"
        "END_FUNCTION\n";
    CHECK(check_source(src, siemens_profile()).empty());
}

TEST_CASE("every diagnostic has exactly one class and the tallies add up") {
    const char* src =
        "FUNCTION_BLOCK Mixed\n"
        "VAR\n"
        "    a : INT := 'no';\n"
        "    b : NOTYPE;\n"
        "END_VAR\n"
        "c := 1;\n"
        "FOO();\n"
        "a := 1;\n"
        "END_FUNCTION_BLOCK\n";
    auto parsed = parse(src, siemens_profile());
    auto diags = check(parsed.unit, siemens_profile(), {});
    auto counts = count_by_class(diags);
    CHECK(counts.total() == static_cast<long>(diags.size()));
    CHECK(counts.undefined == 2);  // bad initializer + undeclared c
    CHECK(counts.other == 1);      // invalid type
    CHECK(counts.call == 1);       // FOO
}

TEST_CASE("checker output is deterministic and source-ordered") {
    const std::string src = wrap("nOut := u1;\nrOut := u2;\nFOO();\n");
    auto first = check_source(src, siemens_profile());
    for (int i = 0; i < 10; ++i) {
        auto again = check_source(src, siemens_profile());
        REQUIRE(again.size() == first.size());
        for (size_t k = 0; k < first.size(); ++k) {
            CHECK(again[k].code == first[k].code);
            CHECK(again[k].message == first[k].message);
            CHECK(again[k].span.line == first[k].span.line);
        }
    }
    for (size_t k = 1; k < first.size(); ++k)
        CHECK(first[k - 1].span.line <= first[k].span.line);
}

TEST_CASE("builtin compiler reports pass only on zero diagnostics") {
    BuiltinCompiler compiler(siemens_profile(), {});
    auto good = compiler.compile(wrap("nOut := nIn;\n"));
    CHECK(good.pass);
    CHECK(good.diagnostics.empty());

    auto bad = compiler.compile(wrap("nOut := missing;\n"));
    CHECK_FALSE(bad.pass);
    CHECK(bad.diagnostics.size() == 1);
}

TEST_CASE("external command adapter parses patterns and flags tool failure") {
    ExternalAdapterConfig cfg;
    cfg.command = "printf '3:7: undefined thing\\n9:1: cannot convert that\\n' # {source_file}";
    cfg.patterns.push_back(DiagnosticPattern{R"((\d+):(\d+): (.*))", 1, 2, 3});
    ExternalCommandCompiler ext(cfg, siemens_profile());
    auto report = ext.compile("FUNCTION_BLOCK X\nEND_FUNCTION_BLOCK\n");
    CHECK_FALSE(report.pass);
    REQUIRE(report.diagnostics.size() == 2);
    CHECK(report.diagnostics[0].span.line == 3);
    CHECK(report.diagnostics[0].error_class == ErrorClass::Undefined);
    CHECK(report.diagnostics[1].error_class == ErrorClass::TypeConversion);

    ExternalAdapterConfig missing;
    missing.command = "/no/such/tool_zzz {source_file}";
    missing.patterns = cfg.patterns;
    ExternalCommandCompiler broken(missing, siemens_profile());
    CHECK_THROWS_AS(broken.compile("FUNCTION_BLOCK X\nEND_FUNCTION_BLOCK\n"), AdapterError);
}
