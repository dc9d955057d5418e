#include <doctest.h>

#include "stgen/text.hpp"

using namespace stgen;

TEST_CASE("split_identifier handles underscores and camelCase") {
    CHECK(text::split_identifier("MOVE_BLK_VARIANT") ==
          std::vector<std::string>{"move", "blk", "variant"});
    CHECK(text::split_identifier("readFile") == std::vector<std::string>{"read", "file"});
    CHECK(text::split_identifier("HTMLParser") == std::vector<std::string>{"html", "parser"});
    CHECK(text::split_identifier("twice") == std::vector<std::string>{"twice"});
    CHECK(text::split_identifier("") == std::vector<std::string>{});
    CHECK(text::split_identifier("__") == std::vector<std::string>{});
}

TEST_CASE("icontains is case-insensitive in both arguments") {
    CHECK(text::icontains("ScaleLinear", "SCALE"));
    CHECK(text::icontains("fifo", "FIFO"));
    CHECK_FALSE(text::icontains("CRC16", "StringReverse"));
    CHECK(text::icontains("anything", ""));
}

TEST_CASE("render_template substitutes all occurrences and keeps unknowns") {
    const std::string out =
        text::render_template("a={{a}} b={{b}} a={{a}} c={{c}}",
                              {{"a", "1"}, {"b", "2"}});
    CHECK(out == "a=1 b=2 a=1 c={{c}}");
}

TEST_CASE("trim and case helpers") {
    CHECK(text::trim("  x \n") == "x");
    CHECK(text::trim("") == "");
    CHECK(text::to_upper("end_if") == "END_IF");
    CHECK(text::iequals("Func", "FUNC"));
    CHECK_FALSE(text::iequals("Func", "FUN"));
}
