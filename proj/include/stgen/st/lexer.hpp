#pragma once
// Tokenizer for the ST subset. Keywords are not distinguished here;
// identifiers compare case-insensitively in the parser. Literal tokens
// keep their raw spelling so the pretty-printer can reproduce them.

#include <string>
#include <string_view>
#include <vector>

#include "stgen/st/diagnostic.hpp"

namespace stgen::st {

enum class Tok {
    Ident,
    IntLit,    // 42, 16#FF, 2#1010, 1_000
    RealLit,   // 3.14, 1.0e-3
    StringLit, // 'abc', "wide"
    TypedLit,  // INT#5, T#5s, DTL#2024-01-01-00:00:00
    Assign,    // :=
    Connect,   // =>
    Plus, Minus, Star, Slash, Power, Ampersand,
    Eq, Neq, Lt, Gt, Le, Ge,
    LParen, RParen, LBracket, RBracket,
    Comma, Semicolon, Colon, Dot, DotDot,
    Percent,   // direct addresses (%IX...) -- unsupported construct
    Caret,     // pointer deref -- unsupported construct
    Unknown,
    End
};

struct Token {
    Tok kind = Tok::End;
    std::string text;  // raw spelling
    int line = 1;
    int col = 1;

    bool is(Tok k) const { return kind == k; }
    // Case-insensitive keyword/identifier comparison.
    bool is_word(std::string_view upper_word) const;
    std::string upper() const;
};

// Lexes the whole source. Never throws: unexpected characters become
// Unknown tokens for the parser to report. A trailing End token is
// always present. Comments ((*..*), /*..*/, //..) and {..} pragmas are
// skipped as trivia.
std::vector<Token> lex(std::string_view source);

}  // namespace stgen::st
