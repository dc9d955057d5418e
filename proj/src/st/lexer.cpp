#include "stgen/st/lexer.hpp"

#include <cctype>

#include "stgen/text.hpp"

namespace stgen::st {

bool Token::is_word(std::string_view upper_word) const {
    return kind == Tok::Ident && text::iequals(text, upper_word);
}

std::string Token::upper() const { return text::to_upper(text); }

namespace {

bool is_ident_start(char c) {
    return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
}
bool is_ident_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}
bool is_digit(char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; }

class Cursor {
public:
    explicit Cursor(std::string_view src) : src_(src) {}

    bool done() const { return i_ >= src_.size(); }
    char peek(size_t ahead = 0) const {
        return i_ + ahead < src_.size() ? src_[i_ + ahead] : '\0';
    }
    char advance() {
        const char c = src_[i_++];
        if (c == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        return c;
    }
    bool match(char c) {
        if (peek() == c) {
            advance();
            return true;
        }
        return false;
    }
    int line() const { return line_; }
    int col() const { return col_; }
    size_t pos() const { return i_; }
    std::string_view slice(size_t from) const { return src_.substr(from, i_ - from); }

private:
    std::string_view src_;
    size_t i_ = 0;
    int line_ = 1;
    int col_ = 1;
};

// Value charset for typed literals after '#': covers durations (T#1d2h),
// dates (DTL#2024-01-01-10:30:00.500) and based numbers (WORD#16#FF).
bool is_typed_lit_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.' || c == ':' ||
           c == '-' || c == '#' || c == '+';
}

}  // namespace

std::vector<Token> lex(std::string_view source) {
    std::vector<Token> out;
    Cursor cur(source);

    auto push = [&](Tok kind, std::string text, int line, int col) {
        out.push_back(Token{kind, std::move(text), line, col});
    };

    while (!cur.done()) {
        const char c = cur.peek();

        if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
            cur.advance();
            continue;
        }
        // Comments and pragmas.
        if (c == '(' && cur.peek(1) == '*') {
            cur.advance();
            cur.advance();
            int depth = 1;
            while (!cur.done() && depth > 0) {
                if (cur.peek() == '(' && cur.peek(1) == '*') {
                    cur.advance(); cur.advance(); ++depth;
                } else if (cur.peek() == '*' && cur.peek(1) == ')') {
                    cur.advance(); cur.advance(); --depth;
                } else {
                    cur.advance();
                }
            }
            continue;
        }
        if (c == '/' && cur.peek(1) == '/') {
            while (!cur.done() && cur.peek() != '\n') cur.advance();
            continue;
        }
        if (c == '/' && cur.peek(1) == '*') {
            cur.advance(); cur.advance();
            while (!cur.done() && !(cur.peek() == '*' && cur.peek(1) == '/')) cur.advance();
            if (!cur.done()) { cur.advance(); cur.advance(); }
            continue;
        }
        if (c == '{') {  // vendor pragma, skipped as trivia
            while (!cur.done() && cur.peek() != '}') cur.advance();
            if (!cur.done()) cur.advance();
            continue;
        }

        const int line = cur.line(), col = cur.col();
        const size_t start = cur.pos();

        if (is_ident_start(c)) {
            while (!cur.done() && is_ident_char(cur.peek())) cur.advance();
            // Typed literal: identifier immediately followed by '#'.
            if (cur.peek() == '#') {
                cur.advance();
                while (!cur.done() && is_typed_lit_char(cur.peek())) cur.advance();
                push(Tok::TypedLit, std::string(cur.slice(start)), line, col);
            } else {
                push(Tok::Ident, std::string(cur.slice(start)), line, col);
            }
            continue;
        }

        if (is_digit(c)) {
            while (!cur.done() && (is_digit(cur.peek()) || cur.peek() == '_')) cur.advance();
            if (cur.peek() == '#') {
                // Based literal: 16#FF, 2#1010_0001
                cur.advance();
                while (!cur.done() && (is_ident_char(cur.peek()))) cur.advance();
                push(Tok::IntLit, std::string(cur.slice(start)), line, col);
                continue;
            }
            bool real = false;
            if (cur.peek() == '.' && is_digit(cur.peek(1))) {
                real = true;
                cur.advance();
                while (!cur.done() && (is_digit(cur.peek()) || cur.peek() == '_')) cur.advance();
            }
            if (cur.peek() == 'e' || cur.peek() == 'E') {
                const char sign = cur.peek(1);
                if (is_digit(sign) || ((sign == '+' || sign == '-') && is_digit(cur.peek(2)))) {
                    real = true;
                    cur.advance();
                    if (cur.peek() == '+' || cur.peek() == '-') cur.advance();
                    while (!cur.done() && is_digit(cur.peek())) cur.advance();
                }
            }
            push(real ? Tok::RealLit : Tok::IntLit, std::string(cur.slice(start)), line, col);
            continue;
        }

        if (c == '\'' || c == '"') {
            const char quote = c;
            cur.advance();
            while (!cur.done()) {
                const char q = cur.peek();
                if (q == '$' ) {  // $-escape: keep next char raw
                    cur.advance();
                    if (!cur.done()) cur.advance();
                    continue;
                }
                if (q == quote) {
                    cur.advance();
                    if (cur.peek() == quote) {  // doubled quote stays in the literal
                        cur.advance();
                        continue;
                    }
                    break;
                }
                if (q == '\n') break;  // unterminated; parser reports at use
                cur.advance();
            }
            push(Tok::StringLit, std::string(cur.slice(start)), line, col);
            continue;
        }

        cur.advance();
        switch (c) {
            case ':':
                push(cur.match('=') ? Tok::Assign : Tok::Colon, std::string(cur.slice(start)),
                     line, col);
                break;
            case '=':
                push(cur.match('>') ? Tok::Connect : Tok::Eq, std::string(cur.slice(start)), line, col);
                break;
            case '<':
                if (cur.match('=')) push(Tok::Le, "<=", line, col);
                else if (cur.match('>')) push(Tok::Neq, "<>", line, col);
                else push(Tok::Lt, "<", line, col);
                break;
            case '>':
                push(cur.match('=') ? Tok::Ge : Tok::Gt, std::string(cur.slice(start)), line, col);
                break;
            case '*':
                push(cur.match('*') ? Tok::Power : Tok::Star, std::string(cur.slice(start)), line, col);
                break;
            case '.':
                push(cur.match('.') ? Tok::DotDot : Tok::Dot, std::string(cur.slice(start)), line, col);
                break;
            case '+': push(Tok::Plus, "+", line, col); break;
            case '-': push(Tok::Minus, "-", line, col); break;
            case '/': push(Tok::Slash, "/", line, col); break;
            case '&': push(Tok::Ampersand, "&", line, col); break;
            case '(': push(Tok::LParen, "(", line, col); break;
            case ')': push(Tok::RParen, ")", line, col); break;
            case '[': push(Tok::LBracket, "[", line, col); break;
            case ']': push(Tok::RBracket, "]", line, col); break;
            case ',': push(Tok::Comma, ",", line, col); break;
            case ';': push(Tok::Semicolon, ";", line, col); break;
            case '%': push(Tok::Percent, "%", line, col); break;
            case '^': push(Tok::Caret, "^", line, col); break;
            default:
                push(Tok::Unknown, std::string(1, c), line, col);
                break;
        }
    }
    out.push_back(Token{Tok::End, "", cur.line(), cur.col()});
    return out;
}

}  // namespace stgen::st
