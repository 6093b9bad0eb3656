#pragma once

// Tokenizer shared by the rule and instance-file parsers.

#include <cctype>
#include <string>
#include <string_view>

#include "mcsym/error.hpp"

namespace mcsym::detail {

enum class Tok { ident, number, semicolon, comma, period, lparen, rparen, colon, if_, end };

struct Token {
    Tok kind = Tok::end;
    std::string text;
    int column = 0;
};

class Lexer {
public:
    Lexer(std::string_view text, int line) : text_(text), line_(line) { advance(); }

    const Token& peek() const { return cur_; }

    Token next() {
        Token t = cur_;
        advance();
        return t;
    }

    Token expect(Tok kind, const char* what) {
        if (cur_.kind != kind) fail(std::string("expected ") + what);
        return next();
    }

    [[noreturn]] void fail(const std::string& what) const {
        std::string got = cur_.kind == Tok::end ? "end of line" : "'" + cur_.text + "'";
        throw ParseError(what + ", got " + got, line_, cur_.column);
    }

    int line() const { return line_; }

private:
    void advance() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        cur_ = Token{};
        cur_.column = static_cast<int>(pos_) + 1;
        if (pos_ >= text_.size() || text_[pos_] == '%') {
            cur_.kind = Tok::end;
            pos_ = text_.size();
            return;
        }
        char c = text_[pos_];
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t start = pos_;
            while (pos_ < text_.size() &&
                   (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
                ++pos_;
            cur_.kind = Tok::ident;
            cur_.text = std::string(text_.substr(start, pos_ - start));
            return;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t start = pos_;
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
            cur_.kind = Tok::number;
            cur_.text = std::string(text_.substr(start, pos_ - start));
            return;
        }
        cur_.text = std::string(1, c);
        ++pos_;
        switch (c) {
            case ';': cur_.kind = Tok::semicolon; return;
            case ',': cur_.kind = Tok::comma; return;
            case '.': cur_.kind = Tok::period; return;
            case '(': cur_.kind = Tok::lparen; return;
            case ')': cur_.kind = Tok::rparen; return;
            case ':':
                if (pos_ < text_.size() && text_[pos_] == '-') {
                    ++pos_;
                    cur_.kind = Tok::if_;
                    cur_.text = ":-";
                } else {
                    cur_.kind = Tok::colon;
                }
                return;
            default:
                throw ParseError(std::string("unexpected character '") + c + "'", line_, cur_.column);
        }
    }

    std::string_view text_;
    std::size_t pos_ = 0;
    int line_;
    Token cur_;
};

}  // namespace mcsym::detail
