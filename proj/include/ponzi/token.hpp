#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace ponzi {

// Byte range [begin, end) into the source text.
struct Span {
    std::size_t begin = 0;
    std::size_t end = 0;

    bool contains(const Span& inner) const {
        return begin <= inner.begin && inner.end <= end;
    }
};

enum class TokenKind {
    Keyword,
    Identifier,
    Number,
    String,
    Punct,
    Comment,
};

struct Token {
    TokenKind kind = TokenKind::Punct;
    std::string text;
    Span span;
};

class LexError : public std::runtime_error {
public:
    LexError(Span span, const std::string& what) : std::runtime_error(what), span(span) {}
    Span span;
};

class ParseError : public std::runtime_error {
public:
    ParseError(Span span, std::string expected, std::string found)
        : std::runtime_error("expected " + expected + ", found " + found),
          span(span),
          expected(std::move(expected)),
          found(std::move(found)) {}
    Span span;
    std::string expected;
    std::string found;
};

// Lexes a Solidity-subset source file. Comments are kept as tokens (the
// parser skips them). Concatenating token texts with the inter-token slices
// of the original source reproduces the input byte for byte.
std::vector<Token> tokenize(const std::string& source);

bool is_keyword(const std::string& word);
bool is_elementary_type_name(const std::string& word);

}  // namespace ponzi
