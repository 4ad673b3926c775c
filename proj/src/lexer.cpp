#include "ponzi/token.hpp"

#include <array>
#include <cctype>
#include <unordered_set>

namespace ponzi {

namespace {

const std::unordered_set<std::string>& keyword_set() {
    static const std::unordered_set<std::string> kw = {
        "pragma",   "solidity",  "contract",  "interface", "library",  "import",
        "is",       "function",  "constructor", "modifier", "event",   "struct",
        "enum",     "using",     "returns",   "return",    "if",       "else",
        "for",      "while",     "do",        "break",     "continue", "require",
        "assert",   "revert",    "emit",      "new",       "delete",   "assembly",
        "unchecked","try",       "catch",     "throw",     "mapping",  "public",
        "private",  "internal",  "external",  "view",      "pure",     "payable",
        "constant", "immutable", "virtual",   "override",  "memory",   "storage",
        "calldata", "indexed",   "anonymous", "true",      "false",    "bool",
        "string",   "address",   "byte",      "var",       "wei",      "gwei",
        "ether",    "seconds",   "minutes",   "hours",     "days",     "weeks",
    };
    return kw;
}

bool sized_type_keyword(const std::string& w) {
    // uintN/intN (N in 8..256 step 8) and bytesN (1..32); suffix digits are
    // not validated beyond being digits.
    auto digits_after = [&](std::size_t prefix_len) {
        if (w.size() <= prefix_len) return false;
        for (std::size_t i = prefix_len; i < w.size(); ++i)
            if (!std::isdigit(static_cast<unsigned char>(w[i]))) return false;
        return true;
    };
    if (w == "uint" || w == "int" || w == "bytes") return true;
    if (w.rfind("uint", 0) == 0) return digits_after(4);
    if (w.rfind("int", 0) == 0) return digits_after(3);
    if (w.rfind("bytes", 0) == 0) return digits_after(5);
    return false;
}

bool ident_start(char c) {
    return std::isalpha(static_cast<unsigned char>(c)) || c == '_' || c == '$';
}

bool ident_part(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '$';
}

// Longest-match punctuation, three chars down to one.
const std::array<const char*, 9> kPunct3 = {">>=", "<<=", "**=", "...", "==>", "->>", ":::", "!==", "==="};
const std::array<const char*, 19> kPunct2 = {"=>", "==", "!=", "<=", ">=", "&&", "||", "+=", "-=",
                                             "*=", "/=", "%=", "++", "--", "<<", ">>", "**", "->", ":="};

}  // namespace

bool is_keyword(const std::string& word) {
    return keyword_set().count(word) > 0 || sized_type_keyword(word);
}

bool is_elementary_type_name(const std::string& word) {
    return word == "bool" || word == "string" || word == "address" || word == "byte" ||
           word == "var" || sized_type_keyword(word);
}

std::vector<Token> tokenize(const std::string& src) {
    std::vector<Token> out;
    std::size_t i = 0;
    const std::size_t n = src.size();

    auto push = [&](TokenKind kind, std::size_t begin, std::size_t end) {
        out.push_back(Token{kind, src.substr(begin, end - begin), Span{begin, end}});
    };

    while (i < n) {
        char c = src[i];
        if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
            ++i;
            continue;
        }
        if (c == '/' && i + 1 < n && src[i + 1] == '/') {
            std::size_t begin = i;
            while (i < n && src[i] != '\n') ++i;
            push(TokenKind::Comment, begin, i);
            continue;
        }
        if (c == '/' && i + 1 < n && src[i + 1] == '*') {
            std::size_t begin = i;
            i += 2;
            while (i + 1 < n && !(src[i] == '*' && src[i + 1] == '/')) ++i;
            if (i + 1 >= n) throw LexError(Span{begin, n}, "unterminated block comment");
            i += 2;
            push(TokenKind::Comment, begin, i);
            continue;
        }
        if (c == '"' || c == '\'') {
            std::size_t begin = i;
            char quote = c;
            ++i;
            while (i < n && src[i] != quote) {
                if (src[i] == '\\' && i + 1 < n) ++i;
                if (src[i] == '\n') throw LexError(Span{begin, i}, "unterminated string literal");
                ++i;
            }
            if (i >= n) throw LexError(Span{begin, n}, "unterminated string literal");
            ++i;
            push(TokenKind::String, begin, i);
            continue;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t begin = i;
            // Broad number shape: covers decimal, hex (0x...), scientific
            // (1e18) and underscore separators. Text is preserved verbatim.
            while (i < n && (ident_part(src[i]) || src[i] == '.')) ++i;
            push(TokenKind::Number, begin, i);
            continue;
        }
        if (ident_start(c)) {
            std::size_t begin = i;
            while (i < n && ident_part(src[i])) ++i;
            std::string word = src.substr(begin, i - begin);
            push(is_keyword(word) ? TokenKind::Keyword : TokenKind::Identifier, begin, i);
            continue;
        }
        bool matched = false;
        for (const char* p : kPunct3) {
            if (src.compare(i, 3, p) == 0) {
                push(TokenKind::Punct, i, i + 3);
                i += 3;
                matched = true;
                break;
            }
        }
        if (matched) continue;
        for (const char* p : kPunct2) {
            if (src.compare(i, 2, p) == 0) {
                push(TokenKind::Punct, i, i + 2);
                i += 2;
                matched = true;
                break;
            }
        }
        if (matched) continue;
        static const std::string kSingle = "(){}[];,.=<>!+-*/%&|^~?:";
        if (kSingle.find(c) != std::string::npos) {
            push(TokenKind::Punct, i, i + 1);
            ++i;
            continue;
        }
        throw LexError(Span{i, i + 1}, std::string("illegal character '") + c + "'");
    }
    return out;
}

}  // namespace ponzi
