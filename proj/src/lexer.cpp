#include <array>
#include <cctype>

#include "smellwatt/error.hpp"
#include "smellwatt/source_model.hpp"

namespace smellwatt {

namespace {

constexpr std::array<std::string_view, 22> kJavaOperators{
    ">>>=", "<<=", ">>=", "...", "==", "!=", "<=", ">=", "&&", "||", "++",
    "--",   "+=",  "-=",  "*=",  "/=", "%=", "&=", "|=", "^=", "->", "::",
};

constexpr std::array<std::string_view, 25> kPythonOperators{
    "**=", "//=", "<<=", ">>=", "...", "==", "!=", "<=", ">=", "**", "//", "->", "+=",
    "-=",  "*=",  "/=",  "%=",  "&=",  "|=", "^=", ":=", "<<", ">>", "@=", "~",
};

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_' || c == '$'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '$'; }

bool string_prefix(std::string_view word) {
    if (word.empty() || word.size() > 2) return false;
    for (char c : word)
        if (std::string_view("rRbBuUfF").find(c) == std::string_view::npos) return false;
    return true;
}

class Lexer {
public:
    Lexer(std::string_view src, Flavor flavor) : src_(src), flavor_(flavor) {}

    std::vector<Token> run() {
        while (pos_ < src_.size()) step();
        if (flavor_ == Flavor::PythonLike) end_logical_line();
        return std::move(out_);
    }

private:
    std::string_view src_;
    Flavor flavor_;
    std::size_t pos_ = 0;
    int line_ = 1;
    int col_ = 1;
    int depth_ = 0;
    bool pending_line_ = false;
    std::vector<Token> out_;

    char peek(std::size_t ahead = 0) const { return pos_ + ahead < src_.size() ? src_[pos_ + ahead] : '\0'; }

    void advance(std::size_t n = 1) {
        for (std::size_t i = 0; i < n && pos_ < src_.size(); ++i) {
            if (src_[pos_] == '\n') {
                ++line_;
                col_ = 1;
            } else {
                ++col_;
            }
            ++pos_;
        }
    }

    void emit(TokenKind kind, std::size_t begin, int line, int col) {
        out_.push_back({kind, std::string(src_.substr(begin, pos_ - begin)), line, line_, col});
        pending_line_ = true;
    }

    void end_logical_line() {
        if (!pending_line_) return;
        const int l = out_.empty() ? line_ : out_.back().end_line;
        out_.push_back({TokenKind::Newline, "", l, l, 0});
        pending_line_ = false;
    }

    void step() {
        const char c = peek();
        if (c == '\n') {
            if (flavor_ == Flavor::PythonLike && depth_ == 0) end_logical_line();
            advance();
            return;
        }
        if (std::isspace(static_cast<unsigned char>(c))) {
            advance();
            return;
        }
        if (flavor_ == Flavor::PythonLike) {
            if (c == '#') {
                while (pos_ < src_.size() && peek() != '\n') advance();
                return;
            }
            if (c == '\\' && (peek(1) == '\n' || (peek(1) == '\r' && peek(2) == '\n'))) {
                advance(peek(1) == '\r' ? 3 : 2);
                return;
            }
        } else {
            if (c == '/' && peek(1) == '/') {
                while (pos_ < src_.size() && peek() != '\n') advance();
                return;
            }
            if (c == '/' && peek(1) == '*') {
                const int start = line_;
                advance(2);
                while (pos_ < src_.size() && !(peek() == '*' && peek(1) == '/')) advance();
                if (pos_ >= src_.size())
                    throw Error(ErrorCode::BadInput, "unterminated comment starting at line " + std::to_string(start));
                advance(2);
                return;
            }
        }

        const std::size_t begin = pos_;
        const int line = line_, col = col_;
        if (ident_start(c) && !(flavor_ == Flavor::PythonLike && c == '$')) {
            while (pos_ < src_.size() && ident_char(peek()) && !(flavor_ == Flavor::PythonLike && peek() == '$'))
                advance();
            const auto word = src_.substr(begin, pos_ - begin);
            if (flavor_ == Flavor::PythonLike && string_prefix(word) && (peek() == '"' || peek() == '\'')) {
                lex_string(begin, line, col);
                return;
            }
            emit(TokenKind::Identifier, begin, line, col);
            return;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) ||
            (c == '.' && std::isdigit(static_cast<unsigned char>(peek(1))))) {
            advance();
            while (pos_ < src_.size()) {
                const char d = peek();
                if (std::isalnum(static_cast<unsigned char>(d)) || d == '_' ||
                    (d == '.' && std::isdigit(static_cast<unsigned char>(peek(1))))) {
                    advance();
                } else if ((d == '+' || d == '-') && (src_[pos_ - 1] == 'e' || src_[pos_ - 1] == 'E') &&
                           std::isdigit(static_cast<unsigned char>(peek(1)))) {
                    advance();
                } else {
                    break;
                }
            }
            emit(TokenKind::Number, begin, line, col);
            return;
        }
        if (c == '"' || c == '\'') {
            lex_string(begin, line, col);
            return;
        }
        if (c == '(' || c == '[' || c == '{') ++depth_;
        if ((c == ')' || c == ']' || c == '}') && depth_ > 0) --depth_;
        const auto rest = src_.substr(pos_);
        auto try_ops = [&](const auto& ops) {
            for (auto op : ops)
                if (rest.starts_with(op)) return op.size();
            return std::size_t{1};
        };
        advance(flavor_ == Flavor::JavaLike ? try_ops(kJavaOperators) : try_ops(kPythonOperators));
        emit(TokenKind::Punct, begin, line, col);
    }

    void lex_string(std::size_t begin, int line, int col) {
        const char q = peek();
        const bool triple = peek(1) == q && peek(2) == q;
        const bool raw = flavor_ == Flavor::PythonLike && src_.substr(begin, pos_ - begin).find_first_of("rR") !=
                                                              std::string_view::npos;
        if (triple) {
            advance(3);
            while (pos_ < src_.size() && !(peek() == q && peek(1) == q && peek(2) == q)) {
                if (peek() == '\\' && !raw) advance();
                advance();
            }
            if (pos_ >= src_.size())
                throw Error(ErrorCode::BadInput, "unterminated string starting at line " + std::to_string(line));
            advance(3);
        } else {
            advance();
            while (pos_ < src_.size() && peek() != q) {
                if (peek() == '\n')
                    throw Error(ErrorCode::BadInput, "unterminated string at line " + std::to_string(line));
                if (peek() == '\\') advance();
                advance();
            }
            if (pos_ >= src_.size())
                throw Error(ErrorCode::BadInput, "unterminated string at line " + std::to_string(line));
            advance();
        }
        emit(TokenKind::String, begin, line, col);
    }
};

}  // namespace

std::vector<Token> tokenize(std::string_view source, Flavor flavor) { return Lexer(source, flavor).run(); }

}  // namespace smellwatt
