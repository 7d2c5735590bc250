#pragma once

// Shared tokenizer for the signature, clause, and control DSLs.

#include <string>
#include <string_view>

#include "tfg/error.hpp"

namespace tfg::detail {

enum class Tok { ident, tag, punct, end };

struct Token {
  Tok kind = Tok::end;
  std::string text;
  int line = 1;
  int column = 1;
  std::size_t offset = 0;
};

struct LexerOptions {
  // `#` followed by an identifier character is a tag when true; otherwise `#` opens a comment.
  bool hash_tags = false;
  // `%` opens a comment.
  bool percent_comments = true;
};

inline bool is_ident_char(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_' ||
         c == '-' || c == '\'';
}

class Lexer {
public:
  Lexer(std::string_view text, std::string_view file, LexerOptions opts = {})
      : text_(text), file_(file), opts_(opts) {
    advance();
  }

  const Token& peek() const { return current_; }

  Token next() {
    Token t = current_;
    advance();
    return t;
  }

  bool at_end() const { return current_.kind == Tok::end; }

  bool is_punct(std::string_view p) const { return current_.kind == Tok::punct && current_.text == p; }
  bool is_ident(std::string_view w) const { return current_.kind == Tok::ident && current_.text == w; }

  void expect_punct(std::string_view p) {
    if (!is_punct(p)) fail("expected '" + std::string(p) + "' but found " + describe(current_));
    advance();
  }

  std::string expect_ident(std::string_view what) {
    if (current_.kind != Tok::ident)
      fail("expected " + std::string(what) + " but found " + describe(current_));
    return next().text;
  }

  [[noreturn]] void fail(const std::string& message) const { fail_at(current_, message); }

  [[noreturn]] void fail_at(const Token& t, const std::string& message) const {
    throw ParseError(location(t), message);
  }

  SourceLocation location(const Token& t) const { return {std::string(file_), t.line, t.column}; }

  static std::string describe(const Token& t) {
    switch (t.kind) {
      case Tok::end: return "end of input";
      case Tok::tag: return "tag '#" + t.text + "'";
      case Tok::ident: return "'" + t.text + "'";
      case Tok::punct: return "'" + t.text + "'";
    }
    return "token";
  }

  // Skips to just past the next top-level '.' (error recovery).
  void skip_statement() {
    int depth = 0;
    while (!at_end()) {
      Token t = next();
      if (t.kind != Tok::punct) continue;
      if (t.text == "(" || t.text == "[" || t.text == "<") ++depth;
      if ((t.text == ")" || t.text == "]" || t.text == ">") && depth > 0) --depth;
      if (t.text == "." && depth == 0) return;
    }
  }

private:
  char at(std::size_t i) const { return i < text_.size() ? text_[i] : '\0'; }

  void bump() {
    if (text_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  void advance() {
    for (;;) {
      while (pos_ < text_.size() && (text_[pos_] == ' ' || text_[pos_] == '\t' || text_[pos_] == '\r' ||
                                     text_[pos_] == '\n'))
        bump();
      char c = at(pos_);
      bool comment = (c == '%' && opts_.percent_comments) ||
                     (c == '#' && !(opts_.hash_tags && is_ident_char(at(pos_ + 1))));
      if (!comment) break;
      while (pos_ < text_.size() && text_[pos_] != '\n') bump();
    }
    current_ = Token{};
    current_.line = line_;
    current_.column = col_;
    current_.offset = pos_;
    if (pos_ >= text_.size()) {
      current_.kind = Tok::end;
      return;
    }
    char c = text_[pos_];
    if (c == '#') {
      bump();
      current_.kind = Tok::tag;
      while (pos_ < text_.size() && is_ident_char(text_[pos_])) {
        current_.text += text_[pos_];
        bump();
      }
      return;
    }
    if (is_ident_char(c)) {
      current_.kind = Tok::ident;
      while (pos_ < text_.size() && is_ident_char(text_[pos_])) {
        current_.text += text_[pos_];
        bump();
      }
      return;
    }
    current_.kind = Tok::punct;
    if ((c == ':' && (at(pos_ + 1) == '=' || at(pos_ + 1) == '-'))) {
      current_.text = std::string{c, at(pos_ + 1)};
      bump();
      bump();
      return;
    }
    current_.text = std::string(1, c);
    bump();
  }

  std::string_view text_;
  std::string_view file_;
  LexerOptions opts_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
  Token current_;
};

}  // namespace tfg::detail
