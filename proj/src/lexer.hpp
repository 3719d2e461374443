#pragma once

#include <cctype>
#include <string>
#include <string_view>

#include "bcaret/errors.hpp"

namespace bcaret {

// Shared tokenizer for the pds / formula / labels / program text formats.
// Identifiers are [A-Za-z_][A-Za-z0-9_]*, `#` is its own token, `//` starts
// a line comment, and the rule arrows are single tokens.
struct Token {
  enum Kind { Ident, Number, Bottom, Punct, End } kind = End;
  std::string text;
  long value = 0;
  int line = 1;
  int col = 1;
};

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) { advance(); }

  const Token& peek() const { return tok_; }

  Token next() {
    Token t = tok_;
    advance();
    return t;
  }

  bool at_end() const { return tok_.kind == Token::End; }

  [[noreturn]] void fail(const std::string& message) const {
    throw Error(ErrorCode::Syntax, message, tok_.line, tok_.col);
  }

  bool accept_punct(std::string_view p) {
    if (tok_.kind == Token::Punct && tok_.text == p) {
      advance();
      return true;
    }
    return false;
  }

  void expect_punct(std::string_view p) {
    if (!accept_punct(p)) fail("expected '" + std::string(p) + "'");
  }

  bool accept_ident(std::string_view word) {
    if (tok_.kind == Token::Ident && tok_.text == word) {
      advance();
      return true;
    }
    return false;
  }

  std::string expect_ident(const char* what = "an identifier") {
    if (tok_.kind != Token::Ident) fail(std::string("expected ") + what);
    return next().text;
  }

  long expect_number(const char* what = "a number") {
    if (tok_.kind != Token::Number) fail(std::string("expected ") + what);
    return next().value;
  }

 private:
  void advance() {
    skip_space();
    tok_.line = line_;
    tok_.col = col_;
    if (pos_ >= text_.size()) {
      tok_ = Token{Token::End, "", 0, line_, col_};
      return;
    }
    char ch = text_[pos_];
    if (std::isalpha(static_cast<unsigned char>(ch)) || ch == '_') {
      std::size_t start = pos_;
      while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) ||
                                     text_[pos_] == '_'))
        bump();
      tok_ = Token{Token::Ident, std::string(text_.substr(start, pos_ - start)), 0, tok_.line,
                   tok_.col};
      return;
    }
    if (std::isdigit(static_cast<unsigned char>(ch))) {
      long v = 0;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        v = v * 10 + (text_[pos_] - '0');
        bump();
      }
      tok_ = Token{Token::Number, "", v, tok_.line, tok_.col};
      return;
    }
    if (ch == '#') {
      bump();
      tok_ = Token{Token::Bottom, "#", 0, tok_.line, tok_.col};
      return;
    }
    if (ch == '-') {
      for (std::string_view arrow : {"-call->", "-ret->", "-int->"})
        if (text_.substr(pos_).starts_with(arrow)) {
          for (std::size_t i = 0; i < arrow.size(); ++i) bump();
          tok_ = Token{Token::Punct, std::string(arrow), 0, tok_.line, tok_.col};
          return;
        }
      throw Error(ErrorCode::Syntax, "stray '-'", line_, col_);
    }
    for (std::string_view two : {"&&", "||", ".."})
      if (text_.substr(pos_).starts_with(two)) {
        bump();
        bump();
        tok_ = Token{Token::Punct, std::string(two), 0, tok_.line, tok_.col};
        return;
      }
    if (std::string_view(";:{}()[]!^*,=").find(ch) != std::string_view::npos) {
      bump();
      tok_ = Token{Token::Punct, std::string(1, ch), 0, tok_.line, tok_.col};
      return;
    }
    throw Error(ErrorCode::Syntax, std::string("unexpected character '") + ch + "'", line_, col_);
  }

  void skip_space() {
    while (pos_ < text_.size()) {
      char ch = text_[pos_];
      if (ch == '/' && pos_ + 1 < text_.size() && text_[pos_ + 1] == '/') {
        while (pos_ < text_.size() && text_[pos_] != '\n') bump();
      } else if (std::isspace(static_cast<unsigned char>(ch))) {
        bump();
      } else {
        break;
      }
    }
  }

  void bump() {
    if (text_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
  Token tok_;
};

}  // namespace bcaret
