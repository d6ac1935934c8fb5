#pragma once

// Shared tokenizer for the Boolean, connective, first-order and fragment
// grammars. Internal to the library.

#include <cctype>
#include <cstddef>
#include <string>
#include <string_view>

#include "asimkit/error.hpp"

namespace asimkit::detail {

enum class Tok {
  ident,  // [A-Za-z_][A-Za-z0-9_]*
  tilde,
  amp,
  bar,
  arrow,   // ->
  iff,     // <->
  lparen,
  rparen,
  lbrace,
  rbrace,
  lbracket,
  rbracket,
  comma,
  define,  // :=
  end,
};

struct Token {
  Tok kind = Tok::end;
  std::string text;
  std::size_t pos = 0;
};

inline const char* describe(Tok t) {
  switch (t) {
    case Tok::ident: return "identifier";
    case Tok::tilde: return "'~'";
    case Tok::amp: return "'&'";
    case Tok::bar: return "'|'";
    case Tok::arrow: return "'->'";
    case Tok::iff: return "'<->'";
    case Tok::lparen: return "'('";
    case Tok::rparen: return "')'";
    case Tok::lbrace: return "'{'";
    case Tok::rbrace: return "'}'";
    case Tok::lbracket: return "'['";
    case Tok::rbracket: return "']'";
    case Tok::comma: return "','";
    case Tok::define: return "':='";
    case Tok::end: return "end of input";
  }
  return "?";
}

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) { advance(); }

  const Token& peek() const { return cur_; }
  bool at(Tok k) const { return cur_.kind == k; }
  bool at_ident(std::string_view word) const {
    return cur_.kind == Tok::ident && cur_.text == word;
  }

  Token next() {
    Token t = cur_;
    advance();
    return t;
  }

  bool accept(Tok k) {
    if (!at(k)) return false;
    advance();
    return true;
  }

  Token expect(Tok k) {
    if (!at(k)) fail(std::string("expected ") + describe(k) + ", found " + found());
    return next();
  }

  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, cur_.pos); }

  std::string found() const {
    if (cur_.kind == Tok::ident) return "'" + cur_.text + "'";
    return describe(cur_.kind);
  }

  std::string_view source() const { return src_; }

 private:
  void advance() {
    while (i_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[i_]))) ++i_;
    cur_ = Token{};
    cur_.pos = i_;
    if (i_ >= src_.size()) {
      cur_.kind = Tok::end;
      return;
    }
    char c = src_[i_];
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i_;
      while (j < src_.size() &&
             (std::isalnum(static_cast<unsigned char>(src_[j])) || src_[j] == '_'))
        ++j;
      cur_.kind = Tok::ident;
      cur_.text = std::string(src_.substr(i_, j - i_));
      i_ = j;
      return;
    }
    auto two = src_.substr(i_, 2);
    auto three = src_.substr(i_, 3);
    if (three == "<->") {
      cur_.kind = Tok::iff;
      i_ += 3;
      return;
    }
    if (two == "->") {
      cur_.kind = Tok::arrow;
      i_ += 2;
      return;
    }
    if (two == ":=") {
      cur_.kind = Tok::define;
      i_ += 2;
      return;
    }
    switch (c) {
      case '~': cur_.kind = Tok::tilde; break;
      case '&': cur_.kind = Tok::amp; break;
      case '|': cur_.kind = Tok::bar; break;
      case '(': cur_.kind = Tok::lparen; break;
      case ')': cur_.kind = Tok::rparen; break;
      case '{': cur_.kind = Tok::lbrace; break;
      case '}': cur_.kind = Tok::rbrace; break;
      case '[': cur_.kind = Tok::lbracket; break;
      case ']': cur_.kind = Tok::rbracket; break;
      case ',': cur_.kind = Tok::comma; break;
      default:
        throw ParseError(std::string("unexpected character '") + c + "'", i_);
    }
    ++i_;
  }

  std::string_view src_;
  std::size_t i_ = 0;
  Token cur_;
};

/// Parses `<prefix><digits>` (e.g. "p12" with prefix 'p'); returns 0 when the
/// identifier does not have that shape.
inline unsigned indexed_name(std::string_view ident, char prefix) {
  if (ident.size() < 2 || ident[0] != prefix) return 0;
  unsigned v = 0;
  for (std::size_t i = 1; i < ident.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(ident[i]))) return 0;
    v = v * 10 + static_cast<unsigned>(ident[i] - '0');
    if (v > 1000000) return 0;
  }
  return v;
}

}  // namespace asimkit::detail
