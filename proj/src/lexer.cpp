// SPDX-License-Identifier: Apache-2.0
#include "stref/token.hpp"

#include <array>
#include <cctype>
#include <unordered_set>

#include "stref/error.hpp"

namespace stref {

namespace {

const std::unordered_set<std::string_view>& keyword_set() {
  static const std::unordered_set<std::string_view> kws = {
      // declarations
      "TYPE", "END_TYPE", "STRUCT", "END_STRUCT",
      "FUNCTION", "END_FUNCTION", "FUNCTION_BLOCK", "END_FUNCTION_BLOCK",
      "PROGRAM", "END_PROGRAM",
      "VAR", "VAR_INPUT", "VAR_OUTPUT", "VAR_IN_OUT", "VAR_TEMP",
      "VAR_GLOBAL", "VAR_EXTERNAL", "END_VAR", "CONSTANT",
      "ARRAY", "OF",
      // statements
      "IF", "THEN", "ELSIF", "ELSE_IF", "ELSE", "END_IF",
      "CASE", "END_CASE",
      "WHILE", "DO", "END_WHILE",
      "FOR", "TO", "BY", "END_FOR",
      "REPEAT", "UNTIL", "END_REPEAT",
      "RETURN", "EXIT",
      // operators with keyword spelling
      "MOD", "NOT", "AND", "AND_THEN", "XOR", "OR", "OR_ELSE",
      // literals
      "TRUE", "FALSE",
      // elementary types
      "SINT", "INT", "DINT", "LINT", "USINT", "UINT", "UDINT", "ULINT",
      "REAL", "LREAL", "BOOL", "BYTE", "WORD", "DWORD",
      "STRING", "WSTRING",
      "TIME", "DATE", "TIME_OF_DAY", "DATE_AND_TIME",
  };
  return kws;
}

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_cont(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }
bool digit(char c) { return c >= '0' && c <= '9'; }

class Lexer {
public:
  explicit Lexer(std::string_view src) : src_(src) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      skip_trivia();
      if (at_end()) {
        out.push_back({TokKind::Eof, "", line_, col_});
        return out;
      }
      out.push_back(next_token());
    }
  }

private:
  [[noreturn]] void fail(const std::string& msg, int line, int col) const {
    throw Error(ErrKind::LexError, msg, line, col);
  }

  bool at_end() const { return pos_ >= src_.size(); }
  char peek(size_t ahead = 0) const {
    return pos_ + ahead < src_.size() ? src_[pos_ + ahead] : '\0';
  }
  char advance() {
    char c = src_[pos_++];
    if (c == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    return c;
  }

  void skip_trivia() {
    for (;;) {
      char c = peek();
      if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
        advance();
      } else if (c == '/' && peek(1) == '/') {
        while (!at_end() && peek() != '\n') advance();
      } else if (c == '(' && peek(1) == '*') {
        int sl = line_, sc = col_;
        advance();
        advance();
        int depth = 1;
        while (depth > 0) {
          if (at_end()) fail("unterminated comment", sl, sc);
          if (peek() == '(' && peek(1) == '*') {
            advance();
            advance();
            ++depth;
          } else if (peek() == '*' && peek(1) == ')') {
            advance();
            advance();
            --depth;
          } else {
            advance();
          }
        }
      } else {
        return;
      }
    }
  }

  Token next_token() {
    int line = line_, col = col_;
    char c = peek();
    if (ident_start(c)) return word(line, col);
    if (digit(c)) return number(line, col);
    if (c == '\'') return quoted('\'', TokKind::StringLit, line, col);
    if (c == '"') return quoted('"', TokKind::WStringLit, line, col);
    return symbol(line, col);
  }

  Token word(int line, int col) {
    std::string text;
    while (!at_end() && ident_cont(peek())) text.push_back(advance());
    if (peek() == '#') return typed_literal(std::move(text), line, col);
    if (is_keyword(text)) return {TokKind::Keyword, std::move(text), line, col};
    return {TokKind::Identifier, std::move(text), line, col};
  }

  // Payload after `<prefix>#`. `-` is accepted right after a `#` (signed
  // durations) and inside date-like payloads, so `INT#5-3` stays three tokens.
  Token typed_literal(std::string prefix, int line, int col) {
    bool date_like = prefix == "D" || prefix == "DATE" || prefix == "DT" ||
                     prefix == "DATE_AND_TIME";
    std::string text = std::move(prefix);
    text.push_back(advance());  // '#'
    char prev = '#';
    while (!at_end()) {
      char c = peek();
      bool sign_ok = prev == '#' || prev == 'e' || prev == 'E';
      bool ok = ident_cont(c) || c == ':' || c == '.' || c == '#' ||
                ((c == '-' || c == '+') && (sign_ok || (c == '-' && date_like)));
      if (c == '.' && peek(1) == '.') ok = false;  // don't eat a range operator
      if (!ok) break;
      prev = c;
      text.push_back(advance());
    }
    if (text.back() == '#') fail("empty typed literal payload", line, col);
    return {TokKind::TypedLit, std::move(text), line, col};
  }

  Token number(int line, int col) {
    std::string text;
    while (digit(peek()) || peek() == '_') text.push_back(advance());
    if (peek() == '#') {
      // radix literal 2#.. 8#.. 16#..
      if (text != "2" && text != "8" && text != "16")
        fail("unsupported literal radix '" + text + "'", line, col);
      return typed_literal(std::move(text), line, col);
    }
    bool is_float = false;
    if (peek() == '.' && digit(peek(1))) {
      is_float = true;
      text.push_back(advance());
      while (digit(peek()) || peek() == '_') text.push_back(advance());
    }
    if (peek() == 'e' || peek() == 'E') {
      size_t k = 1;
      if (peek(1) == '+' || peek(1) == '-') k = 2;
      if (digit(peek(k))) {
        is_float = true;
        text.push_back(advance());
        if (peek() == '+' || peek() == '-') text.push_back(advance());
        while (digit(peek())) text.push_back(advance());
      }
    }
    return {is_float ? TokKind::FloatLit : TokKind::IntLit, std::move(text), line, col};
  }

  // `$` escapes: $' $" $$ $L $N $P $R $T and $xx (two hex digits).
  Token quoted(char quote, TokKind kind, int line, int col) {
    advance();  // opening quote
    std::string value;
    for (;;) {
      if (at_end() || peek() == '\n') fail("unterminated string literal", line, col);
      char c = advance();
      if (c == quote) break;
      if (c != '$') {
        value.push_back(c);
        continue;
      }
      if (at_end()) fail("unterminated string literal", line, col);
      char e = advance();
      switch (e) {
        case '\'': case '"': case '$': value.push_back(e); break;
        case 'L': case 'l': value.push_back('\n'); break;
        case 'N': case 'n': value.push_back('\n'); break;
        case 'P': case 'p': value.push_back('\f'); break;
        case 'R': case 'r': value.push_back('\r'); break;
        case 'T': case 't': value.push_back('\t'); break;
        default: {
          auto hex = [&](char h) -> int {
            if (h >= '0' && h <= '9') return h - '0';
            if (h >= 'a' && h <= 'f') return h - 'a' + 10;
            if (h >= 'A' && h <= 'F') return h - 'A' + 10;
            return -1;
          };
          int hi = hex(e), lo = at_end() ? -1 : hex(peek());
          if (hi < 0 || lo < 0) fail("bad string escape", line_, col_);
          advance();
          value.push_back(static_cast<char>(hi * 16 + lo));
        }
      }
    }
    return {kind, std::move(value), line, col};
  }

  Token symbol(int line, int col) {
    char c = advance();
    auto two = [&](char second) {
      if (peek() == second) {
        advance();
        return true;
      }
      return false;
    };
    switch (c) {
      case ':': return {TokKind::Op, two('=') ? ":=" : ":", line, col};
      case '<':
        if (two('=')) return {TokKind::Op, "<=", line, col};
        if (two('>')) return {TokKind::Op, "<>", line, col};
        return {TokKind::Op, "<", line, col};
      case '>': return {TokKind::Op, two('=') ? ">=" : ">", line, col};
      case '=':
        if (two('>')) return {TokKind::Op, "=>", line, col};
        return {TokKind::Op, "=", line, col};
      case '*': return {TokKind::Op, two('*') ? "**" : "*", line, col};
      case '.': return {TokKind::Op, two('.') ? ".." : ".", line, col};
      case '+': case '-': case '/': case '&':
        return {TokKind::Op, std::string(1, c), line, col};
      case '(': case ')': case '[': case ']': case ',': case ';':
        return {TokKind::Punct, std::string(1, c), line, col};
      default:
        fail(std::string("illegal character '") + c + "'", line, col);
    }
  }

  std::string_view src_;
  size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

}  // namespace

bool is_keyword(std::string_view word) { return keyword_set().count(word) > 0; }

std::vector<Token> tokenize(std::string_view source) { return Lexer(source).run(); }

const char* to_string(ErrKind k) {
  switch (k) {
    case ErrKind::LexError: return "LexError";
    case ErrKind::ParseError: return "ParseError";
    case ErrKind::LiteralError: return "LiteralError";
    case ErrKind::TypeError: return "TypeError";
    case ErrKind::ConvertError: return "ConvertError";
    case ErrKind::DomainError: return "DomainError";
    case ErrKind::DivisionByZero: return "DivisionByZero";
    case ErrKind::IndexOutOfRange: return "IndexOutOfRange";
    case ErrKind::UnboundVariable: return "UnboundVariable";
    case ErrKind::RedeclarationError: return "RedeclarationError";
    case ErrKind::ConstError: return "ConstError";
    case ErrKind::DefaultError: return "DefaultError";
    case ErrKind::SemanticError: return "SemanticError";
    case ErrKind::EmptyStack: return "EmptyStack";
    case ErrKind::ArityError: return "ArityError";
    case ErrKind::UnknownPOU: return "UnknownPOU";
    case ErrKind::NotInstantiated: return "NotInstantiated";
    case ErrKind::UnknownField: return "UnknownField";
    case ErrKind::EntryNotFound: return "EntryNotFound";
    case ErrKind::RecursionError: return "RecursionError";
    case ErrKind::NoApplicableSite: return "NoApplicableSite";
    case ErrKind::AdapterError: return "AdapterError";
    case ErrKind::IOError: return "IOError";
    case ErrKind::EngineCrash: return "EngineCrash";
  }
  return "Error";
}

std::optional<ErrKind> err_kind_from_string(std::string_view s) {
  static const std::array<ErrKind, 24> all = {
      ErrKind::LexError, ErrKind::ParseError, ErrKind::LiteralError, ErrKind::TypeError,
      ErrKind::ConvertError, ErrKind::DomainError, ErrKind::DivisionByZero,
      ErrKind::IndexOutOfRange, ErrKind::UnboundVariable, ErrKind::RedeclarationError,
      ErrKind::ConstError, ErrKind::DefaultError, ErrKind::SemanticError, ErrKind::EmptyStack,
      ErrKind::ArityError, ErrKind::UnknownPOU, ErrKind::NotInstantiated, ErrKind::UnknownField,
      ErrKind::EntryNotFound, ErrKind::RecursionError, ErrKind::NoApplicableSite,
      ErrKind::AdapterError, ErrKind::IOError, ErrKind::EngineCrash};
  for (ErrKind k : all)
    if (s == to_string(k)) return k;
  return std::nullopt;
}

}  // namespace stref
