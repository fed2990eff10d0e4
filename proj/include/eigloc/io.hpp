#pragma once

#include <cctype>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>

#include "eigloc/expr.hpp"

namespace eigloc {

class ParseError : public std::runtime_error {
public:
  ParseError(int line, int col, const std::string& msg)
      : std::runtime_error("parse error at " + std::to_string(line) + ":" + std::to_string(col) + ": " + msg),
        line(line),
        col(col) {}
  int line, col;
};

namespace detail {

// Tokens are '(', ')' and words over [A-Za-z0-9_]. A word of digits doubles
// as an integer where the grammar expects one.
class Lexer {
public:
  explicit Lexer(std::string_view text) : text_(text) {}

  struct Token {
    enum class Kind { LParen, RParen, Word, End } kind;
    std::string_view word;
    int line, col;
  };

  Token next() {
    skip_ws();
    const int l = line_, c = col_;
    if (pos_ >= text_.size()) return {Token::Kind::End, {}, l, c};
    const char ch = text_[pos_];
    if (ch == '(') {
      advance();
      return {Token::Kind::LParen, {}, l, c};
    }
    if (ch == ')') {
      advance();
      return {Token::Kind::RParen, {}, l, c};
    }
    if (is_word_char(ch)) {
      const std::size_t begin = pos_;
      while (pos_ < text_.size() && is_word_char(text_[pos_])) advance();
      return {Token::Kind::Word, text_.substr(begin, pos_ - begin), l, c};
    }
    throw ParseError(l, c, std::string("unexpected character '") + ch + "'");
  }

private:
  static bool is_word_char(char ch) {
    return std::isalnum(static_cast<unsigned char>(ch)) || ch == '_';
  }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) advance();
  }

  void advance() {
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
  int line_ = 1, col_ = 1;
};

class ExprParser {
public:
  explicit ExprParser(std::string_view text) : lex_(text) { tok_ = lex_.next(); }

  int parse_header() {
    expect_word("k");
    const int k = expect_int("width");
    if (k < 1) fail("width must be >= 1");
    return k;
  }

  SlickExpr parse_slick() {
    SlickExpr e;
    e.width = parse_header();
    e.root = parse_slick_expr(e);
    expect_end();
    return e;
  }

  ClassicExpr parse_classic() {
    ClassicExpr e;
    e.width = parse_header();
    e.root = parse_classic_expr(e);
    expect_end();
    return e;
  }

private:
  using Token = Lexer::Token;

  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(tok_.line, tok_.col, msg); }

  void bump() { tok_ = lex_.next(); }

  void expect_lparen() {
    if (tok_.kind != Token::Kind::LParen) fail("expected '('");
    bump();
  }

  void expect_rparen() {
    if (tok_.kind != Token::Kind::RParen) fail("expected ')'");
    bump();
  }

  void expect_end() {
    if (tok_.kind != Token::Kind::End) fail("trailing input after expression");
  }

  std::string expect_word(const char* which = nullptr) {
    if (tok_.kind != Token::Kind::Word)
      fail(which ? std::string("expected '") + which + "'" : "expected identifier");
    std::string w(tok_.word);
    if (which && w != which) fail(std::string("expected '") + which + "', got '" + w + "'");
    bump();
    return w;
  }

  int expect_int(const char* what) {
    if (tok_.kind != Token::Kind::Word) fail(std::string("expected ") + what);
    long v = 0;
    for (char ch : tok_.word) {
      if (ch < '0' || ch > '9') fail(std::string("expected ") + what + ", got '" + std::string(tok_.word) + "'");
      v = v * 10 + (ch - '0');
      if (v > 1000000) fail(std::string(what) + " too large");
    }
    bump();
    return static_cast<int>(v);
  }

  int label_in_range(int k) {
    const Token at = tok_;
    const int l = expect_int("label");
    if (l < 1 || l > k) throw ParseError(at.line, at.col, "label " + std::to_string(l) + " out of range [1," + std::to_string(k) + "]");
    return l;
  }

  std::string vertex_name() {
    if (tok_.kind != Token::Kind::Word) fail("expected vertex name");
    std::string name(tok_.word);
    if (!names_.insert(name).second) fail("duplicate vertex name: " + name);
    bump();
    return name;
  }

  JoinRelation parse_relation(int k) {
    JoinRelation s;
    expect_lparen();
    expect_word("S");
    while (tok_.kind == Token::Kind::LParen) {
      bump();
      const int i = label_in_range(k);
      const int j = label_in_range(k);
      expect_rparen();
      s.insert(i, j);
    }
    expect_rparen();
    return s;
  }

  LabelMap parse_map(int k, const char* which) {
    LabelMap m;
    std::set<int> sources;
    expect_lparen();
    expect_word(which);
    while (tok_.kind == Token::Kind::LParen) {
      bump();
      const Token at = tok_;
      const int from = label_in_range(k);
      const int to = label_in_range(k);
      expect_rparen();
      if (!sources.insert(from).second)
        throw ParseError(at.line, at.col, std::string("duplicate source label in ") + which + " map");
      m.set(from, to);
    }
    expect_rparen();
    return m;
  }

  int parse_slick_expr(SlickExpr& e) {
    expect_lparen();
    const std::string op = expect_word();
    if (op == "v") {
      const int l = label_in_range(e.width);
      const std::string name = vertex_name();
      expect_rparen();
      return e.add_atom(l, name);
    }
    if (op == "join") {
      JoinRelation s = parse_relation(e.width);
      LabelMap lm = parse_map(e.width, "L");
      LabelMap rm = parse_map(e.width, "R");
      const int left = parse_slick_expr(e);
      const int right = parse_slick_expr(e);
      expect_rparen();
      return e.add_join(std::move(s), std::move(lm), std::move(rm), left, right);
    }
    fail("expected 'v' or 'join', got '" + op + "'");
  }

  int parse_classic_expr(ClassicExpr& e) {
    expect_lparen();
    const std::string op = expect_word();
    if (op == "v") {
      const int l = label_in_range(e.width);
      const std::string name = vertex_name();
      expect_rparen();
      return e.add_atom(l, name);
    }
    if (op == "u") {
      const int left = parse_classic_expr(e);
      const int right = parse_classic_expr(e);
      expect_rparen();
      return e.add_union(left, right);
    }
    if (op == "eta" || op == "rho") {
      const Token at = tok_;
      const int i = label_in_range(e.width);
      const int j = label_in_range(e.width);
      const int child = parse_classic_expr(e);
      expect_rparen();
      if (op == "eta") {
        if (i == j) throw ParseError(at.line, at.col, "eta requires distinct labels");
        return e.add_eta(i, j, child);
      }
      return e.add_rho(i, j, child);
    }
    fail("expected 'v', 'u', 'eta' or 'rho', got '" + op + "'");
  }

  Lexer lex_;
  Token tok_;
  std::set<std::string> names_;
};

inline void print_pairs(std::ostream& os, const char* tag, const std::vector<std::pair<int, int>>& ps) {
  os << '(' << tag;
  for (const auto& [a, b] : ps) os << " (" << a << ' ' << b << ')';
  os << ')';
}

}  // namespace detail

inline SlickExpr parse_slick(std::string_view text) {
  SlickExpr e = detail::ExprParser(text).parse_slick();
  validate(e);
  return e;
}

inline ClassicExpr parse_classic(std::string_view text) {
  ClassicExpr e = detail::ExprParser(text).parse_classic();
  validate(e);
  return e;
}

inline void print_slick(std::ostream& os, const SlickExpr& e) {
  os << "k " << e.width << '\n';
  struct Item {
    int node;
    int indent;
    bool closing;
  };
  std::vector<Item> stack{{e.root, 0, false}};
  while (!stack.empty()) {
    auto [id, indent, closing] = stack.back();
    stack.pop_back();
    if (closing) {
      os << ')';
      continue;
    }
    if (indent > 0) {
      os << '\n';
      for (int i = 0; i < indent; ++i) os << "  ";
    }
    const auto& n = e.nodes[id];
    if (n.is_atom()) {
      os << "(v " << n.label << ' ' << e.vertex_names[n.vertex] << ')';
    } else {
      os << "(join ";
      detail::print_pairs(os, "S", n.S.pairs());
      os << ' ';
      detail::print_pairs(os, "L", n.L.pairs());
      os << ' ';
      detail::print_pairs(os, "R", n.R.pairs());
      stack.push_back({id, 0, true});
      stack.push_back({n.right, indent + 1, false});
      stack.push_back({n.left, indent + 1, false});
    }
  }
  os << '\n';
}

inline void print_classic(std::ostream& os, const ClassicExpr& e) {
  os << "k " << e.width << '\n';
  struct Item {
    int node;
    int indent;
    bool closing;
  };
  std::vector<Item> stack{{e.root, 0, false}};
  while (!stack.empty()) {
    auto [id, indent, closing] = stack.back();
    stack.pop_back();
    if (closing) {
      os << ')';
      continue;
    }
    if (indent > 0) {
      os << '\n';
      for (int i = 0; i < indent; ++i) os << "  ";
    }
    const auto& n = e.nodes[id];
    switch (n.kind) {
      case ClassicExpr::Kind::Atom:
        os << "(v " << n.label << ' ' << e.vertex_names[n.vertex] << ')';
        break;
      case ClassicExpr::Kind::Union:
        os << "(u";
        stack.push_back({id, 0, true});
        stack.push_back({n.right, indent + 1, false});
        stack.push_back({n.left, indent + 1, false});
        break;
      case ClassicExpr::Kind::Eta:
      case ClassicExpr::Kind::Rho:
        os << (n.kind == ClassicExpr::Kind::Eta ? "(eta " : "(rho ") << n.i << ' ' << n.j;
        stack.push_back({id, 0, true});
        stack.push_back({n.left, indent + 1, false});
        break;
    }
  }
  os << '\n';
}

inline std::string to_string(const SlickExpr& e) {
  std::ostringstream os;
  print_slick(os, e);
  return os.str();
}

inline std::string to_string(const ClassicExpr& e) {
  std::ostringstream os;
  print_classic(os, e);
  return os.str();
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace eigloc
