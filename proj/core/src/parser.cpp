#include "mutgen/parser.hpp"

#include <algorithm>
#include <array>

namespace mutgen::java {
namespace {

bool is_primitive_kw(const Token& t) {
  if (t.kind != TokenKind::Keyword) return false;
  return t.is("boolean") || t.is("byte") || t.is("char") || t.is("double") || t.is("float") ||
         t.is("int") || t.is("long") || t.is("short") || t.is("void");
}

bool is_modifier_kw(const Token& t) {
  if (t.kind != TokenKind::Keyword) return false;
  return t.is("public") || t.is("private") || t.is("protected") || t.is("static") ||
         t.is("final") || t.is("abstract") || t.is("synchronized") || t.is("native") ||
         t.is("strictfp") || t.is("default") || t.is("transient") || t.is("volatile");
}

bool ident_like(const Token& t) {
  return t.kind == TokenKind::Identifier || t.kind == TokenKind::IdToken;
}

bool literal_like(const Token& t) {
  switch (t.kind) {
    case TokenKind::IntLit:
    case TokenKind::FloatLit:
    case TokenKind::StringLit:
    case TokenKind::CharLit:
    case TokenKind::BoolLit:
    case TokenKind::NullLit:
      return true;
    default:
      return false;
  }
}

// binary operator precedence, loosest first
const std::array<std::vector<std::string_view>, 10> kBinaryLevels = {{
    {"||"},
    {"&&"},
    {"|"},
    {"^"},
    {"&"},
    {"==", "!="},
    {"<", ">", "<=", ">=", "instanceof"},
    {"<<", ">>", ">>>"},
    {"+", "-"},
    {"*", "/", "%"},
}};

bool is_assign_op(const Token& t) {
  if (t.kind != TokenKind::Operator) return false;
  return t.is("=") || t.is("+=") || t.is("-=") || t.is("*=") || t.is("/=") || t.is("%=") ||
         t.is("&=") || t.is("|=") || t.is("^=") || t.is("<<=") || t.is(">>=") || t.is(">>>=");
}

class Parser {
 public:
  explicit Parser(const std::vector<Token>& toks) : toks_(toks) {}

  AstNode method() {
    AstNode m{NodeLabel::MethodDecl};
    while (!at_end() && is_modifier_kw(cur())) take(m);
    if (check("<")) {
      std::size_t end = scan_generic(pos_);
      if (end == 0) throw ParseError(here(), "malformed type parameter list");
      while (pos_ < end) take(m);
    }
    if (!(check_ident() && check("(", 1))) {
      consume_type(m);
    }
    if (!check_ident()) throw ParseError(here(), "expected method name");
    take(m, NodeLabel::Name);

    expect("(", m);
    while (!check(")")) {
      m.children.push_back(param());
      if (check(",")) {
        take(m);
        continue;
      }
      break;
    }
    expect(")", m);
    while (check("[") && check("]", 1)) {
      take(m);
      take(m);
    }
    if (check("throws")) {
      take(m);
      name_chain(m);
      while (check(",")) {
        take(m);
        name_chain(m);
      }
    }
    if (check(";")) {
      take(m);
    } else {
      m.children.push_back(block());
    }
    return m;
  }

  void expect_eof() {
    if (pos_ != toks_.size()) throw ParseError(here(), "trailing tokens after method");
  }

 private:
  // ---- token primitives ----

  bool at_end() const { return pos_ >= toks_.size(); }

  Position here() const {
    if (pos_ < toks_.size()) return toks_[pos_].pos;
    return toks_.empty() ? Position{1, 1} : toks_.back().pos;
  }

  const Token& cur() const {
    if (at_end()) throw ParseError(here(), "unexpected end of input");
    return toks_[pos_];
  }

  bool check(std::string_view text, std::size_t ahead = 0) const {
    return pos_ + ahead < toks_.size() && toks_[pos_ + ahead].text == text;
  }

  bool check_ident(std::size_t ahead = 0) const {
    return pos_ + ahead < toks_.size() && ident_like(toks_[pos_ + ahead]);
  }

  static NodeLabel leaf_label(const Token& t) {
    switch (t.kind) {
      case TokenKind::Identifier:
        return NodeLabel::Name;
      case TokenKind::IdToken:
        return (t.text.rfind("STRING_", 0) == 0 || t.text.rfind("INT_", 0) == 0 ||
                t.text.rfind("FLOAT_", 0) == 0 || t.text.rfind("CHAR_", 0) == 0)
                   ? NodeLabel::Literal
                   : NodeLabel::Name;
      case TokenKind::IntLit:
      case TokenKind::FloatLit:
      case TokenKind::StringLit:
      case TokenKind::CharLit:
      case TokenKind::BoolLit:
      case TokenKind::NullLit:
        return NodeLabel::Literal;
      default:
        return NodeLabel::Other;
    }
  }

  void take(AstNode& parent) { take(parent, leaf_label(cur())); }

  void take(AstNode& parent, NodeLabel label) {
    AstNode leaf{label};
    leaf.text = cur().text;
    parent.children.push_back(std::move(leaf));
    ++pos_;
  }

  void expect(std::string_view text, AstNode& parent) {
    if (!check(text))
      throw ParseError(here(), "expected '" + std::string(text) + "'");
    take(parent);
  }

  // ---- lookahead scanners (no consumption) ----

  std::size_t scan_generic(std::size_t open) const {
    int depth = 0;
    const std::size_t limit = std::min(toks_.size(), open + 64);
    for (std::size_t i = open; i < limit; ++i) {
      const Token& t = toks_[i];
      if (t.is("<")) {
        ++depth;
      } else if (t.is(">") || t.is(">>") || t.is(">>>")) {
        depth -= static_cast<int>(t.text.size());
        if (depth < 0) return 0;
        if (depth == 0) return i + 1;
      } else if (ident_like(t) || is_primitive_kw(t) || t.is(",") || t.is(".") || t.is("?") ||
                 t.is("extends") || t.is("super") || t.is("[") || t.is("]") || t.is("&")) {
        // fine inside type arguments
      } else {
        return 0;
      }
    }
    return 0;
  }

  // type = (primitive | Name (. Name)*) generics? ([ ])*
  bool scan_type(std::size_t from, std::size_t& end) const {
    std::size_t i = from;
    if (i >= toks_.size()) return false;
    if (is_primitive_kw(toks_[i])) {
      ++i;
    } else if (ident_like(toks_[i])) {
      ++i;
      while (i + 1 < toks_.size() && toks_[i].is(".") && ident_like(toks_[i + 1])) i += 2;
    } else {
      return false;
    }
    if (i < toks_.size() && toks_[i].is("<")) {
      std::size_t g = scan_generic(i);
      if (g != 0) i = g;
    }
    while (i + 1 < toks_.size() && toks_[i].is("[") && toks_[i + 1].is("]")) i += 2;
    end = i;
    return true;
  }

  bool castable_after(std::size_t i, bool primitive_cast) const {
    if (i >= toks_.size()) return false;
    const Token& t = toks_[i];
    if (ident_like(t) || literal_like(t)) return true;
    if (t.is("(") || t.is("!") || t.is("~") || t.is("this") || t.is("super") || t.is("new"))
      return true;
    if (primitive_cast && (t.is("+") || t.is("-") || t.is("++") || t.is("--"))) return true;
    return false;
  }

  bool cast_ahead() const {
    std::size_t end = 0;
    if (!scan_type(pos_ + 1, end)) return false;
    if (end >= toks_.size() || !toks_[end].is(")")) return false;
    const bool primitive_cast = (end == pos_ + 2) && is_primitive_kw(toks_[pos_ + 1]);
    return castable_after(end + 1, primitive_cast);
  }

  bool lambda_ahead() const {
    if (check_ident() && check("->", 1)) return true;
    if (!check("(")) return false;
    int depth = 0;
    for (std::size_t i = pos_; i < toks_.size() && i < pos_ + 64; ++i) {
      if (toks_[i].is("(")) ++depth;
      if (toks_[i].is(")")) {
        --depth;
        if (depth == 0) return i + 1 < toks_.size() && toks_[i + 1].is("->");
      }
    }
    return false;
  }

  bool local_var_ahead() const {
    std::size_t p = pos_;
    while (p < toks_.size() && toks_[p].is("final")) ++p;
    std::size_t end = 0;
    if (!scan_type(p, end)) return false;
    if (end >= toks_.size() || !ident_like(toks_[end])) return false;
    std::size_t q = end + 1;
    while (q + 1 < toks_.size() && toks_[q].is("[") && toks_[q + 1].is("]")) q += 2;
    if (q >= toks_.size()) return false;
    return toks_[q].is("=") || toks_[q].is(";") || toks_[q].is(",");
  }

  // ---- consumers ----

  void consume_type(AstNode& parent) {
    if (is_primitive_kw(cur())) {
      take(parent);
    } else if (check_ident()) {
      take(parent);
      while (check(".") && check_ident(1)) {
        take(parent);
        take(parent);
      }
    } else {
      throw ParseError(here(), "expected type");
    }
    if (check("<")) {
      std::size_t end = scan_generic(pos_);
      if (end != 0)
        while (pos_ < end) take(parent);
    }
    while (check("[") && check("]", 1)) {
      take(parent);
      take(parent);
    }
  }

  void name_chain(AstNode& parent) {
    if (!check_ident()) throw ParseError(here(), "expected name");
    take(parent);
    while (check(".") && check_ident(1)) {
      take(parent);
      take(parent);
    }
  }

  AstNode param() {
    AstNode p{NodeLabel::Param};
    while (check("final")) take(p);
    consume_type(p);
    while (check("|")) {  // multi-catch
      take(p);
      consume_type(p);
    }
    if (check("...")) take(p);
    if (!check_ident()) throw ParseError(here(), "expected parameter name");
    take(p);
    while (check("[") && check("]", 1)) {
      take(p);
      take(p);
    }
    return p;
  }

  AstNode block() {
    AstNode b{NodeLabel::Block};
    expect("{", b);
    while (!check("}")) {
      if (at_end()) throw ParseError(here(), "unterminated block");
      b.children.push_back(statement());
    }
    expect("}", b);
    return b;
  }

  // consumes a balanced {...} region as flat leaves of `parent`
  void flat_braces(AstNode& parent) {
    int depth = 0;
    do {
      if (at_end()) throw ParseError(here(), "unterminated '{'");
      if (check("{")) ++depth;
      if (check("}")) --depth;
      take(parent);
    } while (depth > 0);
  }

  AstNode statement() {
    const Token& t = cur();
    if (t.is("{")) return block();
    if (t.is(";")) {
      AstNode s{NodeLabel::Other};
      take(s);
      return s;
    }
    if (t.is("if")) return if_statement();
    if (t.is("while")) {
      AstNode s{NodeLabel::While};
      take(s);
      expect("(", s);
      s.children.push_back(expression());
      expect(")", s);
      s.children.push_back(statement());
      return s;
    }
    if (t.is("do")) {
      AstNode s{NodeLabel::Other};
      take(s);
      s.children.push_back(statement());
      expect("while", s);
      expect("(", s);
      s.children.push_back(expression());
      expect(")", s);
      expect(";", s);
      return s;
    }
    if (t.is("for")) return for_statement();
    if (t.is("return")) {
      AstNode s{NodeLabel::Return};
      take(s);
      if (!check(";")) s.children.push_back(expression());
      expect(";", s);
      return s;
    }
    if (t.is("throw")) {
      AstNode s{NodeLabel::Throw};
      take(s);
      s.children.push_back(expression());
      expect(";", s);
      return s;
    }
    if (t.is("try")) return try_statement();
    if (t.is("break") || t.is("continue")) {
      AstNode s{NodeLabel::Other};
      take(s);
      if (check_ident()) take(s);
      expect(";", s);
      return s;
    }
    if (t.is("assert")) {
      AstNode s{NodeLabel::Other};
      take(s);
      s.children.push_back(expression());
      if (check(":")) {
        take(s);
        s.children.push_back(expression());
      }
      expect(";", s);
      return s;
    }
    if (t.is("synchronized")) {
      AstNode s{NodeLabel::Other};
      take(s);
      expect("(", s);
      s.children.push_back(expression());
      expect(")", s);
      s.children.push_back(block());
      return s;
    }
    if (t.is("switch")) return switch_statement();
    if (t.is("class") || t.is("interface") || t.is("enum")) {
      AstNode s{NodeLabel::Other};
      while (!check("{")) {
        if (at_end()) throw ParseError(here(), "unterminated declaration");
        take(s);
      }
      flat_braces(s);
      return s;
    }
    if (check_ident() && check(":", 1) && !check("::", 1)) {
      AstNode s{NodeLabel::Other};
      take(s);
      take(s);
      s.children.push_back(statement());
      return s;
    }
    if (local_var_ahead()) return local_var_decl();
    AstNode s{NodeLabel::Other};
    s.children.push_back(expression());
    expect(";", s);
    return s;
  }

  AstNode if_statement() {
    AstNode s{NodeLabel::If};
    take(s);
    expect("(", s);
    s.children.push_back(expression());
    expect(")", s);
    s.children.push_back(statement());
    if (check("else")) {
      AstNode e{NodeLabel::Else};
      take(e);
      e.children.push_back(statement());
      s.children.push_back(std::move(e));
    }
    return s;
  }

  AstNode for_statement() {
    AstNode s{NodeLabel::For};
    take(s);
    expect("(", s);

    bool enhanced = false;
    int depth = 0;
    for (std::size_t i = pos_; i < toks_.size(); ++i) {
      const Token& t = toks_[i];
      if (t.is("(") || t.is("[")) ++depth;
      if (t.is(")") || t.is("]")) {
        if (depth == 0) break;
        --depth;
      }
      if (depth == 0) {
        if (t.is(";") || t.is("?")) break;
        if (t.is(":")) {
          enhanced = true;
          break;
        }
      }
    }

    if (enhanced) {
      AstNode p{NodeLabel::Param};
      while (check("final")) take(p);
      consume_type(p);
      if (!check_ident()) throw ParseError(here(), "expected loop variable");
      take(p);
      s.children.push_back(std::move(p));
      expect(":", s);
      s.children.push_back(expression());
      expect(")", s);
      s.children.push_back(statement());
      return s;
    }

    if (check(";")) {
      take(s);
    } else if (local_var_ahead()) {
      s.children.push_back(local_var_decl());
    } else {
      s.children.push_back(expression());
      while (check(",")) {
        take(s);
        s.children.push_back(expression());
      }
      expect(";", s);
    }
    if (!check(";")) s.children.push_back(expression());
    expect(";", s);
    if (!check(")")) {
      s.children.push_back(expression());
      while (check(",")) {
        take(s);
        s.children.push_back(expression());
      }
    }
    expect(")", s);
    s.children.push_back(statement());
    return s;
  }

  AstNode try_statement() {
    AstNode s{NodeLabel::Try};
    take(s);
    if (check("(")) {
      AstNode res{NodeLabel::Other};
      take(res);
      while (!check(")")) {
        if (at_end()) throw ParseError(here(), "unterminated resource list");
        if (local_var_ahead() || check("final")) {
          AstNode d{NodeLabel::LocalVarDecl};
          while (check("final")) take(d);
          consume_type(d);
          if (!check_ident()) throw ParseError(here(), "expected resource name");
          take(d);
          expect("=", d);
          d.children.push_back(expression());
          res.children.push_back(std::move(d));
        } else {
          res.children.push_back(expression());
        }
        if (check(";")) take(res);
      }
      expect(")", res);
      s.children.push_back(std::move(res));
    }
    s.children.push_back(block());
    while (check("catch")) {
      AstNode c{NodeLabel::Catch};
      take(c);
      expect("(", c);
      c.children.push_back(param());
      expect(")", c);
      c.children.push_back(block());
      s.children.push_back(std::move(c));
    }
    if (check("finally")) {
      AstNode f{NodeLabel::Other};
      take(f);
      f.children.push_back(block());
      s.children.push_back(std::move(f));
    }
    return s;
  }

  AstNode switch_statement() {
    AstNode s{NodeLabel::Other};
    take(s);
    expect("(", s);
    s.children.push_back(expression());
    expect(")", s);
    expect("{", s);
    while (!check("}")) {
      if (at_end()) throw ParseError(here(), "unterminated switch body");
      if (check("case")) {
        AstNode c{NodeLabel::Other};
        take(c);
        c.children.push_back(expression());
        expect(":", c);
        s.children.push_back(std::move(c));
      } else if (check("default")) {
        AstNode c{NodeLabel::Other};
        take(c);
        expect(":", c);
        s.children.push_back(std::move(c));
      } else {
        s.children.push_back(statement());
      }
    }
    expect("}", s);
    return s;
  }

  AstNode local_var_decl() {
    AstNode d{NodeLabel::LocalVarDecl};
    while (check("final")) take(d);
    consume_type(d);
    for (;;) {
      if (!check_ident()) throw ParseError(here(), "expected variable name");
      take(d);
      while (check("[") && check("]", 1)) {
        take(d);
        take(d);
      }
      if (check("=")) {
        take(d);
        d.children.push_back(initializer());
      }
      if (check(",")) {
        take(d);
        continue;
      }
      break;
    }
    expect(";", d);
    return d;
  }

  // array initializer or plain expression
  AstNode initializer() {
    if (!check("{")) return expression();
    AstNode a{NodeLabel::Other};
    take(a);
    while (!check("}")) {
      if (at_end()) throw ParseError(here(), "unterminated array initializer");
      a.children.push_back(initializer());
      if (check(",")) take(a);
    }
    expect("}", a);
    return a;
  }

  // ---- expressions ----

  AstNode expression() {
    if (lambda_ahead()) return lambda();
    AstNode left = ternary();
    if (!at_end() && is_assign_op(cur())) {
      AstNode a{NodeLabel::Assign};
      a.children.push_back(std::move(left));
      take(a);
      a.children.push_back(expression());
      return a;
    }
    return left;
  }

  AstNode lambda() {
    AstNode l{NodeLabel::Other};
    if (check_ident()) {
      take(l);
    } else {
      int depth = 0;
      do {
        if (at_end()) throw ParseError(here(), "unterminated lambda parameters");
        if (check("(")) ++depth;
        if (check(")")) --depth;
        take(l);
      } while (depth > 0);
    }
    expect("->", l);
    if (check("{")) {
      l.children.push_back(block());
    } else {
      l.children.push_back(expression());
    }
    return l;
  }

  AstNode ternary() {
    AstNode c = binary(0);
    if (check("?")) {
      AstNode t{NodeLabel::Other};
      t.children.push_back(std::move(c));
      take(t);
      t.children.push_back(expression());
      expect(":", t);
      t.children.push_back(ternary());
      return t;
    }
    return c;
  }

  AstNode binary(std::size_t level) {
    if (level >= kBinaryLevels.size()) return unary();
    AstNode left = binary(level + 1);
    for (;;) {
      if (at_end()) return left;
      const Token& t = cur();
      bool match = false;
      for (std::string_view op : kBinaryLevels[level]) {
        if (t.text == op) {
          match = true;
          break;
        }
      }
      if (!match) return left;
      AstNode b{NodeLabel::BinaryOp};
      b.children.push_back(std::move(left));
      take(b);
      if (t.is("instanceof")) {
        consume_type(b);
        if (check_ident()) take(b);  // pattern variable
      } else {
        b.children.push_back(binary(level + 1));
      }
      left = std::move(b);
    }
  }

  AstNode unary() {
    if (!at_end() && (check("+") || check("-") || check("!") || check("~") || check("++") ||
                      check("--"))) {
      AstNode u{NodeLabel::UnaryOp};
      take(u);
      u.children.push_back(unary());
      return u;
    }
    if (check("(") && cast_ahead()) {
      AstNode c{NodeLabel::Cast};
      take(c);
      consume_type(c);
      expect(")", c);
      c.children.push_back(unary());
      return c;
    }
    return postfix();
  }

  AstNode postfix() {
    AstNode node = primary();
    for (;;) {
      if (at_end()) return node;
      if (check(".")) {
        node = dot_suffix(std::move(node));
        continue;
      }
      if (check("(")) {
        AstNode call{NodeLabel::Call};
        call.children.push_back(std::move(node));
        call.children.push_back(args());
        node = std::move(call);
        continue;
      }
      if (check("[")) {
        AstNode acc{NodeLabel::ArrayAccess};
        acc.children.push_back(std::move(node));
        take(acc);
        acc.children.push_back(expression());
        expect("]", acc);
        node = std::move(acc);
        continue;
      }
      if (check("++") || check("--")) {
        AstNode u{NodeLabel::UnaryOp};
        u.children.push_back(std::move(node));
        take(u);
        node = std::move(u);
        continue;
      }
      if (check("::")) {
        AstNode r{NodeLabel::Other};
        r.children.push_back(std::move(node));
        take(r);
        if (check("new") || check_ident()) {
          take(r);
        } else {
          throw ParseError(here(), "expected method reference name");
        }
        node = std::move(r);
        continue;
      }
      return node;
    }
  }

  AstNode dot_suffix(AstNode&& recv) {
    // caller guarantees cur() == "."
    if (check("new", 1)) {
      AstNode n{NodeLabel::Other};
      n.children.push_back(std::move(recv));
      take(n);  // .
      take(n);  // new
      consume_type(n);
      n.children.push_back(args());
      return n;
    }
    std::size_t name_at = pos_ + 1;
    std::size_t generic_end = 0;
    if (check("<", 1)) {
      generic_end = scan_generic(pos_ + 1);
      if (generic_end == 0) throw ParseError(here(), "malformed type arguments");
      name_at = generic_end;
    }
    const bool is_call = name_at < toks_.size() && ident_like(toks_[name_at]) &&
                         name_at + 1 < toks_.size() && toks_[name_at + 1].is("(");
    AstNode n{is_call ? NodeLabel::Call : NodeLabel::FieldAccess};
    n.children.push_back(std::move(recv));
    take(n);  // .
    if (generic_end != 0)
      while (pos_ < generic_end) take(n);
    if (check_ident()) {
      take(n);
    } else if (check("class") || check("this") || check("super")) {
      take(n);
    } else {
      throw ParseError(here(), "expected member name");
    }
    if (is_call) n.children.push_back(args());
    return n;
  }

  AstNode args() {
    AstNode a{NodeLabel::Args};
    expect("(", a);
    while (!check(")")) {
      if (at_end()) throw ParseError(here(), "unterminated argument list");
      a.children.push_back(expression());
      if (check(",")) take(a);
    }
    expect(")", a);
    return a;
  }

  AstNode new_expr() {
    AstNode n{NodeLabel::New};
    take(n);  // new
    consume_type(n);
    if (check("(")) {
      n.children.push_back(args());
      if (check("{")) {
        AstNode body{NodeLabel::Other};
        flat_braces(body);
        n.children.push_back(std::move(body));
      }
      return n;
    }
    if (check("[")) {
      while (check("[")) {
        take(n);
        if (!check("]")) n.children.push_back(expression());
        expect("]", n);
      }
      if (check("{")) n.children.push_back(initializer());
      return n;
    }
    if (check("{")) {  // after consume_type ate the [] dims of e.g. `new int[]{...}`
      n.children.push_back(initializer());
      return n;
    }
    throw ParseError(here(), "expected constructor arguments or array dimensions");
  }

  AstNode primary() {
    if (at_end()) throw ParseError(here(), "expected expression");
    const Token& t = cur();
    if (literal_like(t)) {
      AstNode leaf{NodeLabel::Literal};
      leaf.text = t.text;
      ++pos_;
      return leaf;
    }
    if (ident_like(t)) {
      AstNode leaf{leaf_label(t)};
      leaf.text = t.text;
      ++pos_;
      return leaf;
    }
    if (t.is("this") || t.is("super") || is_primitive_kw(t)) {
      AstNode leaf{NodeLabel::Other};
      leaf.text = t.text;
      ++pos_;
      return leaf;
    }
    if (t.is("new")) return new_expr();
    if (t.is("(")) {
      AstNode p{NodeLabel::Other};
      take(p);
      p.children.push_back(expression());
      expect(")", p);
      return p;
    }
    throw ParseError(here(), "unexpected token '" + t.text + "'");
  }

  const std::vector<Token>& toks_;
  std::size_t pos_ = 0;
};

}  // namespace

AstNode parse_method(const std::vector<Token>& tokens) {
  Parser p(tokens);
  AstNode m = p.method();
  p.expect_eof();
  return m;
}

SyntaxCheck check_syntax(const std::string& source) {
  SyntaxCheck result;
  std::vector<Token> toks;
  try {
    toks = lex(source);
  } catch (const LexError&) {
    return result;
  }
  for (const Token& t : toks) {
    if (has_id_token_prefix(t.text) && !is_id_token_text(t.text)) return result;
  }
  result.lexes = true;
  try {
    (void)parse_method(toks);
    result.parses = true;
  } catch (const ParseError&) {
  }
  return result;
}

namespace {

// Scans one type body for member declarations; `i` sits just past the
// opening brace. Collects method spans, recursing into nested types.
class MemberScanner {
 public:
  MemberScanner(const std::vector<Token>& toks, std::vector<MethodInfo>& out,
                std::vector<std::string>* diags)
      : toks_(toks), out_(out), diags_(diags) {}

  void scan_unit() {
    std::size_t i = 0;
    while (i < toks_.size()) {
      if (toks_[i].is("package") || toks_[i].is("import")) {
        while (i < toks_.size() && !toks_[i].is(";")) ++i;
        ++i;
        continue;
      }
      if (toks_[i].is("class") || toks_[i].is("interface") || toks_[i].is("enum")) {
        const bool is_enum = toks_[i].is("enum");
        while (i < toks_.size() && !toks_[i].is("{")) ++i;
        if (i >= toks_.size()) return;
        ++i;
        i = scan_body(i, is_enum);
        continue;
      }
      ++i;
    }
  }

 private:
  std::size_t scan_body(std::size_t i, bool is_enum) {
    if (is_enum) i = skip_enum_constants(i);
    while (i < toks_.size()) {
      if (toks_[i].is("}")) return i + 1;
      if (toks_[i].is(";")) {
        ++i;
        continue;
      }
      std::size_t m = i;
      while (m < toks_.size() && is_modifier_kw(toks_[m])) ++m;
      if (m < toks_.size() &&
          (toks_[m].is("class") || toks_[m].is("interface") || toks_[m].is("enum"))) {
        const bool nested_enum = toks_[m].is("enum");
        i = m;
        while (i < toks_.size() && !toks_[i].is("{")) ++i;
        if (i >= toks_.size()) return i;
        i = scan_body(i + 1, nested_enum);
        continue;
      }
      if (toks_[i].is("static") && i + 1 < toks_.size() && toks_[i + 1].is("{")) {
        i = skip_braces(i + 1);
        continue;
      }
      if (toks_[i].is("{")) {
        i = skip_braces(i);
        continue;
      }
      std::size_t end = 0;
      if (method_span(i, end)) {
        record(i, end);
        i = end;
        continue;
      }
      i = skip_member(i);
    }
    return i;
  }

  // enum constants run until the first top-level ';' (or the closing brace)
  std::size_t skip_enum_constants(std::size_t i) {
    int depth = 0;
    while (i < toks_.size()) {
      const Token& t = toks_[i];
      if (t.is("(") || t.is("{") || t.is("[")) ++depth;
      if (t.is(")") || t.is("]")) --depth;
      if (t.is("}")) {
        if (depth == 0) return i;  // no member section
        --depth;
      }
      if (t.is(";") && depth == 0) return i + 1;
      ++i;
    }
    return i;
  }

  std::size_t skip_braces(std::size_t i) const {
    int depth = 0;
    while (i < toks_.size()) {
      if (toks_[i].is("{")) ++depth;
      if (toks_[i].is("}")) {
        --depth;
        if (depth == 0) return i + 1;
      }
      ++i;
    }
    return i;
  }

  // field or other non-method member: skip past its terminating ';',
  // stepping over balanced braces (array or anonymous class initializers)
  std::size_t skip_member(std::size_t i) {
    int depth = 0;
    while (i < toks_.size()) {
      const Token& t = toks_[i];
      if (t.is("(") || t.is("[")) ++depth;
      if (t.is(")") || t.is("]")) --depth;
      if (t.is("{")) {
        i = skip_braces(i);
        continue;
      }
      if (t.is("}") && depth <= 0) return i;  // malformed member; let caller see '}'
      if (t.is(";") && depth == 0) return i + 1;
      ++i;
    }
    return i;
  }

  bool method_span(std::size_t at, std::size_t& end) const {
    std::size_t i = at;
    while (i < toks_.size() && is_modifier_kw(toks_[i])) ++i;
    if (i < toks_.size() && toks_[i].is("<")) {
      std::size_t g = generic_end(i);
      if (g == 0) return false;
      i = g;
    }
    if (!(ident_at(i) && i + 1 < toks_.size() && toks_[i + 1].is("("))) {
      std::size_t type_end = 0;
      if (!scan_member_type(i, type_end)) return false;
      i = type_end;
      if (!(ident_at(i) && i + 1 < toks_.size() && toks_[i + 1].is("("))) return false;
    }
    ++i;  // at '('
    int depth = 0;
    while (i < toks_.size()) {
      if (toks_[i].is("(")) ++depth;
      if (toks_[i].is(")")) {
        --depth;
        if (depth == 0) {
          ++i;
          break;
        }
      }
      ++i;
    }
    if (depth != 0) return false;
    while (i + 1 < toks_.size() && toks_[i].is("[") && toks_[i + 1].is("]")) i += 2;
    if (i < toks_.size() && toks_[i].is("throws")) {
      ++i;
      while (i < toks_.size() && !toks_[i].is("{") && !toks_[i].is(";")) ++i;
    }
    if (i >= toks_.size()) return false;
    if (toks_[i].is(";")) {
      end = i + 1;
      return true;
    }
    if (!toks_[i].is("{")) return false;
    std::size_t close = skip_braces(i);
    if (close == toks_.size() && !(close > 0 && toks_[close - 1].is("}"))) return false;
    end = close;
    return true;
  }

  bool ident_at(std::size_t i) const { return i < toks_.size() && ident_like(toks_[i]); }

  std::size_t generic_end(std::size_t open) const {
    int depth = 0;
    for (std::size_t i = open; i < std::min(toks_.size(), open + 64); ++i) {
      const Token& t = toks_[i];
      if (t.is("<")) ++depth;
      if (t.is(">") || t.is(">>") || t.is(">>>")) {
        depth -= static_cast<int>(t.text.size());
        if (depth <= 0) return i + 1;
      }
    }
    return 0;
  }

  bool scan_member_type(std::size_t from, std::size_t& end) const {
    std::size_t i = from;
    if (i >= toks_.size()) return false;
    if (is_primitive_kw(toks_[i])) {
      ++i;
    } else if (ident_like(toks_[i])) {
      ++i;
      while (i + 1 < toks_.size() && toks_[i].is(".") && ident_like(toks_[i + 1])) i += 2;
    } else {
      return false;
    }
    if (i < toks_.size() && toks_[i].is("<")) {
      std::size_t g = generic_end(i);
      if (g == 0) return false;
      i = g;
    }
    while (i + 1 < toks_.size() && toks_[i].is("[") && toks_[i + 1].is("]")) i += 2;
    end = i;
    return true;
  }

  void record(std::size_t begin, std::size_t end) {
    std::vector<Token> span(toks_.begin() + static_cast<std::ptrdiff_t>(begin),
                            toks_.begin() + static_cast<std::ptrdiff_t>(end));
    MethodInfo info;
    try {
      info.ast = parse_method(span);
    } catch (const ParseError& e) {
      if (diags_) diags_->push_back(e.what());
      return;
    }
    for (const AstNode& child : info.ast.children) {
      if (child.is_leaf() && child.text == "(") break;
      if (child.label == NodeLabel::Name && child.is_leaf()) info.name = child.text;
    }
    for (const AstNode& child : info.ast.children)
      if (child.label == NodeLabel::Param) ++info.arity;
    info.tokens = std::move(span);
    out_.push_back(std::move(info));
  }

  const std::vector<Token>& toks_;
  std::vector<MethodInfo>& out_;
  std::vector<std::string>* diags_;
};

}  // namespace

std::vector<MethodInfo> extract_methods(std::string_view source, std::vector<std::string>* diags) {
  std::vector<Token> toks = lex(source);
  std::vector<MethodInfo> out;
  MemberScanner(toks, out, diags).scan_unit();
  return out;
}

}  // namespace mutgen::java
