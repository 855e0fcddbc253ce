// SPDX-License-Identifier: Apache-2.0
#include "stref/parser.hpp"

#include <charconv>
#include <cstdlib>
#include <unordered_map>

#include "stref/error.hpp"
#include "stref/token.hpp"

namespace stref {

namespace {

const std::unordered_map<std::string_view, TypeKind>& elementary_types() {
  static const std::unordered_map<std::string_view, TypeKind> m = {
      {"SINT", TypeKind::Sint},   {"INT", TypeKind::Int},     {"DINT", TypeKind::Dint},
      {"LINT", TypeKind::Lint},   {"USINT", TypeKind::Usint}, {"UINT", TypeKind::Uint},
      {"UDINT", TypeKind::Udint}, {"ULINT", TypeKind::Ulint}, {"REAL", TypeKind::Real},
      {"LREAL", TypeKind::Lreal}, {"BOOL", TypeKind::Bool},   {"BYTE", TypeKind::Byte},
      {"WORD", TypeKind::Word},   {"DWORD", TypeKind::Dword}, {"TIME", TypeKind::Time},
      {"DATE", TypeKind::Date},   {"TIME_OF_DAY", TypeKind::Tod},
      {"DATE_AND_TIME", TypeKind::Dt},
  };
  return m;
}

class Parser {
public:
  explicit Parser(std::string_view source) : toks_(tokenize(source)) {}

  SourceUnit parse_unit() {
    SourceUnit unit;
    while (!at(TokKind::Eof)) {
      if (at_kw("TYPE")) {
        parse_type_block(unit);
      } else if (at_kw("FUNCTION")) {
        unit.pous.push_back(parse_function());
      } else if (at_kw("FUNCTION_BLOCK")) {
        unit.pous.push_back(parse_pou(PouKind::FunctionBlock, "FUNCTION_BLOCK",
                                      "END_FUNCTION_BLOCK"));
      } else if (at_kw("PROGRAM")) {
        unit.pous.push_back(parse_pou(PouKind::Program, "PROGRAM", "END_PROGRAM"));
      } else {
        fail("TYPE, FUNCTION, FUNCTION_BLOCK or PROGRAM");
      }
    }
    if (unit.pous.empty()) fail("at least one POU");
    return unit;
  }

  ExprPtr parse_single_expression() {
    ExprPtr e = parse_expr();
    expect_eof();
    return e;
  }

private:
  // --- token plumbing -------------------------------------------------------

  const Token& cur() const { return toks_[pos_]; }
  const Token& peek(size_t ahead = 1) const {
    size_t i = pos_ + ahead;
    return i < toks_.size() ? toks_[i] : toks_.back();
  }

  bool at(TokKind k) const { return cur().kind == k; }
  bool at_kw(std::string_view kw) const {
    return cur().kind == TokKind::Keyword && cur().text == kw;
  }
  bool at_op(std::string_view op) const { return cur().kind == TokKind::Op && cur().text == op; }
  bool at_punct(std::string_view p) const {
    return cur().kind == TokKind::Punct && cur().text == p;
  }

  Token take() { return toks_[pos_++]; }

  bool eat_kw(std::string_view kw) {
    if (!at_kw(kw)) return false;
    ++pos_;
    return true;
  }
  bool eat_op(std::string_view op) {
    if (!at_op(op)) return false;
    ++pos_;
    return true;
  }
  bool eat_punct(std::string_view p) {
    if (!at_punct(p)) return false;
    ++pos_;
    return true;
  }

  [[noreturn]] void fail(const std::string& expected) const {
    const Token& t = cur();
    std::string found = t.kind == TokKind::Eof ? "end of input" : "'" + t.text + "'";
    throw Error(ErrKind::ParseError, "expected " + expected + ", found " + found, t.line,
                t.column);
  }

  void expect_kw(std::string_view kw) {
    if (!eat_kw(kw)) fail("'" + std::string(kw) + "'");
  }
  void expect_op(std::string_view op) {
    if (!eat_op(op)) fail("'" + std::string(op) + "'");
  }
  void expect_punct(std::string_view p) {
    if (!eat_punct(p)) fail("'" + std::string(p) + "'");
  }
  void expect_eof() {
    if (!at(TokKind::Eof)) fail("end of input");
  }

  std::string expect_ident() {
    if (!at(TokKind::Identifier)) fail("an identifier");
    return take().text;
  }

  // --- declarations ---------------------------------------------------------

  void parse_type_block(SourceUnit& unit) {
    expect_kw("TYPE");
    while (!eat_kw("END_TYPE")) {
      if (at(TokKind::Eof)) fail("'END_TYPE'");
      int line = cur().line;
      std::string name = expect_ident();
      expect_op(":");
      if (at_punct("(")) {
        unit.type_decls.emplace_back(parse_enum_decl(name, line));
      } else if (at_kw("STRUCT")) {
        unit.type_decls.emplace_back(parse_struct_decl(name, line));
      } else {
        fail("'(' or 'STRUCT'");
      }
    }
    eat_punct(";");
  }

  EnumDecl parse_enum_decl(std::string name, int line) {
    EnumDecl d;
    d.name = std::move(name);
    d.line = line;
    expect_punct("(");
    for (;;) {
      EnumMember m;
      m.name = expect_ident();
      if (eat_op(":=")) m.value = parse_expr();
      d.members.push_back(std::move(m));
      if (eat_punct(",")) continue;
      break;
    }
    expect_punct(")");
    if (eat_op(":=")) d.default_member = expect_ident();
    expect_punct(";");
    return d;
  }

  StructDecl parse_struct_decl(std::string name, int line) {
    StructDecl d;
    d.name = std::move(name);
    d.line = line;
    expect_kw("STRUCT");
    while (!eat_kw("END_STRUCT")) {
      if (at(TokKind::Eof)) fail("'END_STRUCT'");
      d.fields.push_back(parse_var_entry());
    }
    eat_punct(";");
    return d;
  }

  PouDecl parse_function() {
    PouDecl pou;
    pou.kind = PouKind::Function;
    pou.line = cur().line;
    expect_kw("FUNCTION");
    pou.name = expect_ident();
    expect_op(":");
    pou.return_type = parse_type_expr();
    parse_sections_and_body(pou, "END_FUNCTION");
    return pou;
  }

  PouDecl parse_pou(PouKind kind, std::string_view kw, std::string_view end_kw) {
    PouDecl pou;
    pou.kind = kind;
    pou.line = cur().line;
    expect_kw(kw);
    pou.name = expect_ident();
    parse_sections_and_body(pou, end_kw);
    return pou;
  }

  void parse_sections_and_body(PouDecl& pou, std::string_view end_kw) {
    while (at_var_section()) pou.sections.push_back(parse_var_section());
    pou.body = parse_statements({std::string(end_kw)});
    expect_kw(end_kw);
    eat_punct(";");
  }

  bool at_var_section() const {
    return at_kw("VAR") || at_kw("VAR_INPUT") || at_kw("VAR_OUTPUT") || at_kw("VAR_IN_OUT") ||
           at_kw("VAR_TEMP") || at_kw("VAR_GLOBAL") || at_kw("VAR_EXTERNAL");
  }

  VarSection parse_var_section() {
    VarSection sec;
    sec.line = cur().line;
    std::string kw = take().text;
    if (kw == "VAR") sec.kind = SectionKind::Var;
    else if (kw == "VAR_INPUT") sec.kind = SectionKind::VarInput;
    else if (kw == "VAR_OUTPUT") sec.kind = SectionKind::VarOutput;
    else if (kw == "VAR_IN_OUT") sec.kind = SectionKind::VarInOut;
    else if (kw == "VAR_TEMP") sec.kind = SectionKind::VarTemp;
    else if (kw == "VAR_GLOBAL") sec.kind = SectionKind::VarGlobal;
    else sec.kind = SectionKind::VarExternal;
    sec.constant = eat_kw("CONSTANT");
    while (!eat_kw("END_VAR")) {
      if (at(TokKind::Eof)) fail("'END_VAR'");
      sec.entries.push_back(parse_var_entry());
    }
    eat_punct(";");
    return sec;
  }

  VarEntry parse_var_entry() {
    VarEntry entry;
    entry.line = cur().line;
    entry.names.push_back(expect_ident());
    while (eat_punct(",")) entry.names.push_back(expect_ident());
    expect_op(":");
    entry.type = parse_type_expr();
    if (eat_op(":=")) entry.init = parse_initializer();
    expect_punct(";");
    return entry;
  }

  // `( Id := ...` starts a struct aggregate, anything else is an expression.
  ExprPtr parse_initializer() {
    if (at_punct("(") && peek().kind == TokKind::Identifier && peek(2).kind == TokKind::Op &&
        peek(2).text == ":=") {
      auto agg = std::make_unique<Expr>();
      agg->line = cur().line;
      agg->col = cur().column;
      expect_punct("(");
      AggregateE node;
      for (;;) {
        Arg a;
        a.name = expect_ident();
        expect_op(":=");
        a.value = parse_expr();
        node.fields.push_back(std::move(a));
        if (eat_punct(",")) continue;
        break;
      }
      expect_punct(")");
      agg->node = std::move(node);
      return agg;
    }
    return parse_expr();
  }

  TypeExpr parse_type_expr() {
    TypeExpr t;
    t.line = cur().line;
    t.col = cur().column;
    if (at_kw("STRING") || at_kw("WSTRING")) {
      t.k = TypeExpr::K::String;
      t.wide = cur().text == "WSTRING";
      take();
      if (eat_punct("[")) {
        t.capacity = parse_expr();
        expect_punct("]");
      }
      return t;
    }
    if (at_kw("ARRAY")) {
      take();
      t.k = TypeExpr::K::Array;
      expect_punct("[");
      for (;;) {
        ExprPtr lo = parse_expr();
        expect_op("..");
        ExprPtr hi = parse_expr();
        t.ranges.emplace_back(std::move(lo), std::move(hi));
        if (eat_punct(",")) continue;
        break;
      }
      expect_punct("]");
      expect_kw("OF");
      t.element = std::make_unique<TypeExpr>(parse_type_expr());
      return t;
    }
    if (at(TokKind::Keyword)) {
      auto it = elementary_types().find(cur().text);
      if (it == elementary_types().end()) fail("a type");
      t.k = TypeExpr::K::Elementary;
      t.elem = it->second;
      take();
      return t;
    }
    if (at(TokKind::Identifier)) {
      t.k = TypeExpr::K::User;
      t.user_name = take().text;
      return t;
    }
    fail("a type");
  }

  // --- statements -----------------------------------------------------------

  bool at_stop(const std::vector<std::string>& stops) const {
    if (!at(TokKind::Keyword)) return false;
    for (const auto& s : stops)
      if (cur().text == s) return true;
    return false;
  }

  StmtList parse_statements(const std::vector<std::string>& stops) {
    StmtList list;
    while (!at(TokKind::Eof) && !at_stop(stops)) list.push_back(parse_statement());
    return list;
  }

  StmtPtr parse_statement() {
    auto stmt = std::make_unique<Stmt>();
    stmt->line = cur().line;
    stmt->col = cur().column;
    if (at_kw("IF")) {
      stmt->node = parse_if();
    } else if (at_kw("CASE")) {
      stmt->node = parse_case();
    } else if (at_kw("WHILE")) {
      stmt->node = parse_while();
    } else if (at_kw("FOR")) {
      stmt->node = parse_for();
    } else if (at_kw("REPEAT")) {
      stmt->node = parse_repeat();
    } else if (at_kw("RETURN")) {
      take();
      expect_punct(";");
      stmt->node = ReturnS{};
    } else if (at_kw("EXIT")) {
      take();
      expect_punct(";");
      stmt->node = ExitS{};
    } else {
      ExprPtr e = parse_expr();
      if (at_op("=>")) fail("':=' (the '=>' output binding is not supported)");
      if (eat_op(":=")) {
        if (!is_lvalue(*e)) {
          throw Error(ErrKind::ParseError, "invalid assignment target", stmt->line, stmt->col);
        }
        ExprPtr rhs = parse_expr();
        expect_punct(";");
        stmt->node = AssignS{std::move(e), std::move(rhs)};
      } else {
        expect_punct(";");
        stmt->node = ExprS{std::move(e)};
      }
    }
    return stmt;
  }

  static bool is_lvalue(const Expr& e) {
    if (e.is<IdentE>()) return true;
    if (e.is<MemberE>()) return is_lvalue(*e.as<MemberE>().base);
    if (e.is<IndexE>()) return is_lvalue(*e.as<IndexE>().base);
    return false;
  }

  IfS parse_if() {
    expect_kw("IF");
    IfS node{parse_expr(), {}, {}, std::nullopt};
    expect_kw("THEN");
    node.then_body = parse_statements({"ELSIF", "ELSE_IF", "ELSE", "END_IF"});
    while (at_kw("ELSIF") || at_kw("ELSE_IF")) {
      take();
      ElsifArm arm;
      arm.cond = parse_expr();
      expect_kw("THEN");
      arm.body = parse_statements({"ELSIF", "ELSE_IF", "ELSE", "END_IF"});
      node.elsifs.push_back(std::move(arm));
    }
    if (eat_kw("ELSE")) node.else_body = parse_statements({"END_IF"});
    expect_kw("END_IF");
    eat_punct(";");
    return node;
  }

  CaseS parse_case() {
    expect_kw("CASE");
    CaseS node{parse_expr(), {}, std::nullopt};
    expect_kw("OF");
    for (;;) {
      if (at_kw("ELSE") || at_kw("END_CASE") || at(TokKind::Eof)) break;
      CaseArm arm;
      arm.labels = parse_case_labels();
      // Statements run until the next label, ELSE or END_CASE. A new label is
      // detected by tentatively parsing `labels :` and backtracking if that
      // fails.
      for (;;) {
        if (at_kw("ELSE") || at_kw("END_CASE") || at(TokKind::Eof)) break;
        if (starts_case_label()) break;
        arm.body.push_back(parse_statement());
      }
      node.arms.push_back(std::move(arm));
    }
    if (eat_kw("ELSE")) node.else_body = parse_statements({"END_CASE"});
    expect_kw("END_CASE");
    eat_punct(";");
    return node;
  }

  std::vector<CaseLabel> parse_case_labels() {
    std::vector<CaseLabel> labels;
    for (;;) {
      CaseLabel l;
      l.lo = parse_expr();
      if (eat_op("..")) l.hi = parse_expr();
      labels.push_back(std::move(l));
      if (eat_punct(",")) continue;
      break;
    }
    expect_op(":");
    return labels;
  }

  bool starts_case_label() {
    size_t saved = pos_;
    bool ok = true;
    try {
      parse_case_labels();
    } catch (const Error&) {
      ok = false;
    }
    pos_ = saved;
    return ok;
  }

  WhileS parse_while() {
    expect_kw("WHILE");
    WhileS node{parse_expr(), {}};
    expect_kw("DO");
    node.body = parse_statements({"END_WHILE"});
    expect_kw("END_WHILE");
    eat_punct(";");
    return node;
  }

  ForS parse_for() {
    expect_kw("FOR");
    ForS node;
    node.var = expect_ident();
    expect_op(":=");
    node.from = parse_expr();
    expect_kw("TO");
    node.to = parse_expr();
    if (eat_kw("BY")) node.by = parse_expr();
    expect_kw("DO");
    node.body = parse_statements({"END_FOR"});
    expect_kw("END_FOR");
    eat_punct(";");
    return node;
  }

  RepeatS parse_repeat() {
    expect_kw("REPEAT");
    RepeatS node;
    node.body = parse_statements({"UNTIL"});
    expect_kw("UNTIL");
    node.until = parse_expr();
    expect_kw("END_REPEAT");
    eat_punct(";");
    return node;
  }

  // --- expressions ----------------------------------------------------------
  //
  // Precedence, loosest to tightest:
  //   OR OR_ELSE | XOR | AND & AND_THEN | comparisons | + - | * / MOD | **
  //   | unary - NOT | postfix call/index/member | primary

  ExprPtr parse_expr() { return parse_or(); }

  ExprPtr mk_binary(BinOp op, ExprPtr lhs, ExprPtr rhs) {
    auto e = std::make_unique<Expr>();
    e->line = lhs->line;
    e->col = lhs->col;
    e->node = BinaryE{op, std::move(lhs), std::move(rhs)};
    return e;
  }

  ExprPtr parse_or() {
    ExprPtr e = parse_xor();
    for (;;) {
      if (eat_kw("OR")) e = mk_binary(BinOp::Or, std::move(e), parse_xor());
      else if (eat_kw("OR_ELSE")) e = mk_binary(BinOp::OrElse, std::move(e), parse_xor());
      else return e;
    }
  }

  ExprPtr parse_xor() {
    ExprPtr e = parse_and();
    while (eat_kw("XOR")) e = mk_binary(BinOp::Xor, std::move(e), parse_and());
    return e;
  }

  ExprPtr parse_and() {
    ExprPtr e = parse_comparison();
    for (;;) {
      if (eat_kw("AND") || eat_op("&"))
        e = mk_binary(BinOp::And, std::move(e), parse_comparison());
      else if (eat_kw("AND_THEN"))
        e = mk_binary(BinOp::AndThen, std::move(e), parse_comparison());
      else
        return e;
    }
  }

  ExprPtr parse_comparison() {
    ExprPtr e = parse_additive();
    for (;;) {
      BinOp op;
      if (at_op("<")) op = BinOp::Lt;
      else if (at_op(">")) op = BinOp::Gt;
      else if (at_op("=")) op = BinOp::Eq;
      else if (at_op("<=")) op = BinOp::Le;
      else if (at_op(">=")) op = BinOp::Ge;
      else if (at_op("<>")) op = BinOp::Ne;
      else return e;
      take();
      e = mk_binary(op, std::move(e), parse_additive());
    }
  }

  ExprPtr parse_additive() {
    ExprPtr e = parse_multiplicative();
    for (;;) {
      if (eat_op("+")) e = mk_binary(BinOp::Add, std::move(e), parse_multiplicative());
      else if (eat_op("-")) e = mk_binary(BinOp::Sub, std::move(e), parse_multiplicative());
      else return e;
    }
  }

  ExprPtr parse_multiplicative() {
    ExprPtr e = parse_power();
    for (;;) {
      if (eat_op("*")) e = mk_binary(BinOp::Mul, std::move(e), parse_power());
      else if (eat_op("/")) e = mk_binary(BinOp::Div, std::move(e), parse_power());
      else if (eat_kw("MOD")) e = mk_binary(BinOp::Mod, std::move(e), parse_power());
      else return e;
    }
  }

  ExprPtr parse_power() {
    ExprPtr e = parse_unary();
    while (eat_op("**")) e = mk_binary(BinOp::Pow, std::move(e), parse_unary());
    return e;
  }

  ExprPtr parse_unary() {
    int line = cur().line, col = cur().column;
    if (eat_op("-")) {
      auto e = std::make_unique<Expr>();
      e->line = line;
      e->col = col;
      e->node = UnaryE{UnOp::Neg, parse_unary()};
      return e;
    }
    if (eat_kw("NOT")) {
      auto e = std::make_unique<Expr>();
      e->line = line;
      e->col = col;
      e->node = UnaryE{UnOp::Not, parse_unary()};
      return e;
    }
    return parse_postfix();
  }

  ExprPtr parse_postfix() {
    ExprPtr e = parse_primary();
    for (;;) {
      if (at_punct("(")) {
        auto call = std::make_unique<Expr>();
        call->line = e->line;
        call->col = e->col;
        CallE node{std::move(e), {}};
        take();
        if (!at_punct(")")) {
          for (;;) {
            node.args.push_back(parse_call_arg());
            if (eat_punct(",")) continue;
            break;
          }
        }
        expect_punct(")");
        call->node = std::move(node);
        e = std::move(call);
      } else if (at_punct("[")) {
        auto ix = std::make_unique<Expr>();
        ix->line = e->line;
        ix->col = e->col;
        IndexE node{std::move(e), {}};
        take();
        for (;;) {
          node.indices.push_back(parse_expr());
          if (eat_punct(",")) continue;
          break;
        }
        expect_punct("]");
        ix->node = std::move(node);
        e = std::move(ix);
      } else if (at_op(".")) {
        take();
        auto mem = std::make_unique<Expr>();
        mem->line = e->line;
        mem->col = e->col;
        mem->node = MemberE{std::move(e), expect_ident()};
        e = std::move(mem);
      } else {
        return e;
      }
    }
  }

  Arg parse_call_arg() {
    if (at(TokKind::Identifier) && peek().kind == TokKind::Op && peek().text == ":=") {
      Arg a;
      a.name = take().text;
      take();  // :=
      a.value = parse_expr();
      return a;
    }
    if (at(TokKind::Identifier) && peek().kind == TokKind::Op && peek().text == "=>")
      fail("':=' (the '=>' output binding is not supported)");
    return {"", parse_expr()};
  }

  ExprPtr parse_primary() {
    auto e = std::make_unique<Expr>();
    e->line = cur().line;
    e->col = cur().column;
    switch (cur().kind) {
      case TokKind::IntLit: {
        std::string digits;
        for (char c : cur().text)
          if (c != '_') digits.push_back(c);
        uint64_t v = 0;
        auto [p, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), v);
        if (ec != std::errc() || p != digits.data() + digits.size())
          fail("a representable integer literal");
        take();
        e->node = IntLitE{v};
        return e;
      }
      case TokKind::FloatLit: {
        std::string digits;
        for (char c : cur().text)
          if (c != '_') digits.push_back(c);
        take();
        e->node = RealLitE{std::strtod(digits.c_str(), nullptr)};
        return e;
      }
      case TokKind::StringLit:
        e->node = StringLitE{cur().text, false};
        take();
        return e;
      case TokKind::WStringLit:
        e->node = StringLitE{cur().text, true};
        take();
        return e;
      case TokKind::TypedLit:
        e->node = TypedLitE{cur().text};
        take();
        return e;
      case TokKind::Identifier:
        e->node = IdentE{cur().text};
        take();
        return e;
      case TokKind::Keyword:
        if (cur().text == "TRUE" || cur().text == "FALSE") {
          e->node = BoolLitE{cur().text == "TRUE"};
          take();
          return e;
        }
        // AND/OR/MOD double as built-in function names; in a position where
        // an expression must start they can only be a call
        if (cur().text == "AND" || cur().text == "OR" || cur().text == "MOD") {
          e->node = IdentE{cur().text};
          take();
          return e;
        }
        fail("an expression");
      case TokKind::Punct:
        if (cur().text == "(") {
          take();
          ExprPtr inner = parse_expr();
          expect_punct(")");
          return inner;  // grouping is not kept as a node
        }
        fail("an expression");
      default:
        fail("an expression");
    }
  }

  std::vector<Token> toks_;
  size_t pos_ = 0;
};

}  // namespace

SourceUnit parse_source(std::string_view source) { return Parser(source).parse_unit(); }

ExprPtr parse_expression(std::string_view source) {
  return Parser(source).parse_single_expression();
}

}  // namespace stref
