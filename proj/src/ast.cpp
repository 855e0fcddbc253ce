// SPDX-License-Identifier: Apache-2.0
#include "stref/ast.hpp"

namespace stref {

bool is_arith(BinOp op) {
  switch (op) {
    case BinOp::Add: case BinOp::Sub: case BinOp::Mul:
    case BinOp::Div: case BinOp::Pow: case BinOp::Mod:
      return true;
    default:
      return false;
  }
}

bool is_compare(BinOp op) {
  switch (op) {
    case BinOp::Lt: case BinOp::Gt: case BinOp::Eq:
    case BinOp::Le: case BinOp::Ge: case BinOp::Ne:
      return true;
    default:
      return false;
  }
}

bool is_logic(BinOp op) {
  switch (op) {
    case BinOp::And: case BinOp::AndThen: case BinOp::Xor:
    case BinOp::Or: case BinOp::OrElse:
      return true;
    default:
      return false;
  }
}

const char* to_string(BinOp op) {
  switch (op) {
    case BinOp::Add: return "+";
    case BinOp::Sub: return "-";
    case BinOp::Mul: return "*";
    case BinOp::Div: return "/";
    case BinOp::Pow: return "**";
    case BinOp::Mod: return "MOD";
    case BinOp::Lt: return "<";
    case BinOp::Gt: return ">";
    case BinOp::Eq: return "=";
    case BinOp::Le: return "<=";
    case BinOp::Ge: return ">=";
    case BinOp::Ne: return "<>";
    case BinOp::And: return "AND";
    case BinOp::AndThen: return "AND_THEN";
    case BinOp::Xor: return "XOR";
    case BinOp::Or: return "OR";
    case BinOp::OrElse: return "OR_ELSE";
  }
  return "?";
}

const char* to_string(SectionKind k) {
  switch (k) {
    case SectionKind::Var: return "VAR";
    case SectionKind::VarInput: return "VAR_INPUT";
    case SectionKind::VarOutput: return "VAR_OUTPUT";
    case SectionKind::VarInOut: return "VAR_IN_OUT";
    case SectionKind::VarTemp: return "VAR_TEMP";
    case SectionKind::VarGlobal: return "VAR_GLOBAL";
    case SectionKind::VarExternal: return "VAR_EXTERNAL";
  }
  return "VAR";
}

namespace {

std::vector<Arg> clone_args(const std::vector<Arg>& args) {
  std::vector<Arg> out;
  out.reserve(args.size());
  for (const auto& a : args) out.push_back({a.name, clone(*a.value)});
  return out;
}

}  // namespace

ExprPtr clone(const Expr& e) {
  auto out = std::make_unique<Expr>();
  out->line = e.line;
  out->col = e.col;
  std::visit(
      [&](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, UnaryE>) {
          out->node = UnaryE{n.op, clone(*n.operand)};
        } else if constexpr (std::is_same_v<T, BinaryE>) {
          out->node = BinaryE{n.op, clone(*n.lhs), clone(*n.rhs)};
        } else if constexpr (std::is_same_v<T, CallE>) {
          out->node = CallE{clone(*n.callee), clone_args(n.args)};
        } else if constexpr (std::is_same_v<T, MemberE>) {
          out->node = MemberE{clone(*n.base), n.field};
        } else if constexpr (std::is_same_v<T, IndexE>) {
          IndexE ix{clone(*n.base), {}};
          for (const auto& i : n.indices) ix.indices.push_back(clone(*i));
          out->node = std::move(ix);
        } else if constexpr (std::is_same_v<T, AggregateE>) {
          out->node = AggregateE{clone_args(n.fields)};
        } else {
          out->node = n;  // leaf payloads copy
        }
      },
      e.node);
  return out;
}

TypeExpr clone(const TypeExpr& t) {
  TypeExpr out;
  out.k = t.k;
  out.elem = t.elem;
  out.wide = t.wide;
  out.user_name = t.user_name;
  out.line = t.line;
  out.col = t.col;
  if (t.capacity) out.capacity = clone(*t.capacity);
  for (const auto& [lo, hi] : t.ranges) out.ranges.emplace_back(clone(*lo), clone(*hi));
  if (t.element) out.element = std::make_unique<TypeExpr>(clone(*t.element));
  return out;
}

VarEntry clone(const VarEntry& e) {
  VarEntry out;
  out.names = e.names;
  out.type = clone(e.type);
  if (e.init) out.init = clone(*e.init);
  out.line = e.line;
  return out;
}

VarSection clone(const VarSection& s) {
  VarSection out;
  out.kind = s.kind;
  out.constant = s.constant;
  out.line = s.line;
  for (const auto& e : s.entries) out.entries.push_back(clone(e));
  return out;
}

StmtList clone(const StmtList& list) {
  StmtList out;
  out.reserve(list.size());
  for (const auto& s : list) out.push_back(clone(*s));
  return out;
}

StmtPtr clone(const Stmt& s) {
  auto out = std::make_unique<Stmt>();
  out->line = s.line;
  out->col = s.col;
  std::visit(
      [&](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, ExprS>) {
          out->node = ExprS{clone(*n.expr)};
        } else if constexpr (std::is_same_v<T, AssignS>) {
          out->node = AssignS{clone(*n.lhs), clone(*n.rhs)};
        } else if constexpr (std::is_same_v<T, IfS>) {
          IfS c{clone(*n.cond), clone(n.then_body), {}, std::nullopt};
          for (const auto& a : n.elsifs) c.elsifs.push_back({clone(*a.cond), clone(a.body)});
          if (n.else_body) c.else_body = clone(*n.else_body);
          out->node = std::move(c);
        } else if constexpr (std::is_same_v<T, CaseS>) {
          CaseS c{clone(*n.scrutinee), {}, std::nullopt};
          for (const auto& arm : n.arms) {
            CaseArm a;
            for (const auto& l : arm.labels)
              a.labels.push_back({clone(*l.lo), l.hi ? clone(*l.hi) : nullptr});
            a.body = clone(arm.body);
            c.arms.push_back(std::move(a));
          }
          if (n.else_body) c.else_body = clone(*n.else_body);
          out->node = std::move(c);
        } else if constexpr (std::is_same_v<T, WhileS>) {
          out->node = WhileS{clone(*n.cond), clone(n.body)};
        } else if constexpr (std::is_same_v<T, ForS>) {
          out->node = ForS{n.var, clone(*n.from), clone(*n.to), n.by ? clone(*n.by) : nullptr,
                           clone(n.body)};
        } else if constexpr (std::is_same_v<T, RepeatS>) {
          out->node = RepeatS{clone(n.body), clone(*n.until)};
        } else {
          out->node = n;  // ReturnS / ExitS
        }
      },
      s.node);
  return out;
}

PouDecl clone(const PouDecl& p) {
  PouDecl out;
  out.kind = p.kind;
  out.name = p.name;
  if (p.return_type) out.return_type = clone(*p.return_type);
  for (const auto& s : p.sections) out.sections.push_back(clone(s));
  out.body = clone(p.body);
  out.line = p.line;
  return out;
}

SourceUnit clone(const SourceUnit& u) {
  SourceUnit out;
  for (const auto& td : u.type_decls) {
    if (const auto* e = std::get_if<EnumDecl>(&td)) {
      EnumDecl d;
      d.name = e->name;
      d.default_member = e->default_member;
      d.line = e->line;
      for (const auto& m : e->members)
        d.members.push_back({m.name, m.value ? clone(*m.value) : nullptr});
      out.type_decls.emplace_back(std::move(d));
    } else {
      const auto& s = std::get<StructDecl>(td);
      StructDecl d;
      d.name = s.name;
      d.line = s.line;
      for (const auto& f : s.fields) d.fields.push_back(clone(f));
      out.type_decls.emplace_back(std::move(d));
    }
  }
  for (const auto& p : u.pous) out.pous.push_back(clone(p));
  return out;
}

const PouDecl* find_pou(const SourceUnit& u, const std::string& name) {
  for (const auto& p : u.pous)
    if (p.name == name) return &p;
  return nullptr;
}

}  // namespace stref
