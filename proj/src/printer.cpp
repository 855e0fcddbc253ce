// SPDX-License-Identifier: Apache-2.0
#include "stref/printer.hpp"

#include <charconv>

namespace stref {

namespace {

int level_of(BinOp op) {
  switch (op) {
    case BinOp::Or: case BinOp::OrElse: return 0;
    case BinOp::Xor: return 1;
    case BinOp::And: case BinOp::AndThen: return 2;
    case BinOp::Lt: case BinOp::Gt: case BinOp::Eq:
    case BinOp::Le: case BinOp::Ge: case BinOp::Ne: return 3;
    case BinOp::Add: case BinOp::Sub: return 4;
    case BinOp::Mul: case BinOp::Div: case BinOp::Mod: return 5;
    case BinOp::Pow: return 6;
  }
  return 0;
}

constexpr int kUnaryLevel = 7;
constexpr int kPrimaryLevel = 8;

std::string render_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  std::string s(buf, res.ptr);
  if (s.find('.') == std::string::npos && s.find('e') == std::string::npos &&
      s.find("inf") == std::string::npos && s.find("nan") == std::string::npos)
    s += ".0";
  return s;
}

std::string escape_string(const std::string& v, bool wide) {
  char quote = wide ? '"' : '\'';
  std::string out(1, quote);
  for (unsigned char c : v) {
    if (c == static_cast<unsigned char>(quote)) {
      out += '$';
      out += quote;
    } else if (c == '$') {
      out += "$$";
    } else if (c == '\n') {
      out += "$N";
    } else if (c == '\t') {
      out += "$T";
    } else if (c == '\r') {
      out += "$R";
    } else if (c < 0x20 || c >= 0x7f) {
      static const char* hex = "0123456789ABCDEF";
      out += '$';
      out += hex[c >> 4];
      out += hex[c & 0xf];
    } else {
      out += static_cast<char>(c);
    }
  }
  out += quote;
  return out;
}

class Printer {
public:
  std::string expr(const Expr& e, int min_level) {
    return std::visit(
        [&](const auto& n) -> std::string {
          using T = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<T, IntLitE>) {
            return std::to_string(n.magnitude);
          } else if constexpr (std::is_same_v<T, RealLitE>) {
            return render_double(n.value);
          } else if constexpr (std::is_same_v<T, BoolLitE>) {
            return n.value ? "TRUE" : "FALSE";
          } else if constexpr (std::is_same_v<T, StringLitE>) {
            return escape_string(n.value, n.wide);
          } else if constexpr (std::is_same_v<T, TypedLitE>) {
            return n.text;
          } else if constexpr (std::is_same_v<T, IdentE>) {
            return n.name;
          } else if constexpr (std::is_same_v<T, UnaryE>) {
            std::string inner = expr(*n.operand, kPrimaryLevel);
            std::string s = n.op == UnOp::Neg ? "-" + inner : "NOT " + inner;
            return min_level > kUnaryLevel ? "(" + s + ")" : s;
          } else if constexpr (std::is_same_v<T, BinaryE>) {
            int lv = level_of(n.op);
            std::string s = expr(*n.lhs, lv) + " " + to_string(n.op) + " " +
                            expr(*n.rhs, lv + 1);
            return min_level > lv ? "(" + s + ")" : s;
          } else if constexpr (std::is_same_v<T, CallE>) {
            std::string s = expr(*n.callee, kPrimaryLevel) + "(";
            for (size_t i = 0; i < n.args.size(); ++i) {
              if (i) s += ", ";
              if (!n.args[i].name.empty()) s += n.args[i].name + " := ";
              s += expr(*n.args[i].value, 0);
            }
            return s + ")";
          } else if constexpr (std::is_same_v<T, MemberE>) {
            return expr(*n.base, kPrimaryLevel) + "." + n.field;
          } else if constexpr (std::is_same_v<T, IndexE>) {
            std::string s = expr(*n.base, kPrimaryLevel) + "[";
            for (size_t i = 0; i < n.indices.size(); ++i) {
              if (i) s += ", ";
              s += expr(*n.indices[i], 0);
            }
            return s + "]";
          } else if constexpr (std::is_same_v<T, AggregateE>) {
            std::string s = "(";
            for (size_t i = 0; i < n.fields.size(); ++i) {
              if (i) s += ", ";
              s += n.fields[i].name + " := " + expr(*n.fields[i].value, 0);
            }
            return s + ")";
          }
        },
        e.node);
  }

  std::string type(const TypeExpr& t) {
    switch (t.k) {
      case TypeExpr::K::Elementary:
        return elementary_name(t.elem);
      case TypeExpr::K::String: {
        std::string s = t.wide ? "WSTRING" : "STRING";
        if (t.capacity) s += "[" + expr(*t.capacity, 0) + "]";
        return s;
      }
      case TypeExpr::K::Array: {
        std::string s = "ARRAY [";
        for (size_t i = 0; i < t.ranges.size(); ++i) {
          if (i) s += ", ";
          s += expr(*t.ranges[i].first, 0) + " .. " + expr(*t.ranges[i].second, 0);
        }
        return s + "] OF " + type(*t.element);
      }
      case TypeExpr::K::User:
        return t.user_name;
    }
    return "";
  }

  static std::string elementary_name(TypeKind k) {
    switch (k) {
      case TypeKind::Sint: return "SINT";
      case TypeKind::Int: return "INT";
      case TypeKind::Dint: return "DINT";
      case TypeKind::Lint: return "LINT";
      case TypeKind::Usint: return "USINT";
      case TypeKind::Uint: return "UINT";
      case TypeKind::Udint: return "UDINT";
      case TypeKind::Ulint: return "ULINT";
      case TypeKind::Real: return "REAL";
      case TypeKind::Lreal: return "LREAL";
      case TypeKind::Bool: return "BOOL";
      case TypeKind::Byte: return "BYTE";
      case TypeKind::Word: return "WORD";
      case TypeKind::Dword: return "DWORD";
      case TypeKind::String: return "STRING";
      case TypeKind::WString: return "WSTRING";
      case TypeKind::Time: return "TIME";
      case TypeKind::Date: return "DATE";
      case TypeKind::Tod: return "TIME_OF_DAY";
      case TypeKind::Dt: return "DATE_AND_TIME";
      default: return "?";
    }
  }

  void line(int indent, const std::string& text) {
    out_.append(static_cast<size_t>(indent) * 2, ' ');
    out_ += text;
    out_ += '\n';
  }

  void stmts(const StmtList& list, int indent) {
    for (const auto& s : list) stmt(*s, indent);
  }

  void stmt(const Stmt& s, int indent) {
    std::visit(
        [&](const auto& n) {
          using T = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<T, ExprS>) {
            line(indent, expr(*n.expr, 0) + ";");
          } else if constexpr (std::is_same_v<T, AssignS>) {
            line(indent, expr(*n.lhs, 0) + " := " + expr(*n.rhs, 0) + ";");
          } else if constexpr (std::is_same_v<T, IfS>) {
            line(indent, "IF " + expr(*n.cond, 0) + " THEN");
            stmts(n.then_body, indent + 1);
            for (const auto& arm : n.elsifs) {
              line(indent, "ELSIF " + expr(*arm.cond, 0) + " THEN");
              stmts(arm.body, indent + 1);
            }
            if (n.else_body) {
              line(indent, "ELSE");
              stmts(*n.else_body, indent + 1);
            }
            line(indent, "END_IF;");
          } else if constexpr (std::is_same_v<T, CaseS>) {
            line(indent, "CASE " + expr(*n.scrutinee, 0) + " OF");
            for (const auto& arm : n.arms) {
              std::string labels;
              for (size_t i = 0; i < arm.labels.size(); ++i) {
                if (i) labels += ", ";
                labels += expr(*arm.labels[i].lo, 0);
                if (arm.labels[i].hi) labels += " .. " + expr(*arm.labels[i].hi, 0);
              }
              line(indent + 1, labels + " :");
              stmts(arm.body, indent + 2);
            }
            if (n.else_body) {
              line(indent + 1, "ELSE");
              stmts(*n.else_body, indent + 2);
            }
            line(indent, "END_CASE;");
          } else if constexpr (std::is_same_v<T, WhileS>) {
            line(indent, "WHILE " + expr(*n.cond, 0) + " DO");
            stmts(n.body, indent + 1);
            line(indent, "END_WHILE;");
          } else if constexpr (std::is_same_v<T, ForS>) {
            std::string head = "FOR " + n.var + " := " + expr(*n.from, 0) + " TO " +
                               expr(*n.to, 0);
            if (n.by) head += " BY " + expr(*n.by, 0);
            line(indent, head + " DO");
            stmts(n.body, indent + 1);
            line(indent, "END_FOR;");
          } else if constexpr (std::is_same_v<T, RepeatS>) {
            line(indent, "REPEAT");
            stmts(n.body, indent + 1);
            line(indent, "UNTIL " + expr(*n.until, 0));
            line(indent, "END_REPEAT;");
          } else if constexpr (std::is_same_v<T, ReturnS>) {
            line(indent, "RETURN;");
          } else {
            line(indent, "EXIT;");
          }
        },
        s.node);
  }

  void var_entry(const VarEntry& e, int indent) {
    std::string s;
    for (size_t i = 0; i < e.names.size(); ++i) {
      if (i) s += ", ";
      s += e.names[i];
    }
    s += " : " + type(e.type);
    if (e.init) s += " := " + expr(*e.init, 0);
    line(indent, s + ";");
  }

  void section(const VarSection& sec) {
    std::string head = to_string(sec.kind);
    if (sec.constant) head += " CONSTANT";
    line(0, head);
    for (const auto& e : sec.entries) var_entry(e, 1);
    line(0, "END_VAR");
  }

  void pou(const PouDecl& p) {
    switch (p.kind) {
      case PouKind::Function:
        line(0, "FUNCTION " + p.name + " : " + type(*p.return_type));
        break;
      case PouKind::FunctionBlock:
        line(0, "FUNCTION_BLOCK " + p.name);
        break;
      case PouKind::Program:
        line(0, "PROGRAM " + p.name);
        break;
    }
    for (const auto& s : p.sections) section(s);
    stmts(p.body, 1);
    switch (p.kind) {
      case PouKind::Function: line(0, "END_FUNCTION"); break;
      case PouKind::FunctionBlock: line(0, "END_FUNCTION_BLOCK"); break;
      case PouKind::Program: line(0, "END_PROGRAM"); break;
    }
  }

  void unit(const SourceUnit& u) {
    for (const auto& td : u.type_decls) {
      line(0, "TYPE");
      if (const auto* e = std::get_if<EnumDecl>(&td)) {
        std::string s = e->name + " : (";
        for (size_t i = 0; i < e->members.size(); ++i) {
          if (i) s += ", ";
          s += e->members[i].name;
          if (e->members[i].value) s += " := " + expr(*e->members[i].value, 0);
        }
        s += ")";
        if (!e->default_member.empty()) s += " := " + e->default_member;
        line(1, s + ";");
      } else {
        const auto& st = std::get<StructDecl>(td);
        line(1, st.name + " : STRUCT");
        for (const auto& f : st.fields) var_entry(f, 2);
        line(1, "END_STRUCT");
      }
      line(0, "END_TYPE");
      out_ += '\n';
    }
    for (size_t i = 0; i < u.pous.size(); ++i) {
      if (i) out_ += '\n';
      pou(u.pous[i]);
    }
  }

  std::string out_;
};

}  // namespace

std::string pretty_print(const SourceUnit& unit) {
  Printer p;
  p.unit(unit);
  return p.out_;
}

std::string pretty_print(const Expr& e) {
  Printer p;
  return p.expr(e, 0);
}

std::string pretty_print(const Stmt& s, int indent) {
  Printer p;
  p.stmt(s, indent);
  return p.out_;
}

std::string pretty_print(const TypeExpr& t) {
  Printer p;
  return p.type(t);
}

bool ast_equal(const SourceUnit& a, const SourceUnit& b) {
  return pretty_print(a) == pretty_print(b);
}

}  // namespace stref
