// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace stref {

// ---------------------------------------------------------------------------
// Expressions
// ---------------------------------------------------------------------------

enum class BinOp {
  Add, Sub, Mul, Div, Pow, Mod,
  Lt, Gt, Eq, Le, Ge, Ne,
  And, AndThen, Xor, Or, OrElse,
};

enum class UnOp { Neg, Not };

bool is_arith(BinOp op);
bool is_compare(BinOp op);
bool is_logic(BinOp op);
const char* to_string(BinOp op);

struct Expr;
using ExprPtr = std::unique_ptr<Expr>;

struct Arg {
  std::string name;  // empty for positional
  ExprPtr value;
};

struct IntLitE { uint64_t magnitude = 0; };
struct RealLitE { double value = 0; };
struct BoolLitE { bool value = false; };
struct StringLitE {
  std::string value;
  bool wide = false;
};
struct TypedLitE { std::string text; };  // full source text, e.g. "T#5s"
struct IdentE { std::string name; };
struct UnaryE {
  UnOp op;
  ExprPtr operand;
};
struct BinaryE {
  BinOp op;
  ExprPtr lhs, rhs;
};
struct CallE {
  ExprPtr callee;  // identifier or member path
  std::vector<Arg> args;
};
struct MemberE {
  ExprPtr base;
  std::string field;
};
struct IndexE {
  ExprPtr base;
  std::vector<ExprPtr> indices;  // non-empty
};
// Parenthesized struct initializer `(x := 1, y := 2)`; only valid as a
// declaration initializer.
struct AggregateE { std::vector<Arg> fields; };

struct Expr {
  int line = 0, col = 0;
  std::variant<IntLitE, RealLitE, BoolLitE, StringLitE, TypedLitE, IdentE, UnaryE, BinaryE,
               CallE, MemberE, IndexE, AggregateE>
      node;

  template <class T> bool is() const { return std::holds_alternative<T>(node); }
  template <class T> T& as() { return std::get<T>(node); }
  template <class T> const T& as() const { return std::get<T>(node); }
};

ExprPtr clone(const Expr& e);

// ---------------------------------------------------------------------------
// Type expressions and declarations
// ---------------------------------------------------------------------------

enum class TypeKind : uint8_t {
  Sint, Int, Dint, Lint,
  Usint, Uint, Udint, Ulint,
  Real, Lreal,
  Bool,
  Byte, Word, Dword,
  String, WString,
  Time, Date, Tod, Dt,
  Enum, Struct, Array,
  Function, FunctionBlock, Program,
};

struct TypeExpr {
  enum class K { Elementary, String, Array, User } k = K::Elementary;
  TypeKind elem = TypeKind::Int;                         // Elementary
  bool wide = false;                                     // String: WSTRING
  ExprPtr capacity;                                      // String; null = default
  std::vector<std::pair<ExprPtr, ExprPtr>> ranges;       // Array: lo..hi pairs
  std::unique_ptr<TypeExpr> element;                     // Array
  std::string user_name;                                 // User
  int line = 0, col = 0;
};

TypeExpr clone(const TypeExpr& t);

enum class SectionKind { Var, VarInput, VarOutput, VarInOut, VarTemp, VarGlobal, VarExternal };
const char* to_string(SectionKind k);

struct VarEntry {
  std::vector<std::string> names;  // non-empty
  TypeExpr type;
  ExprPtr init;  // may be null; AggregateE only for struct-typed entries
  int line = 0;
};

struct VarSection {
  SectionKind kind = SectionKind::Var;
  bool constant = false;
  std::vector<VarEntry> entries;
  int line = 0;
};

// ---------------------------------------------------------------------------
// Statements
// ---------------------------------------------------------------------------

struct Stmt;
using StmtPtr = std::unique_ptr<Stmt>;
using StmtList = std::vector<StmtPtr>;

struct ExprS { ExprPtr expr; };
struct AssignS { ExprPtr lhs, rhs; };
struct ElsifArm {
  ExprPtr cond;
  StmtList body;
};
struct IfS {
  ExprPtr cond;
  StmtList then_body;
  std::vector<ElsifArm> elsifs;
  std::optional<StmtList> else_body;
};
struct CaseLabel {
  ExprPtr lo;
  ExprPtr hi;  // null for a single-value label
};
struct CaseArm {
  std::vector<CaseLabel> labels;  // non-empty
  StmtList body;
};
struct CaseS {
  ExprPtr scrutinee;
  std::vector<CaseArm> arms;
  std::optional<StmtList> else_body;
};
struct WhileS {
  ExprPtr cond;
  StmtList body;
};
struct ForS {
  std::string var;
  ExprPtr from, to, by;  // `by` may be null (defaults to 1)
  StmtList body;
};
struct RepeatS {
  StmtList body;
  ExprPtr until;
};
struct ReturnS {};
struct ExitS {};

struct Stmt {
  int line = 0, col = 0;
  std::variant<ExprS, AssignS, IfS, CaseS, WhileS, ForS, RepeatS, ReturnS, ExitS> node;

  template <class T> bool is() const { return std::holds_alternative<T>(node); }
  template <class T> T& as() { return std::get<T>(node); }
  template <class T> const T& as() const { return std::get<T>(node); }
};

StmtPtr clone(const Stmt& s);
StmtList clone(const StmtList& list);

// ---------------------------------------------------------------------------
// Program organization units and the source unit
// ---------------------------------------------------------------------------

enum class PouKind { Function, FunctionBlock, Program };

struct PouDecl {
  PouKind kind = PouKind::Program;
  std::string name;
  std::optional<TypeExpr> return_type;  // Function only
  std::vector<VarSection> sections;
  StmtList body;
  int line = 0;
};

struct EnumMember {
  std::string name;
  ExprPtr value;  // explicit ordinal, may be null
};

struct EnumDecl {
  std::string name;
  std::vector<EnumMember> members;
  std::string default_member;  // empty = first member
  int line = 0;
};

struct StructDecl {
  std::string name;
  std::vector<VarEntry> fields;
  int line = 0;
};

using TypeDecl = std::variant<EnumDecl, StructDecl>;

struct SourceUnit {
  std::vector<TypeDecl> type_decls;
  std::vector<PouDecl> pous;
};

SourceUnit clone(const SourceUnit& u);
VarEntry clone(const VarEntry& e);
VarSection clone(const VarSection& s);
PouDecl clone(const PouDecl& p);

const PouDecl* find_pou(const SourceUnit& u, const std::string& name);

}  // namespace stref
