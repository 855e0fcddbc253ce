// SPDX-License-Identifier: Apache-2.0
#include "stref/interp.hpp"

#include <set>

#include "stref/builtins.hpp"
#include "stref/ops.hpp"
#include "stref/timecodec.hpp"

namespace stref {

namespace {

constexpr int64_t kMaxArrayElements = 1 << 20;

bool is_zero_literal(const Expr& e) {
  if (const auto* i = std::get_if<IntLitE>(&e.node)) return i->magnitude == 0;
  if (const auto* r = std::get_if<RealLitE>(&e.node)) return r->value == 0.0;
  return false;
}

bool literal_subscripts(const IndexE& ix) {
  for (const auto& e : ix.indices) {
    if (e->is<IntLitE>()) continue;
    if (const auto* u = std::get_if<UnaryE>(&e->node);
        u && u->op == UnOp::Neg && u->operand->is<IntLitE>())
      continue;
    return false;
  }
  return true;
}

bool value_is_int_zero(const Value& v) {
  if (v.is_void()) return false;
  TypeKind k = v.kind();
  if (is_integer(k) || is_bitstring(k)) return v.i() == 0;
  if (is_float(k)) return v.f() == 0.0;
  return false;
}

}  // namespace

// ---------------------------------------------------------------------------
// Type resolution and defaults
// ---------------------------------------------------------------------------

int64_t Evaluator::const_int(const Expr& e, const char* what) {
  Value v = eval(e);
  if (v.is_void() || !(is_integer(v.kind()) || is_bitstring(v.kind())))
    throw Error(ErrKind::SemanticError, std::string(what) + " must be an integer constant",
                e.line, e.col);
  return v.i();
}

TypePtr Evaluator::resolve_type(const TypeExpr& te) {
  switch (te.k) {
    case TypeExpr::K::Elementary:
      return Type::elementary(te.elem);
    case TypeExpr::K::String: {
      int64_t cap = kDefaultStringCapacity;
      if (te.capacity) {
        cap = const_int(*te.capacity, "string capacity");
        if (cap < 1 || cap > 65535)
          throw Error(ErrKind::SemanticError, "string capacity out of range", te.line, te.col);
      }
      return cap == kDefaultStringCapacity ? Type::elementary(te.wide ? TypeKind::WString
                                                                      : TypeKind::String)
                                           : Type::string(cap, te.wide);
    }
    case TypeExpr::K::Array: {
      std::vector<ArrayRange> ranges;
      int64_t total = 1;
      for (const auto& [lo_e, hi_e] : te.ranges) {
        int64_t lo = const_int(*lo_e, "array bound");
        int64_t hi = const_int(*hi_e, "array bound");
        if (lo > hi)
          throw Error(ErrKind::SemanticError, "array range is empty", te.line, te.col);
        ranges.push_back({lo, hi});
        total *= hi - lo + 1;
        if (total > kMaxArrayElements)
          throw Error(ErrKind::SemanticError, "array is too large", te.line, te.col);
      }
      TypePtr elem = resolve_type(*te.element);
      if (!is_elementary(elem->kind))
        throw Error(ErrKind::SemanticError,
                    "arrays of " + type_name(*elem) + " are not supported", te.line, te.col);
      return Type::array(std::move(ranges), std::move(elem));
    }
    case TypeExpr::K::User: {
      if (m_.types.find_enum(te.user_name)) return Type::enumeration(te.user_name);
      if (m_.types.find_struct(te.user_name)) return Type::structure(te.user_name);
      auto git = m_.genv.find(te.user_name);
      if (git != m_.genv.end() && git->second.has_value()) {
        const Value& v = m_.at(*git->second);
        if (const auto* c = std::get_if<CallableV>(&v.payload);
            c && c->k == CallableV::K::FunctionBlockType)
          return Type::callable(TypeKind::FunctionBlock, te.user_name);
      }
      throw Error(ErrKind::SemanticError, "unknown type '" + te.user_name + "'", te.line,
                  te.col);
    }
  }
  throw Error(ErrKind::SemanticError, "bad type expression", te.line, te.col);
}

Value Evaluator::make_default(const TypePtr& t) {
  switch (t->kind) {
    case TypeKind::Struct:
      return instantiate_struct(t->name, nullptr);
    case TypeKind::Array: {
      ArrayV arr;
      int64_t total = 1;
      for (const auto& r : t->ranges) total *= r.extent();
      arr.elems.reserve(static_cast<size_t>(total));
      for (int64_t i = 0; i < total; ++i)
        arr.elems.push_back(m_.alloc_raw(t->element, make_default(t->element)));
      Value v;
      v.type = t;
      v.payload = std::move(arr);
      return v;
    }
    case TypeKind::FunctionBlock: {
      const Value decl_v = m_.lookup(t->name);
      const auto& c = std::get<CallableV>(decl_v.payload);
      Value v;
      v.type = t;
      v.payload = CallableV{CallableV::K::FunctionBlockInstance, t->name, c.decl, {}};
      return v;
    }
    default:
      return default_scalar(*t, m_.types);
  }
}

Value Evaluator::instantiate_struct(const std::string& name, const AggregateE* inits) {
  auto sit = m_.types.structs.find(name);
  if (sit == m_.types.structs.end())
    throw Error(ErrKind::SemanticError, "unknown struct type '" + name + "'");
  StructInfo& info = sit->second;
  StructV inst;
  for (auto& field : info.fields) {
    if (!field.resolved) field.resolved = resolve_type(*field.declared);
    Value v;
    if (field.init) {
      if (const auto* agg = std::get_if<AggregateE>(&field.init->node)) {
        if (field.resolved->kind != TypeKind::Struct)
          throw Error(ErrKind::TypeError, "aggregate initializer for a non-struct field");
        v = instantiate_struct(field.resolved->name, agg);
      } else {
        v = limit_assign(eval(*field.init), field.resolved);
      }
    } else {
      v = make_default(field.resolved);
    }
    inst.fields.emplace_back(field.name, m_.alloc_raw(field.resolved, std::move(v)));
  }
  if (inits) {
    for (const auto& a : inits->fields) {
      const std::pair<std::string, Location>* slot = nullptr;
      for (const auto& f : inst.fields)
        if (f.first == a.name) slot = &f;
      if (!slot)
        throw Error(ErrKind::UnknownField, "struct " + name + " has no field '" + a.name + "'",
                    a.value->line, a.value->col);
      m_.assign(slot->second, eval(*a.value));
      m_.written[slot->second.index] = false;  // still counts as initialization
    }
  }
  Value v;
  v.type = Type::structure(name);
  v.payload = std::move(inst);
  return v;
}

// ---------------------------------------------------------------------------
// Preprocessing
// ---------------------------------------------------------------------------

void Evaluator::preprocess(const SourceUnit& unit) {
  auto fresh_type_name = [&](const std::string& n, int line) {
    if (m_.types.enums.count(n) || m_.types.structs.count(n) ||
        (m_.genv.count(n) && m_.genv[n].has_value()))
      throw Error(ErrKind::RedeclarationError, "name '" + n + "' is already declared", line);
  };

  for (const auto& td : unit.type_decls) {
    if (const auto* e = std::get_if<EnumDecl>(&td)) {
      fresh_type_name(e->name, e->line);
      EnumInfo info;
      info.name = e->name;
      m_.count = 0;
      m_.temp.clear();
      TypePtr et = Type::enumeration(e->name);
      for (const auto& member : e->members) {
        try {
          if (member.value) m_.count = const_int(*member.value, "enum value");
        } catch (Error& err) {
          if (!err.line) err.line = e->line;
          throw;
        }
        Value v;
        v.type = et;
        v.payload = EnumV{member.name, m_.count};
        m_.temp[member.name] = v;
        info.members.push_back(member.name);
        if (!info.ordinal.emplace(member.name, m_.count).second)
          throw Error(ErrKind::RedeclarationError,
                      "duplicate enum member '" + member.name + "'", e->line);
        ++m_.count;
      }
      if (!e->default_member.empty()) {
        if (!info.ordinal.count(e->default_member))
          throw Error(ErrKind::SemanticError,
                      "enum default '" + e->default_member + "' is not a member", e->line);
        info.default_member = e->default_member;
      }
      for (const auto& member : e->members) {
        try {
          m_.bind_genv(member.name, et, m_.temp[member.name], /*constant=*/true);
        } catch (Error& err) {
          if (!err.line) err.line = e->line;
          throw;
        }
      }
      m_.temp.clear();
      m_.types.enums.emplace(e->name, std::move(info));
    } else {
      const auto& s = std::get<StructDecl>(td);
      fresh_type_name(s.name, s.line);
      StructInfo info;
      info.name = s.name;
      for (const auto& entry : s.fields)
        for (const auto& n : entry.names)
          info.fields.push_back({n, &entry.type, entry.init.get(), nullptr});
      m_.types.structs.emplace(s.name, std::move(info));
    }
  }

  for (const auto& pou : unit.pous) {
    if (is_builtin(pou.name))
      throw Error(ErrKind::RedeclarationError,
                  "'" + pou.name + "' would shadow a built-in function", pou.line);
    if (m_.types.enums.count(pou.name) || m_.types.structs.count(pou.name))
      throw Error(ErrKind::RedeclarationError, "name '" + pou.name + "' is already declared",
                  pou.line);
    CallableV c;
    c.pou_name = pou.name;
    c.decl = &pou;
    TypeKind tk;
    switch (pou.kind) {
      case PouKind::Function:
        c.k = CallableV::K::Function;
        tk = TypeKind::Function;
        break;
      case PouKind::FunctionBlock:
        c.k = CallableV::K::FunctionBlockType;
        tk = TypeKind::FunctionBlock;
        break;
      default:
        c.k = CallableV::K::Program;
        tk = TypeKind::Program;
    }
    Value v;
    v.type = Type::callable(tk, pou.name);
    v.payload = std::move(c);
    try {
      m_.bind_genv(pou.name, v.type, std::move(v), /*constant=*/true);
    } catch (Error& err) {
      if (!err.line) err.line = pou.line;
      throw;
    }
  }

  // VAR_GLOBAL sections from every POU, in source order.
  for (const auto& pou : unit.pous) {
    for (const auto& sec : pou.sections) {
      if (sec.kind != SectionKind::VarGlobal) continue;
      for (const auto& entry : sec.entries) {
        try {
          TypePtr t = resolve_type(entry.type);
          for (const auto& id : entry.names) {
            Value init;
            if (entry.init) {
              if (const auto* agg = std::get_if<AggregateE>(&entry.init->node)) {
                if (t->kind != TypeKind::Struct)
                  throw Error(ErrKind::TypeError, "aggregate initializer for a non-struct");
                init = instantiate_struct(t->name, agg);
              } else {
                init = eval_global_init(*entry.init);
              }
            } else {
              init = make_default(t);
            }
            m_.register_global(id, t, std::move(init), sec.constant);
          }
        } catch (Error& err) {
          if (!err.line) err.line = entry.line;
          throw;
        }
      }
    }
  }
}

// Global initializers may reference previously declared globals, which live
// in gvenv rather than the current env.
Value Evaluator::eval_global_init(const Expr& e) {
  Env saved = m_.env;
  for (const auto& [id, loc] : m_.gvenv)
    if (loc.has_value() && !m_.env.count(id)) m_.env[id] = loc;
  Value v;
  try {
    v = eval(e);
  } catch (...) {
    m_.env = std::move(saved);
    throw;
  }
  m_.env = std::move(saved);
  return v;
}

// ---------------------------------------------------------------------------
// Section instantiation and call binding
// ---------------------------------------------------------------------------

void Evaluator::declare_sections(const PouDecl& pou, const BoundArgs* bound) {
  for (const auto& sec : pou.sections) {
    if (sec.kind == SectionKind::VarGlobal) continue;
    for (const auto& entry : sec.entries) {
      try {
        TypePtr t = resolve_type(entry.type);
        for (const auto& id : entry.names) {
          if (sec.kind == SectionKind::VarExternal) {
            auto git = m_.gvenv.find(id);
            if (git == m_.gvenv.end() || !git->second.has_value())
              throw Error(ErrKind::UnboundVariable, "no global named '" + id + "'");
            if (!same_type(*m_.type_of(*git->second), *t))
              throw Error(ErrKind::TypeError, "VAR_EXTERNAL type mismatch for '" + id + "'");
            m_.bind_env(id, *git->second);
            continue;
          }
          if (sec.kind == SectionKind::VarInOut) {
            if (!bound || !bound->in_outs.count(id))
              throw Error(ErrKind::ArityError, "VAR_IN_OUT parameter '" + id + "' not bound");
            m_.bind_env(id, bound->in_outs.at(id));
            continue;
          }
          Value init;
          if (entry.init) {
            if (const auto* agg = std::get_if<AggregateE>(&entry.init->node)) {
              if (t->kind != TypeKind::Struct)
                throw Error(ErrKind::TypeError, "aggregate initializer for a non-struct");
              init = instantiate_struct(t->name, agg);
            } else {
              init = eval(*entry.init);
            }
          } else {
            init = make_default(t);
          }
          Location l = m_.allocate(id, t, std::move(init));
          if (sec.kind == SectionKind::VarInput && bound && bound->inputs.count(id))
            m_.assign(l, bound->inputs.at(id));
          if (sec.constant) m_.set_const_deep(l);
        }
      } catch (Error& err) {
        if (!err.line) err.line = entry.line;
        throw;
      }
    }
  }
}

Evaluator::BoundArgs Evaluator::bind_args(const PouDecl& pou, const std::vector<Arg>& args) {
  struct Param {
    std::string name;
    SectionKind kind;
    const TypeExpr* type;
  };
  std::vector<Param> params;
  for (const auto& sec : pou.sections) {
    if (sec.kind != SectionKind::VarInput && sec.kind != SectionKind::VarInOut) continue;
    for (const auto& entry : sec.entries)
      for (const auto& id : entry.names) params.push_back({id, sec.kind, &entry.type});
  }

  BoundArgs bound;
  size_t positional = 0;
  std::set<std::string> seen;
  for (const auto& a : args) {
    const Param* p;
    if (a.name.empty()) {
      if (positional >= params.size())
        throw Error(ErrKind::ArityError,
                    "too many arguments for '" + pou.name + "'", a.value->line, a.value->col);
      p = &params[positional++];
    } else {
      p = nullptr;
      for (const auto& cand : params)
        if (cand.name == a.name) p = &cand;
      if (!p)
        throw Error(ErrKind::ArityError,
                    "'" + pou.name + "' has no input parameter '" + a.name + "'",
                    a.value->line, a.value->col);
    }
    if (!seen.insert(p->name).second)
      throw Error(ErrKind::ArityError, "parameter '" + p->name + "' bound twice",
                  a.value->line, a.value->col);
    TypePtr pt = resolve_type(*p->type);
    if (p->kind == SectionKind::VarInOut) {
      Location l = find_index(*a.value);
      if (!same_type(*m_.type_of(l), *pt))
        throw Error(ErrKind::TypeError, "VAR_IN_OUT argument type mismatch for '" + p->name +
                                            "'", a.value->line, a.value->col);
      bound.in_outs[p->name] = l;
    } else {
      Value v = eval(*a.value);
      if (v.is_void())
        throw Error(ErrKind::TypeError, "argument has no value", a.value->line, a.value->col);
      if (!assignable(*v.type, *pt, v.from_literal))
        throw Error(ErrKind::TypeError,
                    "argument type " + type_name(*v.type) + " does not match parameter '" +
                        p->name + "' of type " + type_name(*pt),
                    a.value->line, a.value->col);
      bound.inputs[p->name] = limit_assign(v, pt);
    }
  }
  // every VAR_IN_OUT must be bound on each call
  for (const auto& p : params) {
    if (p.kind == SectionKind::VarInOut && !bound.in_outs.count(p.name))
      throw Error(ErrKind::ArityError,
                  "VAR_IN_OUT parameter '" + p.name + "' of '" + pou.name + "' is not bound");
  }
  return bound;
}

// ---------------------------------------------------------------------------
// Calls
// ---------------------------------------------------------------------------

Value Evaluator::call_function(const std::string& name, const std::vector<Arg>& args) {
  auto git = m_.genv.find(name);
  if (git == m_.genv.end() || !git->second.has_value())
    throw Error(ErrKind::UnknownPOU, "no function named '" + name + "'");
  const auto* c = std::get_if<CallableV>(&m_.at(*git->second).payload);
  if (!c || c->k != CallableV::K::Function)
    throw Error(ErrKind::TypeError, "'" + name + "' is not a FUNCTION");
  const PouDecl& pou = *c->decl;

  for (const auto& active : m_.call_stack)
    if (active == name)
      throw Error(ErrKind::RecursionError, "recursive call of '" + name + "'");

  BoundArgs bound = bind_args(pou, args);

  Env caller_env = m_.env;
  m_.push_frame(name);
  m_.allenv = std::move(caller_env);
  m_.env.clear();
  m_.loop_depth = 0;
  m_.call_stack.push_back(name);

  TypePtr ret = resolve_type(*pou.return_type);
  Location result_loc = m_.allocate(name, ret, make_default(ret));
  declare_sections(pou, &bound);
  exec_list(pou.body);

  Value result = m_.at(result_loc);
  if (!m_.written[result_loc.index])
    m_.print_log.push_back("note: FUNCTION " + name + " never assigned its result");
  m_.clearenv(name);
  m_.call_stack.pop_back();
  m_.pop_frame();
  return result;
}

void Evaluator::call_function_block(Location instance, const std::vector<Arg>& args) {
  const auto* c = std::get_if<CallableV>(&m_.at(instance).payload);
  if (!c) throw Error(ErrKind::TypeError, "value is not callable");
  if (c->k == CallableV::K::FunctionBlockType)
    throw Error(ErrKind::NotInstantiated,
                "FUNCTION_BLOCK '" + c->pou_name + "' must be instantiated before it is called");
  if (c->k != CallableV::K::FunctionBlockInstance)
    throw Error(ErrKind::TypeError, "'" + c->pou_name + "' cannot be called here");
  // copy before binding arguments: argument evaluation can grow the store
  // and invalidate the pointer into it
  const PouDecl& pou = *c->decl;
  std::vector<std::pair<std::string, Location>> saved_env = c->saved_env;
  c = nullptr;

  for (const auto& active : m_.call_stack)
    if (active == pou.name)
      throw Error(ErrKind::RecursionError, "recursive call of '" + pou.name + "'");

  BoundArgs bound = bind_args(pou, args);
  bool first_call = saved_env.empty();

  Env caller_env = m_.env;
  m_.push_frame(pou.name);
  m_.allenv = std::move(caller_env);
  m_.env.clear();
  m_.loop_depth = 0;
  m_.call_stack.push_back(pou.name);

  if (first_call) {
    declare_sections(pou, &bound);
  } else {
    for (const auto& [id, loc] : saved_env) m_.env[id] = loc;
    // VAR_IN_OUT rebinds to the caller's locations on every call; supplied
    // inputs overwrite in place; VAR_TEMP re-initializes; everything else
    // keeps its previous value.
    for (const auto& sec : pou.sections) {
      for (const auto& entry : sec.entries) {
        for (const auto& id : entry.names) {
          if (sec.kind == SectionKind::VarInOut) {
            m_.bind_env(id, bound.in_outs.at(id));
          } else if (sec.kind == SectionKind::VarInput && bound.inputs.count(id)) {
            m_.assign(*m_.env_location(id), bound.inputs.at(id));
          } else if (sec.kind == SectionKind::VarTemp) {
            TypePtr t = resolve_type(entry.type);
            Value init = entry.init && !std::get_if<AggregateE>(&entry.init->node)
                             ? eval(*entry.init)
                             : make_default(t);
            m_.assign(*m_.env_location(id), init);
          }
        }
      }
    }
  }

  exec_list(pou.body);

  // Update: record the instance environment for later calls and queries.
  std::vector<std::pair<std::string, Location>> saved;
  for (const auto& [id, loc] : m_.env)
    if (loc.has_value()) saved.emplace_back(id, *loc);
  std::get<CallableV>(m_.at_mut(instance).payload).saved_env = std::move(saved);

  m_.call_stack.pop_back();
  m_.pop_frame();
}

// ---------------------------------------------------------------------------
// Expression evaluation
// ---------------------------------------------------------------------------

Location Evaluator::array_element(Location base, const IndexE& ix) {
  // subscript evaluation can allocate (calls), which may grow the store and
  // invalidate references into it, so evaluate indices before touching the
  // array value
  TypePtr t = m_.type_of(base);
  if (t->kind != TypeKind::Array)
    throw Error(ErrKind::TypeError, "subscript on a non-array value");
  if (ix.indices.size() != t->ranges.size())
    throw Error(ErrKind::IndexOutOfRange,
                "array needs " + std::to_string(t->ranges.size()) + " subscripts, got " +
                    std::to_string(ix.indices.size()));
  bool clamp = quirks_.implicit_index_overflow_ok && !literal_subscripts(ix);
  int64_t off = 0;
  for (size_t d = 0; d < ix.indices.size(); ++d) {
    Value iv = eval(*ix.indices[d]);
    if (iv.is_void() || !(is_integer(iv.kind()) || is_bitstring(iv.kind())))
      throw Error(ErrKind::TypeError, "array subscript must be an integer");
    int64_t i = iv.i();
    const ArrayRange& r = t->ranges[d];
    if (i < r.lo || i > r.hi) {
      if (!clamp)
        throw Error(ErrKind::IndexOutOfRange,
                    "subscript " + std::to_string(i) + " outside [" + std::to_string(r.lo) +
                        ", " + std::to_string(r.hi) + "]");
      i = i < r.lo ? r.lo : r.hi;
    }
    off = off * r.extent() + (i - r.lo);
  }
  const auto* arr = std::get_if<ArrayV>(&m_.at(base).payload);
  if (!arr) throw Error(ErrKind::TypeError, "subscript on a non-array value");
  return arr->elems[static_cast<size_t>(off)];
}

Location Evaluator::find_index(const Expr& lvalue) {
  if (const auto* id = std::get_if<IdentE>(&lvalue.node)) {
    if (auto l = m_.env_location(id->name)) return *l;
    auto git = m_.genv.find(id->name);
    if (git != m_.genv.end() && git->second.has_value()) return *git->second;
    throw Error(ErrKind::UnboundVariable, "variable '" + id->name + "' is not declared",
                lvalue.line, lvalue.col);
  }
  if (const auto* mem = std::get_if<MemberE>(&lvalue.node)) {
    Location base = find_index(*mem->base);
    const Value& v = m_.at(base);
    if (const auto* s = std::get_if<StructV>(&v.payload)) {
      for (const auto& [fname, floc] : s->fields)
        if (fname == mem->field) return floc;
      throw Error(ErrKind::UnknownField,
                  type_name(*v.type) + " has no field '" + mem->field + "'", lvalue.line,
                  lvalue.col);
    }
    if (const auto* c = std::get_if<CallableV>(&v.payload)) {
      if (c->k == CallableV::K::FunctionBlockInstance) {
        for (const auto& [n, l] : c->saved_env)
          if (n == mem->field) return l;
        throw Error(ErrKind::UnboundVariable,
                    "'" + mem->field + "' is not available on this instance (not yet called?)",
                    lvalue.line, lvalue.col);
      }
    }
    throw Error(ErrKind::TypeError, "member access on a non-struct value", lvalue.line,
                lvalue.col);
  }
  if (const auto* ix = std::get_if<IndexE>(&lvalue.node)) {
    Location base = find_index(*ix->base);
    return array_element(base, *ix);
  }
  throw Error(ErrKind::TypeError, "expression is not assignable", lvalue.line, lvalue.col);
}

Value Evaluator::eval_binary(const Expr& e) {
  const auto& n = e.as<BinaryE>();
  if (n.op == BinOp::AndThen || n.op == BinOp::OrElse) {
    Value lhs = eval(*n.lhs);
    if (lhs.is_void() || lhs.kind() != TypeKind::Bool)
      throw Error(ErrKind::TypeError, "AND_THEN/OR_ELSE require BOOL operands", e.line, e.col);
    if (n.op == BinOp::AndThen && !lhs.b()) return make_bool(false);
    if (n.op == BinOp::OrElse && lhs.b()) return make_bool(true);
    return logic(n.op, lhs, eval(*n.rhs));
  }
  Value lhs = eval(*n.lhs);
  Value rhs = eval(*n.rhs);
  if (is_logic(n.op)) return logic(n.op, lhs, rhs);
  if (is_compare(n.op)) return compare(n.op, lhs, rhs);

  // arithmetic, with the mock-engine quirks hooked in
  if (n.op == BinOp::Pow && quirks_.power_unsupported)
    throw Error(ErrKind::SemanticError, "the ** operator is not supported by this engine",
                e.line, e.col);
  if ((n.op == BinOp::Div || n.op == BinOp::Mod) && value_is_int_zero(rhs)) {
    bool explicit_zero = is_zero_literal(*n.rhs);
    if (n.op == BinOp::Mod && quirks_.mod_zero_yields_zero && !lhs.is_void() &&
        (is_integer(lhs.kind()) || is_bitstring(lhs.kind())))
      return make_int(lhs.kind(), 0);
    if (n.op == BinOp::Div && quirks_.implicit_div_zero_ok && !explicit_zero) {
      if (!lhs.is_void() && (is_integer(lhs.kind()) || is_bitstring(lhs.kind())))
        return make_int(lhs.kind(), 0);
      if (!lhs.is_void() && is_float(lhs.kind())) return make_float(lhs.kind(), 0.0);
    }
  }
  Value r = arith(n.op, lhs, rhs);
  if (n.op == BinOp::Mod && quirks_.mod_sign_floored && !r.is_void() &&
      (is_integer(r.kind()) || is_bitstring(r.kind())) && r.i() != 0) {
    bool rneg = r.i() < 0;
    bool bneg = !is_unsigned_int(rhs.kind()) && !is_bitstring(rhs.kind()) && rhs.i() < 0;
    if (rneg != bneg) r = arith(BinOp::Add, r, rhs);
  }
  return r;
}

Value Evaluator::eval_call(const Expr& e) {
  const auto& call = e.as<CallE>();
  if (const auto* id = std::get_if<IdentE>(&call.callee->node)) {
    const std::string& name = id->name;
    // an in-scope FB instance wins over POUs and builtins
    if (auto l = m_.env_location(name)) {
      const auto* c = std::get_if<CallableV>(&m_.at(*l).payload);
      if (!c) {
        // a FUNCTION's own result variable shadows its name inside the body,
        // so a call that lands here is a direct recursion attempt
        for (const auto& active : m_.call_stack)
          if (active == name)
            throw Error(ErrKind::RecursionError, "recursive call of '" + name + "'", e.line,
                        e.col);
        throw Error(ErrKind::TypeError, "'" + name + "' is not callable", e.line, e.col);
      }
      call_function_block(*l, call.args);
      return make_void();
    }
    auto git = m_.genv.find(name);
    if (git != m_.genv.end() && git->second.has_value()) {
      const auto* c = std::get_if<CallableV>(&m_.at(*git->second).payload);
      if (c) {
        switch (c->k) {
          case CallableV::K::Function:
            return call_function(name, call.args);
          case CallableV::K::FunctionBlockType:
            throw Error(ErrKind::NotInstantiated,
                        "FUNCTION_BLOCK '" + name + "' must be instantiated before it is called",
                        e.line, e.col);
          default:
            throw Error(ErrKind::TypeError, "a PROGRAM cannot be called", e.line, e.col);
        }
      }
      throw Error(ErrKind::TypeError, "'" + name + "' is not callable", e.line, e.col);
    }
    if (is_builtin(name)) {
      std::vector<Value> argv;
      argv.reserve(call.args.size());
      for (const auto& a : call.args) {
        if (!a.name.empty())
          throw Error(ErrKind::ArityError, "built-in functions take positional arguments",
                      a.value->line, a.value->col);
        argv.push_back(eval(*a.value));
      }
      return dispatch_builtin(name, argv);
    }
    throw Error(ErrKind::UnknownPOU, "no function or instance named '" + name + "'", e.line,
                e.col);
  }
  if (call.callee->is<MemberE>()) {
    Location l = find_index(*call.callee);
    call_function_block(l, call.args);
    return make_void();
  }
  throw Error(ErrKind::TypeError, "expression is not callable", e.line, e.col);
}

Value Evaluator::eval(const Expr& e) {
  return std::visit(
      [&](const auto& n) -> Value {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, IntLitE>) {
          Value v = n.magnitude <= static_cast<uint64_t>(INT64_MAX)
                        ? make_int(TypeKind::Lint, static_cast<int64_t>(n.magnitude))
                        : make_int(TypeKind::Ulint, static_cast<int64_t>(n.magnitude));
          v.from_literal = true;
          return v;
        } else if constexpr (std::is_same_v<T, RealLitE>) {
          Value v = make_float(TypeKind::Lreal, n.value);
          v.from_literal = true;
          return v;
        } else if constexpr (std::is_same_v<T, BoolLitE>) {
          return make_bool(n.value);
        } else if constexpr (std::is_same_v<T, StringLitE>) {
          int64_t cap = std::max<int64_t>(kDefaultStringCapacity,
                                          static_cast<int64_t>(n.value.size()));
          Value v = make_string(Type::string(cap, n.wide), n.value);
          v.from_literal = true;
          return v;
        } else if constexpr (std::is_same_v<T, TypedLitE>) {
          size_t hash = n.text.find('#');
          std::string prefix = n.text.substr(0, hash);
          if (const EnumInfo* info = m_.types.find_enum(prefix)) {
            std::string member = n.text.substr(hash + 1);
            auto it = info->ordinal.find(member);
            if (it == info->ordinal.end())
              throw Error(ErrKind::LiteralError,
                          "'" + member + "' is not a member of " + prefix, e.line, e.col);
            Value v;
            v.type = Type::enumeration(prefix);
            v.payload = EnumV{member, it->second};
            return v;
          }
          try {
            return parse_typed_literal(n.text);
          } catch (Error& err) {
            if (!err.line) {
              err.line = e.line;
              err.column = e.col;
            }
            throw;
          }
        } else if constexpr (std::is_same_v<T, IdentE>) {
          try {
            return m_.lookup(n.name);
          } catch (Error& err) {
            if (!err.line) {
              err.line = e.line;
              err.column = e.col;
            }
            throw;
          }
        } else if constexpr (std::is_same_v<T, UnaryE>) {
          Value v = eval(*n.operand);
          return n.op == UnOp::Neg ? negate(v) : complement(v);
        } else if constexpr (std::is_same_v<T, BinaryE>) {
          return eval_binary(e);
        } else if constexpr (std::is_same_v<T, CallE>) {
          return eval_call(e);
        } else if constexpr (std::is_same_v<T, MemberE>) {
          return m_.at(find_index(e));
        } else if constexpr (std::is_same_v<T, IndexE>) {
          return m_.at(find_index(e));
        } else {
          throw Error(ErrKind::TypeError, "aggregate is only valid as an initializer", e.line,
                      e.col);
        }
      },
      e.node);
}

// ---------------------------------------------------------------------------
// Statement execution
// ---------------------------------------------------------------------------

namespace {

// Conditions must be BOOL.
bool bool_cond(const Value& v, int line, int col) {
  if (v.is_void() || v.kind() != TypeKind::Bool)
    throw Error(ErrKind::TypeError, "condition must be BOOL", line, col);
  return v.b();
}

}  // namespace

ControlSignal Evaluator::exec_list(const StmtList& body) {
  for (const auto& s : body) {
    ControlSignal sig = exec(*s);
    if (sig != ControlSignal::Normal) return sig;
  }
  return ControlSignal::Normal;
}

ControlSignal Evaluator::exec(const Stmt& s) {
  m_.consume();
  int saved_line = current_line;
  current_line = s.line;
  try {
    ControlSignal sig = std::visit(
        [&](const auto& n) -> ControlSignal {
          using T = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<T, ExprS>) {
            eval(*n.expr);
            return ControlSignal::Normal;
          } else if constexpr (std::is_same_v<T, AssignS>) {
            Location l = find_index(*n.lhs);
            Value v = eval(*n.rhs);
            m_.assign(l, v);
            return ControlSignal::Normal;
          } else if constexpr (std::is_same_v<T, IfS>) {
            if (bool_cond(eval(*n.cond), s.line, s.col)) return exec_list(n.then_body);
            for (const auto& arm : n.elsifs)
              if (bool_cond(eval(*arm.cond), s.line, s.col)) return exec_list(arm.body);
            if (n.else_body) return exec_list(*n.else_body);
            return ControlSignal::Normal;
          } else if constexpr (std::is_same_v<T, CaseS>) {
            Value scrutinee = eval(*n.scrutinee);
            for (const auto& arm : n.arms) {
              for (const auto& label : arm.labels) {
                bool hit;
                if (label.hi) {
                  hit = compare(BinOp::Ge, scrutinee, eval(*label.lo)).b() &&
                        compare(BinOp::Le, scrutinee, eval(*label.hi)).b();
                } else {
                  hit = compare(BinOp::Eq, scrutinee, eval(*label.lo)).b();
                }
                if (hit) return exec_list(arm.body);
              }
            }
            if (n.else_body) return exec_list(*n.else_body);
            return ControlSignal::Normal;
          } else if constexpr (std::is_same_v<T, WhileS>) {
            ++m_.loop_depth;
            ControlSignal out = ControlSignal::Normal;
            for (;;) {
              if (!bool_cond(eval(*n.cond), s.line, s.col)) break;
              ControlSignal sig2 = exec_list(n.body);
              if (sig2 == ControlSignal::Exiting) break;
              if (sig2 == ControlSignal::Returning) {
                out = sig2;
                break;
              }
              m_.consume();  // loop-back edge
            }
            --m_.loop_depth;
            return out;
          } else if constexpr (std::is_same_v<T, ForS>) {
            auto vloc = m_.env_location(n.var);
            if (!vloc)
              throw Error(ErrKind::UnboundVariable,
                          "FOR variable '" + n.var + "' is not declared", s.line, s.col);
            TypeKind vk = m_.type_of(*vloc)->kind;
            if (!is_integer(vk) && !is_bitstring(vk))
              throw Error(ErrKind::TypeError, "FOR variable must have an integer type",
                          s.line, s.col);
            m_.assign(*vloc, eval(*n.from));
            Value to = eval(*n.to);
            Value by = n.by ? eval(*n.by) : [] {
              Value one = make_int(TypeKind::Lint, 1);
              one.from_literal = true;
              return one;
            }();
            if (by.is_void() || !(is_integer(by.kind()) || is_bitstring(by.kind())))
              throw Error(ErrKind::TypeError, "FOR step must be an integer", s.line, s.col);
            if (by.i() == 0)
              throw Error(ErrKind::DomainError, "FOR step must not be zero", s.line, s.col);
            bool up = !(is_signed_int(by.kind()) && by.i() < 0);
            ++m_.loop_depth;
            ControlSignal out = ControlSignal::Normal;
            for (;;) {
              if (!compare(up ? BinOp::Le : BinOp::Ge, m_.at(*vloc), to).b()) break;
              ControlSignal sig2 = exec_list(n.body);
              if (sig2 == ControlSignal::Exiting) break;
              if (sig2 == ControlSignal::Returning) {
                out = sig2;
                break;
              }
              m_.assign(*vloc, arith(BinOp::Add, m_.at(*vloc), by));
              m_.consume();  // loop-back edge
            }
            --m_.loop_depth;
            return out;
          } else if constexpr (std::is_same_v<T, RepeatS>) {
            // body first, then WHILE NOT cond DO body
            ++m_.loop_depth;
            ControlSignal out = ControlSignal::Normal;
            for (;;) {
              ControlSignal sig2 = exec_list(n.body);
              if (sig2 == ControlSignal::Exiting) break;
              if (sig2 == ControlSignal::Returning) {
                out = sig2;
                break;
              }
              if (bool_cond(eval(*n.until), s.line, s.col)) break;
              m_.consume();  // loop-back edge
            }
            --m_.loop_depth;
            return out;
          } else if constexpr (std::is_same_v<T, ReturnS>) {
            return ControlSignal::Returning;
          } else {
            if (m_.loop_depth == 0)
              throw Error(ErrKind::SemanticError, "EXIT outside of a loop", s.line, s.col);
            return ControlSignal::Exiting;
          }
        },
        s.node);
    current_line = saved_line;
    return sig;
  } catch (Error& err) {
    if (!err.line_pinned) {
      err.line = s.line;
      err.line_pinned = true;
    }
    current_line = saved_line;
    throw;
  }
}

// ---------------------------------------------------------------------------
// Top-level runs
// ---------------------------------------------------------------------------

Machine preprocess(const SourceUnit& unit) {
  Machine m;
  Evaluator ev(m);
  ev.preprocess(unit);
  return m;
}

Outcome run(const SourceUnit& unit, const std::string& entry, uint64_t fuel,
            const Quirks& quirks,
            std::optional<std::chrono::steady_clock::time_point> deadline,
            std::deque<Value> inputs) {
  Machine m;
  m.input_queue = std::move(inputs);
  Evaluator ev(m, quirks);
  Outcome out;
  try {
    ev.preprocess(unit);
    auto git = m.genv.find(entry);
    const CallableV* c = nullptr;
    if (git != m.genv.end() && git->second.has_value())
      c = std::get_if<CallableV>(&m.at(*git->second).payload);
    if (!c || c->k != CallableV::K::Program)
      throw Error(ErrKind::EntryNotFound, "no PROGRAM named '" + entry + "'");
    const PouDecl& pou = *c->decl;

    if (quirks.var_prefix_crash && !pou.body.empty()) {
      if (const auto* a = std::get_if<AssignS>(&pou.body.front()->node)) {
        const Expr* base = a->lhs.get();
        while (!base->is<IdentE>()) {
          if (const auto* mem = std::get_if<MemberE>(&base->node)) base = mem->base.get();
          else if (const auto* ix = std::get_if<IndexE>(&base->node)) base = ix->base.get();
          else break;
        }
        if (base->is<IdentE>() && base->as<IdentE>().name.rfind("VAR", 0) == 0)
          throw Error(ErrKind::ParseError,
                      "identifier starting with 'VAR' cannot begin the program",
                      pou.body.front()->line);
      }
    }

    m.entry_name = entry;
    m.fuel = fuel;
    m.deadline = deadline;
    m.call_stack.push_back(entry);

    // entry VAR_INPUTs are fed from the input queue when present
    Evaluator::BoundArgs entry_args;
    for (const auto& sec : pou.sections) {
      if (sec.kind != SectionKind::VarInput) continue;
      for (const auto& entry_decl : sec.entries)
        for (const auto& id : entry_decl.names) {
          if (m.input_queue.empty()) break;
          entry_args.inputs[id] = m.input_queue.front();
          m.input_queue.pop_front();
        }
    }
    ev.declare_sections(pou, &entry_args);
    ev.exec_list(pou.body);

    out.k = Outcome::K::Success;
    out.rows = m.snapshot();
    for (const auto& sec : pou.sections) {
      if (sec.kind != SectionKind::VarOutput) continue;
      for (const auto& entry_decl : sec.entries)
        for (const auto& id : entry_decl.names)
          if (auto l = m.env_location(id)) m.output_log.push_back(m.render_value(m.at(*l)));
    }
  } catch (const Error& e) {
    out.k = Outcome::K::Abnormal;
    out.err = e.kind;
    out.line = e.line;
    out.msg = e.what();
  } catch (const TimeoutSignal&) {
    out.k = Outcome::K::Timeout;
  }
  out.notes = m.print_log;
  return out;
}

}  // namespace stref
