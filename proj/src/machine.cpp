// SPDX-License-Identifier: Apache-2.0
#include "stref/machine.hpp"

#include <algorithm>

#include "stref/error.hpp"
#include "stref/ops.hpp"

namespace stref {

Location Machine::alloc_raw(TypePtr type, Value v) {
  Location l{next_loc++};
  store.push_back(std::move(v));
  type_map.push_back(std::move(type));
  const_map.push_back(false);
  written.push_back(false);
  return l;
}

Location Machine::allocate(const std::string& id, const TypePtr& type, Value init) {
  auto it = env.find(id);
  if (it != env.end() && it->second.has_value())
    throw Error(ErrKind::RedeclarationError, "variable '" + id + "' is already declared");
  Value stored;
  switch (type->kind) {
    case TypeKind::Struct:
    case TypeKind::Array:
    case TypeKind::Function:
    case TypeKind::FunctionBlock:
    case TypeKind::Program:
      if (!same_type(*init.type, *type))
        throw Error(ErrKind::TypeError, "initializer type mismatch for '" + id + "'");
      stored = std::move(init);
      break;
    default:
      stored = limit_assign(init, type);
  }
  Location l = alloc_raw(type, std::move(stored));
  env[id] = l;
  return l;
}

void Machine::assign(Location l, const Value& v) {
  if (l.index >= store.size())
    throw Error(ErrKind::UnboundVariable, "dangling location");
  if (const_map[l.index])
    throw Error(ErrKind::ConstError, "cannot assign to a constant");
  const TypePtr& t = type_map[l.index];
  switch (t->kind) {
    case TypeKind::Struct: {
      if (v.kind() != TypeKind::Struct || !same_type(*v.type, *t))
        throw Error(ErrKind::TypeError, "cannot assign to struct from " + type_name(*v.type));
      const auto& src = std::get<StructV>(v.payload);
      const auto& dst = std::get<StructV>(store[l.index].payload);
      for (size_t i = 0; i < dst.fields.size(); ++i)
        assign(dst.fields[i].second, store[src.fields[i].second.index]);
      break;
    }
    case TypeKind::Array: {
      Value adapted = limit_assign(v, t);  // validates type and dimensionality
      const auto& src = std::get<ArrayV>(adapted.payload);
      const auto& dst = std::get<ArrayV>(store[l.index].payload);
      for (size_t i = 0; i < dst.elems.size(); ++i)
        assign(dst.elems[i], store[src.elems[i].index]);
      break;
    }
    case TypeKind::Function:
    case TypeKind::FunctionBlock:
    case TypeKind::Program:
      throw Error(ErrKind::TypeError, "callable values cannot be assigned");
    default:
      store[l.index] = limit_assign(v, t);
  }
  written[l.index] = true;
}

Value Machine::lookup(const std::string& id) const {
  auto it = env.find(id);
  if (it != env.end()) {
    if (!it->second.has_value())
      throw Error(ErrKind::UnboundVariable, "variable '" + id + "' is unbound");
    return store[it->second->index];
  }
  auto git = genv.find(id);
  if (git != genv.end() && git->second.has_value()) return store[git->second->index];
  throw Error(ErrKind::UnboundVariable, "variable '" + id + "' is not declared");
}

std::optional<Location> Machine::env_location(const std::string& id) const {
  auto it = env.find(id);
  if (it == env.end() || !it->second.has_value()) return std::nullopt;
  return it->second;
}

void Machine::clearenv(const std::string& id) {
  auto it = env.find(id);
  if (it == env.end() || !it->second.has_value())
    throw Error(ErrKind::UnboundVariable, "variable '" + id + "' is unbound");
  it->second = std::nullopt;
}

Location Machine::register_global(const std::string& id, const TypePtr& type, Value init,
                                  bool constant) {
  auto it = gvenv.find(id);
  if (it != gvenv.end() && it->second.has_value())
    throw Error(ErrKind::RedeclarationError, "global '" + id + "' is already declared");
  Value stored;
  if (type->kind == TypeKind::Struct || type->kind == TypeKind::Array ||
      is_callable(type->kind)) {
    stored = std::move(init);
  } else {
    stored = limit_assign(init, type);
  }
  Location l = alloc_raw(type, std::move(stored));
  gvenv[id] = l;
  gvid.push_back(id);
  if (constant) set_const_deep(l);
  return l;
}

void Machine::bind_env(const std::string& id, Location l) { env[id] = l; }

void Machine::bind_genv(const std::string& id, const TypePtr& type, Value v, bool constant) {
  auto it = genv.find(id);
  if (it != genv.end() && it->second.has_value())
    throw Error(ErrKind::RedeclarationError, "name '" + id + "' is already declared");
  Location l = alloc_raw(type, std::move(v));
  genv[id] = l;
  if (constant) const_map[l.index] = true;
}

void Machine::push_frame(std::string pou_name) {
  Frame f;
  f.saved_env = env;
  f.saved_allenv = allenv;
  f.saved_loop_depth = loop_depth;
  f.pou_name = std::move(pou_name);
  fstack.push_back(std::move(f));
}

Frame Machine::pop_frame() {
  if (fstack.empty()) throw Error(ErrKind::EmptyStack, "pop on an empty function stack");
  Frame f = std::move(fstack.back());
  fstack.pop_back();
  env = f.saved_env;
  allenv = f.saved_allenv;
  loop_depth = f.saved_loop_depth;
  return f;
}

void Machine::set_const_deep(Location l) {
  const_map[l.index] = true;
  const Value& v = store[l.index];
  if (const auto* s = std::get_if<StructV>(&v.payload)) {
    for (const auto& [name, floc] : s->fields) set_const_deep(floc);
  } else if (const auto* a = std::get_if<ArrayV>(&v.payload)) {
    for (Location e : a->elems) set_const_deep(e);
  }
}

std::string Machine::render_value(const Value& v) const {
  if (v.is_void()) return "<void>";
  if (const auto* s = std::get_if<StructV>(&v.payload)) {
    std::string out = "(";
    for (size_t i = 0; i < s->fields.size(); ++i) {
      if (i) out += ", ";
      out += s->fields[i].first + " := " + render_value(store[s->fields[i].second.index]);
    }
    return out + ")";
  }
  if (const auto* a = std::get_if<ArrayV>(&v.payload)) {
    std::string out = "[";
    for (size_t i = 0; i < a->elems.size(); ++i) {
      if (i) out += ", ";
      out += render_value(store[a->elems[i].index]);
    }
    return out + "]";
  }
  return render_scalar(v);
}

void Machine::collect_env(const Env& e, const std::string& prefix,
                          std::vector<SnapshotRow>& rows) const {
  for (const auto& [id, loc] : e) {
    if (!loc.has_value()) continue;
    const Value& v = store[loc->index];
    if (const auto* c = std::get_if<CallableV>(&v.payload)) {
      if (c->k == CallableV::K::FunctionBlockInstance && !c->saved_env.empty()) {
        Env inner;
        for (const auto& [n, l] : c->saved_env) inner[n] = l;
        collect_env(inner, prefix + id + ".", rows);
      }
      continue;
    }
    rows.push_back({prefix + id, type_name(*type_map[loc->index]), render_value(v)});
  }
}

std::vector<SnapshotRow> Machine::snapshot() const {
  std::vector<SnapshotRow> rows;
  collect_env(gvenv, "", rows);
  collect_env(env, entry_name.empty() ? "" : entry_name + ".", rows);
  std::sort(rows.begin(), rows.end(),
            [](const SnapshotRow& a, const SnapshotRow& b) { return a.name < b.name; });
  return rows;
}

std::string render_rows(const std::vector<SnapshotRow>& rows) {
  std::string out;
  for (const auto& r : rows) {
    out += r.name;
    out += " : ";
    out += r.type;
    out += " = ";
    out += r.value;
    out += '\n';
  }
  return out;
}

std::string Machine::snapshot_text() const { return render_rows(snapshot()); }

void Machine::consume(uint64_t n) {
  if (fuel < n) throw TimeoutSignal{};
  fuel -= n;
  if (deadline && (++tick_ & 0x1fff) == 0) {
    if (std::chrono::steady_clock::now() >= *deadline) throw TimeoutSignal{};
  }
}

}  // namespace stref
