// SPDX-License-Identifier: Apache-2.0
#include "stref/mutate.hpp"

#include <functional>

#include "stref/error.hpp"
#include "stref/timecodec.hpp"
#include "stref/value.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace stref {

const char* to_string(MutationOperator op) {
  switch (op) {
    case MutationOperator::VariableRandomAssignment: return "VariableRandomAssignment";
    case MutationOperator::ScalarVariableReplacement: return "ScalarVariableReplacement";
    case MutationOperator::ArithmeticOperatorReplacement: return "ArithmeticOperatorReplacement";
    case MutationOperator::ArithmeticOperatorInsertion: return "ArithmeticOperatorInsertion";
    case MutationOperator::ArithmeticOperatorDeletion: return "ArithmeticOperatorDeletion";
    case MutationOperator::RelationalOperatorReplacement: return "RelationalOperatorReplacement";
    case MutationOperator::LogicalConnectorReplacement: return "LogicalConnectorReplacement";
    case MutationOperator::LogicalConnectorInsertion: return "LogicalConnectorInsertion";
    case MutationOperator::LogicalConnectorDeletion: return "LogicalConnectorDeletion";
    case MutationOperator::NotMutation: return "NotMutation";
    case MutationOperator::StatementInsertion: return "StatementInsertion";
    case MutationOperator::StatementDeletion: return "StatementDeletion";
  }
  return "?";
}

const std::vector<MutationOperator>& all_mutation_operators() {
  static const std::vector<MutationOperator> ops = {
      MutationOperator::VariableRandomAssignment,
      MutationOperator::ScalarVariableReplacement,
      MutationOperator::ArithmeticOperatorReplacement,
      MutationOperator::ArithmeticOperatorInsertion,
      MutationOperator::ArithmeticOperatorDeletion,
      MutationOperator::RelationalOperatorReplacement,
      MutationOperator::LogicalConnectorReplacement,
      MutationOperator::LogicalConnectorInsertion,
      MutationOperator::LogicalConnectorDeletion,
      MutationOperator::NotMutation,
      MutationOperator::StatementInsertion,
      MutationOperator::StatementDeletion,
  };
  return ops;
}

uint64_t MutationPlan::expected_mutants(uint64_t seeds, int rounds, int per_seed) {
  uint64_t total = 0, layer = seeds;
  for (int r = 1; r <= rounds; ++r) {
    layer *= static_cast<uint64_t>(per_seed);
    total += layer;
  }
  return total;
}

namespace {

ExprPtr mk_int_literal(int64_t v) {
  auto e = std::make_unique<Expr>();
  if (v < 0) {
    auto inner = std::make_unique<Expr>();
    inner->node = IntLitE{static_cast<uint64_t>(-(v + 1)) + 1};
    e->node = UnaryE{UnOp::Neg, std::move(inner)};
  } else {
    e->node = IntLitE{static_cast<uint64_t>(v)};
  }
  return e;
}

ExprPtr mk_ident(std::string name) {
  auto e = std::make_unique<Expr>();
  e->node = IdentE{std::move(name)};
  return e;
}

ExprPtr mk_typed(std::string text) {
  auto e = std::make_unique<Expr>();
  e->node = TypedLitE{std::move(text)};
  return e;
}

// Uniform literal for an elementary kind, per the campaign's drawing rules
// (full integer ranges, one-day/one-year time windows, short alnum strings).
ExprPtr random_literal(TypeKind k, Rng& rng) {
  if (is_integer(k) || is_bitstring(k)) {
    int bits = width_bits(k);
    if (is_signed_int(k)) {
      int64_t lo, hi;
      int_range(k, lo, hi);
      return mk_int_literal(rng.range(lo, hi));
    }
    uint64_t mask = bits == 64 ? UINT64_MAX : ((uint64_t{1} << bits) - 1);
    uint64_t v = rng.next() & mask;
    auto e = std::make_unique<Expr>();
    e->node = IntLitE{v};
    return e;
  }
  switch (k) {
    case TypeKind::Real:
    case TypeKind::Lreal: {
      auto e = std::make_unique<Expr>();
      double v = static_cast<double>(rng.range(0, 100000000)) / 100.0;
      e->node = RealLitE{v};
      if (rng.coin()) {
        auto neg = std::make_unique<Expr>();
        neg->node = UnaryE{UnOp::Neg, std::move(e)};
        return neg;
      }
      return e;
    }
    case TypeKind::Bool: {
      auto e = std::make_unique<Expr>();
      e->node = BoolLitE{rng.coin()};
      return e;
    }
    case TypeKind::String:
    case TypeKind::WString: {
      static const char alnum[] =
          "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789";
      std::string s;
      uint64_t len = rng.below(9);
      for (uint64_t i = 0; i < len; ++i) s += alnum[rng.below(sizeof alnum - 1)];
      auto e = std::make_unique<Expr>();
      e->node = StringLitE{std::move(s), k == TypeKind::WString};
      return e;
    }
    case TypeKind::Time:
      return mk_typed(render_duration(rng.range(0, kMsPerDay - 1)));
    case TypeKind::Tod:
      return mk_typed(render_tod(rng.range(0, kMsPerDay - 1)));
    case TypeKind::Date:
      return mk_typed(render_date(rng.range(0, 364)));
    case TypeKind::Dt:
      return mk_typed(render_dt(rng.range(0, 365 * kMsPerDay - 1)));
    default:
      return mk_int_literal(0);
  }
}

bool entry_is_elementary(const VarEntry& e) {
  return e.type.k == TypeExpr::K::Elementary || e.type.k == TypeExpr::K::String;
}

TypeKind entry_kind(const VarEntry& e) {
  if (e.type.k == TypeExpr::K::String)
    return e.type.wide ? TypeKind::WString : TypeKind::String;
  return e.type.elem;
}

// Replacement pools group kinds into families so swaps stay plausible.
enum class Family { Int, Float, Bool, String, WString, Time, Date, Tod, Dt, Other };

Family family_of(TypeKind k) {
  if (is_integer(k) || is_bitstring(k)) return Family::Int;
  if (is_float(k)) return Family::Float;
  switch (k) {
    case TypeKind::Bool: return Family::Bool;
    case TypeKind::String: return Family::String;
    case TypeKind::WString: return Family::WString;
    case TypeKind::Time: return Family::Time;
    case TypeKind::Date: return Family::Date;
    case TypeKind::Tod: return Family::Tod;
    case TypeKind::Dt: return Family::Dt;
    default: return Family::Other;
  }
}

struct Scope {
  std::map<std::string, TypeKind> vars;  // elementary-typed names only

  std::vector<std::string> pool(Family fam, const std::string& exclude = "") const {
    std::vector<std::string> out;
    for (const auto& [n, k] : vars)
      if (family_of(k) == fam && n != exclude) out.push_back(n);
    return out;
  }
};

Scope scope_of(const PouDecl& pou) {
  Scope s;
  for (const auto& sec : pou.sections)
    for (const auto& e : sec.entries)
      if (entry_is_elementary(e))
        for (const auto& n : e.names) s.vars.emplace(n, entry_kind(e));
  return s;
}

Family infer_family(const Expr& e, const Scope& scope) {
  if (e.is<IntLitE>()) return Family::Int;
  if (e.is<RealLitE>()) return Family::Float;
  if (e.is<BoolLitE>()) return Family::Bool;
  if (const auto* s = std::get_if<StringLitE>(&e.node))
    return s->wide ? Family::WString : Family::String;
  if (const auto* id = std::get_if<IdentE>(&e.node)) {
    auto it = scope.vars.find(id->name);
    return it == scope.vars.end() ? Family::Other : family_of(it->second);
  }
  if (const auto* u = std::get_if<UnaryE>(&e.node))
    return u->op == UnOp::Not ? Family::Bool : infer_family(*u->operand, scope);
  if (const auto* b = std::get_if<BinaryE>(&e.node)) {
    if (is_compare(b->op) || is_logic(b->op)) return Family::Bool;
    return infer_family(*b->lhs, scope);
  }
  return Family::Other;
}

// in-scope variable of the family, or a fresh literal
ExprPtr operand_for(Family fam, const Scope& scope, Rng& rng) {
  auto pool = scope.pool(fam);
  if (!pool.empty() && rng.coin()) return mk_ident(pool[rng.below(pool.size())]);
  TypeKind k;
  switch (fam) {
    case Family::Float: k = TypeKind::Lreal; break;
    case Family::Bool: k = TypeKind::Bool; break;
    case Family::String: k = TypeKind::String; break;
    case Family::WString: k = TypeKind::WString; break;
    case Family::Time: k = TypeKind::Time; break;
    case Family::Date: k = TypeKind::Date; break;
    case Family::Tod: k = TypeKind::Tod; break;
    case Family::Dt: k = TypeKind::Dt; break;
    default: k = TypeKind::Int;
  }
  return random_literal(k, rng);
}

// --- site collection ---------------------------------------------------------

// Walks every rvalue expression (assignment left sides contribute only their
// subscripts, so identifier targets stay intact).
void walk_rvalues(Expr& e, const std::function<void(Expr&)>& f);

void walk_children(Expr& e, const std::function<void(Expr&)>& f) {
  std::visit(
      [&](auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, UnaryE>) {
          walk_rvalues(*n.operand, f);
        } else if constexpr (std::is_same_v<T, BinaryE>) {
          walk_rvalues(*n.lhs, f);
          walk_rvalues(*n.rhs, f);
        } else if constexpr (std::is_same_v<T, CallE>) {
          for (auto& a : n.args) walk_rvalues(*a.value, f);
        } else if constexpr (std::is_same_v<T, MemberE>) {
          walk_rvalues(*n.base, f);
        } else if constexpr (std::is_same_v<T, IndexE>) {
          walk_rvalues(*n.base, f);
          for (auto& i : n.indices) walk_rvalues(*i, f);
        } else if constexpr (std::is_same_v<T, AggregateE>) {
          for (auto& a : n.fields) walk_rvalues(*a.value, f);
        }
      },
      e.node);
}

void walk_rvalues(Expr& e, const std::function<void(Expr&)>& f) {
  f(e);
  walk_children(e, f);
}

void walk_lvalue_subscripts(Expr& e, const std::function<void(Expr&)>& f) {
  if (auto* m = std::get_if<MemberE>(&e.node)) {
    walk_lvalue_subscripts(*m->base, f);
  } else if (auto* ix = std::get_if<IndexE>(&e.node)) {
    walk_lvalue_subscripts(*ix->base, f);
    for (auto& i : ix->indices) walk_rvalues(*i, f);
  }
}

void walk_stmt_exprs(Stmt& s, const std::function<void(Expr&)>& f) {
  std::visit(
      [&](auto& n) {
        using T = std::decay_t<decltype(n)>;
        auto list = [&](StmtList& l) {
          for (auto& st : l) walk_stmt_exprs(*st, f);
        };
        if constexpr (std::is_same_v<T, ExprS>) {
          walk_rvalues(*n.expr, f);
        } else if constexpr (std::is_same_v<T, AssignS>) {
          walk_lvalue_subscripts(*n.lhs, f);
          walk_rvalues(*n.rhs, f);
        } else if constexpr (std::is_same_v<T, IfS>) {
          walk_rvalues(*n.cond, f);
          list(n.then_body);
          for (auto& arm : n.elsifs) {
            walk_rvalues(*arm.cond, f);
            list(arm.body);
          }
          if (n.else_body) list(*n.else_body);
        } else if constexpr (std::is_same_v<T, CaseS>) {
          walk_rvalues(*n.scrutinee, f);
          for (auto& arm : n.arms) {
            for (auto& l : arm.labels) {
              walk_rvalues(*l.lo, f);
              if (l.hi) walk_rvalues(*l.hi, f);
            }
            list(arm.body);
          }
          if (n.else_body) list(*n.else_body);
        } else if constexpr (std::is_same_v<T, WhileS>) {
          walk_rvalues(*n.cond, f);
          list(n.body);
        } else if constexpr (std::is_same_v<T, ForS>) {
          walk_rvalues(*n.from, f);
          walk_rvalues(*n.to, f);
          if (n.by) walk_rvalues(*n.by, f);
          list(n.body);
        } else if constexpr (std::is_same_v<T, RepeatS>) {
          list(n.body);
          walk_rvalues(*n.until, f);
        }
      },
      s.node);
}

void walk_stmt_lists(StmtList& l, const std::function<void(StmtList&)>& f) {
  f(l);
  for (auto& st : l) {
    std::visit(
        [&](auto& n) {
          using T = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<T, IfS>) {
            walk_stmt_lists(n.then_body, f);
            for (auto& arm : n.elsifs) walk_stmt_lists(arm.body, f);
            if (n.else_body) walk_stmt_lists(*n.else_body, f);
          } else if constexpr (std::is_same_v<T, CaseS>) {
            for (auto& arm : n.arms) walk_stmt_lists(arm.body, f);
            if (n.else_body) walk_stmt_lists(*n.else_body, f);
          } else if constexpr (std::is_same_v<T, WhileS>) {
            walk_stmt_lists(n.body, f);
          } else if constexpr (std::is_same_v<T, ForS>) {
            walk_stmt_lists(n.body, f);
          } else if constexpr (std::is_same_v<T, RepeatS>) {
            walk_stmt_lists(n.body, f);
          }
        },
        st->node);
  }
}

template <class Pred>
std::vector<std::pair<Expr*, const PouDecl*>> collect_expr_sites(SourceUnit& unit, Pred pred) {
  std::vector<std::pair<Expr*, const PouDecl*>> sites;
  for (auto& pou : unit.pous) {
    for (auto& st : pou.body)
      walk_stmt_exprs(*st, [&](Expr& e) {
        if (pred(e, pou)) sites.emplace_back(&e, &pou);
      });
  }
  return sites;
}

BinOp swap_within(BinOp op, const std::vector<BinOp>& fam, Rng& rng) {
  std::vector<BinOp> others;
  for (BinOp o : fam)
    if (o != op) others.push_back(o);
  return others[rng.below(others.size())];
}

const std::vector<BinOp>& arith_ops() {
  static const std::vector<BinOp> v = {BinOp::Add, BinOp::Sub, BinOp::Mul,
                                       BinOp::Div, BinOp::Mod, BinOp::Pow};
  return v;
}
const std::vector<BinOp>& rel_ops() {
  static const std::vector<BinOp> v = {BinOp::Lt, BinOp::Gt, BinOp::Eq,
                                       BinOp::Le, BinOp::Ge, BinOp::Ne};
  return v;
}
const std::vector<BinOp>& logic_ops() {
  static const std::vector<BinOp> v = {BinOp::And, BinOp::AndThen, BinOp::Xor, BinOp::Or,
                                       BinOp::OrElse};
  return v;
}

bool is_bool_typed(const Expr& e, const Scope& scope) {
  if (e.is<BoolLitE>()) return true;
  if (const auto* b = std::get_if<BinaryE>(&e.node))
    return is_compare(b->op) || is_logic(b->op);
  if (const auto* id = std::get_if<IdentE>(&e.node)) {
    auto it = scope.vars.find(id->name);
    return it != scope.vars.end() && it->second == TypeKind::Bool;
  }
  return false;
}

}  // namespace

void random_init(SourceUnit& unit, Rng& rng) {
  for (auto& pou : unit.pous) {
    for (auto& sec : pou.sections) {
      if (sec.kind == SectionKind::VarExternal || sec.kind == SectionKind::VarInOut) continue;
      for (auto& entry : sec.entries) {
        if (!entry_is_elementary(entry)) continue;
        entry.init = random_literal(entry_kind(entry), rng);
      }
    }
  }
}

void apply_operator(MutationOperator op, SourceUnit& unit, Rng& rng) {
  auto no_site = [&]() -> Error {
    return Error(ErrKind::NoApplicableSite,
                 std::string("no applicable site for ") + to_string(op));
  };

  switch (op) {
    case MutationOperator::VariableRandomAssignment: {
      std::vector<VarEntry*> sites;
      for (auto& pou : unit.pous)
        for (auto& sec : pou.sections) {
          if (sec.kind == SectionKind::VarExternal || sec.kind == SectionKind::VarInOut)
            continue;
          for (auto& e : sec.entries)
            if (entry_is_elementary(e)) sites.push_back(&e);
        }
      if (sites.empty()) throw no_site();
      VarEntry* e = sites[rng.below(sites.size())];
      e->init = random_literal(entry_kind(*e), rng);
      return;
    }

    case MutationOperator::ScalarVariableReplacement: {
      auto sites = collect_expr_sites(unit, [&](Expr& e, const PouDecl& pou) {
        const auto* id = std::get_if<IdentE>(&e.node);
        if (!id) return false;
        Scope s = scope_of(pou);
        return s.vars.count(id->name) > 0;
      });
      if (sites.empty()) throw no_site();
      auto [e, pou] = sites[rng.below(sites.size())];
      Scope scope = scope_of(*pou);
      const std::string& name = e->as<IdentE>().name;
      TypeKind k = scope.vars.at(name);
      auto pool = scope.pool(family_of(k), name);
      if (!pool.empty() && rng.coin()) {
        e->node = IdentE{pool[rng.below(pool.size())]};
      } else {
        ExprPtr lit = random_literal(k, rng);
        e->node = std::move(lit->node);
      }
      return;
    }

    case MutationOperator::ArithmeticOperatorReplacement:
    case MutationOperator::RelationalOperatorReplacement:
    case MutationOperator::LogicalConnectorReplacement: {
      const auto& fam = op == MutationOperator::ArithmeticOperatorReplacement ? arith_ops()
                        : op == MutationOperator::RelationalOperatorReplacement ? rel_ops()
                                                                                : logic_ops();
      auto sites = collect_expr_sites(unit, [&](Expr& e, const PouDecl&) {
        const auto* b = std::get_if<BinaryE>(&e.node);
        if (!b) return false;
        for (BinOp o : fam)
          if (o == b->op) return true;
        return false;
      });
      if (sites.empty()) throw no_site();
      Expr* e = sites[rng.below(sites.size())].first;
      auto& b = e->as<BinaryE>();
      b.op = swap_within(b.op, fam, rng);
      return;
    }

    case MutationOperator::ArithmeticOperatorInsertion:
    case MutationOperator::LogicalConnectorInsertion: {
      bool arith_kind = op == MutationOperator::ArithmeticOperatorInsertion;
      const auto& fam = arith_kind ? arith_ops() : logic_ops();
      auto sites = collect_expr_sites(unit, [&](Expr& e, const PouDecl&) {
        const auto* b = std::get_if<BinaryE>(&e.node);
        if (!b) return false;
        return arith_kind ? is_arith(b->op) : is_logic(b->op);
      });
      if (sites.empty()) throw no_site();
      auto [e, pou] = sites[rng.below(sites.size())];
      Scope scope = scope_of(*pou);
      Family want = arith_kind ? infer_family(*e->as<BinaryE>().lhs, scope) : Family::Bool;
      if (want == Family::Other) want = Family::Int;
      ExprPtr operand = operand_for(want, scope, rng);
      ExprPtr lhs = clone(*e);
      e->node = BinaryE{fam[rng.below(fam.size())], std::move(lhs), std::move(operand)};
      return;
    }

    case MutationOperator::ArithmeticOperatorDeletion:
    case MutationOperator::LogicalConnectorDeletion: {
      bool arith_kind = op == MutationOperator::ArithmeticOperatorDeletion;
      auto sites = collect_expr_sites(unit, [&](Expr& e, const PouDecl&) {
        const auto* b = std::get_if<BinaryE>(&e.node);
        if (!b) return false;
        return arith_kind ? is_arith(b->op) : is_logic(b->op);
      });
      if (sites.empty()) throw no_site();
      Expr* e = sites[rng.below(sites.size())].first;
      ExprPtr lhs = clone(*e->as<BinaryE>().lhs);
      e->node = std::move(lhs->node);
      return;
    }

    case MutationOperator::NotMutation: {
      auto sites = collect_expr_sites(unit, [&](Expr& e, const PouDecl& pou) {
        if (const auto* u = std::get_if<UnaryE>(&e.node)) return u->op == UnOp::Not;
        return is_bool_typed(e, scope_of(pou));
      });
      if (sites.empty()) throw no_site();
      Expr* e = sites[rng.below(sites.size())].first;
      if (const auto* u = std::get_if<UnaryE>(&e->node); u && u->op == UnOp::Not) {
        ExprPtr inner = clone(*u->operand);
        e->node = std::move(inner->node);
      } else {
        ExprPtr inner = clone(*e);
        e->node = UnaryE{UnOp::Not, std::move(inner)};
      }
      return;
    }

    case MutationOperator::StatementInsertion: {
      struct Site {
        StmtList* list;
        size_t pos;
        const PouDecl* pou;
      };
      std::vector<Site> sites;
      for (auto& pou : unit.pous) {
        Scope scope = scope_of(pou);
        if (scope.vars.empty()) continue;
        walk_stmt_lists(pou.body, [&](StmtList& l) {
          for (size_t p = 0; p <= l.size(); ++p) sites.push_back({&l, p, &pou});
        });
      }
      if (sites.empty()) throw no_site();
      const Site& site = sites[rng.below(sites.size())];
      Scope scope = scope_of(*site.pou);

      // IF <numeric-or-var> <rel> <...> THEN <one assignment> END_IF;
      std::vector<std::string> targets;
      for (const auto& [n, k] : scope.vars) targets.push_back(n);
      const std::string& target = targets[rng.below(targets.size())];
      TypeKind tk = scope.vars.at(target);
      Family num = scope.pool(Family::Int).empty() && !scope.pool(Family::Float).empty()
                       ? Family::Float
                       : Family::Int;
      auto cond = std::make_unique<Expr>();
      cond->node = BinaryE{rel_ops()[rng.below(rel_ops().size())], operand_for(num, scope, rng),
                           operand_for(num, scope, rng)};
      auto assign = std::make_unique<Stmt>();
      assign->node = AssignS{mk_ident(target), operand_for(family_of(tk), scope, rng)};
      StmtList then_body;
      then_body.push_back(std::move(assign));
      auto ifs = std::make_unique<Stmt>();
      ifs->node = IfS{std::move(cond), std::move(then_body), {}, std::nullopt};
      site.list->insert(site.list->begin() + static_cast<ptrdiff_t>(site.pos), std::move(ifs));
      return;
    }

    case MutationOperator::StatementDeletion: {
      struct Site {
        StmtList* list;
        size_t pos;
      };
      std::vector<Site> sites;
      for (auto& pou : unit.pous)
        walk_stmt_lists(pou.body, [&](StmtList& l) {
          for (size_t p = 0; p < l.size(); ++p) sites.push_back({&l, p});
        });
      if (sites.empty()) throw no_site();
      const Site& site = sites[rng.below(sites.size())];
      site.list->erase(site.list->begin() + static_cast<ptrdiff_t>(site.pos));
      return;
    }
  }
}

std::vector<Mutant> mutate_program(const std::vector<SourceUnit>& seeds,
                                   const MutationPlan& plan, int jobs) {
  std::map<MutationOperator, uint32_t> weights = plan.weights;
  if (weights.empty())
    for (MutationOperator op : all_mutation_operators()) weights[op] = 1;
  uint64_t total_weight = 0;
  for (const auto& [op, w] : weights) total_weight += w;
  if (total_weight == 0)
    throw Error(ErrKind::DomainError, "mutation plan needs at least one positive weight");

  auto draw_op = [&](Rng& rng) {
    uint64_t x = rng.below(total_weight);
    for (const auto& [op, w] : weights) {
      if (x < w) return op;
      x -= w;
    }
    return MutationOperator::StatementDeletion;  // unreachable
  };

  std::vector<Mutant> out;
  std::vector<const SourceUnit*> parents;
  std::vector<size_t> parent_seed_index;
  for (size_t i = 0; i < seeds.size(); ++i) {
    parents.push_back(&seeds[i]);
    parent_seed_index.push_back(i);
  }

  size_t round_base = 0;
  for (int r = 1; r <= plan.rounds; ++r) {
    size_t n = parents.size() * static_cast<size_t>(plan.mutants_per_seed);
    std::vector<Mutant> layer(n);

#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) num_threads(jobs > 1 ? jobs : 1) if (jobs > 1)
#endif
    for (long long flat = 0; flat < static_cast<long long>(n); ++flat) {
      size_t pi = static_cast<size_t>(flat) / static_cast<size_t>(plan.mutants_per_seed);
      size_t j = static_cast<size_t>(flat) % static_cast<size_t>(plan.mutants_per_seed);
      Mutant& m = layer[static_cast<size_t>(flat)];
      m.rng_seed = Rng::derive(plan.rng_seed, static_cast<uint64_t>(r), pi, j);
      Rng rng(m.rng_seed);
      m.unit = clone(*parents[pi]);
      m.round = r;
      m.seed_index = parent_seed_index[pi];
      m.parent_index = r == 1 ? SIZE_MAX : round_base + pi;
      random_init(m.unit, rng);
      uint64_t ops = 1 + rng.below(static_cast<uint64_t>(plan.max_ops_per_mutant));
      for (uint64_t t = 0; t < ops; ++t) {
        bool applied = false;
        MutationOperator chosen = MutationOperator::StatementDeletion;
        for (int attempt = 0; attempt < 8 && !applied; ++attempt) {
          chosen = draw_op(rng);
          try {
            apply_operator(chosen, m.unit, rng);
            applied = true;
          } catch (const Error& e) {
            if (e.kind != ErrKind::NoApplicableSite) throw;
          }
        }
        if (applied) m.operator_trace.push_back(to_string(chosen));
        else m.skipped.push_back(to_string(chosen));
      }
    }

    size_t layer_start = out.size();
    for (auto& m : layer) out.push_back(std::move(m));

    parents.clear();
    parent_seed_index.clear();
    for (size_t i = layer_start; i < out.size(); ++i) {
      parents.push_back(&out[i].unit);
      parent_seed_index.push_back(out[i].seed_index);
    }
    round_base = layer_start;
  }
  return out;
}

}  // namespace stref
