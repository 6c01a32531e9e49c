// Location derivatives over minterm ids, context-dependent nullability,
// pending-offset extraction and end-anchor elimination.
#pragma once

#include <unordered_map>

#include "resharp/ast.hpp"
#include "resharp/errors.hpp"
#include "resharp/minterms.hpp"

namespace resharp {

struct LocationCtx {
  bool is_initial = false;
  bool is_final = false;
  uint8_t bit() const {
    return static_cast<uint8_t>((is_initial ? 1 : 0) | (is_final ? 2 : 0));
  }
};

inline bool nullable(const RegexNode* r, LocationCtx ctx) {
  return r->nullable_in(ctx.bit());
}

// The offset sets of the epsilons that exist (implicitly) in r at this
// location: nullptr when r is not nullable here; otherwise the union of {0}
// for every nullable subterm carrying no annotation, the I of every
// annotated epsilon, and the I of every annotated lookahead whose body is
// nullable here.
inline const OffsetSet* nullable_offsets(Pool& pool, const RegexNode* r,
                                         LocationCtx ctx) {
  if (!nullable(r, ctx)) return nullptr;
  if (!r->has_annotation) return pool.offsets_zero();
  switch (r->kind) {
    case NodeKind::Epsilon:
      return r->offsets ? r->offsets : pool.offsets_zero();
    case NodeKind::Lookahead:
      return r->offsets ? r->offsets : pool.offsets_zero();
    case NodeKind::Union: {
      const OffsetSet* acc = nullptr;
      for (auto* m : r->members) {
        const OffsetSet* s = nullable_offsets(pool, m, ctx);
        if (s) acc = acc ? pool.offsets_join(acc, s) : s;
      }
      return acc;
    }
    case NodeKind::Inter: {
      const OffsetSet* acc = nullptr;
      for (auto* m : r->members) {
        const OffsetSet* s = nullable_offsets(pool, m, ctx);
        if (s) acc = acc ? pool.offsets_join(acc, s) : s;
      }
      return acc ? acc : pool.offsets_zero();
    }
    case NodeKind::Concat: {
      const OffsetSet* a = nullable_offsets(pool, r->left, ctx);
      const OffsetSet* b = nullable_offsets(pool, r->right, ctx);
      if (a && b) return pool.offsets_join(a, b);
      return a ? a : (b ? b : pool.offsets_zero());
    }
    case NodeKind::ExtBool: {
      const OffsetSet* a = nullable_offsets(pool, r->left, ctx);
      const OffsetSet* b = nullable_offsets(pool, r->right, ctx);
      if (a && b) return pool.offsets_join(a, b);
      return a ? a : (b ? b : pool.offsets_zero());
    }
    default:
      return pool.offsets_zero();
  }
}

// The location derivative of r for minterm block a at a nonfinal location.
inline const RegexNode* derive(Pool& pool, const MintermTable& mt,
                               const RegexNode* r, uint32_t a,
                               LocationCtx ctx) {
  switch (r->kind) {
    case NodeKind::Pred:
      return mt.block_in(a, r->pred) ? pool.epsilon() : pool.bottom();
    case NodeKind::Epsilon:
    case NodeKind::BeginAnchor:
    case NodeKind::EndAnchor:
      return pool.bottom();
    case NodeKind::Union: {
      std::vector<const RegexNode*> ms;
      ms.reserve(r->members.size());
      for (auto* m : r->members) ms.push_back(derive(pool, mt, m, a, ctx));
      return pool.mk_union(std::move(ms));
    }
    case NodeKind::Inter: {
      std::vector<const RegexNode*> ms;
      ms.reserve(r->members.size());
      for (auto* m : r->members) ms.push_back(derive(pool, mt, m, a, ctx));
      return pool.mk_inter(std::move(ms));
    }
    case NodeKind::ExtBool:
      return pool.mk_extbool(r->op, derive(pool, mt, r->left, a, ctx),
                             derive(pool, mt, r->right, a, ctx));
    case NodeKind::Compl:
      return pool.mk_compl(derive(pool, mt, r->body, a, ctx));
    case NodeKind::Concat: {
      const RegexNode* head = pool.mk_concat(
          derive(pool, mt, r->left, a, ctx), r->right);
      if (nullable(r->left, ctx))
        return pool.mk_union({head, derive(pool, mt, r->right, a, ctx)});
      return head;
    }
    case NodeKind::Loop: {
      uint32_t lo = r->lo > 0 ? r->lo - 1 : 0;
      uint32_t hi = r->hi == kInfinity ? kInfinity : r->hi - 1;
      const RegexNode* tail = pool.mk_loop(r->body, lo, hi);
      const RegexNode* head =
          pool.mk_concat(derive(pool, mt, r->body, a, ctx), tail);
      // A body that is nullable here may burn required iterations without
      // consuming; r->lo strictly decreases, so this terminates. For lo == 0
      // the branch is subsumed by the head through loop merging.
      if (r->lo >= 1 && nullable(r->body, ctx))
        return pool.mk_union({head, derive(pool, mt, tail, a, ctx)});
      return head;
    }
    case NodeKind::Lookahead: {
      if (!r->positive)
        throw GrammarViolation("derivative of unnormalized lookaround");
      if (nullable(r->body, ctx)) return pool.bottom();
      const OffsetSet* I = r->offsets ? r->offsets : pool.offsets_zero();
      return pool.mk_look(true, true, derive(pool, mt, r->body, a, ctx),
                          pool.offsets_inc(I));
    }
    case NodeKind::Lookbehind:
      throw GrammarViolation("derivative of unnormalized lookaround");
  }
  return pool.bottom();
}

namespace detail {

inline const RegexNode* elim_z_rec(
    Pool& pool, const RegexNode* r,
    std::unordered_map<const RegexNode*, const RegexNode*>& memo) {
  if (!r->has_end_anchor) return r;
  auto it = memo.find(r);
  if (it != memo.end()) return it->second;
  const RegexNode* out = r;
  switch (r->kind) {
    case NodeKind::EndAnchor:
      out = pool.epsilon();
      break;
    case NodeKind::Union:
    case NodeKind::Inter: {
      std::vector<const RegexNode*> ms;
      ms.reserve(r->members.size());
      for (auto* m : r->members) ms.push_back(elim_z_rec(pool, m, memo));
      out = r->kind == NodeKind::Union ? pool.mk_union(std::move(ms))
                                       : pool.mk_inter(std::move(ms));
      break;
    }
    case NodeKind::ExtBool:
      out = pool.mk_extbool(r->op, elim_z_rec(pool, r->left, memo),
                            elim_z_rec(pool, r->right, memo));
      break;
    case NodeKind::Concat:
      out = pool.mk_concat(elim_z_rec(pool, r->left, memo),
                           elim_z_rec(pool, r->right, memo));
      break;
    case NodeKind::Loop:
      out = pool.mk_loop(elim_z_rec(pool, r->body, memo), r->lo, r->hi);
      break;
    case NodeKind::Compl:
      out = pool.mk_compl(elim_z_rec(pool, r->body, memo));
      break;
    case NodeKind::Lookahead:
      // a pending lookahead whose body becomes nullable collapses to eps[I]
      out = pool.mk_look(true, r->positive, elim_z_rec(pool, r->body, memo),
                         r->offsets);
      break;
    case NodeKind::Lookbehind:
      out = pool.mk_look(false, r->positive, elim_z_rec(pool, r->body, memo));
      break;
    default:
      break;
  }
  memo.emplace(r, out);
  return out;
}

}  // namespace detail

// Replaces every end anchor by epsilon, bottom-up through the smart
// constructors. Only meaningful at the final location.
inline const RegexNode* elim_z(Pool& pool, const RegexNode* r) {
  std::unordered_map<const RegexNode*, const RegexNode*> memo;
  return detail::elim_z_rec(pool, r, memo);
}

}  // namespace resharp
