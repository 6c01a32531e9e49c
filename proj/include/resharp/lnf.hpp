// Lookaround Normal Form: every supported pattern decomposes into
// (?<=B) . E . (?=A) with B, E, A lookaround-free.
//
// Negative lookarounds are replaced by positive ones over complements:
//   (?!S)  ==  (?=~(S_*)\z)        (?<!S)  ==  (?<=\A~(_*S))
// with the single-predicate special case (?!psi) == (?=[^psi]|\z) and its
// mirror. Stacked lookarounds fuse:
//   (?<=B1)(?<=B2) == (?<=(_*B1)&(_*B2))
//   (?=A1)(?=A2)   == (?=(A1_*)&(A2_*))
// and an intersection normalizes by fusing the parts of its members.
//
// Lookarounds in inner positions (a leading lookahead, a trailing
// lookbehind, or one between consuming atoms) are folded into the body by
// intersection, which bounds their context to the match span; this is the
// documented reading of the password-filter equivalence. Lookarounds under
// complement, loops, unions or the extended Boolean operators are rejected.
#pragma once

#include "resharp/ast.hpp"
#include "resharp/errors.hpp"

namespace resharp {

struct LnfTriple {
  const RegexNode* behind;  // B
  const RegexNode* body;    // E
  const RegexNode* ahead;   // A
};

namespace detail {

class LnfBuilder {
 public:
  explicit LnfBuilder(Pool& pool) : pool_(pool) {}

  LnfTriple build(const RegexNode* r) {
    if (!r->has_lookaround) return {pool_.epsilon(), r, pool_.epsilon()};
    switch (r->kind) {
      case NodeKind::Lookbehind:
        return {behind_body(r), pool_.epsilon(), pool_.epsilon()};
      case NodeKind::Lookahead:
        return {pool_.epsilon(), pool_.epsilon(), ahead_body(r)};
      case NodeKind::Concat: {
        LnfTriple l = build(r->left);
        LnfTriple rr = build(r->right);
        if (l.body->is_plain_epsilon() && l.ahead->is_plain_epsilon())
          // left is a pure lookbehind stack; its assertions sit at the start
          return {fuse_behind(l.behind, rr.behind), rr.body, rr.ahead};
        if (rr.body->is_plain_epsilon() && rr.behind->is_plain_epsilon())
          // right is a pure lookahead stack; its assertions sit at the end
          return {l.behind, l.body, fuse_ahead(l.ahead, rr.ahead)};
        // assertions at the junction: bound them to the adjacent body parts
        const RegexNode* lbody = l.body;
        if (!rr.behind->is_plain_epsilon())
          lbody = pool_.mk_inter(
              {lbody, pool_.mk_concat(pool_.top_star(), rr.behind)});
        const RegexNode* rbody = rr.body;
        if (!l.ahead->is_plain_epsilon())
          rbody = pool_.mk_inter(
              {pool_.mk_concat(l.ahead, pool_.top_star()), rbody});
        return {l.behind, pool_.mk_concat(lbody, rbody), rr.ahead};
      }
      case NodeKind::Inter: {
        const RegexNode* behind = pool_.epsilon();
        const RegexNode* ahead = pool_.epsilon();
        std::vector<const RegexNode*> bodies;
        for (auto* m : r->members) {
          LnfTriple t = build(m);
          behind = fuse_behind(behind, t.behind);
          ahead = fuse_ahead(ahead, t.ahead);
          bodies.push_back(t.body);
        }
        return {behind, pool_.mk_inter(std::move(bodies)), ahead};
      }
      default:
        throw GrammarViolation(
            "lookaround not allowed under union, complement, loop or "
            "extended Boolean operators");
    }
  }

 private:
  const RegexNode* check_inner(const RegexNode* body) {
    if (body->has_lookaround)
      throw GrammarViolation("nested lookaround");
    return body;
  }

  const RegexNode* behind_body(const RegexNode* look) {
    const RegexNode* s = check_inner(look->body);
    if (look->positive) return s;
    // (?<!psi) == (?<=\A|[^psi])
    if (s->kind == NodeKind::Pred)
      return pool_.mk_union(
          {pool_.begin_anchor(), pool_.pred(pred_compl(s->pred))});
    return pool_.mk_concat(
        pool_.begin_anchor(),
        pool_.mk_compl(pool_.mk_concat(pool_.top_star(), s)));
  }

  const RegexNode* ahead_body(const RegexNode* look) {
    const RegexNode* s = check_inner(look->body);
    if (look->positive) return s;
    // (?!psi) == (?=[^psi]|\z)
    if (s->kind == NodeKind::Pred)
      return pool_.mk_union(
          {pool_.pred(pred_compl(s->pred)), pool_.end_anchor()});
    return pool_.mk_concat(
        pool_.mk_compl(pool_.mk_concat(s, pool_.top_star())),
        pool_.end_anchor());
  }

  const RegexNode* fuse_behind(const RegexNode* b1, const RegexNode* b2) {
    if (b1->is_plain_epsilon()) return b2;
    if (b2->is_plain_epsilon()) return b1;
    return pool_.mk_inter({pool_.mk_concat(pool_.top_star(), b1),
                           pool_.mk_concat(pool_.top_star(), b2)});
  }

  const RegexNode* fuse_ahead(const RegexNode* a1, const RegexNode* a2) {
    if (a1->is_plain_epsilon()) return a2;
    if (a2->is_plain_epsilon()) return a1;
    return pool_.mk_inter({pool_.mk_concat(a1, pool_.top_star()),
                           pool_.mk_concat(a2, pool_.top_star())});
  }

  Pool& pool_;
};

}  // namespace detail

inline LnfTriple to_lnf(Pool& pool, const RegexNode* r) {
  return detail::LnfBuilder(pool).build(r);
}

}  // namespace resharp
