// Hash-consed regex AST with smart constructors.
//
// Nodes are interned: structurally identical nodes share one handle, so
// handle equality is structural equality and union/intersection member sets
// can be kept ordered by handle. Every node caches its nullability mask
// (nullability per location-context class), its cond predicate (an
// over-approximation of the characters any match of it can consume) and a
// few structural flags. The rewrite system runs inside the constructors;
// derivative results re-enter the constructors and re-trigger the rules.
#pragma once

#include <cassert>
#include <cstdint>
#include <deque>
#include <mutex>
#include <unordered_map>
#include <vector>

#include "resharp/charpred.hpp"
#include "resharp/errors.hpp"
#include "resharp/offsets.hpp"

namespace resharp {

enum class NodeKind : uint8_t {
  Pred,         // character predicate; the empty predicate doubles as bottom
  Epsilon,      // empty word, optionally annotated with pending offsets
  BeginAnchor,  // \A
  EndAnchor,    // \z
  Union,
  Inter,
  ExtBool,      // xor / xnor / implies / diff, kept binary
  Concat,
  Loop,         // body{lo,hi}, hi == kInfinity for unbounded
  Compl,
  Lookahead,
  Lookbehind,
};

enum class BoolOp : uint8_t { Xor, Xnor, Implies, Diff };

inline constexpr uint32_t kInfinity = UINT32_MAX;

// Location-context classes for nullability: bit index is
// (isInitial ? 1 : 0) | (isFinal ? 2 : 0). A nullability mask holds one bit
// per class; anchors are the only leaves that differ across classes.
inline constexpr uint8_t kNullAlways = 0xF;
inline constexpr uint8_t kNullNever = 0x0;
inline constexpr uint8_t kNullInitial = 0b1010;  // classes with isInitial
inline constexpr uint8_t kNullFinal = 0b1100;    // classes with isFinal

struct RegexNode {
  NodeKind kind;
  bool positive = true;  // lookarounds: positive or negative
  BoolOp op = BoolOp::Xor;
  uint32_t lo = 0, hi = 0;  // loop bounds
  CharPredicate pred;
  const OffsetSet* offsets = nullptr;  // Epsilon / Lookahead annotation
  const RegexNode* left = nullptr;     // Concat / ExtBool
  const RegexNode* right = nullptr;
  const RegexNode* body = nullptr;  // Loop / Compl / lookarounds
  std::vector<const RegexNode*> members;

  // caches
  uint32_t id = 0;
  uint32_t node_count = 1;
  uint8_t null_mask = 0;
  bool has_lookaround = false;
  bool has_anchor = false;
  bool has_end_anchor = false;
  bool has_begin_anchor = false;
  bool has_annotation = false;
  CharPredicate cond;

  bool is_bottom() const { return kind == NodeKind::Pred && pred.is_empty(); }
  bool is_epsilon() const { return kind == NodeKind::Epsilon; }
  bool is_plain_epsilon() const { return is_epsilon() && offsets == nullptr; }
  bool is_star_of_pred() const {
    return kind == NodeKind::Loop && lo == 0 && hi == kInfinity &&
           body->kind == NodeKind::Pred;
  }
  bool is_top_star() const { return is_star_of_pred() && body->pred.is_all(); }
  bool always_nullable() const { return null_mask == kNullAlways; }
  bool never_nullable() const { return null_mask == kNullNever; }
  bool nullable_in(uint8_t ctx_bit) const {
    return (null_mask >> ctx_bit) & 1;
  }
};

namespace detail {

struct NodeKey {
  NodeKind kind;
  bool positive;
  BoolOp op;
  uint32_t lo, hi;
  CharPredicate pred;
  const OffsetSet* offsets;
  const RegexNode* left;
  const RegexNode* right;
  const RegexNode* body;
  std::vector<const RegexNode*> members;
  bool operator==(const NodeKey&) const = default;
};

struct NodeKeyHash {
  size_t operator()(const NodeKey& k) const {
    size_t h = static_cast<size_t>(k.kind);
    h = hash_combine(h, k.positive);
    h = hash_combine(h, static_cast<size_t>(k.op));
    h = hash_combine(h, k.lo);
    h = hash_combine(h, k.hi);
    h = hash_combine(h, k.pred.hash());
    h = hash_combine(h, reinterpret_cast<size_t>(k.offsets));
    h = hash_combine(h, reinterpret_cast<size_t>(k.left));
    h = hash_combine(h, reinterpret_cast<size_t>(k.right));
    h = hash_combine(h, reinterpret_cast<size_t>(k.body));
    for (auto* m : k.members) h = hash_combine(h, reinterpret_cast<size_t>(m));
    return h;
  }
};

struct OffsetsKeyHash {
  size_t operator()(const OffsetSet& s) const { return s.hash(); }
};

}  // namespace detail

// Owns and interns all nodes and offset sets of one compilation. The intern
// tables are the only mutable shared structures; insert-or-get is guarded by
// a mutex so racing identical constructions yield one handle. Nodes are
// immutable once returned.
class Pool {
 public:
  struct Options {
    CharClassTable classes = CharClassTable::ascii();
    bool min_offset_only = false;
    uint32_t max_loop_bound = 4096;
  };

  Pool() : Pool(Options{}) {}
  explicit Pool(Options opts) : opts_(std::move(opts)) {}

  Pool(const Pool&) = delete;
  Pool& operator=(const Pool&) = delete;

  const Options& options() const { return opts_; }
  const CharClassTable& classes() const { return opts_.classes; }
  bool min_offset_only() const { return opts_.min_offset_only; }
  size_t node_count() const {
    std::lock_guard<std::mutex> lock(mu_);
    return arena_.size();
  }

  // ---- primitives ----

  const RegexNode* bottom() { return pred(CharPredicate::none()); }
  const RegexNode* epsilon() { return intern_epsilon(nullptr); }
  const RegexNode* epsilon_with(const OffsetSet* I) { return intern_epsilon(I); }
  const RegexNode* begin_anchor() { return intern_simple(NodeKind::BeginAnchor); }
  const RegexNode* end_anchor() { return intern_simple(NodeKind::EndAnchor); }

  const RegexNode* pred(CharPredicate p) {
    detail::NodeKey k = blank_key(NodeKind::Pred);
    k.pred = std::move(p);
    return intern(std::move(k));
  }

  const RegexNode* top() { return pred(CharPredicate::all()); }
  const RegexNode* top_star() { return mk_loop(top(), 0, kInfinity); }
  const RegexNode* top_plus() { return mk_loop(top(), 1, kInfinity); }
  const RegexNode* dot() { return pred(pred_compl(CharPredicate::single('\n'))); }
  const RegexNode* dot_star() { return mk_loop(dot(), 0, kInfinity); }

  // ---- offset sets ----

  const OffsetSet* intern_offsets(const OffsetSet& s) {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = offset_table_.find(s);
    if (it != offset_table_.end()) return it->second;
    offset_arena_.push_back(s);
    const OffsetSet* p = &offset_arena_.back();
    offset_table_.emplace(s, p);
    return p;
  }

  const OffsetSet* offsets_zero() { return intern_offsets(OffsetSet::singleton(0)); }

  const OffsetSet* offsets_inc(const OffsetSet* s) {
    return intern_offsets(offsets_increment(*s));
  }

  // Honors the compilation mode: when only the first match is searched the
  // set is collapsed to its minimal element and union becomes min.
  const OffsetSet* offsets_join(const OffsetSet* a, const OffsetSet* b) {
    if (a == b) return a;
    if (opts_.min_offset_only)
      return intern_offsets(OffsetSet::singleton(std::min(a->min(), b->min())));
    return intern_offsets(offsets_union_full(*a, *b));
  }

  const OffsetSet* offsets_collapse(const OffsetSet* s) {
    if (!opts_.min_offset_only) return s;
    if (s->blocks.range_count() == 1 && s->blocks.min() == s->blocks.max()) return s;
    return intern_offsets(OffsetSet::singleton(s->min()));
  }

  // ---- smart constructors ----

  const RegexNode* mk_union(std::vector<const RegexNode*> ms);
  const RegexNode* mk_inter(std::vector<const RegexNode*> ms);
  const RegexNode* mk_concat(const RegexNode* l, const RegexNode* r);
  const RegexNode* mk_loop(const RegexNode* body, uint32_t lo, uint32_t hi);
  const RegexNode* mk_compl(const RegexNode* body);
  const RegexNode* mk_extbool(BoolOp op, const RegexNode* l, const RegexNode* r);
  // ahead=true for lookahead; offsets only meaningful for positive lookaheads.
  const RegexNode* mk_look(bool ahead, bool positive, const RegexNode* body,
                           const OffsetSet* offsets = nullptr);

  // Right fold of a sequence into concatenation.
  const RegexNode* mk_concat_seq(const std::vector<const RegexNode*>& seq) {
    const RegexNode* acc = epsilon();
    for (size_t i = seq.size(); i-- > 0;) acc = mk_concat(seq[i], acc);
    return acc;
  }

  // ---- raw interning (no rewrites) ----
  // Structural construction that bypasses the rewrite system. Reversal uses
  // it to stay size-preserving and involutive; the differential tests use it
  // to materialize rule left-hand sides.

  const RegexNode* raw_union(std::vector<const RegexNode*> ms) {
    return raw_set(NodeKind::Union, std::move(ms));
  }
  const RegexNode* raw_inter(std::vector<const RegexNode*> ms) {
    return raw_set(NodeKind::Inter, std::move(ms));
  }
  const RegexNode* raw_concat(const RegexNode* l, const RegexNode* r) {
    detail::NodeKey k = blank_key(NodeKind::Concat);
    k.left = l;
    k.right = r;
    return intern(std::move(k));
  }
  const RegexNode* raw_loop(const RegexNode* body, uint32_t lo, uint32_t hi) {
    detail::NodeKey k = blank_key(NodeKind::Loop);
    k.body = body;
    k.lo = lo;
    k.hi = hi;
    return intern(std::move(k));
  }
  const RegexNode* raw_compl(const RegexNode* body) {
    detail::NodeKey k = blank_key(NodeKind::Compl);
    k.body = body;
    return intern(std::move(k));
  }
  const RegexNode* raw_extbool(BoolOp op, const RegexNode* l, const RegexNode* r) {
    detail::NodeKey k = blank_key(NodeKind::ExtBool);
    k.op = op;
    k.left = l;
    k.right = r;
    return intern(std::move(k));
  }
  const RegexNode* raw_look(bool ahead, bool positive, const RegexNode* body,
                            const OffsetSet* offsets = nullptr) {
    detail::NodeKey k =
        blank_key(ahead ? NodeKind::Lookahead : NodeKind::Lookbehind);
    k.positive = positive;
    k.body = body;
    k.offsets = ahead ? offsets : nullptr;
    return intern(std::move(k));
  }

  // Structural reversal: concatenation swaps, lookahead and lookbehind swap,
  // \A and \z swap roles, predicates are fixed. Size-preserving and
  // involutive because it does not re-run the rewrite system.
  const RegexNode* reverse(const RegexNode* r);

 private:
  detail::NodeKey blank_key(NodeKind kind) {
    return detail::NodeKey{kind,    true,    BoolOp::Xor, 0,       0,
                           {},      nullptr, nullptr,     nullptr, nullptr,
                           {}};
  }

  const RegexNode* intern_epsilon(const OffsetSet* I) {
    detail::NodeKey k = blank_key(NodeKind::Epsilon);
    k.offsets = I;
    return intern(std::move(k));
  }

  const RegexNode* intern_simple(NodeKind kind) {
    return intern(blank_key(kind));
  }

  const RegexNode* raw_set(NodeKind kind, std::vector<const RegexNode*> ms) {
    sort_unique(ms);
    if (ms.size() == 1) return ms[0];
    detail::NodeKey k = blank_key(kind);
    k.members = std::move(ms);
    return intern(std::move(k));
  }

  static void sort_unique(std::vector<const RegexNode*>& ms) {
    std::sort(ms.begin(), ms.end(),
              [](const RegexNode* a, const RegexNode* b) { return a->id < b->id; });
    ms.erase(std::unique(ms.begin(), ms.end()), ms.end());
  }

  const RegexNode* intern(detail::NodeKey key);
  void fill_caches(RegexNode& n);

  Options opts_;
  mutable std::mutex mu_;
  std::deque<RegexNode> arena_;
  std::unordered_map<detail::NodeKey, const RegexNode*, detail::NodeKeyHash> table_;
  std::deque<OffsetSet> offset_arena_;
  std::unordered_map<OffsetSet, const OffsetSet*, detail::OffsetsKeyHash> offset_table_;
};

// ---------------------------------------------------------------------------
// implementation

inline const RegexNode* Pool::intern(detail::NodeKey key) {
  std::lock_guard<std::mutex> lock(mu_);
  auto it = table_.find(key);
  if (it != table_.end()) return it->second;
  arena_.emplace_back();
  RegexNode& n = arena_.back();
  n.kind = key.kind;
  n.positive = key.positive;
  n.op = key.op;
  n.lo = key.lo;
  n.hi = key.hi;
  n.pred = key.pred;
  n.offsets = key.offsets;
  n.left = key.left;
  n.right = key.right;
  n.body = key.body;
  n.members = key.members;
  n.id = static_cast<uint32_t>(arena_.size() - 1);
  fill_caches(n);
  table_.emplace(std::move(key), &n);
  return &n;
}

inline void Pool::fill_caches(RegexNode& n) {
  auto apply_op = [](BoolOp op, uint8_t a, uint8_t b) -> uint8_t {
    switch (op) {
      case BoolOp::Xor:
        return (a ^ b) & kNullAlways;
      case BoolOp::Xnor:
        return ~(a ^ b) & kNullAlways;
      case BoolOp::Implies:
        return (~a | b) & kNullAlways;
      case BoolOp::Diff:
        return (a & ~b) & kNullAlways;
    }
    return 0;
  };
  switch (n.kind) {
    case NodeKind::Pred:
      n.null_mask = kNullNever;
      n.cond = n.pred;
      break;
    case NodeKind::Epsilon:
      n.null_mask = kNullAlways;
      n.has_annotation = n.offsets != nullptr;
      break;
    case NodeKind::BeginAnchor:
      n.null_mask = kNullInitial;
      n.has_anchor = n.has_begin_anchor = true;
      break;
    case NodeKind::EndAnchor:
      n.null_mask = kNullFinal;
      n.has_anchor = n.has_end_anchor = true;
      break;
    case NodeKind::Union:
    case NodeKind::Inter: {
      bool is_union = n.kind == NodeKind::Union;
      n.null_mask = is_union ? kNullNever : kNullAlways;
      n.cond = is_union ? CharPredicate::none() : CharPredicate::all();
      for (auto* m : n.members) {
        n.null_mask = is_union ? (n.null_mask | m->null_mask)
                               : (n.null_mask & m->null_mask);
        n.cond = is_union ? pred_union(n.cond, m->cond)
                          : pred_inter(n.cond, m->cond);
        n.node_count += m->node_count;
        n.has_lookaround |= m->has_lookaround;
        n.has_anchor |= m->has_anchor;
        n.has_end_anchor |= m->has_end_anchor;
        n.has_begin_anchor |= m->has_begin_anchor;
        n.has_annotation |= m->has_annotation;
      }
      break;
    }
    case NodeKind::ExtBool:
      n.null_mask = apply_op(n.op, n.left->null_mask, n.right->null_mask);
      n.cond = n.op == BoolOp::Diff ? n.left->cond : CharPredicate::all();
      n.node_count = 1 + n.left->node_count + n.right->node_count;
      n.has_lookaround = n.left->has_lookaround || n.right->has_lookaround;
      n.has_anchor = n.left->has_anchor || n.right->has_anchor;
      n.has_end_anchor = n.left->has_end_anchor || n.right->has_end_anchor;
      n.has_begin_anchor = n.left->has_begin_anchor || n.right->has_begin_anchor;
      n.has_annotation = n.left->has_annotation || n.right->has_annotation;
      break;
    case NodeKind::Concat:
      n.null_mask = n.left->null_mask & n.right->null_mask;
      n.cond = pred_union(n.left->cond, n.right->cond);
      n.node_count = 1 + n.left->node_count + n.right->node_count;
      n.has_lookaround = n.left->has_lookaround || n.right->has_lookaround;
      n.has_anchor = n.left->has_anchor || n.right->has_anchor;
      n.has_end_anchor = n.left->has_end_anchor || n.right->has_end_anchor;
      n.has_begin_anchor = n.left->has_begin_anchor || n.right->has_begin_anchor;
      n.has_annotation = n.left->has_annotation || n.right->has_annotation;
      break;
    case NodeKind::Loop:
      n.null_mask = n.lo == 0 ? kNullAlways : n.body->null_mask;
      n.cond = n.body->cond;
      n.node_count = 1 + n.body->node_count;
      n.has_lookaround = n.body->has_lookaround;
      n.has_anchor = n.body->has_anchor;
      n.has_end_anchor = n.body->has_end_anchor;
      n.has_begin_anchor = n.body->has_begin_anchor;
      n.has_annotation = n.body->has_annotation;
      break;
    case NodeKind::Compl:
      n.null_mask = ~n.body->null_mask & kNullAlways;
      n.cond = CharPredicate::all();
      n.node_count = 1 + n.body->node_count;
      n.has_lookaround = n.body->has_lookaround;
      n.has_anchor = n.body->has_anchor;
      n.has_end_anchor = n.body->has_end_anchor;
      n.has_begin_anchor = n.body->has_begin_anchor;
      n.has_annotation = n.body->has_annotation;
      break;
    case NodeKind::Lookahead:
    case NodeKind::Lookbehind:
      // Algorithmic nullability of a lookaround: the body has completed with
      // zero remaining width in this context. This is what the derivative
      // machinery consults; it is not the semantic satisfaction test.
      n.null_mask = n.positive ? n.body->null_mask
                               : (~n.body->null_mask & kNullAlways);
      n.node_count = 1 + n.body->node_count;
      n.has_lookaround = true;
      n.has_anchor = n.body->has_anchor;
      n.has_end_anchor = n.body->has_end_anchor;
      n.has_begin_anchor = n.body->has_begin_anchor;
      n.has_annotation = n.offsets != nullptr || n.body->has_annotation;
      break;
  }
}

inline void collect_leaf_predicates(const RegexNode* r,
                                    std::vector<CharPredicate>& out) {
  switch (r->kind) {
    case NodeKind::Pred:
      if (!r->pred.is_empty()) out.push_back(r->pred);
      return;
    case NodeKind::Union:
    case NodeKind::Inter:
      for (auto* m : r->members) collect_leaf_predicates(m, out);
      return;
    case NodeKind::Concat:
    case NodeKind::ExtBool:
      collect_leaf_predicates(r->left, out);
      collect_leaf_predicates(r->right, out);
      return;
    case NodeKind::Loop:
    case NodeKind::Compl:
    case NodeKind::Lookahead:
    case NodeKind::Lookbehind:
      collect_leaf_predicates(r->body, out);
      return;
    default:
      return;
  }
}

// Is X trivially subsumed by Y (every span of X models Y)? Cheap syntactic
// checks only; used to prune union members. X must be annotation-free when
// this is used to delete it.
inline bool subsumed_by(const RegexNode* x, const RegexNode* y) {
  if (x == y) return true;
  // psi* swallows anything whose relevant characters lie inside psi.
  if (y->is_star_of_pred() && pred_subset(x->cond, y->body->pred)) return true;
  // epsilon is subsumed by any always-nullable member.
  if (x->is_plain_epsilon() && y->always_nullable()) return true;
  if (x->kind == NodeKind::Inter) {
    for (auto* m : x->members)
      if (m == y) return true;  //  (R1 & R2) | R1  ->  R1
    if (y->kind == NodeKind::Inter) {
      //  (R1 & (R2|R3)) | (R1 & R2)  ->  R1 & (R2|R3)
      bool all = true;
      for (auto* m : y->members) {
        bool covered =
            std::find(x->members.begin(), x->members.end(), m) != x->members.end();
        if (!covered && m->kind == NodeKind::Union) {
          for (auto* xm : x->members)
            if (std::find(m->members.begin(), m->members.end(), xm) !=
                m->members.end()) {
              covered = true;
              break;
            }
        }
        if (!covered) {
          all = false;
          break;
        }
      }
      if (all) return true;
    }
  }
  return false;
}

inline const RegexNode* Pool::mk_union(std::vector<const RegexNode*> ms) {
  std::vector<const RegexNode*> flat;
  for (auto* m : ms) {
    if (m->kind == NodeKind::Union)
      flat.insert(flat.end(), m->members.begin(), m->members.end());
    else
      flat.push_back(m);
  }
  // drop bottom, merge epsilons and same-body annotated lookaheads
  std::vector<const RegexNode*> out;
  const OffsetSet* eps_offsets = nullptr;
  bool have_plain_eps = false, have_eps = false;
  for (auto* m : flat) {
    if (m->is_bottom()) continue;
    if (m->is_epsilon()) {
      have_eps = true;
      if (m->offsets == nullptr)
        have_plain_eps = true;
      else
        eps_offsets = eps_offsets ? offsets_join(eps_offsets, m->offsets)
                                  : m->offsets;
      continue;
    }
    out.push_back(m);
  }
  if (have_eps) {
    if (eps_offsets && have_plain_eps)
      eps_offsets = offsets_join(eps_offsets, offsets_zero());
    out.push_back(eps_offsets ? epsilon_with(eps_offsets) : epsilon());
  }
  // (?=A)[I] | (?=A)[J]  ->  (?=A)[I u J]
  for (size_t i = 0; i < out.size(); ++i) {
    if (out[i]->kind != NodeKind::Lookahead || !out[i]->positive) continue;
    for (size_t j = i + 1; j < out.size();) {
      if (out[j]->kind == NodeKind::Lookahead && out[j]->positive &&
          out[j]->body == out[i]->body) {
        const OffsetSet* a = out[i]->offsets ? out[i]->offsets : offsets_zero();
        const OffsetSet* b = out[j]->offsets ? out[j]->offsets : offsets_zero();
        out[i] = mk_look(true, true, out[i]->body, offsets_join(a, b));
        out.erase(out.begin() + static_cast<ptrdiff_t>(j));
      } else {
        ++j;
      }
    }
  }
  sort_unique(out);
  // loop merging:  R{l,m} | R{k,n}  ->  R{l,max(m,n)}  when l <= k <= m.
  // A non-loop member counts as R{1,1}.
  auto loop_view = [](const RegexNode* m,
                      const RegexNode*& body, uint64_t& lo, uint64_t& hi) {
    if (m->kind == NodeKind::Loop) {
      body = m->body;
      lo = m->lo;
      hi = m->hi;
    } else {
      body = m;
      lo = hi = 1;
    }
  };
  for (size_t i = 0; i < out.size(); ++i) {
    if (out[i]->has_annotation) continue;
    for (size_t j = i + 1; j < out.size();) {
      const RegexNode *b1, *b2;
      uint64_t l1, h1, l2, h2;
      loop_view(out[i], b1, l1, h1);
      loop_view(out[j], b2, l2, h2);
      // the larger lower bound must fall inside the other loop's range
      if (b1 == b2 && !out[j]->has_annotation &&
          (l1 <= l2 ? l2 <= h1 : l1 <= h2)) {
        uint32_t lo32 = static_cast<uint32_t>(std::min(l1, l2));
        uint32_t hi32 = (h1 == kInfinity || h2 == kInfinity)
                            ? kInfinity
                            : static_cast<uint32_t>(std::max(h1, h2));
        out[i] = mk_loop(b1, lo32, hi32);
        out.erase(out.begin() + static_cast<ptrdiff_t>(j));
        j = i + 1;  // re-scan against the merged member
      } else {
        ++j;
      }
    }
  }
  // subsumption: drop members subsumed by another (never annotated ones)
  for (size_t i = 0; i < out.size();) {
    bool drop = false;
    if (!out[i]->has_annotation) {
      for (size_t j = 0; j < out.size(); ++j) {
        if (i != j && subsumed_by(out[i], out[j])) {
          drop = true;
          break;
        }
      }
    }
    if (drop)
      out.erase(out.begin() + static_cast<ptrdiff_t>(i));
    else
      ++i;
  }
  // concat factoring on lookaround-free members:
  //  R1 R2 | R1 R3  ->  R1 (R2|R3)   and   R1 R3 | R2 R3  ->  (R1|R2) R3
  auto factorable = [](const RegexNode* m) {
    return m->kind == NodeKind::Concat && !m->has_lookaround &&
           !m->has_annotation;
  };
  bool factored = false;
  for (size_t i = 0; i < out.size() && !factored; ++i) {
    if (!factorable(out[i])) continue;
    for (size_t j = i + 1; j < out.size() && !factored; ++j) {
      if (!factorable(out[j])) continue;
      if (out[i]->left == out[j]->left) {
        const RegexNode* merged = mk_concat(
            out[i]->left, mk_union({out[i]->right, out[j]->right}));
        out.erase(out.begin() + static_cast<ptrdiff_t>(j));
        out[i] = merged;
        factored = true;
      } else if (out[i]->right == out[j]->right) {
        const RegexNode* merged = mk_concat(
            mk_union({out[i]->left, out[j]->left}), out[i]->right);
        out.erase(out.begin() + static_cast<ptrdiff_t>(j));
        out[i] = merged;
        factored = true;
      }
    }
  }
  if (factored) return mk_union(std::move(out));

  if (out.empty()) return bottom();
  sort_unique(out);
  if (out.size() == 1) return out[0];
  detail::NodeKey k = blank_key(NodeKind::Union);
  k.members = std::move(out);
  return intern(std::move(k));
}

inline const RegexNode* Pool::mk_inter(std::vector<const RegexNode*> ms) {
  std::vector<const RegexNode*> flat;
  for (auto* m : ms) {
    if (m->kind == NodeKind::Inter)
      flat.insert(flat.end(), m->members.begin(), m->members.end());
    else
      flat.push_back(m);
  }
  std::vector<const RegexNode*> out;
  for (auto* m : flat) {
    if (m->is_bottom()) return bottom();
    if (m->is_top_star()) continue;
    out.push_back(m);
  }
  sort_unique(out);
  // psi* & R -> R when every relevant character of R lies in psi
  for (size_t i = 0; i < out.size();) {
    bool drop = false;
    if (out[i]->is_star_of_pred()) {
      for (size_t j = 0; j < out.size(); ++j) {
        if (i != j && pred_subset(out[j]->cond, out[i]->body->pred)) {
          drop = true;
          break;
        }
      }
    }
    // (R1|R2) & R1 -> R1
    if (!drop && out[i]->kind == NodeKind::Union && !out[i]->has_annotation) {
      for (size_t j = 0; j < out.size(); ++j) {
        if (i != j && std::find(out[i]->members.begin(), out[i]->members.end(),
                                out[j]) != out[i]->members.end()) {
          drop = true;
          break;
        }
      }
    }
    if (drop)
      out.erase(out.begin() + static_cast<ptrdiff_t>(i));
    else
      ++i;
  }
  if (out.empty()) return top_star();
  if (out.size() == 1) return out[0];
  detail::NodeKey k = blank_key(NodeKind::Inter);
  k.members = std::move(out);
  return intern(std::move(k));
}

inline const RegexNode* Pool::mk_concat(const RegexNode* l, const RegexNode* r) {
  if (l->is_bottom() || r->is_bottom()) return bottom();
  if (l->is_plain_epsilon()) return r;
  if (r->is_plain_epsilon()) return l;
  if (l->is_epsilon() && r->is_epsilon())  // eps[I] . eps[J] = eps[I u J]
    return epsilon_with(offsets_join(l->offsets, r->offsets));
  // phi{0,m} psi* -> psi*  when [[phi]] subset of [[psi]]
  if (l->kind == NodeKind::Loop && l->lo == 0 &&
      l->body->kind == NodeKind::Pred && r->is_star_of_pred() &&
      pred_subset(l->body->pred, r->body->pred))
    return r;
  detail::NodeKey k = blank_key(NodeKind::Concat);
  k.left = l;
  k.right = r;
  return intern(std::move(k));
}

inline const RegexNode* Pool::mk_loop(const RegexNode* body, uint32_t lo,
                                      uint32_t hi) {
  if (lo > hi) throw LoopBoundError("lower bound exceeds upper bound");
  if (hi != kInfinity && hi > opts_.max_loop_bound)
    throw LoopBoundError("upper bound " + std::to_string(hi) +
                         " exceeds the cap of " +
                         std::to_string(opts_.max_loop_bound));
  if (body->is_plain_epsilon()) return epsilon();
  if (body->is_bottom()) return lo == 0 ? epsilon() : bottom();
  if (hi == 0) return epsilon();
  if (lo == 1 && hi == 1) return body;
  // (R*)* -> R*
  if (lo == 0 && hi == kInfinity && body->kind == NodeKind::Loop &&
      body->lo == 0 && body->hi == kInfinity)
    return body;
  detail::NodeKey k = blank_key(NodeKind::Loop);
  k.body = body;
  k.lo = lo;
  k.hi = hi;
  return intern(std::move(k));
}

inline const RegexNode* Pool::mk_compl(const RegexNode* body) {
  if (body->is_bottom()) return top_star();
  if (body->is_top_star()) return bottom();
  if (body->kind == NodeKind::Compl) return body->body;
  if (body->is_plain_epsilon()) return top_plus();
  if (body->kind == NodeKind::Loop && body->lo == 1 && body->hi == kInfinity &&
      body->body->kind == NodeKind::Pred && body->body->pred.is_all())
    return epsilon();
  detail::NodeKey k = blank_key(NodeKind::Compl);
  k.body = body;
  return intern(std::move(k));
}

inline const RegexNode* Pool::mk_extbool(BoolOp op, const RegexNode* l,
                                         const RegexNode* r) {
  const bool l_bot = l->is_bottom(), r_bot = r->is_bottom();
  const bool l_top = l->is_top_star(), r_top = r->is_top_star();
  switch (op) {
    case BoolOp::Xor:
      if (l == r) return bottom();
      if (l_bot) return r;
      if (r_bot) return l;
      if (l_top) return mk_compl(r);
      if (r_top) return mk_compl(l);
      break;
    case BoolOp::Xnor:
      if (l == r) return top_star();
      if (l_bot) return mk_compl(r);
      if (r_bot) return mk_compl(l);
      if (l_top) return r;
      if (r_top) return l;
      break;
    case BoolOp::Implies:
      if (l == r || l_bot || r_top) return top_star();
      if (l_top) return r;
      if (r_bot) return mk_compl(l);
      break;
    case BoolOp::Diff:
      if (l == r || l_bot || r_top) return bottom();
      if (r_bot) return l;
      if (l_top) return mk_compl(r);
      break;
  }
  detail::NodeKey k = blank_key(NodeKind::ExtBool);
  k.op = op;
  k.left = l;
  k.right = r;
  return intern(std::move(k));
}

inline const RegexNode* Pool::mk_look(bool ahead, bool positive,
                                      const RegexNode* body,
                                      const OffsetSet* offsets) {
  if (body->is_bottom()) return positive ? bottom() : epsilon();
  if (body->always_nullable()) {
    if (!positive) return bottom();
    return ahead && offsets ? epsilon_with(offsets) : epsilon();
  }
  return raw_look(ahead, positive, body, ahead ? offsets : nullptr);
}

inline const RegexNode* Pool::reverse(const RegexNode* r) {
  switch (r->kind) {
    case NodeKind::Pred:
    case NodeKind::Epsilon:
      return r;
    case NodeKind::BeginAnchor:
      return end_anchor();
    case NodeKind::EndAnchor:
      return begin_anchor();
    case NodeKind::Union:
    case NodeKind::Inter: {
      std::vector<const RegexNode*> ms;
      ms.reserve(r->members.size());
      for (auto* m : r->members) ms.push_back(reverse(m));
      return raw_set(r->kind, std::move(ms));
    }
    case NodeKind::ExtBool:
      return raw_extbool(r->op, reverse(r->left), reverse(r->right));
    case NodeKind::Concat:
      return raw_concat(reverse(r->right), reverse(r->left));
    case NodeKind::Loop:
      return raw_loop(reverse(r->body), r->lo, r->hi);
    case NodeKind::Compl:
      return raw_compl(reverse(r->body));
    case NodeKind::Lookahead:
      return raw_look(false, r->positive, reverse(r->body));
    case NodeKind::Lookbehind:
      return raw_look(true, r->positive, reverse(r->body));
  }
  return r;
}

}  // namespace resharp
