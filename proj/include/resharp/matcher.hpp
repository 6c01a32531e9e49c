// Lazy DFA over interned derivatives and the top-level search algorithms:
// maximal match end, all match ends, leftmost-longest find, and all
// nonoverlapping leftmost-longest matches.
//
// The single-match search runs twice over the input: a backward pass with
// the reversed pattern finds the leftmost start, a forward pass from that
// start finds the longest end. No input is ever actually reversed; the
// backward pass walks the original buffer through index arithmetic.
//
// States are keyed by (regex handle, context kind) where the context kind
// distinguishes only the initial location. Regexes carrying pending-offset
// annotations are not interned as states: their derivatives are taken
// symbolically and they rejoin the cached automaton once the annotations
// die. This keeps the state table bounded by the annotation-free core while
// pending lookahead contexts may span the whole input.
#pragma once

#include <atomic>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "resharp/ast.hpp"
#include "resharp/derive.hpp"
#include "resharp/errors.hpp"
#include "resharp/lnf.hpp"
#include "resharp/minterms.hpp"
#include "resharp/parser.hpp"

namespace resharp {

struct Span {
  int64_t start;
  int64_t end;  // exclusive; both in code-point positions
  bool operator==(const Span&) const = default;
};

struct MatchStats {
  uint64_t states_created = 0;
  uint64_t transitions = 0;
  uint64_t cache_lookups = 0;
  uint64_t chars_skipped = 0;
};

struct TraceStep {
  int64_t pos;
  const RegexNode* node;
  const OffsetSet* recorded;  // pending offsets observed at pos, if any
};

struct MatchOptions {
  bool acceleration = true;
  MatchStats* stats = nullptr;
  std::vector<TraceStep>* trace = nullptr;  // records every walk, in order
};

struct CompileOptions {
  ParseFlags parse;
  CharClassTable classes = CharClassTable::ascii();
  bool min_offset_only = false;
  size_t max_states = 100000;
  uint32_t max_loop_bound = 4096;
};

// Acceleration descriptor extracted by breadth-first derivative exploration.
struct Acceleration {
  enum class Kind { None, Literal, FirstSet };
  Kind kind = Kind::None;
  std::vector<uint32_t> literal;  // exact prefix chain (code points)
  const RegexNode* resume = nullptr;
  CharPredicate first_set;
};

namespace detail {

struct DfaState {
  const RegexNode* node = nullptr;
  uint8_t ctx_bit = 0;  // 0 general, 1 initial
  const OffsetSet* pending = nullptr;
  std::unique_ptr<std::atomic<DfaState*>[]> succ;
  // self-loop skipping (general-context, non-pending states only)
  std::atomic<bool> accel_ready{false};
  bool can_skip = false;
  std::vector<uint8_t> self_loop;
};

struct StateKey {
  const RegexNode* node;
  uint8_t ctx_bit;
  bool operator==(const StateKey&) const = default;
};

struct StateKeyHash {
  size_t operator()(const StateKey& k) const {
    return hash_combine(reinterpret_cast<size_t>(k.node), k.ctx_bit);
  }
};

class TransitionCache {
 public:
  TransitionCache(Pool& pool, const MintermTable& mt, size_t max_states)
      : pool_(pool), mt_(mt), max_states_(max_states) {}

  DfaState* state_for(const RegexNode* node, bool initial, MatchStats* stats) {
    StateKey key{node, static_cast<uint8_t>(initial ? 1 : 0)};
    std::lock_guard<std::mutex> lock(mu_);
    auto it = states_.find(key);
    if (it != states_.end()) return it->second.get();
    if (states_.size() >= max_states_) throw StateLimitExceeded(max_states_);
    auto st = std::make_unique<DfaState>();
    st->node = node;
    st->ctx_bit = key.ctx_bit;
    st->pending = nullable_offsets(pool_, node,
                                   LocationCtx{initial, false});
    st->succ = std::make_unique<std::atomic<DfaState*>[]>(mt_.size());
    for (size_t a = 0; a < mt_.size(); ++a) st->succ[a].store(nullptr);
    DfaState* raw = st.get();
    states_.emplace(key, std::move(st));
    if (stats) stats->states_created++;
    return raw;
  }

  // One cached transition. Returns the successor state, or nullptr with
  // *transient set when the derivative carries annotations (not cached).
  DfaState* step(DfaState* s, uint32_t a, const RegexNode** transient,
                 MatchStats* stats) {
    if (stats) stats->cache_lookups++;
    DfaState* hit = s->succ[a].load(std::memory_order_acquire);
    if (hit) return hit;
    const RegexNode* d =
        derive(pool_, mt_, s->node, a, LocationCtx{s->ctx_bit == 1, false});
    if (d->has_annotation) {
      *transient = d;
      return nullptr;
    }
    DfaState* t = state_for(d, false, stats);
    s->succ[a].store(t, std::memory_order_release);
    return t;
  }

  // Fills the self-loop row of a state so the inner loop can skip input.
  // Only general-context states that record nothing are eligible.
  void accelerate(DfaState* s) {
    if (s->accel_ready.load(std::memory_order_acquire)) return;
    std::lock_guard<std::mutex> lock(mu_);
    if (s->accel_ready.load(std::memory_order_relaxed)) return;
    if (s->ctx_bit != 0 || s->pending != nullptr || s->node->is_bottom()) {
      s->can_skip = false;
      s->accel_ready.store(true, std::memory_order_release);
      return;
    }
    s->self_loop.assign(mt_.size(), 0);
    bool any = false;
    for (uint32_t a = 0; a < mt_.size(); ++a) {
      const RegexNode* d =
          derive(pool_, mt_, s->node, a, LocationCtx{false, false});
      if (d == s->node) {
        s->self_loop[a] = 1;
        any = true;
      }
    }
    s->can_skip = any;
    s->accel_ready.store(true, std::memory_order_release);
  }

  size_t size() const {
    std::lock_guard<std::mutex> lock(mu_);
    return states_.size();
  }

 private:
  Pool& pool_;
  const MintermTable& mt_;
  size_t max_states_;
  mutable std::mutex mu_;
  std::unordered_map<StateKey, std::unique_ptr<DfaState>, StateKeyHash> states_;
};

}  // namespace detail

class CompiledPattern {
 public:
  static CompiledPattern compile(std::string_view pattern,
                                 const CompileOptions& opts = {}) {
    auto pool = std::make_shared<Pool>(Pool::Options{
        opts.classes, opts.min_offset_only, opts.max_loop_bound});
    const RegexNode* r = parse(*pool, pattern, opts.parse);
    return CompiledPattern(std::move(pool), r, opts);
  }

  static CompiledPattern compile_node(std::shared_ptr<Pool> pool,
                                      const RegexNode* r,
                                      const CompileOptions& opts = {}) {
    return CompiledPattern(std::move(pool), r, opts);
  }

  // Leftmost-longest match: minimal start, then maximal end for that start.
  std::optional<Span> find(std::span<const uint32_t> text,
                           const MatchOptions& opts = {}) const {
    int64_t k = max_end_backward(text, opts);
    if (k < 0) return std::nullopt;
    int64_t i = static_cast<int64_t>(text.size()) - k;
    int64_t j = max_end_forward(text, static_cast<size_t>(i), opts);
    if (j < 0) return std::nullopt;  // unreachable for well-formed patterns
    return Span{i, j};
  }

  // All nonoverlapping leftmost-longest matches in ascending start order.
  std::vector<Span> find_all(std::span<const uint32_t> text,
                             const MatchOptions& opts = {}) const {
    if (pool_->min_offset_only())
      throw std::logic_error(
          "find_all requires a pattern compiled with the full offset mode");
    const int64_t n = static_cast<int64_t>(text.size());
    RangeList rev_ends;
    walk(text, /*backward=*/true, 0, bwd_search_, &rev_ends, opts);
    RangeList starts;
    for (const auto& r : rev_ends.ranges()) starts.insert(n - r.hi, n - r.lo);
    std::vector<Span> out;
    while (!starts.empty()) {
      int64_t i = starts.min();
      int64_t j = max_end_forward(text, static_cast<size_t>(i), opts);
      if (j < 0) {  // not reachable; defensive progress
        starts.drop_below(i + 1);
        continue;
      }
      out.push_back(Span{i, j});
      starts.drop_below(std::max(i + 1, j));
    }
    return out;
  }

  // Maximal match end from a fixed start (the body-plus-lookahead pattern).
  int64_t max_end_forward(std::span<const uint32_t> text, size_t from,
                          const MatchOptions& opts = {}) const {
    return walk(text, /*backward=*/false, from, fwd_fixed_, nullptr, opts);
  }

  // Maximal end over the reversed input with the reversed pattern; the
  // result k corresponds to the leftmost match start |s| - k.
  int64_t max_end_backward(std::span<const uint32_t> text,
                           const MatchOptions& opts = {}) const {
    return walk(text, /*backward=*/true, 0, bwd_search_, nullptr, opts);
  }

  // All match ends, in walk coordinates.
  RangeList all_ends_forward(std::span<const uint32_t> text, size_t from,
                             const MatchOptions& opts = {}) const {
    RangeList ends;
    walk(text, false, from, fwd_fixed_, &ends, opts);
    return ends;
  }

  RangeList all_ends_backward(std::span<const uint32_t> text,
                              const MatchOptions& opts = {}) const {
    RangeList ends;
    walk(text, true, 0, bwd_search_, &ends, opts);
    return ends;
  }

  // Eagerly explores the annotation-free automaton; stops after cap states.
  // Returns the number of states constructed (cap+1 means "exceeded").
  size_t explore_full(size_t cap, bool backward = false) const {
    Pool& pool = *pool_;
    std::vector<const RegexNode*> queue{backward ? bwd_search_ : fwd_fixed_};
    std::unordered_map<const RegexNode*, bool> seen{{queue[0], true}};
    size_t count = 0;
    while (!queue.empty()) {
      const RegexNode* node = queue.back();
      queue.pop_back();
      if (++count > cap) return cap + 1;
      for (uint32_t a = 0; a < minterms_.size(); ++a) {
        const RegexNode* d = derive(pool, minterms_, node, a,
                                    LocationCtx{false, false});
        if (d->is_bottom() || d->has_annotation) continue;
        if (!seen.emplace(d, true).second) continue;
        queue.push_back(d);
      }
    }
    return count;
  }

  const Acceleration& prefix_info() const { return accel_; }
  const LnfTriple& lnf() const { return lnf_; }
  const RegexNode* forward_pattern() const { return fwd_fixed_; }
  const RegexNode* backward_pattern() const { return bwd_search_; }
  const MintermTable& minterms() const { return minterms_; }
  Pool& pool() const { return *pool_; }
  size_t state_count() const { return fwd_cache_->size() + bwd_cache_->size(); }

 private:
  CompiledPattern(std::shared_ptr<Pool> pool, const RegexNode* r,
                  const CompileOptions& opts)
      : pool_(std::move(pool)), max_states_(opts.max_states) {
    Pool& p = *pool_;
    lnf_ = to_lnf(p, r);
    fwd_fixed_ = p.mk_concat(lnf_.body, p.mk_look(true, true, lnf_.ahead));
    const RegexNode* rev_b = p.reverse(lnf_.behind);
    const RegexNode* rev_e = p.reverse(lnf_.body);
    const RegexNode* rev_a = p.reverse(lnf_.ahead);
    bwd_search_ = p.mk_concat(
        p.top_star(),
        p.mk_concat(rev_a,
                    p.mk_concat(rev_e, p.mk_look(true, true, rev_b))));
    std::vector<CharPredicate> leaves;
    collect_leaf_predicates(fwd_fixed_, leaves);
    collect_leaf_predicates(bwd_search_, leaves);
    minterms_ = MintermTable::build(leaves);
    fwd_cache_ = std::make_unique<detail::TransitionCache>(p, minterms_,
                                                           opts.max_states);
    bwd_cache_ = std::make_unique<detail::TransitionCache>(p, minterms_,
                                                           opts.max_states);
    compute_acceleration();
  }

  void compute_acceleration() {
    Pool& p = *pool_;
    const LocationCtx gen{false, false};
    const RegexNode* node = fwd_fixed_;
    std::vector<uint32_t> chain;
    if (!fwd_fixed_->has_anchor) {
      while (!node->is_bottom() && !node->has_annotation &&
             !nullable(node, gen) && chain.size() < 64) {
        uint32_t live_id = 0;
        size_t live = 0;
        for (uint32_t a = 0; a < minterms_.size() && live < 2; ++a) {
          if (!derive(p, minterms_, node, a, gen)->is_bottom()) {
            live_id = a;
            ++live;
          }
        }
        if (live != 1 || minterms_.minterm(live_id).size() != 1) break;
        chain.push_back(minterms_.representative(live_id));
        node = derive(p, minterms_, node, live_id, gen);
      }
    }
    if (chain.size() >= 2) {
      accel_.kind = Acceleration::Kind::Literal;
      accel_.literal = std::move(chain);
      accel_.resume = node;
      return;
    }
    // first-character skip set
    node = fwd_fixed_;
    if (!node->is_bottom() && !nullable(node, gen) && !node->has_annotation) {
      CharPredicate set;
      for (uint32_t a = 0; a < minterms_.size(); ++a)
        if (!derive(p, minterms_, node, a, gen)->is_bottom())
          set = pred_union(set, minterms_.minterm(a));
      if (!set.is_empty() && !set.is_all()) {
        accel_.kind = Acceleration::Kind::FirstSet;
        accel_.first_set = std::move(set);
      }
    }
  }

  // The shared walker. Records pending offsets at every location; at the
  // final location works on the end-anchor-eliminated regex. Returns the
  // maximal recorded end, and collects every end into *ends when given.
  int64_t walk(std::span<const uint32_t> text, bool backward, size_t from,
               const RegexNode* start, RangeList* ends,
               const MatchOptions& opts) const {
    Pool& pool = *pool_;
    detail::TransitionCache& cache = backward ? *bwd_cache_ : *fwd_cache_;
    const size_t n = text.size();
    const auto char_at = [&](size_t pos) {
      return backward ? text[n - 1 - pos] : text[pos];
    };
    int64_t m = -1;
    const auto record = [&](size_t pos, const OffsetSet* I) {
      if (!I) return;
      const int64_t p = static_cast<int64_t>(pos);
      if (ends) {
        for (const auto& r : I->blocks.ranges())
          ends->insert(p - (I->base + r.hi), p - (I->base + r.lo));
      }
      m = std::max(m, p - I->min());
    };

    size_t pos = from;
    const RegexNode* transient = nullptr;
    detail::DfaState* st = nullptr;
    if (start->has_annotation)
      transient = start;
    else
      st = cache.state_for(start, pos == 0, opts.stats);

    // literal-prefix jump for the fixed-start forward pattern
    if (!backward && opts.acceleration &&
        accel_.kind == Acceleration::Kind::Literal && st &&
        st->node == fwd_fixed_ && pos + accel_.literal.size() <= n) {
      bool match = true;
      for (size_t k = 0; k < accel_.literal.size(); ++k)
        if (text[pos + k] != accel_.literal[k]) {
          match = false;
          break;
        }
      if (!match) return -1;
      pos += accel_.literal.size();
      if (opts.stats) opts.stats->chars_skipped += accel_.literal.size();
      st = cache.state_for(accel_.resume, false, opts.stats);
    }

    while (true) {
      const RegexNode* node = st ? st->node : transient;
      if (pos >= n) {
        const LocationCtx fin{pos == 0, true};
        const RegexNode* fz = elim_z(pool, node);
        const OffsetSet* I = nullable_offsets(pool, fz, fin);
        record(pos, I);
        if (opts.trace) opts.trace->push_back({static_cast<int64_t>(pos), fz, I});
        return m;
      }
      if (node->is_bottom()) return m;
      const LocationCtx ctx{pos == 0, false};
      const OffsetSet* I =
          st ? st->pending : nullable_offsets(pool, node, ctx);
      record(pos, I);
      if (opts.trace) opts.trace->push_back({static_cast<int64_t>(pos), node, I});
      if (st && opts.acceleration && !I && !opts.trace) {
        cache.accelerate(st);
        if (st->can_skip) {
          while (pos < n && st->self_loop[minterms_.classify(char_at(pos))]) {
            ++pos;
            if (opts.stats) opts.stats->chars_skipped++;
          }
          if (pos >= n) continue;
        }
      }
      const uint32_t a = minterms_.classify(char_at(pos));
      if (st) {
        detail::DfaState* nxt = cache.step(st, a, &transient, opts.stats);
        if (!nxt) st = nullptr;  // continue symbolically on transient
        else st = nxt;
      } else {
        transient = derive(pool, minterms_, transient, a, ctx);
        if (!transient->has_annotation) {
          st = cache.state_for(transient, false, opts.stats);
          transient = nullptr;
        }
      }
      if (opts.stats) opts.stats->transitions++;
      ++pos;
    }
  }

  std::shared_ptr<Pool> pool_;
  LnfTriple lnf_{};
  const RegexNode* fwd_fixed_ = nullptr;
  const RegexNode* bwd_search_ = nullptr;
  MintermTable minterms_;
  size_t max_states_;
  std::unique_ptr<detail::TransitionCache> fwd_cache_;
  std::unique_ptr<detail::TransitionCache> bwd_cache_;
  Acceleration accel_;
};

}  // namespace resharp
