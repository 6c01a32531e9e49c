// Brute-force reference implementation of the span match semantics and
// leftmost-longest selection. This is the ground truth for differential
// testing; it enumerates spans and existential witnesses directly from the
// defining clauses, with memoization to keep nested complements tractable
// at small input sizes. Matcher-internal annotated nodes are rejected.
#pragma once

#include <span>
#include <unordered_map>
#include <vector>

#include "resharp/ast.hpp"
#include "resharp/errors.hpp"
#include "resharp/matcher.hpp"

namespace resharp {

inline constexpr size_t kOracleInputGuard = 64;

class Oracle {
 public:
  Oracle(std::span<const uint32_t> text) : text_(text) {}

  bool models(int64_t i, int64_t j, const RegexNode* r) {
    if (i > j || i < 0 || j > static_cast<int64_t>(text_.size()))
      return false;
    MemoKey key{r->id, 0, 0, static_cast<uint32_t>(i), static_cast<uint32_t>(j)};
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;
    bool v = eval(i, j, r);
    memo_.emplace(key, v);
    return v;
  }

  bool models(Span s, const RegexNode* r) { return models(s.start, s.end, r); }

 private:
  struct MemoKey {
    uint32_t id, lo, hi, i, j;
    bool operator==(const MemoKey&) const = default;
  };
  struct MemoKeyHash {
    size_t operator()(const MemoKey& k) const {
      size_t h = k.id;
      h = hash_combine(h, k.lo);
      h = hash_combine(h, k.hi);
      h = hash_combine(h, k.i);
      return hash_combine(h, k.j);
    }
  };

  bool eval(int64_t i, int64_t j, const RegexNode* r) {
    const int64_t n = static_cast<int64_t>(text_.size());
    switch (r->kind) {
      case NodeKind::Pred:
        return j == i + 1 && pred_member(text_[static_cast<size_t>(i)], r->pred);
      case NodeKind::Epsilon:
        if (r->offsets) throw std::logic_error("oracle: annotated epsilon");
        return i == j;
      case NodeKind::BeginAnchor:
        return i == j && i == 0;
      case NodeKind::EndAnchor:
        return i == j && i == n;
      case NodeKind::Union:
        for (auto* m : r->members)
          if (models(i, j, m)) return true;
        return false;
      case NodeKind::Inter:
        for (auto* m : r->members)
          if (!models(i, j, m)) return false;
        return true;
      case NodeKind::ExtBool: {
        bool a = models(i, j, r->left);
        bool b = models(i, j, r->right);
        switch (r->op) {
          case BoolOp::Xor: return a != b;
          case BoolOp::Xnor: return a == b;
          case BoolOp::Implies: return !a || b;
          case BoolOp::Diff: return a && !b;
        }
        return false;
      }
      case NodeKind::Compl:
        return !models(i, j, r->body);
      case NodeKind::Concat:
        for (int64_t m = i; m <= j; ++m)
          if (models(i, m, r->left) && models(m, j, r->right)) return true;
        return false;
      case NodeKind::Loop:
        return loop_models(i, j, r->body, r->lo, r->hi);
      case NodeKind::Lookahead: {
        if (r->offsets) throw std::logic_error("oracle: annotated lookahead");
        if (i != j) return false;
        bool found = false;
        for (int64_t x = i; x <= n && !found; ++x)
          found = models(i, x, r->body);
        return r->positive == found;
      }
      case NodeKind::Lookbehind: {
        if (i != j) return false;
        bool found = false;
        for (int64_t x = 0; x <= i && !found; ++x)
          found = models(x, i, r->body);
        return r->positive == found;
      }
    }
    return false;
  }

  bool loop_models(int64_t i, int64_t j, const RegexNode* body, uint32_t lo,
                   uint32_t hi) {
    MemoKey key{body->id | 0x80000000u, lo, hi, static_cast<uint32_t>(i),
                static_cast<uint32_t>(j)};
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;
    bool v = loop_eval(i, j, body, lo, hi);
    memo_.emplace(key, v);
    return v;
  }

  bool loop_eval(int64_t i, int64_t j, const RegexNode* body, uint32_t lo,
                 uint32_t hi) {
    if (lo == 0 && i == j) return true;
    if (hi == 0) return i == j;
    const bool star_like = lo == 0 && hi == kInfinity;
    // an empty body iteration makes no progress; for star it can be skipped
    const int64_t first = star_like ? i + 1 : i;
    const uint32_t nlo = lo > 0 ? lo - 1 : 0;
    const uint32_t nhi = hi == kInfinity ? kInfinity : hi - 1;
    for (int64_t m = first; m <= j; ++m)
      if (models(i, m, body) && loop_models(m, j, body, nlo, nhi)) return true;
    return false;
  }

  std::span<const uint32_t> text_;
  std::unordered_map<MemoKey, bool, MemoKeyHash> memo_;
};

// All nonoverlapping leftmost-longest matches, straight from the semantics:
// repeatedly take the minimal start with any match, the maximal end for it,
// then require the next start to be strictly later and at or past the end.
inline std::vector<Span> oracle_ll_matches(std::span<const uint32_t> text,
                                           const RegexNode* r) {
  if (text.size() > kOracleInputGuard)
    throw InputTooLarge(text.size(), kOracleInputGuard);
  Oracle oracle(text);
  const int64_t n = static_cast<int64_t>(text.size());
  std::vector<Span> out;
  int64_t bound = 0;
  for (int64_t i = 0; i <= n; ++i) {
    if (i < bound) continue;
    for (int64_t j = n; j >= i; --j) {
      if (oracle.models(i, j, r)) {
        out.push_back(Span{i, j});
        bound = std::max(i + 1, j);
        break;
      }
    }
  }
  return out;
}

}  // namespace resharp
