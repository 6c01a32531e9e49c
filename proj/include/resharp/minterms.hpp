// Minterm computation: the coarsest partition of the character domain such
// that every leaf predicate of a compiled pattern is a union of blocks.
// Characters in the same block are indistinguishable to the pattern, so all
// derivative computation and transition caching is per block, not per
// character.
#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <vector>

#include "resharp/charpred.hpp"
#include "resharp/errors.hpp"

namespace resharp {

class MintermTable {
 public:
  // leaves: the leaf predicates of one compiled pattern (forward, backward
  // and lookaround subterms together). An empty set yields the single
  // minterm over the full domain.
  static MintermTable build(const std::vector<CharPredicate>& leaves,
                            size_t max_blocks = size_t{1} << 16) {
    std::vector<CodePoint> cuts;
    cuts.push_back(0);
    for (const auto& leaf : leaves) {
      for (const auto& r : leaf.ranges()) {
        cuts.push_back(r.lo);
        if (r.hi < kMaxCodePoint) cuts.push_back(r.hi + 1);
      }
    }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    // Group elementary intervals by their leaf-membership signature.
    const size_t words = (leaves.size() + 63) / 64;
    std::map<std::vector<uint64_t>, uint32_t> groups;
    MintermTable t;
    std::vector<std::vector<CharRange>> block_ranges;
    std::vector<uint64_t> sig(words);
    for (size_t ci = 0; ci < cuts.size(); ++ci) {
      CodePoint lo = cuts[ci];
      CodePoint hi = ci + 1 < cuts.size() ? cuts[ci + 1] - 1 : kMaxCodePoint;
      std::fill(sig.begin(), sig.end(), 0);
      for (size_t k = 0; k < leaves.size(); ++k)
        if (leaves[k].contains(lo)) sig[k / 64] |= uint64_t{1} << (k % 64);
      auto [it, fresh] = groups.emplace(sig, static_cast<uint32_t>(block_ranges.size()));
      if (fresh) {
        if (block_ranges.size() >= max_blocks)
          throw MintermOverflow(block_ranges.size() + 1);
        block_ranges.emplace_back();
      }
      block_ranges[it->second].push_back({lo, hi});
      t.classifier_.emplace_back(lo, it->second);
    }
    for (auto& rs : block_ranges)
      t.minterms_.push_back(CharPredicate::from_ranges(std::move(rs)));
    return t;
  }

  size_t size() const { return minterms_.size(); }

  const CharPredicate& minterm(uint32_t id) const { return minterms_[id]; }

  uint32_t classify(CodePoint c) const {
    size_t lo = 0, hi = classifier_.size();
    while (lo + 1 < hi) {
      size_t mid = (lo + hi) / 2;
      if (classifier_[mid].first <= c)
        lo = mid;
      else
        hi = mid;
    }
    return classifier_[lo].second;
  }

  // A representative code point of block id. A compiled leaf predicate
  // either contains the whole block or none of it, so one member decides
  // block inclusion.
  CodePoint representative(uint32_t id) const { return minterms_[id].min(); }

  bool block_in(uint32_t id, const CharPredicate& pred) const {
    return pred.contains(representative(id));
  }

 private:
  std::vector<CharPredicate> minterms_;
  std::vector<std::pair<CodePoint, uint32_t>> classifier_;
};

}  // namespace resharp
