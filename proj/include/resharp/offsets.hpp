// Pending-offset sets: the annotation I of an annotated lookahead (?=A)[I]
// or annotated epsilon. An OffsetSet denotes { base + x | x in blocks } and
// remembers, as backward distances from the current location, where the
// match body had already ended while the lookahead is still being verified.
//
// Blocks are normalized so their minimum is 0; incrementing the whole set is
// then a base bump and min() is just base. Sets are interned by the pool and
// compared by pointer.
#pragma once

#include <cstdint>

#include "resharp/util.hpp"

namespace resharp {

struct OffsetSet {
  int64_t base = 0;
  RangeList blocks;  // normalized: non-empty, blocks.min() == 0

  static OffsetSet singleton(int64_t v) {
    OffsetSet s;
    s.base = v;
    s.blocks.insert(0);
    return s;
  }

  static OffsetSet normalized(int64_t base, const RangeList& raw) {
    OffsetSet s;
    int64_t shift = raw.min();
    s.base = base + shift;
    for (const auto& r : raw.ranges()) s.blocks.insert(r.lo - shift, r.hi - shift);
    return s;
  }

  int64_t min() const { return base; }
  int64_t max() const { return base + blocks.max(); }

  std::vector<int64_t> elements() const {
    std::vector<int64_t> out = blocks.elements();
    for (auto& v : out) v += base;
    return out;
  }

  bool operator==(const OffsetSet&) const = default;

  size_t hash() const {
    return hash_combine(static_cast<size_t>(base), blocks.hash());
  }
};

inline OffsetSet offsets_increment(const OffsetSet& s) {
  OffsetSet out = s;
  out.base += 1;
  return out;
}

inline OffsetSet offsets_union_full(const OffsetSet& a, const OffsetSet& b) {
  RangeList merged;
  for (const auto& r : a.blocks.ranges()) merged.insert(a.base + r.lo, a.base + r.hi);
  for (const auto& r : b.blocks.ranges()) merged.insert(b.base + r.lo, b.base + r.hi);
  return OffsetSet::normalized(0, merged);
}

}  // namespace resharp
