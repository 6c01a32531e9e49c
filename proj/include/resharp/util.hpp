// Small shared utilities: hashing, sorted range lists, UTF-8 decoding.
#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace resharp {

inline size_t hash_combine(size_t seed, size_t v) {
  return seed ^ (v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

// Inclusive integer interval.
struct IndexRange {
  int64_t lo;
  int64_t hi;
  bool operator==(const IndexRange&) const = default;
};

// Sorted list of disjoint, non-adjacent inclusive ranges.
// Used both for pending-offset blocks and for match start/end index sets,
// so dense sets stay O(ranges) rather than O(elements).
class RangeList {
 public:
  RangeList() = default;

  bool empty() const { return rs_.empty(); }
  int64_t min() const { return rs_.front().lo; }
  int64_t max() const { return rs_.back().hi; }

  size_t range_count() const { return rs_.size(); }
  const std::vector<IndexRange>& ranges() const { return rs_; }

  int64_t element_count() const {
    int64_t n = 0;
    for (const auto& r : rs_) n += r.hi - r.lo + 1;
    return n;
  }

  void insert(int64_t lo, int64_t hi) {
    if (lo > hi) return;
    // locate first range with r.hi + 1 >= lo
    size_t i = 0;
    while (i < rs_.size() && rs_[i].hi + 1 < lo) ++i;
    size_t j = i;
    while (j < rs_.size() && rs_[j].lo <= hi + 1) {
      lo = std::min(lo, rs_[j].lo);
      hi = std::max(hi, rs_[j].hi);
      ++j;
    }
    rs_.erase(rs_.begin() + static_cast<ptrdiff_t>(i),
              rs_.begin() + static_cast<ptrdiff_t>(j));
    rs_.insert(rs_.begin() + static_cast<ptrdiff_t>(i), IndexRange{lo, hi});
  }

  void insert(int64_t v) { insert(v, v); }

  // Removes every element < bound.
  void drop_below(int64_t bound) {
    size_t i = 0;
    while (i < rs_.size() && rs_[i].hi < bound) ++i;
    rs_.erase(rs_.begin(), rs_.begin() + static_cast<ptrdiff_t>(i));
    if (!rs_.empty() && rs_.front().lo < bound) rs_.front().lo = bound;
  }

  bool contains(int64_t v) const {
    for (const auto& r : rs_) {
      if (v < r.lo) return false;
      if (v <= r.hi) return true;
    }
    return false;
  }

  std::vector<int64_t> elements() const {
    std::vector<int64_t> out;
    for (const auto& r : rs_)
      for (int64_t v = r.lo; v <= r.hi; ++v) out.push_back(v);
    return out;
  }

  bool operator==(const RangeList&) const = default;

  size_t hash() const {
    size_t h = rs_.size();
    for (const auto& r : rs_) {
      h = hash_combine(h, static_cast<size_t>(r.lo));
      h = hash_combine(h, static_cast<size_t>(r.hi));
    }
    return h;
  }

 private:
  std::vector<IndexRange> rs_;
};

// Decodes one UTF-8 scalar starting at s[i]; advances i. Malformed bytes
// decode as U+FFFD, one byte at a time.
inline uint32_t utf8_decode(std::string_view s, size_t& i) {
  const auto b0 = static_cast<uint8_t>(s[i]);
  auto cont = [&](size_t k) {
    return i + k < s.size() &&
           (static_cast<uint8_t>(s[i + k]) & 0xC0) == 0x80;
  };
  auto cb = [&](size_t k) {
    return static_cast<uint32_t>(static_cast<uint8_t>(s[i + k]) & 0x3F);
  };
  if (b0 < 0x80) {
    i += 1;
    return b0;
  }
  if ((b0 & 0xE0) == 0xC0 && cont(1)) {
    uint32_t cp = (static_cast<uint32_t>(b0 & 0x1F) << 6) | cb(1);
    i += 2;
    return cp >= 0x80 ? cp : 0xFFFD;
  }
  if ((b0 & 0xF0) == 0xE0 && cont(1) && cont(2)) {
    uint32_t cp = (static_cast<uint32_t>(b0 & 0x0F) << 12) | (cb(1) << 6) | cb(2);
    i += 3;
    return cp >= 0x800 ? cp : 0xFFFD;
  }
  if ((b0 & 0xF8) == 0xF0 && cont(1) && cont(2) && cont(3)) {
    uint32_t cp = (static_cast<uint32_t>(b0 & 0x07) << 18) | (cb(1) << 12) |
                  (cb(2) << 6) | cb(3);
    i += 4;
    return (cp >= 0x10000 && cp <= 0x10FFFF) ? cp : 0xFFFD;
  }
  i += 1;
  return 0xFFFD;
}

inline void utf8_encode(uint32_t cp, std::string& out) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

struct DecodedText {
  std::vector<uint32_t> points;
  std::vector<size_t> byte_offset;  // byte offset of each point, plus end
};

inline DecodedText utf8_decode_all(std::string_view s) {
  DecodedText t;
  t.points.reserve(s.size());
  t.byte_offset.reserve(s.size() + 1);
  size_t i = 0;
  while (i < s.size()) {
    t.byte_offset.push_back(i);
    t.points.push_back(utf8_decode(s, i));
  }
  t.byte_offset.push_back(s.size());
  return t;
}

}  // namespace resharp
