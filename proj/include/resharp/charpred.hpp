// Character predicates: the effective Boolean algebra the engine runs over.
//
// A predicate is kept in canonical form (sorted, disjoint, non-adjacent
// inclusive ranges of Unicode scalar values), so structural equality
// coincides with semantic equivalence and set operations stay linear in
// the number of ranges.
#pragma once

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "resharp/errors.hpp"
#include "resharp/util.hpp"

namespace resharp {

using CodePoint = uint32_t;
inline constexpr CodePoint kMaxCodePoint = 0x10FFFF;

struct CharRange {
  CodePoint lo;
  CodePoint hi;
  bool operator==(const CharRange&) const = default;
};

class CharPredicate {
 public:
  CharPredicate() = default;  // bottom

  static CharPredicate none() { return CharPredicate(); }

  static CharPredicate all() {
    CharPredicate p;
    p.ranges_.push_back({0, kMaxCodePoint});
    return p;
  }

  static CharPredicate single(CodePoint c) { return range(c, c); }

  static CharPredicate range(CodePoint lo, CodePoint hi) {
    CharPredicate p;
    if (lo <= hi) p.ranges_.push_back({lo, std::min(hi, kMaxCodePoint)});
    return p;
  }

  // Normalizes an arbitrary range collection into canonical form.
  static CharPredicate from_ranges(std::vector<CharRange> rs) {
    std::sort(rs.begin(), rs.end(),
              [](const CharRange& a, const CharRange& b) { return a.lo < b.lo; });
    CharPredicate p;
    for (const auto& r : rs) {
      if (r.lo > r.hi) continue;
      if (!p.ranges_.empty() && r.lo <= p.ranges_.back().hi + 1) {
        p.ranges_.back().hi = std::max(p.ranges_.back().hi, r.hi);
      } else {
        p.ranges_.push_back(r);
      }
    }
    return p;
  }

  bool is_empty() const { return ranges_.empty(); }

  bool is_all() const {
    return ranges_.size() == 1 && ranges_[0].lo == 0 &&
           ranges_[0].hi == kMaxCodePoint;
  }

  bool contains(CodePoint c) const {
    size_t lo = 0, hi = ranges_.size();
    while (lo < hi) {
      size_t mid = (lo + hi) / 2;
      if (c < ranges_[mid].lo)
        hi = mid;
      else if (c > ranges_[mid].hi)
        lo = mid + 1;
      else
        return true;
    }
    return false;
  }

  const std::vector<CharRange>& ranges() const { return ranges_; }

  // Count of code points denoted.
  uint64_t size() const {
    uint64_t n = 0;
    for (const auto& r : ranges_) n += static_cast<uint64_t>(r.hi) - r.lo + 1;
    return n;
  }

  CodePoint min() const { return ranges_.front().lo; }

  bool operator==(const CharPredicate&) const = default;

  size_t hash() const {
    size_t h = ranges_.size();
    for (const auto& r : ranges_) {
      h = hash_combine(h, r.lo);
      h = hash_combine(h, r.hi);
    }
    return h;
  }

 private:
  std::vector<CharRange> ranges_;
};

inline CharPredicate pred_union(const CharPredicate& a, const CharPredicate& b) {
  std::vector<CharRange> rs;
  rs.reserve(a.ranges().size() + b.ranges().size());
  rs.insert(rs.end(), a.ranges().begin(), a.ranges().end());
  rs.insert(rs.end(), b.ranges().begin(), b.ranges().end());
  return CharPredicate::from_ranges(std::move(rs));
}

inline CharPredicate pred_inter(const CharPredicate& a, const CharPredicate& b) {
  std::vector<CharRange> rs;
  size_t i = 0, j = 0;
  const auto& ra = a.ranges();
  const auto& rb = b.ranges();
  while (i < ra.size() && j < rb.size()) {
    CodePoint lo = std::max(ra[i].lo, rb[j].lo);
    CodePoint hi = std::min(ra[i].hi, rb[j].hi);
    if (lo <= hi) rs.push_back({lo, hi});
    if (ra[i].hi < rb[j].hi)
      ++i;
    else
      ++j;
  }
  return CharPredicate::from_ranges(std::move(rs));
}

inline CharPredicate pred_compl(const CharPredicate& a) {
  std::vector<CharRange> rs;
  CodePoint next = 0;
  bool open = true;
  for (const auto& r : a.ranges()) {
    if (r.lo > next) rs.push_back({next, r.lo - 1});
    if (r.hi == kMaxCodePoint) {
      open = false;
      break;
    }
    next = r.hi + 1;
  }
  if (open) rs.push_back({next, kMaxCodePoint});
  return CharPredicate::from_ranges(std::move(rs));
}

inline CharPredicate pred_diff(const CharPredicate& a, const CharPredicate& b) {
  return pred_inter(a, pred_compl(b));
}

inline bool pred_member(CodePoint c, const CharPredicate& a) {
  return a.contains(c);
}

inline bool pred_is_empty(const CharPredicate& a) { return a.is_empty(); }

inline bool pred_subset(const CharPredicate& a, const CharPredicate& b) {
  return pred_union(a, b) == b;
}

// Widens a predicate with its simple case-folded counterparts (ASCII pairs).
inline CharPredicate case_widen(const CharPredicate& p) {
  const CharPredicate lower_hits = pred_inter(p, CharPredicate::range('a', 'z'));
  const CharPredicate upper_hits = pred_inter(p, CharPredicate::range('A', 'Z'));
  std::vector<CharRange> extra;
  for (const auto& r : lower_hits.ranges())
    extra.push_back({r.lo - 32, r.hi - 32});
  for (const auto& r : upper_hits.ranges())
    extra.push_back({r.lo + 32, r.hi + 32});
  if (extra.empty()) return p;
  CharPredicate out = p;
  for (const auto& r : extra) out = pred_union(out, CharPredicate::range(r.lo, r.hi));
  return out;
}

// The \w, \d, \s class tables. Defaults are the ASCII tables; extended
// tables can be loaded from data files of hexadecimal "lo-hi" lines.
struct CharClassTable {
  CharPredicate digit;
  CharPredicate word;
  CharPredicate space;

  static CharClassTable ascii() {
    CharClassTable t;
    t.digit = CharPredicate::range('0', '9');
    t.word = CharPredicate::from_ranges({{'0', '9'},
                                         {'A', 'Z'},
                                         {'_', '_'},
                                         {'a', 'z'}});
    t.space = CharPredicate::from_ranges({{0x09, 0x0D}, {' ', ' '}});
    return t;
  }
};

// Parses a class data file: one "lo-hi" pair per line, hexadecimal code
// points; blank lines and lines starting with '#' are skipped.
inline CharPredicate load_ranges_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open class table file: " + path);
  std::vector<CharRange> rs;
  std::string line;
  size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    size_t start = line.find_first_not_of(" \t\r");
    if (start == std::string::npos || line[start] == '#') continue;
    size_t dash = line.find('-', start);
    if (dash == std::string::npos)
      throw std::runtime_error(path + ":" + std::to_string(lineno) +
                               ": expected lo-hi");
    uint32_t lo = 0, hi = 0;
    std::stringstream a(line.substr(start, dash - start));
    std::stringstream b(line.substr(dash + 1));
    a >> std::hex >> lo;
    b >> std::hex >> hi;
    if (a.fail() || b.fail() || lo > hi || hi > kMaxCodePoint)
      throw std::runtime_error(path + ":" + std::to_string(lineno) +
                               ": bad range");
    rs.push_back({lo, hi});
  }
  return CharPredicate::from_ranges(std::move(rs));
}

}  // namespace resharp
