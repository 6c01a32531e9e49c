// Parser for the extended concrete syntax: .NET-style classes and
// lookarounds plus intersection (&), complement (~) and the full wildcard
// (_), with escaped \& \~ \_ as literals. Extended Boolean operators are
// accepted through their Unicode symbols only. Groups do not capture.
//
// Anchors are desugared at parse time:
//   ^  -> (?<=\A|\n)      $  -> (?=\z|\n)       (line anchors; see flags)
//   \Z -> (?=\n\z|\z)
//   \b -> (?<!\w) left of a word-consuming atom, (?!\w) right of one,
//         otherwise the full boundary disjunction; \B dually.
#pragma once

#include <string_view>
#include <vector>

#include "resharp/ast.hpp"
#include "resharp/errors.hpp"

namespace resharp {

struct ParseFlags {
  bool ignore_case = false;
  // When true (default), ^ and $ are the line anchors above; when false
  // they desugar to \A and \z.
  bool multiline_anchors = true;
};

namespace detail {

class Parser {
 public:
  Parser(Pool& pool, std::string_view pattern, ParseFlags flags)
      : pool_(pool), flags_(flags) {
    size_t i = 0;
    while (i < pattern.size()) {
      positions_.push_back(i);
      cps_.push_back(utf8_decode(pattern, i));
    }
  }

  const RegexNode* parse() {
    const RegexNode* r = parse_alternation();
    if (!at_end()) fail("unbalanced ')'");
    return r;
  }

 private:
  enum : uint32_t { kXorSym = 0x2295, kXnorSym = 0x2299, kImpliesSym = 0x2192,
                    kDiffSym = 0x219B };

  bool at_end() const { return i_ >= cps_.size(); }
  uint32_t peek() const { return i_ < cps_.size() ? cps_[i_] : 0; }
  uint32_t peek2() const { return i_ + 1 < cps_.size() ? cps_[i_ + 1] : 0; }
  uint32_t take() { return cps_[i_++]; }
  size_t here() const {
    return i_ < positions_.size() ? positions_[i_]
                                  : (positions_.empty() ? 0 : positions_.back() + 1);
  }
  [[noreturn]] void fail(const std::string& msg) { throw ParseError(here(), msg); }

  const RegexNode* parse_alternation() {
    const RegexNode* acc = parse_intersection();
    while (!at_end()) {
      uint32_t c = peek();
      if (c == '|') {
        take();
        acc = pool_.mk_union({acc, parse_intersection()});
      } else if (c == kXorSym || c == kXnorSym || c == kImpliesSym ||
                 c == kDiffSym) {
        take();
        BoolOp op = c == kXorSym      ? BoolOp::Xor
                    : c == kXnorSym   ? BoolOp::Xnor
                    : c == kImpliesSym ? BoolOp::Implies
                                       : BoolOp::Diff;
        acc = pool_.mk_extbool(op, acc, parse_intersection());
      } else {
        break;
      }
    }
    return acc;
  }

  const RegexNode* parse_intersection() {
    const RegexNode* acc = parse_sequence();
    while (!at_end() && peek() == '&') {
      take();
      acc = pool_.mk_inter({acc, parse_sequence()});
    }
    return acc;
  }

  // One concatenation run. Word-boundary markers are position-sensitive, so
  // the run is collected first and markers are resolved against their
  // neighbours afterwards.
  const RegexNode* parse_sequence() {
    struct Item {
      const RegexNode* node = nullptr;
      int marker = 0;  // 0 none, 'b' or 'B'
    };
    std::vector<Item> items;
    while (!at_end()) {
      uint32_t c = peek();
      if (c == '|' || c == '&' || c == ')' || c == kXorSym || c == kXnorSym ||
          c == kImpliesSym || c == kDiffSym)
        break;
      if (c == '\\' && (peek2() == 'b' || peek2() == 'B')) {
        take();
        items.push_back({nullptr, static_cast<int>(take())});
        continue;
      }
      items.push_back({parse_postfix(), 0});
    }
    const CharPredicate& w = pool_.classes().word;
    std::vector<const RegexNode*> seq;
    seq.reserve(items.size());
    for (size_t k = 0; k < items.size(); ++k) {
      if (!items[k].marker) {
        seq.push_back(items[k].node);
        continue;
      }
      const RegexNode* next = nullptr;
      for (size_t j = k + 1; j < items.size() && !next; ++j)
        if (items[j].node && !items[j].node->cond.is_empty()) next = items[j].node;
      const RegexNode* prev = nullptr;
      for (size_t j = k; j-- > 0 && !prev;)
        if (items[j].node && !items[j].node->cond.is_empty()) prev = items[j].node;
      seq.push_back(boundary_node(items[k].marker == 'b', next, prev, w));
    }
    return pool_.mk_concat_seq(seq);
  }

  const RegexNode* boundary_node(bool is_b, const RegexNode* next,
                                 const RegexNode* prev, const CharPredicate& w) {
    const RegexNode* wp = pool_.pred(w);
    if (next && pred_subset(next->cond, w))
      return pool_.mk_look(false, !is_b, wp);  // (?<!\w) resp. (?<=\w)
    if (prev && pred_subset(prev->cond, w))
      return pool_.mk_look(true, !is_b, wp);  // (?!\w) resp. (?=\w)
    // ambiguous placement: the full disjunction
    const RegexNode* behind_w = pool_.mk_look(false, true, wp);
    const RegexNode* behind_nw = pool_.mk_look(false, false, wp);
    const RegexNode* ahead_w = pool_.mk_look(true, true, wp);
    const RegexNode* ahead_nw = pool_.mk_look(true, false, wp);
    if (is_b)
      return pool_.mk_union({pool_.mk_concat(behind_w, ahead_nw),
                             pool_.mk_concat(behind_nw, ahead_w)});
    return pool_.mk_union({pool_.mk_concat(behind_w, ahead_w),
                           pool_.mk_concat(behind_nw, ahead_nw)});
  }

  const RegexNode* parse_postfix() {
    const RegexNode* atom = parse_atom();
    while (!at_end()) {
      uint32_t c = peek();
      uint32_t lo = 0, hi = 0;
      if (c == '*') {
        take();
        atom = pool_.mk_loop(atom, 0, kInfinity);
      } else if (c == '+') {
        take();
        atom = pool_.mk_loop(atom, 1, kInfinity);
      } else if (c == '?') {
        take();
        atom = pool_.mk_loop(atom, 0, 1);
      } else if (c == '{' && parse_bounds(lo, hi)) {
        atom = pool_.mk_loop(atom, lo, hi);
      } else {
        break;
      }
      if (!at_end() && peek() == '?') take();  // lazy marker: no-op under POSIX
      if (!at_end() && peek() == '+')
        throw Unsupported(here(), "possessive quantifier");
    }
    return atom;
  }

  // {m} {m,} {m,n}; returns false (consuming nothing) when not a bound,
  // in which case '{' is a literal.
  bool parse_bounds(uint32_t& lo, uint32_t& hi) {
    size_t save = i_;
    take();  // '{'
    if (at_end() || !is_digit(peek())) {
      i_ = save;
      return false;
    }
    lo = parse_number();
    if (!at_end() && peek() == '}') {
      take();
      hi = lo;
      return true;
    }
    if (!at_end() && peek() == ',') {
      take();
      if (!at_end() && peek() == '}') {
        take();
        hi = kInfinity;
        return true;
      }
      if (!at_end() && is_digit(peek())) {
        hi = parse_number();
        if (!at_end() && peek() == '}') {
          take();
          return true;
        }
      }
    }
    i_ = save;
    return false;
  }

  static bool is_digit(uint32_t c) { return c >= '0' && c <= '9'; }

  uint32_t parse_number() {
    uint64_t v = 0;
    while (!at_end() && is_digit(peek())) {
      v = v * 10 + (take() - '0');
      if (v > kInfinity) fail("repetition count too large");
    }
    return static_cast<uint32_t>(v);
  }

  const RegexNode* parse_atom() {
    if (at_end()) return pool_.epsilon();
    uint32_t c = peek();
    switch (c) {
      case '(':
        return parse_group();
      case '[':
        return pool_.pred(widen(parse_class()));
      case '.':
        take();
        return pool_.dot();
      case '_':
        take();
        return pool_.top();
      case '~': {
        take();
        return pool_.mk_compl(parse_postfix());
      }
      case '^': {
        take();
        if (flags_.multiline_anchors)
          return pool_.mk_look(
              false, true,
              pool_.mk_union({pool_.begin_anchor(),
                              pool_.pred(CharPredicate::single('\n'))}));
        return pool_.begin_anchor();
      }
      case '$': {
        take();
        if (flags_.multiline_anchors)
          return pool_.mk_look(
              true, true,
              pool_.mk_union({pool_.end_anchor(),
                              pool_.pred(CharPredicate::single('\n'))}));
        return pool_.end_anchor();
      }
      case '\\':
        return parse_escape_atom();
      case '*':
      case '+':
      case '?':
        fail("quantifier without operand");
      default:
        take();
        return pool_.pred(widen(CharPredicate::single(c)));
    }
  }

  const RegexNode* parse_group() {
    take();  // '('
    ParseFlags saved = flags_;
    if (!at_end() && peek() == '?') {
      take();
      if (at_end()) fail("dangling '(?'");
      uint32_t c = peek();
      if (c == '=' || c == '!') {
        take();
        const RegexNode* body = parse_alternation();
        expect(')');
        flags_ = saved;
        return pool_.mk_look(true, c == '=', body);
      }
      if (c == '<') {
        take();
        if (at_end()) fail("dangling '(?<'");
        uint32_t d = peek();
        if (d == '=' || d == '!') {
          take();
          const RegexNode* body = parse_alternation();
          expect(')');
          flags_ = saved;
          return pool_.mk_look(false, d == '=', body);
        }
        throw Unsupported(here(), "named capture group");
      }
      if (c == '\'') throw Unsupported(here(), "named capture group");
      if (c == '>') throw Unsupported(here(), "atomic group");
      if (c == ':') {
        take();
        const RegexNode* body = parse_alternation();
        expect(')');
        flags_ = saved;
        return body;
      }
      // inline flags: (?i) (?im) (?-i) (?i:R)
      bool minus = false, any = false;
      while (!at_end()) {
        uint32_t f = peek();
        if (f == 'i') {
          take();
          flags_.ignore_case = !minus;
          any = true;
        } else if (f == 'm') {
          take();
          flags_.multiline_anchors = !minus;
          any = true;
        } else if (f == '-' && !minus) {
          take();
          minus = true;
        } else {
          break;
        }
      }
      if (!any) fail("unrecognized group construct");
      if (!at_end() && peek() == ':') {
        take();
        const RegexNode* body = parse_alternation();
        expect(')');
        flags_ = saved;
        return body;
      }
      if (!at_end() && peek() == ')') {
        take();
        // inline flags run to the end of the enclosing group: no restore
        return pool_.epsilon();
      }
      fail("malformed inline flags");
    }
    const RegexNode* body = parse_alternation();
    expect(')');
    flags_ = saved;
    return body;
  }

  void expect(uint32_t c) {
    if (at_end() || peek() != c)
      fail(std::string("expected '") + static_cast<char>(c) + "'");
    take();
  }

  CharPredicate widen(const CharPredicate& p) {
    return flags_.ignore_case ? case_widen(p) : p;
  }

  const RegexNode* parse_escape_atom() {
    take();  // backslash
    if (at_end()) fail("dangling escape");
    uint32_t c = peek();
    switch (c) {
      case 'A':
        take();
        return pool_.begin_anchor();
      case 'z':
        take();
        return pool_.end_anchor();
      case 'Z': {
        take();
        const RegexNode* nl = pool_.pred(CharPredicate::single('\n'));
        return pool_.mk_look(
            true, true,
            pool_.mk_union({pool_.mk_concat(nl, pool_.end_anchor()),
                            pool_.end_anchor()}));
      }
      case 'd':
      case 'D':
      case 'w':
      case 'W':
      case 's':
      case 'S':
        return pool_.pred(widen(class_escape(take())));
      case 'G':
        throw Unsupported(here(), "contiguous-match anchor \\G");
      default:
        if (c >= '1' && c <= '9')
          throw Unsupported(here(), "backreference");
        if (c == 'k')
          throw Unsupported(here(), "named backreference");
        return pool_.pred(widen(CharPredicate::single(char_escape())));
    }
  }

  CharPredicate class_escape(uint32_t c) {
    const CharClassTable& t = pool_.classes();
    switch (c) {
      case 'd': return t.digit;
      case 'D': return pred_compl(t.digit);
      case 'w': return t.word;
      case 'W': return pred_compl(t.word);
      case 's': return t.space;
      default:  return pred_compl(t.space);  // 'S'
    }
  }

  // Non-class escape, backslash already consumed; returns a code point.
  CodePoint char_escape() {
    uint32_t c = take();
    switch (c) {
      case 'n': return '\n';
      case 'r': return '\r';
      case 't': return '\t';
      case 'f': return '\f';
      case 'v': return '\v';
      case 'a': return '\a';
      case 'e': return 0x1B;
      case '0': return '\0';
      case 'x': {
        if (!at_end() && peek() == '{') {
          take();
          CodePoint v = parse_hex(1, 6);
          expect('}');
          return v;
        }
        return parse_hex(2, 2);
      }
      case 'u':
        return parse_hex(4, 4);
      default:
        if ((c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z'))
          fail("unrecognized escape");
        return c;  // escaped punctuation, including \& \~ \_
    }
  }

  CodePoint parse_hex(size_t min_digits, size_t max_digits) {
    uint64_t v = 0;
    size_t n = 0;
    while (n < max_digits && !at_end()) {
      uint32_t c = peek();
      uint32_t d;
      if (c >= '0' && c <= '9')
        d = c - '0';
      else if (c >= 'a' && c <= 'f')
        d = c - 'a' + 10;
      else if (c >= 'A' && c <= 'F')
        d = c - 'A' + 10;
      else
        break;
      take();
      v = v * 16 + d;
      ++n;
    }
    if (n < min_digits) fail("malformed hex escape");
    if (v > kMaxCodePoint) fail("code point out of range");
    return static_cast<CodePoint>(v);
  }

  CharPredicate parse_class() {
    take();  // '['
    bool negate = false;
    if (!at_end() && peek() == '^') {
      take();
      negate = true;
    }
    CharPredicate acc;
    bool first = true;
    while (true) {
      if (at_end()) fail("unterminated character class");
      uint32_t c = peek();
      if (c == ']' && !first) {
        take();
        break;
      }
      first = false;
      // one class item: literal/escape, possibly a range
      bool have_point = false;
      CodePoint lo = 0;
      if (c == '\\') {
        take();
        if (at_end()) fail("dangling escape in class");
        uint32_t e = peek();
        if (e == 'd' || e == 'D' || e == 'w' || e == 'W' || e == 's' ||
            e == 'S') {
          acc = pred_union(acc, class_escape(take()));
        } else if (e == 'b') {
          take();
          lo = 0x08;  // backspace inside classes
          have_point = true;
        } else {
          lo = char_escape();
          have_point = true;
        }
      } else {
        take();
        lo = c;
        have_point = true;
      }
      if (!have_point) continue;
      if (!at_end() && peek() == '-' && peek2() != ']' && i_ + 1 < cps_.size()) {
        take();  // '-'
        CodePoint hi;
        if (peek() == '\\') {
          take();
          uint32_t e = peek();
          if (e == 'd' || e == 'D' || e == 'w' || e == 'W' || e == 's' ||
              e == 'S')
            fail("invalid range endpoint");
          hi = char_escape();
        } else {
          hi = take();
        }
        if (hi < lo) fail("range out of order");
        acc = pred_union(acc, CharPredicate::range(lo, hi));
      } else {
        acc = pred_union(acc, CharPredicate::single(lo));
      }
    }
    return negate ? pred_compl(acc) : acc;
  }

  Pool& pool_;
  ParseFlags flags_;
  std::vector<uint32_t> cps_;
  std::vector<size_t> positions_;
  size_t i_ = 0;
};

}  // namespace detail

inline const RegexNode* parse(Pool& pool, std::string_view pattern,
                              ParseFlags flags = {}) {
  return detail::Parser(pool, pattern, flags).parse();
}

}  // namespace resharp
