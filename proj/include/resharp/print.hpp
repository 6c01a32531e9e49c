// Pattern printer. Emits round-trippable concrete syntax for ordinary nodes;
// matcher-internal annotations (pending offset sets) print as a [{...}]
// suffix for traces and diagnostics only.
#pragma once

#include <string>

#include "resharp/ast.hpp"

namespace resharp {

namespace detail {

inline void print_class_char(CodePoint c, bool in_class, std::string& out) {
  static constexpr const char* kTop = "\\.^$|&~_*+?()[]{}";
  if (c == '\n') {
    out += "\\n";
  } else if (c == '\r') {
    out += "\\r";
  } else if (c == '\t') {
    out += "\\t";
  } else if (c < 0x20 || c == 0x7F) {
    char buf[16];
    snprintf(buf, sizeof buf, "\\x%02X", c);
    out += buf;
  } else if (in_class && (c == ']' || c == '\\' || c == '^' || c == '-')) {
    out.push_back('\\');
    out.push_back(static_cast<char>(c));
  } else if (!in_class && c < 0x80 &&
             std::string_view(kTop).find(static_cast<char>(c)) !=
                 std::string_view::npos) {
    out.push_back('\\');
    out.push_back(static_cast<char>(c));
  } else {
    utf8_encode(c, out);
  }
}

inline void print_pred(const CharPredicate& p, std::string& out) {
  if (p.is_empty()) {
    out += "[^\\x{0}-\\x{10FFFF}]";
    return;
  }
  if (p.is_all()) {
    out += "_";
    return;
  }
  if (p == pred_compl(CharPredicate::single('\n'))) {
    out += ".";
    return;
  }
  if (p.size() == 1) {
    print_class_char(p.ranges()[0].lo, false, out);
    return;
  }
  const CharPredicate neg = pred_compl(p);
  const bool negate = neg.ranges().size() < p.ranges().size();
  const CharPredicate& body = negate ? neg : p;
  out += negate ? "[^" : "[";
  for (const auto& r : body.ranges()) {
    print_class_char(r.lo, true, out);
    if (r.hi > r.lo) {
      if (r.hi > r.lo + 1) out.push_back('-');
      print_class_char(r.hi, true, out);
    }
  }
  out.push_back(']');
}

inline void print_offsets(const OffsetSet* I, std::string& out) {
  out += "[{";
  bool first = true;
  for (const auto& r : I->blocks.ranges()) {
    if (!first) out.push_back(',');
    first = false;
    out += std::to_string(I->base + r.lo);
    if (r.hi > r.lo) {
      out += "..";
      out += std::to_string(I->base + r.hi);
    }
  }
  out += "}]";
}

// precedence: 0 union/extbool, 1 inter, 2 concat, 3 postfix, 4 atom
inline void print_node(const RegexNode* r, int parent_prec, std::string& out) {
  auto paren = [&](int prec, auto&& fn) {
    bool need = prec < parent_prec;
    if (need) out += "(?:";
    fn();
    if (need) out.push_back(')');
  };
  switch (r->kind) {
    case NodeKind::Pred:
      print_pred(r->pred, out);
      break;
    case NodeKind::Epsilon:
      out += "()";
      if (r->offsets) print_offsets(r->offsets, out);
      break;
    case NodeKind::BeginAnchor:
      out += "\\A";
      break;
    case NodeKind::EndAnchor:
      out += "\\z";
      break;
    case NodeKind::Union:
      paren(0, [&] {
        bool first = true;
        for (auto* m : r->members) {
          if (!first) out.push_back('|');
          first = false;
          print_node(m, 1, out);
        }
      });
      break;
    case NodeKind::Inter:
      paren(1, [&] {
        bool first = true;
        for (auto* m : r->members) {
          if (!first) out.push_back('&');
          first = false;
          print_node(m, 2, out);
        }
      });
      break;
    case NodeKind::ExtBool:
      paren(0, [&] {
        print_node(r->left, 1, out);
        switch (r->op) {
          case BoolOp::Xor: out += "⊕"; break;
          case BoolOp::Xnor: out += "⊙"; break;
          case BoolOp::Implies: out += "→"; break;
          case BoolOp::Diff: out += "↛"; break;
        }
        print_node(r->right, 1, out);
      });
      break;
    case NodeKind::Concat:
      paren(2, [&] {
        print_node(r->left, 3, out);
        print_node(r->right, 2, out);
      });
      break;
    case NodeKind::Loop:
      paren(3, [&] {
        print_node(r->body, 4, out);
        if (r->lo == 0 && r->hi == kInfinity)
          out.push_back('*');
        else if (r->lo == 1 && r->hi == kInfinity)
          out.push_back('+');
        else if (r->lo == 0 && r->hi == 1)
          out.push_back('?');
        else if (r->lo == r->hi)
          out += "{" + std::to_string(r->lo) + "}";
        else if (r->hi == kInfinity)
          out += "{" + std::to_string(r->lo) + ",}";
        else
          out += "{" + std::to_string(r->lo) + "," + std::to_string(r->hi) + "}";
      });
      break;
    case NodeKind::Compl:
      out += "~(";
      print_node(r->body, 0, out);
      out.push_back(')');
      break;
    case NodeKind::Lookahead:
      out += r->positive ? "(?=" : "(?!";
      print_node(r->body, 0, out);
      out.push_back(')');
      if (r->offsets) print_offsets(r->offsets, out);
      break;
    case NodeKind::Lookbehind:
      out += r->positive ? "(?<=" : "(?<!";
      print_node(r->body, 0, out);
      out.push_back(')');
      break;
  }
}

}  // namespace detail

inline std::string to_pattern(const RegexNode* r) {
  std::string out;
  detail::print_node(r, 0, out);
  return out;
}

}  // namespace resharp
