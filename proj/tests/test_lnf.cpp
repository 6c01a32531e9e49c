#include <catch2/catch_amalgamated.hpp>

#include "test_helpers.hpp"

using namespace resharp;
using rt::cps;

namespace {

// renders a triple back into (?<=B) E (?=A) for oracle comparison
const RegexNode* render(Pool& p, const LnfTriple& t) {
  return p.mk_concat(p.mk_look(false, true, t.behind),
                     p.mk_concat(t.body, p.mk_look(true, true, t.ahead)));
}

void check_equiv(Pool& p, const RegexNode* a, const RegexNode* b,
                 const std::vector<std::string>& texts) {
  for (const auto& s : texts) {
    auto t = cps(s);
    Oracle o(t);
    const int64_t n = static_cast<int64_t>(t.size());
    for (int64_t i = 0; i <= n; ++i)
      for (int64_t j = i; j <= n; ++j) {
        INFO("text=\"" << s << "\" span=(" << i << "," << j << ")");
        CHECK(o.models(i, j, a) == o.models(i, j, b));
      }
  }
}

}  // namespace

TEST_CASE("a lookaround-free regex is its own body") {
  Pool p;
  const RegexNode* e = parse(p, "ab|c*");
  LnfTriple t = to_lnf(p, e);
  CHECK(t.behind == p.epsilon());
  CHECK(t.body == e);
  CHECK(t.ahead == p.epsilon());
}

TEST_CASE("edge lookarounds move to the triple") {
  Pool p;
  LnfTriple t = to_lnf(p, parse(p, "(?<=a)bc(?=d)"));
  CHECK(t.behind == parse(p, "a"));
  CHECK(t.body == parse(p, "bc"));
  CHECK(t.ahead == parse(p, "d"));
  CHECK_FALSE(t.behind->has_lookaround);
  CHECK_FALSE(t.body->has_lookaround);
  CHECK_FALSE(t.ahead->has_lookaround);
}

TEST_CASE("stacked lookarounds fuse through intersection") {
  Pool p;
  LnfTriple t = to_lnf(p, parse(p, "(?<=a)(?<=b)c(?=d)(?=e)"));
  CHECK(t.behind == p.mk_inter({p.mk_concat(p.top_star(), parse(p, "a")),
                                p.mk_concat(p.top_star(), parse(p, "b"))}));
  CHECK(t.ahead == p.mk_inter({p.mk_concat(parse(p, "d"), p.top_star()),
                               p.mk_concat(parse(p, "e"), p.top_star())}));
  check_equiv(p, render(p, t), parse(p, "(?<=a)(?<=b)c(?=d)(?=e)"),
              {"", "a", "bcd", "abcde", "bcde", "acde"});
}

TEST_CASE("negative lookarounds become positive over complements") {
  Pool p;
  // single-predicate bodies take the simplified union form
  LnfTriple t = to_lnf(p, parse(p, "(?<!a)x(?!b)"));
  CHECK(t.behind ==
        p.mk_union({p.begin_anchor(),
                    p.pred(pred_compl(CharPredicate::single('a')))}));
  CHECK(t.ahead ==
        p.mk_union({p.pred(pred_compl(CharPredicate::single('b'))),
                    p.end_anchor()}));
  check_equiv(p, render(p, t), parse(p, "(?<!a)x(?!b)"),
              {"x", "ax", "xb", "cxc", "xa", "bx"});
  // composite bodies take the general form
  LnfTriple t2 = to_lnf(p, parse(p, "(?<!ab)x"));
  CHECK(t2.behind ==
        p.mk_concat(p.begin_anchor(),
                    p.mk_compl(p.mk_concat(p.top_star(), parse(p, "ab")))));
  check_equiv(p, render(p, t2), parse(p, "(?<!ab)x"),
              {"x", "abx", "bx", "aabx", "cabx", "abxx"});
}

TEST_CASE("intersection members contribute fused parts") {
  Pool p;
  const RegexNode* r = parse(p, "(?<=a)b*&b*(?=c)");
  LnfTriple t = to_lnf(p, r);
  CHECK(t.behind == parse(p, "a"));
  CHECK(t.ahead == parse(p, "c"));
  CHECK(t.body == parse(p, "b*&b*"));
  check_equiv(p, render(p, t), r, {"abc", "abbc", "ac", "bb", "abcb"});
}

TEST_CASE("the author regex normalizes to the documented shape") {
  Pool p;
  const RegexNode* r = parse(p, "(?<=author.*).*&~(.*and.*)&\\b\\w.*\\w\\b");
  LnfTriple t = to_lnf(p, r);
  CHECK_FALSE(t.behind->has_lookaround);
  CHECK_FALSE(t.body->has_lookaround);
  CHECK_FALSE(t.ahead->has_lookaround);
  // behind: (_* author.*) & (_* (\A|[^\w]))
  const RegexNode* expect_behind = p.mk_inter(
      {p.mk_concat(p.top_star(), parse(p, "author.*")),
       p.mk_concat(p.top_star(),
                   p.mk_union({p.begin_anchor(),
                               p.pred(pred_compl(p.classes().word))}))});
  CHECK(t.behind == expect_behind);
  // body: .* & ~(.*and.*) & \w.*\w
  CHECK(t.body == parse(p, ".*&~(.*and.*)&\\w.*\\w"));
  // ahead: [^\w]|\z   (the simplified form of (?=~(\w_*)\z))
  CHECK(t.ahead == p.mk_union({p.pred(pred_compl(p.classes().word)),
                               p.end_anchor()}));
}

TEST_CASE("lookahead simplification is equivalent to its long form") {
  Pool p;
  // (?=~(\w_*)\z) == (?=[^\w]|\z) as lookahead bodies
  const RegexNode* longform = p.mk_look(
      true, true,
      p.mk_concat(p.mk_compl(p.mk_concat(p.pred(p.classes().word),
                                         p.top_star())),
                  p.end_anchor()));
  const RegexNode* shortform =
      p.mk_look(true, true, p.mk_union({p.pred(pred_compl(p.classes().word)),
                                        p.end_anchor()}));
  check_equiv(p, longform, shortform, {"", "a", "ab", "a.", ".a", "a b"});
}

TEST_CASE("inner lookarounds are bounded to the span by intersection") {
  Pool p;
  // leading lookahead: the password-filter reading
  const RegexNode* chain = parse(p, "(?=a*b)a*");
  LnfTriple t = to_lnf(p, chain);
  CHECK(t.behind == p.epsilon());
  CHECK(t.ahead == p.epsilon());
  CHECK(t.body == p.mk_inter({p.mk_concat(parse(p, "a*b"), p.top_star()),
                              parse(p, "a*")}));
  // between consuming atoms
  const RegexNode* mid = parse(p, "a(?<=a)b");
  LnfTriple t2 = to_lnf(p, mid);
  CHECK_FALSE(t2.body->has_lookaround);
  auto text = cps("ab");
  Oracle o(text);
  CHECK(o.models(0, 2, render(p, t2)));
}

TEST_CASE("grammar violations are rejected") {
  Pool p;
  CHECK_THROWS_AS(to_lnf(p, parse(p, "~((?=a)b)")), GrammarViolation);
  CHECK_THROWS_AS(to_lnf(p, parse(p, "((?<=a)b)*")), GrammarViolation);
  CHECK_THROWS_AS(to_lnf(p, parse(p, "a|(?<=b)c")), GrammarViolation);
  CHECK_THROWS_AS(to_lnf(p, parse(p, "(?=(?=a)b)c")), GrammarViolation);
  // a bare word boundary expands to a union of lookarounds: rejected here
  CHECK_THROWS_AS(to_lnf(p, parse(p, "\\b")), GrammarViolation);
}
