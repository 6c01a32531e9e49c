#include <array>

#include <catch2/catch_amalgamated.hpp>

#include "test_helpers.hpp"

using namespace resharp;
using rt::cps;

namespace {

std::vector<Span> matches(std::string_view pattern, std::string_view text,
                          const CompileOptions& co = {},
                          const MatchOptions& mo = {}) {
  auto cp = CompiledPattern::compile(pattern, co);
  auto t = cps(text);
  return cp.find_all(t, mo);
}

std::optional<Span> first(std::string_view pattern, std::string_view text) {
  auto cp = CompiledPattern::compile(pattern);
  auto t = cps(text);
  return cp.find(t);
}

}  // namespace

TEST_CASE("worked example: all pieces of b+(?=c) over aaaaabcababbc") {
  auto cp = CompiledPattern::compile("b+(?=c)");
  auto t = cps("aaaaabcababbc");

  // the reversed pattern finds ends {2,3,8} over the reversed input
  RangeList rev_ends = cp.all_ends_backward(t);
  CHECK(rev_ends.elements() == std::vector<int64_t>{2, 3, 8});
  CHECK(cp.max_end_backward(t) == 8);

  // start candidates 13 - {2,3,8} = {5,10,11}; from 5 the end is 6
  CHECK(cp.max_end_forward(t, 5) == 6);
  CHECK(cp.max_end_forward(t, 10) == 12);

  auto spans = cp.find_all(t);
  REQUIRE(spans.size() == 2);
  CHECK(spans[0] == Span{5, 6});
  CHECK(spans[1] == Span{10, 12});

  CHECK(cp.find(t) == Span{5, 6});
}

TEST_CASE("price example") {
  auto r = first("\\d+(?=:-)", "50:- ");
  REQUIRE(r.has_value());
  CHECK(*r == Span{0, 2});
}

TEST_CASE("price example derivative trace reaches eps with pending offset 2") {
  auto cp = CompiledPattern::compile("\\d+(?=:-)");
  auto t = cps("50:- ");
  std::vector<TraceStep> trace;
  MatchOptions mo;
  mo.trace = &trace;
  CHECK(cp.max_end_forward(t, 0, mo) == 2);
  REQUIRE(trace.size() >= 5);
  CHECK(trace[4].pos == 4);
  CHECK(trace[4].node->kind == NodeKind::Epsilon);
  REQUIRE(trace[4].node->offsets != nullptr);
  CHECK(trace[4].node->offsets->elements() == std::vector<int64_t>{2});
  REQUIRE(trace[4].recorded != nullptr);
  CHECK(trace[4].recorded->min() == 2);
}

TEST_CASE("edge of input regression: ^\\n+ matches the whole of two newlines") {
  auto r = first("^\\n+", "\n\n");
  REQUIRE(r.has_value());
  CHECK(*r == Span{0, 2});
}

TEST_CASE("bottom never matches") {
  auto cp = CompiledPattern::compile("[^\\x{0}-\\x{10FFFF}]");
  auto t = cps("abc");
  CHECK_FALSE(cp.find(t).has_value());
  CHECK(cp.find_all(t).empty());
  CHECK(cp.max_end_forward(t, 0) == -1);
}

TEST_CASE("empty input and the empty-word regex") {
  CHECK(matches("a*", "") == std::vector<Span>{{0, 0}});
  CHECK(first("a*", "").value() == Span{0, 0});
}

TEST_CASE("all ends of a* from a fixed start") {
  auto cp = CompiledPattern::compile("a*");
  auto t = cps("aa");
  CHECK(cp.all_ends_forward(t, 0).elements() ==
        std::vector<int64_t>{0, 1, 2});
}

TEST_CASE("compile shapes") {
  auto cp = CompiledPattern::compile("abc");
  CHECK(cp.lnf().behind->is_plain_epsilon());
  CHECK(cp.lnf().ahead->is_plain_epsilon());
  // backward pattern of b+(?=c) carries the reversed lookahead up front
  auto cp2 = CompiledPattern::compile("b+(?=c)");
  Pool& p = cp2.pool();
  const RegexNode* expected = p.mk_concat(
      p.top_star(),
      p.mk_concat(p.pred(CharPredicate::single('c')),
                  p.mk_loop(p.pred(CharPredicate::single('b')), 1, kInfinity)));
  CHECK(cp2.backward_pattern() == expected);
}

TEST_CASE("case-insensitive compilation shares states") {
  CompileOptions ci;
  ci.parse.ignore_case = true;
  auto folded = CompiledPattern::compile("mayo|may", ci);
  auto exact = CompiledPattern::compile("mayo|may");
  size_t folded_states = folded.explore_full(10000);
  size_t exact_states = exact.explore_full(10000);
  CHECK(folded_states > 0);
  CHECK(folded_states <= exact_states);
  auto t = cps("xxMAYOnnaise");
  auto spans = folded.find_all(t);
  REQUIRE(spans.size() == 1);
  CHECK(spans[0] == Span{2, 6});
}

TEST_CASE("anchored and line-anchored searches") {
  CHECK(matches("^ab", "ab\nab") ==
        std::vector<Span>{{0, 2}, {3, 5}});
  CHECK(matches("ab$", "ab\nab") ==
        std::vector<Span>{{0, 2}, {3, 5}});
  CHECK(matches("\\Aab", "ab\nab") == std::vector<Span>{{0, 2}});
  CHECK(matches("ab\\z", "ab\nab") == std::vector<Span>{{3, 5}});
}

TEST_CASE("intersection and complement matching") {
  // spans containing ab but not containing c
  auto spans = matches("_*ab_*&~(_*c_*)", "abcab");
  REQUIRE(spans.size() == 2);
  CHECK(spans[0] == Span{0, 2});
  CHECK(spans[1] == Span{3, 5});
  // password-style filter
  auto pw = matches("(.*[a-z].*)&(.*[A-Z].*)&(.*\\d.*)&\\S*", "aB1 cD2e x");
  REQUIRE(pw.size() == 2);
  CHECK(pw[0] == Span{0, 3});
  CHECK(pw[1] == Span{4, 8});
}

TEST_CASE("word boundaries through lookarounds") {
  auto spans = matches("\\b\\w+\\b", "foo bar!baz");
  REQUIRE(spans.size() == 3);
  CHECK(spans[0] == Span{0, 3});
  CHECK(spans[1] == Span{4, 7});
  CHECK(spans[2] == Span{8, 11});
}

TEST_CASE("lookbehind context windows") {
  // only emails in the Valid section match
  std::string text =
      "--- Valid\n"
      "a@foo\n"
      "b@bar\n"
      "--- Invalid\n"
      "c@baz\n";
  auto spans = matches("(?<=Valid~(_*Invalid_*)).+@.+", text);
  REQUIRE(spans.size() == 2);
  CHECK(text.substr(static_cast<size_t>(spans[0].start),
                    static_cast<size_t>(spans[0].end - spans[0].start)) ==
        "a@foo");
  CHECK(text.substr(static_cast<size_t>(spans[1].start),
                    static_cast<size_t>(spans[1].end - spans[1].start)) ==
        "b@bar");
}

TEST_CASE("prefix acceleration descriptors") {
  auto lit = CompiledPattern::compile("abcd.*efg");
  REQUIRE(lit.prefix_info().kind == Acceleration::Kind::Literal);
  CHECK(lit.prefix_info().literal ==
        std::vector<uint32_t>{'a', 'b', 'c', 'd'});
  CHECK(lit.prefix_info().resume == parse(lit.pool(), ".*efg"));

  auto set = CompiledPattern::compile("[abc]");
  REQUIRE(set.prefix_info().kind == Acceleration::Kind::FirstSet);
  CHECK(set.prefix_info().first_set == CharPredicate::range('a', 'c'));

  auto top = CompiledPattern::compile("_*");
  CHECK(top.prefix_info().kind == Acceleration::Kind::None);
}

TEST_CASE("acceleration never changes results") {
  const std::array<std::string, 6> pats = {
      "abcd.*efg", "[abc]+", "b+(?=c)", "\\b\\w+\\b", "a.{0,3}b", "x"};
  const std::array<std::string, 5> texts = {
      "abcdxxefgabcdefg", "zzabcazbc", "aaaaabcababbc", "foo bar?baz",
      "xaxxbxabxx"};
  MatchOptions fast, slow;
  slow.acceleration = false;
  for (const auto& pat : pats) {
    auto cp = CompiledPattern::compile(pat);
    for (const auto& s : texts) {
      auto t = cps(s);
      INFO("pattern=" << pat << " text=" << s);
      CHECK(cp.find_all(t, fast) == cp.find_all(t, slow));
    }
  }
}

TEST_CASE("mode consistency: min-offset-only agrees on find") {
  CompileOptions minonly;
  minonly.min_offset_only = true;
  const std::array<std::string, 4> pats = {"b+(?=c)", "\\d+(?=:-)", "a*",
                                           "(?<=a)b+"};
  const std::array<std::string, 4> texts = {"aaaaabcababbc", "50:- ", "aaa",
                                            "xabbb"};
  for (const auto& pat : pats) {
    auto full = CompiledPattern::compile(pat);
    auto collapsed = CompiledPattern::compile(pat, minonly);
    for (const auto& s : texts) {
      auto t = cps(s);
      INFO("pattern=" << pat << " text=" << s);
      CHECK(full.find(t) == collapsed.find(t));
    }
  }
}

TEST_CASE("transition determinism") {
  auto cp = CompiledPattern::compile("(a|ab)*c");
  auto t = cps("ababcababc");
  auto first_run = cp.find_all(t);
  auto second_run = cp.find_all(t);
  CHECK(first_run == second_run);
  CHECK(cp.max_end_forward(t, 0) == cp.max_end_forward(t, 0));
}

TEST_CASE("state limit produces a hard error") {
  CompileOptions tiny;
  tiny.max_states = 3;
  auto cp = CompiledPattern::compile("(a|b|cd)*(ef|g)h", tiny);
  auto t = cps("abcdefgh");
  CHECK_THROWS_AS(cp.find_all(t), StateLimitExceeded);
}

TEST_CASE("instrumentation counters are populated") {
  auto cp = CompiledPattern::compile("b+(?=c)");
  auto t = cps("aaaaabcababbc");
  MatchStats st;
  MatchOptions mo;
  mo.stats = &st;
  cp.find(t, mo);
  CHECK(st.transitions > 0);
  CHECK(st.states_created > 0);
  CHECK(st.cache_lookups <= 2 * t.size() + st.states_created);
}

TEST_CASE("counted loops admit empty iterations of context-nullable bodies") {
  // regression: the body is nullable at nonfinal locations only
  auto cp = CompiledPattern::compile("(~(\\z)|\\z[^a]){2,3}");
  auto t = cps("a");
  auto spans = cp.find_all(t);
  REQUIRE(spans.size() == 1);
  CHECK(spans[0] == Span{0, 1});
  auto cp2 = CompiledPattern::compile("(\\A|a){2}");
  auto t2 = cps("aa");
  // \A can serve as both iterations at position 0, so 0 is an end too
  CHECK(cp2.all_ends_forward(t2, 0).elements() ==
        std::vector<int64_t>{0, 1, 2});
}

TEST_CASE("multi-line unicode text matches in code points") {
  auto spans = matches("\\w+", "a\xC3\xA9 b");  // "a<e-acute> b", ascii classes
  // ascii \w does not include the accented letter: "a" and "b" match
  REQUIRE(spans.size() == 2);
  CHECK(spans[0] == Span{0, 1});
  CHECK(spans[1] == Span{3, 4});
}
