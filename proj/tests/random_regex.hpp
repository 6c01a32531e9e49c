// Random pattern generator for differential testing: lookaround-free
// regexes over a tiny alphabet with the full operator set, optionally
// wrapped in grammar-legal lookarounds (prefix lookbehinds, suffix
// lookaheads, intersections of such).
#pragma once

#include <memory>
#include <random>
#include <vector>

#include "resharp/resharp.hpp"

namespace rt {

class RegexGen {
 public:
  RegexGen(std::shared_ptr<resharp::Pool> pool, uint64_t seed)
      : pool_(std::move(pool)), rng_(seed) {
    using resharp::CharPredicate;
    leaves_ = {
        CharPredicate::single('a'),
        CharPredicate::single('b'),
        CharPredicate::single('\n'),
        resharp::pred_union(CharPredicate::single('a'),
                            CharPredicate::single('b')),
        resharp::pred_compl(CharPredicate::single('a')),
        CharPredicate::all(),
    };
  }

  resharp::Pool& pool() { return *pool_; }
  std::shared_ptr<resharp::Pool> pool_ptr() { return pool_; }

  std::mt19937_64& rng() { return rng_; }

  size_t pick(size_t n) { return rng_() % n; }

  // lookaround-free regex (the E grammar), depth-bounded
  const resharp::RegexNode* gen_e(int depth) {
    using namespace resharp;
    Pool& p = *pool_;
    if (depth <= 0) {
      switch (pick(8)) {
        case 0: return p.epsilon();
        case 1: return p.begin_anchor();
        case 2: return p.end_anchor();
        default: return p.pred(leaves_[pick(leaves_.size())]);
      }
    }
    switch (pick(12)) {
      case 0:
      case 1:
        return p.mk_union({gen_e(depth - 1), gen_e(depth - 1)});
      case 2:
        return p.mk_inter({gen_e(depth - 1), gen_e(depth - 1)});
      case 3:
      case 4:
      case 5:
        return p.mk_concat(gen_e(depth - 1), gen_e(depth - 1));
      case 6: {
        uint32_t lo = static_cast<uint32_t>(pick(3));
        uint32_t hi = lo + static_cast<uint32_t>(pick(3));
        if (pick(3) == 0) hi = kInfinity;
        return p.mk_loop(gen_e(depth - 1), lo, hi);
      }
      case 7:
        return p.mk_loop(gen_e(depth - 1), 0, kInfinity);
      case 8:
        return p.mk_compl(gen_e(depth - 1));
      case 9: {
        BoolOp op = static_cast<BoolOp>(pick(4));
        return p.mk_extbool(op, gen_e(depth - 1), gen_e(depth - 1));
      }
      default:
        return gen_e(0);
    }
  }

  // full pattern with lookarounds at grammar-legal positions
  const resharp::RegexNode* gen_r(int depth) {
    using namespace resharp;
    Pool& p = *pool_;
    const RegexNode* e = gen_e(depth);
    if (pick(2)) {
      const RegexNode* b = gen_e(depth >= 2 ? 2 : depth);
      e = p.mk_concat(p.mk_look(false, pick(3) != 0, b), e);
    }
    if (pick(2)) {
      const RegexNode* a = gen_e(depth >= 2 ? 2 : depth);
      e = p.mk_concat(e, p.mk_look(true, pick(3) != 0, a));
    }
    if (pick(6) == 0) {
      // intersection of two lookaround-bearing members
      const RegexNode* e2 = gen_e(depth >= 2 ? 2 : depth);
      if (pick(2))
        e2 = p.mk_concat(p.mk_look(false, true, gen_e(1)), e2);
      return p.mk_inter({e, e2});
    }
    return e;
  }

  std::vector<uint32_t> gen_text(size_t max_len) {
    static constexpr uint32_t alpha[3] = {'a', 'b', '\n'};
    std::vector<uint32_t> out(pick(max_len + 1));
    for (auto& c : out) c = alpha[pick(3)];
    return out;
  }

 private:
  std::shared_ptr<resharp::Pool> pool_;
  std::mt19937_64 rng_;
  std::vector<resharp::CharPredicate> leaves_;
};

}  // namespace rt
