#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "triact/g0.hpp"
#include "triact/word.hpp"

using namespace triact;

namespace {

Letter R(int i, bool inv = false) { return Letter::free(LetterClass::R, i, inv); }
Letter S(int i, bool inv = false) { return Letter::free(LetterClass::S, i, inv); }
Letter U(int i, bool inv = false) { return Letter::free(LetterClass::U, i, inv); }

Word random_word(std::mt19937& rng, int max_len) {
  std::uniform_int_distribution<int> len(0, max_len);
  std::uniform_int_distribution<int> cls(0, 3);
  std::uniform_int_distribution<int> g0elem(1, 5);
  std::uniform_int_distribution<int> idx(0, 2);
  std::uniform_int_distribution<int> coin(0, 1);
  Word w;
  int n = len(rng);
  for (int i = 0; i < n; ++i) {
    switch (cls(rng)) {
      case 0: w.push_back(Letter::g0(g0elem(rng))); break;
      case 1: w.push_back(R(idx(rng), coin(rng))); break;
      case 2: w.push_back(S(idx(rng), coin(rng))); break;
      default: w.push_back(U(idx(rng), coin(rng))); break;
    }
  }
  return w;
}

Word reduce_randomized(Word w, const G0Spec& g0, std::mt19937& rng) {
  for (int guard = 0; guard < 10000; ++guard) {
    auto rules = applicable_rules(w, g0);
    if (rules.empty()) return w;
    w = apply_rule(w, rules[rng() % rules.size()], g0);
  }
  FAIL("randomized rewriting did not terminate");
  return w;
}

}  // namespace

// builtin_s3 element indices: 1=identity-0, a=1, a2=2, t=3, at=4, a2t=5
static const int kA = 1, kA2 = 2, kT = 3, kAT = 4;

TEST_CASE("letter packing") {
  Letter l = Letter::free(LetterClass::U, 12, true);
  CHECK(l.cls() == LetterClass::U);
  CHECK(l.index() == 12);
  CHECK(l.inverted());
  CHECK(l.opposite().index() == 12);
  CHECK_FALSE(l.opposite().inverted());
  Letter g = Letter::g0(5);
  CHECK(g.is_g0());
  CHECK(g.index() == 5);
}

TEST_CASE("reduce: pinned examples") {
  G0Spec g0 = builtin_s3();
  CHECK(reduce({U(1), U(1, true)}, g0).empty());
  CHECK(reduce({Letter::g0(kA), Letter::g0(kA2)}, g0).empty());
  // central letter lands at the right edge of its block
  CHECK(reduce({S(1), Letter::g0(kT), S(2)}, g0) ==
        Word{S(1), S(2), Letter::g0(kT)});
  // a trailing central letter merges into the G0 syllable left of the block
  CHECK(reduce({Letter::g0(kA), S(1), Letter::g0(kT)}, g0) ==
        Word{Letter::g0(kAT), S(1)});
}

TEST_CASE("reduce: right-adjacent merge wins over composite left syllable") {
  G0Spec g0 = builtin_s3();
  // a t s1 at: the t must travel through the block and merge rightward,
  // t*at = a2, instead of first collapsing into the left syllable
  Word w = {Letter::g0(kA), Letter::g0(kT), S(1), Letter::g0(kAT)};
  CHECK(reduce(w, g0) == Word{Letter::g0(kA), S(1), Letter::g0(kA2)});
}

TEST_CASE("reduced forms are unique only up to central placement") {
  G0Spec g0 = builtin_s3();
  // at s1 at and a s1 a2 are the same element of G; both are fixed points
  // of the rewriting rules, so equality goes through the identity test
  Word v = {Letter::g0(kAT), S(1), Letter::g0(kAT)};
  Word w = {Letter::g0(kA), S(1), Letter::g0(kA2)};
  CHECK(is_reduced(v, g0));
  CHECK(is_canonical(v, g0));
  CHECK(reduce(v, g0) == v);
  CHECK(words_equal(v, w, g0));
}

TEST_CASE("multiply: pinned examples") {
  G0Spec g0 = builtin_s3();
  CHECK(multiply({Letter::g0(kA)}, {Letter::g0(kA2)}, g0).empty());
  CHECK(multiply({S(1), Letter::g0(kT)}, {S(1, true)}, g0) ==
        Word{Letter::g0(kT)});
  CHECK(multiply({U(1)}, {U(1)}, g0) == Word{U(1), U(1)});
}

TEST_CASE("invert: pinned examples") {
  G0Spec g0 = builtin_s3();
  CHECK(invert({Letter::g0(kA), U(1)}, g0) == Word{U(1, true), Letter::g0(kA2)});
  CHECK(invert({}, g0).empty());
  CHECK(invert({R(1), Letter::g0(kT), R(2, true)}, g0) ==
        Word{R(2), Letter::g0(kT), R(1, true)});
}

TEST_CASE("equal: pinned examples") {
  G0Spec g0 = builtin_s3();
  CHECK(words_equal({U(1), Letter::g0(kA)}, {Letter::g0(kA), U(1)}, g0));
  CHECK_FALSE(words_equal({Letter::g0(kA), Letter::g0(kT)},
                          {Letter::g0(kT), Letter::g0(kA)}, g0));
  CHECK(words_equal({S(1), S(1, true)}, {}, g0));
}

TEST_CASE("cyclic_reduce: pinned examples") {
  G0Spec g0 = builtin_s3();
  {
    auto [core, conj] = cyclic_reduce({U(1, true), Letter::g0(kA), U(1)}, g0);
    CHECK(core == Word{Letter::g0(kA)});
    CHECK(conj == Word{U(1)});
  }
  {
    auto [core, conj] = cyclic_reduce({R(1), Letter::g0(kA), R(1, true)}, g0);
    CHECK(core == Word{Letter::g0(kA)});
    CHECK(conj == Word{R(1, true)});
  }
  {
    auto [core, conj] = cyclic_reduce({Letter::g0(kT)}, g0);
    CHECK(core == Word{Letter::g0(kT)});
    CHECK(conj.empty());
  }
}

TEST_CASE("cyclic_reduce: rotation shrinking") {
  G0Spec g0 = builtin_s3();
  // a a2 r1 x r1^-1 collapses at the ends only after interior reduction
  Word w = {Letter::g0(kA), Letter::g0(kA2), R(1), S(2), R(1, true)};
  auto [core, conj] = cyclic_reduce(w, g0);
  CHECK(core == Word{S(2)});
  CHECK(is_cyclically_reduced(core, g0));
  Word back = multiply(multiply(invert(conj, g0), core, g0), conj, g0);
  CHECK(words_equal(back, w, g0));
}

TEST_CASE("structural errors") {
  G0Spec g0 = builtin_s3();
  CHECK_THROWS_AS(reduce({Letter::g0(0)}, g0), G0Error);
  CHECK_THROWS_AS(reduce({Letter::g0(6)}, g0), G0Error);
}

TEST_CASE("word text round trip") {
  G0Spec g0 = builtin_s3();
  LetterNames names{&g0, {"r0", "r1"}, {"s0", "s1"}, {"u0"}};
  Word w = {R(1), Letter::g0(kAT), S(0, true), U(0)};
  std::string text = word_to_string(w, names);
  CHECK(text == "r1 at s0^-1 u0");
  CHECK(parse_word(text, names) == w);
  CHECK(parse_word("", names).empty());
  CHECK(word_to_string({}, names) == "1");
  CHECK_THROWS_AS(parse_word("1", names), G0Error);
  CHECK_THROWS_AS(parse_word("q7", names), G0Error);
  CHECK_THROWS_AS(parse_word("a^-1", names), G0Error);
}

TEST_CASE("fuzz: idempotence, confluence, no forbidden pattern") {
  G0Spec g0 = builtin_s3();
  std::mt19937 rng(20260814);
  for (int iter = 0; iter < 10000; ++iter) {
    Word w = random_word(rng, 12);
    Word r = reduce(w, g0);
    CHECK(reduce(r, g0) == r);
    CHECK(is_reduced(r, g0));
    CHECK(is_canonical(r, g0));
    Word rr = reduce_randomized(w, g0, rng);
    CHECK(rr == r);
  }
}

// Words that once exposed ordering races between cancellation, merging and
// block placement. Each pins the layered admissibility: every admissible
// order must land on the deterministic canonical form.
TEST_CASE("regression: collapse/placement critical pairs") {
  G0Spec g0 = builtin_s3();
  LetterNames names{&g0,
                    {"r0", "r1", "r2"},
                    {"s0", "s1", "s2"},
                    {"u0", "u1", "u2"}};
  const char* cases[] = {
      "t u1^-1 a2 s2^-1 t u1^-1",
      "a s2^-1 t u1^-1 a2",
      "t t at u1 s2",
      "at s1^-1 t s2 r0^-1 r0 a2",
      "a a u0^-1 t s2 u2^-1 a u2 s2 u2 s2^-1 s2^-1",
      "t a2 r1^-1 r1 u0 t u1 r0^-1 a r1 a2 s2",
      "u0 s0 r0 a2t a s1^-1 s1 u0 at",
      "a2t u0^-1 a2 u0 a2 a2t s2 a2t s1^-1 u0^-1 r1",
      "a u0^-1 u2 u0^-1 at u0^-1 a2 t r0^-1 r0 s0",
      "at t u0 u0^-1 s1^-1 s0^-1 a2t u1 s0^-1 u0^-1 u2",
      "s2 u1 s1 a2t s1 s1^-1 at a s1^-1 a2t a2 a",
      "t a s0 s0^-1 u2^-1 u0^-1 u0 at r2 r2^-1 t t",
  };
  std::mt19937 rng(9001);
  for (const char* text : cases) {
    CAPTURE(text);
    Word w = parse_word(text, names);
    Word det = reduce(w, g0);
    CHECK(reduce(det, g0) == det);
    CHECK(is_canonical(det, g0));
    CHECK(words_equal(det, w, g0));
    for (int rep = 0; rep < 30; ++rep)
      CHECK(reduce_randomized(w, g0, rng) == det);
  }
}

TEST_CASE("fuzz: group laws") {
  G0Spec g0 = builtin_s3();
  std::mt19937 rng(777);
  for (int iter = 0; iter < 2000; ++iter) {
    Word w1 = random_word(rng, 8);
    Word w2 = random_word(rng, 8);
    Word w3 = random_word(rng, 8);
    CHECK(words_equal(multiply(multiply(w1, w2, g0), w3, g0),
                      multiply(w1, multiply(w2, w3, g0), g0), g0));
    CHECK(multiply(w1, invert(w1, g0), g0).empty());
    CHECK(words_equal(invert(invert(w1, g0), g0), w1, g0));
    CHECK(words_equal(multiply(w1, {}, g0), w1, g0));
    CHECK(words_equal(multiply({}, w1, g0), w1, g0));
  }
}

TEST_CASE("fuzz: cyclic reduction invariants") {
  G0Spec g0 = builtin_s3();
  std::mt19937 rng(424242);
  for (int iter = 0; iter < 2000; ++iter) {
    Word w = random_word(rng, 10);
    auto [core, conj] = cyclic_reduce(w, g0);
    CHECK(is_cyclically_reduced(core, g0));
    Word back = multiply(multiply(invert(conj, g0), core, g0), conj, g0);
    CHECK(words_equal(back, w, g0));
    CHECK(core.empty() == reduce(w, g0).empty());
    // no rotation of the core reduces shorter
    for (size_t k = 1; k < core.size(); ++k) {
      Word rot(core.begin() + k, core.end());
      rot.insert(rot.end(), core.begin(), core.begin() + k);
      CHECK(reduce(rot, g0).size() >= core.size());
    }
  }
}

TEST_CASE("canonical prefix enumeration matches direct filter") {
  G0Spec g0 = builtin_s3();
  // alphabet: all 5 nonidentity G0 elements, r0, s0, u0 and inverses
  std::vector<Letter> alphabet;
  for (int e = 1; e < 6; ++e) alphabet.push_back(Letter::g0(e));
  for (LetterClass c : {LetterClass::R, LetterClass::S, LetterClass::U})
    for (bool inv : {false, true})
      alphabet.push_back(Letter::free(c, 0, inv));

  // canonical words are prefix-closed, so incremental filtering and the
  // whole-word canonicality test must produce identical sets
  std::vector<Word> frontier = {{}};
  size_t enumerated = 1;
  for (int depth = 0; depth < 4; ++depth) {
    std::vector<Word> next;
    for (const Word& w : frontier)
      for (Letter l : alphabet)
        if (can_append_canonical(w, l, g0)) {
          Word e = w;
          e.push_back(l);
          CHECK(is_canonical(e, g0));
          next.push_back(std::move(e));
        }
    enumerated += next.size();
    frontier = std::move(next);
  }

  size_t direct = 0;
  std::vector<Word> stack = {{}};
  while (!stack.empty()) {
    Word w = std::move(stack.back());
    stack.pop_back();
    if (is_canonical(w, g0)) ++direct;
    if (w.size() == 4) continue;
    for (Letter l : alphabet) {
      Word e = w;
      e.push_back(l);
      stack.push_back(std::move(e));
    }
  }
  CHECK(enumerated == direct);
}
