#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "triact/extend.hpp"
#include "triact/verify.hpp"

using namespace triact;

namespace {

constexpr int kA = 1, kT = 3;

Letter RL(int i, bool inv = false) {
  return Letter::free(LetterClass::R, i, inv);
}
Letter SL(int i, bool inv = false) {
  return Letter::free(LetterClass::S, i, inv);
}
Letter UL(int i, bool inv = false) {
  return Letter::free(LetterClass::U, i, inv);
}

std::set<int> conditions_of(const GoodnessReport& r) {
  std::set<int> c;
  for (const Violation& v : r.violations) c.insert(v.condition);
  return c;
}

// the state of the braid example: r1 fixes x0 and threads p2, p3 through
// a fresh block so that r1 t r1^-1 t fixes (p1,p2,p3) pointwise
ActionState braided_state() {
  ActionState st = init_state(builtin_s3());
  adjoin_block(st, -1);
  GenMap& r1 = activate_generator(st, LetterClass::R, 1);
  define_pair(st, r1, 0, 0);
  define_pair(st, r1, 1, 3);
  define_pair(st, r1, 2, 6);
  validate_state(st);  // structurally fine; goodness is what breaks
  return st;
}

}  // namespace

TEST_CASE("stage-0 actions are good") {
  GoodnessReport rep = check_good(init_state(builtin_s3()), 8);
  CHECK(rep.ok());
  CHECK(rep.unknowns.empty());
  CHECK(rep.incidents > 0);  // the S3 flips and shifts of A

  GoodnessReport big = check_good(init_state(builtin_pgl2_f8()), 4);
  CHECK(big.ok());
  CHECK(big.unknowns.empty());

  GoodnessReport ref = check_good_reference(init_state(builtin_s3()), 6);
  CHECK(ref.ok());
  CHECK(ref.unknowns.empty());
}

TEST_CASE("goodness flags doctored fixed-point structure") {
  // a acting as a transposition: fixes p3 (condition 1) and flips a
  // triple while not being conjugate to t (condition 4)
  ActionState st = init_state(builtin_s3());
  st.g0.act[kA * 3 + 0] = 1;
  st.g0.act[kA * 3 + 1] = 0;
  st.g0.act[kA * 3 + 2] = 2;
  GoodnessReport rep = check_good(st, 4);
  CHECK(!rep.ok());
  CHECK(conditions_of(rep).count(1) == 1);
  CHECK(conditions_of(rep).count(4) == 1);
  // the raw-word route never assumes the seed multiplication and the
  // seed action cohere, so on a table doctored out of coherence it may
  // find strictly more conditions; verdict and shared findings agree
  GoodnessReport ref = check_good_reference(st, 4);
  CHECK(!ref.ok());
  for (int c : conditions_of(rep)) CHECK(conditions_of(ref).count(c) == 1);

  // t acting as the identity: extra fixed points and three fixed points
  st = init_state(builtin_s3());
  for (int p = 0; p < 3; ++p) st.g0.act[kT * 3 + p] = p;
  rep = check_good(st, 4);
  CHECK(conditions_of(rep).count(2) == 1);
  CHECK(conditions_of(rep).count(3) == 1);

  // t moved off x0
  st = init_state(builtin_s3());
  st.g0.act[kT * 3 + 0] = 1;
  st.g0.act[kT * 3 + 1] = 0;
  st.g0.act[kT * 3 + 2] = 2;
  rep = check_good(st, 4);
  CHECK(conditions_of(rep) == std::set<int>{2});
}

TEST_CASE("goodness flags a braided pointwise stabilizer") {
  ActionState st = braided_state();
  GoodnessReport rep = check_good(st, 4);
  CHECK(!rep.ok());
  const Word braid{RL(1), Letter::g0(kT), RL(1, true), Letter::g0(kT)};
  bool found = false;
  for (const Violation& v : rep.violations) {
    if (v.condition != 3) continue;
    if (v.triple == Triple{0, 1, 2} && v.word == braid) found = true;
  }
  CHECK(found);

  GoodnessReport ref = check_good_reference(st, 4);
  CHECK(!ref.ok());
  CHECK(conditions_of(ref) == conditions_of(rep));

  // the braid also shows up as an ordered-fixing violation
  Sharp3Report sharp = check_sharp3(st, 4);
  CHECK(!sharp.ok());
  CHECK(sharp.violations.front().condition == 3);
}

TEST_CASE("scripted extension state passes both checkers") {
  ActionState st = init_state(builtin_s3());
  introduce_generator(st, LetterClass::R, 1);
  extend_generator(st, LetterClass::R, 1, false, 0);
  connect_triple(st, Triple{3, 4, 5}, TripleClass::ATriple, 0, 4);

  GoodnessReport fast = check_good(st, 6);
  CHECK(fast.ok());
  CHECK(fast.unknowns.empty());

  GoodnessReport ref = check_good_reference(st, 4);
  CHECK(ref.ok());
  CHECK(ref.unknowns.empty());

  Sharp3Report sharp = check_sharp3(st, 6);
  CHECK(sharp.ok());

  EquivarianceReport eq = check_equivariance(st);
  CHECK(eq.ok());
}

TEST_CASE("sharp3 on seed instances") {
  CHECK(check_sharp3(init_state(builtin_s3()), 6).ok());
  CHECK(check_sharp3(init_state(builtin_pgl2_f8()), 4).ok());
}

TEST_CASE("budget exhaustion is reported, never silent") {
  ActionState st = init_state(builtin_s3());
  introduce_generator(st, LetterClass::R, 1);
  extend_generator(st, LetterClass::R, 1, false, 0);
  extend_generator(st, LetterClass::R, 1, false, 1);
  extend_generator(st, LetterClass::R, 1, false, 2);
  GoodnessReport rep = check_good(st, 6, 3);
  REQUIRE(!rep.unknowns.empty());
  CHECK(rep.unknowns.back().detail.find("budget") != std::string::npos);

  Sharp3Report sharp = check_sharp3(st, 6, 3);
  CHECK(!sharp.ok());
  CHECK(!sharp.unknowns.empty());
}

TEST_CASE("involution enumeration and the commuting scan") {
  // stage 0: the three S3 involutions, pairwise non-commuting
  InvolutionReport rep = check_involutions(init_state(builtin_s3()), 2);
  CHECK(rep.ok());
  CHECK(!rep.truncated);
  CHECK(rep.conjugators == 6);  // empty word and five syllables
  CHECK(rep.involutions == 3);  // t, at, a2t
  CHECK(rep.pairs_checked == 3);

  // with one totalized generator in the alphabet
  ActionState st = init_state(builtin_s3());
  introduce_generator(st, LetterClass::R, 1);
  extend_generator(st, LetterClass::R, 1, false, 0);
  InvolutionReport wide = check_involutions(st, 3);
  CHECK(wide.ok());
  CHECK(!wide.truncated);
  CHECK(wide.involutions > 3);

  InvolutionReport cut = check_involutions(st, 3, 5);
  CHECK(cut.truncated);
  CHECK(cut.ok());
}

TEST_CASE("equivariance scan pinpoints the broken pair") {
  ActionState st = init_state(builtin_s3());
  introduce_generator(st, LetterClass::S, 1);
  extend_generator(st, LetterClass::S, 1, false, 1);
  CHECK(check_equivariance(st).ok());

  GenMap* s1 = st.find_genmap(LetterClass::S, 1);
  REQUIRE(s1 != nullptr);
  const PointId img = s1->forward[2];
  s1->forward[2] = kUndefined;
  s1->backward[img] = kUndefined;
  EquivarianceReport rep = check_equivariance(st);
  REQUIRE(rep.violations.size() == 1);
  CHECK(rep.violations[0].triple.x == 1);  // the companion of p2 is gone
  CHECK(rep.violations[0].word == Word{SL(1)});

  // no S/U generators: vacuous pass
  ActionState plain = init_state(builtin_s3());
  introduce_generator(plain, LetterClass::R, 1);
  extend_generator(plain, LetterClass::R, 1, false, 0);
  CHECK(check_equivariance(plain).ok());
}
