#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "triact/scheduler.hpp"
#include "triact/verify.hpp"

using namespace triact;

namespace {

long count_extends(const ActionState& st) {
  long k = 0;
  for (const StageEntry& e : st.log) k += (e.accepted && e.op == StageOp::Extend);
  return k;
}

long count_accepted(const ActionState& st) {
  long k = 0;
  for (const StageEntry& e : st.log)
    k += (e.accepted && e.op != StageOp::Activate);
  return k;
}

long count_joins(const ActionState& st, TripleClass cls) {
  long k = 0;
  for (const StageEntry& e : st.log)
    k += (e.accepted && e.op == StageOp::Join && e.target_class == cls);
  return k;
}

bool same_genmaps(const ActionState& a, const ActionState& b) {
  if (a.genmaps.size() != b.genmaps.size()) return false;
  for (size_t i = 0; i < a.genmaps.size(); ++i) {
    const GenMap &ma = a.genmaps[i], &mb = b.genmaps[i];
    if (ma.cls != mb.cls || ma.index != mb.index ||
        ma.forward != mb.forward || ma.backward != mb.backward)
      return false;
  }
  return true;
}

}  // namespace

TEST_CASE("zero budget returns the initial state") {
  BuildConfig cfg;
  ActionState st = build(cfg);
  CHECK(st.n_points() == 3);
  CHECK(st.log.empty());
  CHECK(st.genmaps.empty());
  CoverageReport cov = coverage(st);
  CHECK(cov.reached_sets == 1);
  CHECK(cov.triple_sets == doctest::Approx(1.0));
  CHECK(cov.join_sets() == doctest::Approx(1.0));
}

TEST_CASE("first accepted step follows the queue order") {
  BuildConfig cfg;
  cfg.steps = 1;
  cfg.activate_r = 1;
  ActionState st = build(cfg);
  CHECK(st.n_points() == 9);
  REQUIRE(st.log.size() == 2);
  CHECK(st.log[0].op == StageOp::Activate);
  const StageEntry& e = st.log[1];
  CHECK(e.op == StageOp::Extend);
  CHECK(e.cls == LetterClass::R);
  CHECK(e.gen_index == 0);
  CHECK(e.at == 0);
  CHECK(!e.inverse);
  // the fresh orbit is unreached until a join happens
  CoverageReport cov = coverage(st);
  CHECK(cov.triple_sets < 1.0);
  CHECK(cov.join_sets() < 1.0);
}

TEST_CASE("identical configs build identical states") {
  BuildConfig cfg;
  cfg.steps = 35;
  cfg.word_bound = 4;
  cfg.activate_r = cfg.activate_s = cfg.activate_u = 1;
  ActionState a = build(cfg);
  ActionState b = build(cfg);
  CHECK(a.n_points() == b.n_points());
  CHECK(a.log == b.log);
  CHECK(same_genmaps(a, b));
}

TEST_CASE("runs extend their shorter prefixes; raw coverage counts grow") {
  BuildConfig cfg;
  cfg.word_bound = 4;
  cfg.activate_r = cfg.activate_s = cfg.activate_u = 1;
  long last_reached = -1, last_pairs = -1, last_total = -1;
  std::vector<StageEntry> prev_log;
  for (int steps : {0, 10, 20, 30, 40, 50}) {
    cfg.steps = steps;
    ActionState st = build(cfg);
    CHECK(count_accepted(st) == steps);
    CHECK(std::equal(prev_log.begin(), prev_log.end(), st.log.begin()));
    prev_log = st.log;
    CoverageReport cov = coverage(st, cfg.word_bound);
    CHECK(cov.reached_sets >= last_reached);
    CHECK(cov.pairs_defined >= last_pairs);
    CHECK(cov.join_sets_total >= last_total);
    last_reached = cov.reached_sets;
    last_pairs = cov.pairs_defined;
    last_total = cov.join_sets_total;
  }
}

TEST_CASE("a long mixed run hits every task kind and stays good") {
  BuildConfig cfg;
  cfg.steps = 100;
  cfg.word_bound = 6;
  cfg.activate_r = cfg.activate_s = cfg.activate_u = 1;
  ActionState st = build(cfg);
  CHECK(count_accepted(st) == 100);
  CHECK(st.n_points() == 3 + 6 * count_extends(st));
  CHECK(count_joins(st, TripleClass::ATriple) > 0);
  CHECK(count_joins(st, TripleClass::TTriple) > 0);
  CHECK(count_joins(st, TripleClass::Free) > 0);
  long rejections = 0;
  for (const StageEntry& e : st.log) rejections += !e.accepted;
  CHECK(rejections > 0);  // execution-time re-checks really fire
  CHECK(check_good(st, 6).ok());
  CHECK(check_equivariance(st).ok());
}

TEST_CASE("seeded shuffle keeps the invariants, not the trajectory") {
  BuildConfig cfg;
  cfg.steps = 30;
  cfg.word_bound = 4;
  cfg.activate_r = cfg.activate_s = cfg.activate_u = 1;
  ActionState fifo = build(cfg);
  cfg.shuffle_seed = 777;
  ActionState rnd = build(cfg);
  CHECK(count_accepted(rnd) == 30);
  CHECK(rnd.n_points() == 3 + 6 * count_extends(rnd));
  CHECK(check_good(rnd, 4).ok());
  CHECK(check_equivariance(rnd).ok());
  CHECK(rnd.log != fifo.log);
}

TEST_CASE("config validation") {
  BuildConfig cfg;
  cfg.steps = -1;
  CHECK_THROWS_AS((void)build(cfg), G0Error);
  cfg.steps = 0;
  cfg.word_bound = 1;
  CHECK_THROWS_AS((void)build(cfg), G0Error);
}
