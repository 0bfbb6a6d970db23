#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <fstream>
#include <sstream>

#include "triact/io.hpp"
#include "triact/scheduler.hpp"

using namespace triact;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE_MESSAGE(in.good(), path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// first line starting with `prefix`: [pos, end-of-line]
std::pair<size_t, size_t> find_line(const std::string& s,
                                    const std::string& prefix) {
  size_t pos = s.rfind(prefix, 0) == 0 ? 0 : s.find("\n" + prefix);
  REQUIRE_MESSAGE(pos != std::string::npos, prefix);
  if (pos != 0) ++pos;
  return {pos, s.find('\n', pos)};
}

std::string dup_line(std::string s, const std::string& prefix) {
  auto [b, e] = find_line(s, prefix);
  s.insert(e + 1, s.substr(b, e - b + 1));
  return s;
}

std::string drop_line(std::string s, const std::string& prefix) {
  auto [b, e] = find_line(s, prefix);
  s.erase(b, e - b + 1);
  return s;
}

std::string swap_with_next_line(std::string s, const std::string& prefix) {
  auto [b, e] = find_line(s, prefix);
  const size_t e2 = s.find('\n', e + 1);
  REQUIRE(e2 != std::string::npos);
  s = s.substr(0, b) + s.substr(e + 1, e2 - e) + s.substr(b, e - b + 1) +
      s.substr(e2 + 1);
  return s;
}

std::string replace_first(std::string s, const std::string& from,
                          const std::string& to) {
  const size_t pos = s.find(from);
  REQUIRE(pos != std::string::npos);
  return s.replace(pos, from.size(), to);
}

template <class F>
std::string error_of(F&& f) {
  try {
    f();
  } catch (const G0Error& e) {
    return e.what();
  }
  return {};
}

bool same_state(const ActionState& a, const ActionState& b) {
  if (a.n_base != b.n_base || !(a.A == b.A) || a.block_step != b.block_step ||
      a.log != b.log || a.genmaps.size() != b.genmaps.size())
    return false;
  for (size_t i = 0; i < a.genmaps.size(); ++i) {
    const GenMap &m = a.genmaps[i], &o = b.genmaps[i];
    if (m.cls != o.cls || m.index != o.index || m.forward != o.forward ||
        m.backward != o.backward)
      return false;
  }
  return true;
}

ActionState mixed_run(int steps) {
  BuildConfig cfg;
  cfg.steps = steps;
  cfg.word_bound = 6;
  cfg.activate_r = 1;
  cfg.activate_s = 1;
  cfg.activate_u = 1;
  return build(cfg);
}

const ConfigKV kRunConfig = {{"activate_r", "1"}, {"activate_s", "1"},
                             {"activate_u", "1"}, {"instance", "s3"},
                             {"steps", "100"},    {"word_bound", "6"}};

}  // namespace

TEST_CASE("the empty-state dump matches its golden file") {
  const std::string golden = slurp(std::string(TRIACT_DATA_DIR) +
                                   "/s3_init.dump");
  const ActionState init = init_state(builtin_s3());
  CHECK(dump_state(init) == golden);

  const LoadedDump ld = load_dump(golden);
  CHECK(ld.state.n_points() == 3);
  CHECK(ld.state.log.empty());
  CHECK(ld.state.genmaps.empty());
  CHECK(ld.config.empty());
  CHECK(same_state(ld.state, init));
  CHECK(dump_state(ld.state, ld.config) == golden);
}

TEST_CASE("a mixed run survives dump, load and replay byte-for-byte") {
  const ActionState st = mixed_run(100);
  const std::string bytes = dump_state(st, kRunConfig);

  const LoadedDump ld = load_dump(bytes);
  CHECK(same_state(ld.state, st));
  CHECK(ld.config == kRunConfig);  // kRunConfig is already key-sorted
  CHECK(dump_state(ld.state, ld.config) == bytes);

  // the maps section is a cache; the log alone rebuilds the same bytes
  const ActionState replayed = replay_log(ld.state.g0, ld.state.log, 6);
  CHECK(same_state(replayed, st));
  CHECK(dump_state(replayed, kRunConfig) == bytes);
}

TEST_CASE("equal configs give equal bytes") {
  BuildConfig cfg;
  cfg.steps = 35;
  cfg.word_bound = 4;
  cfg.activate_r = 2;
  cfg.activate_u = 1;
  CHECK(dump_state(build(cfg)) == dump_state(build(cfg)));
}

TEST_CASE("config section is sorted, token-checked and duplicate-free") {
  const ActionState init = init_state(builtin_s3());
  const std::string bytes =
      dump_state(init, {{"b_key", "2"}, {"a_key", "one two"}});
  CHECK(bytes.find("cfg a_key one two\ncfg b_key 2\n") != std::string::npos);
  CHECK(load_dump(bytes).config ==
        ConfigKV{{"a_key", "one two"}, {"b_key", "2"}});

  CHECK(error_of([&] { dump_state(init, {{"k", "1"}, {"k", "2"}}); })
            .find("duplicate config key") != std::string::npos);
  CHECK(error_of([&] { dump_state(init, {{"bad key", "1"}}); })
            .find("clean token") != std::string::npos);
  CHECK(error_of([&] { dump_state(init, {{"k", "line\nbreak"}}); })
            .find("token-clean") != std::string::npos);
}

TEST_CASE("load rejects corrupt dumps with the first failing check named") {
  const std::string bytes = dump_state(mixed_run(40), kRunConfig);

  SUBCASE("duplicated forward pair") {
    const std::string err =
        error_of([&] { load_dump(dup_line(bytes, "pair r0 ")); });
    CHECK(err.find("injectivity(r0,") != std::string::npos);
  }
  SUBCASE("dropped closure companion") {
    // u0 pairs come in a-orbit triples; losing one breaks the closure law
    const std::string err =
        error_of([&] { load_dump(drop_line(bytes, "pair u0 ")); });
    CHECK(err.find("U closure law fails") != std::string::npos);
  }
  SUBCASE("missing forced x0 fixed point") {
    const std::string err =
        error_of([&] { load_dump(drop_line(bytes, "pair s0 0 0")); });
    CHECK(err.find("x0 must be fixed") != std::string::npos);
  }
  SUBCASE("truncated file") {
    const std::string err =
        error_of([&] { load_dump(bytes.substr(0, bytes.size() - 5)); });
    CHECK(err.find("parse error at offset") != std::string::npos);
    CHECK(err.find("truncated") != std::string::npos);
  }
  SUBCASE("version mismatch") {
    const std::string err = error_of(
        [&] { load_dump(replace_first(bytes, "triact-dump v1", "triact-dump v9")); });
    CHECK(err.find("unsupported dump version") != std::string::npos);
  }
  SUBCASE("policy mismatch") {
    const std::string err = error_of([&] {
      load_dump(replace_first(bytes, "central-right-v1", "central-left-v1"));
    });
    CHECK(err.find("unsupported canonical-form policy") != std::string::npos);
  }
  SUBCASE("pairs out of source order") {
    const std::string err = error_of(
        [&] { load_dump(swap_with_next_line(bytes, "pair u0 ")); });
    CHECK(err.find("sorted by source id") != std::string::npos);
  }
  SUBCASE("log index gap") {
    const std::string err = error_of(
        [&] { load_dump(replace_first(bytes, "step 1 ", "step 7 ")); });
    CHECK(err.find("consecutive") != std::string::npos);
  }
  SUBCASE("broken group table") {
    const std::string err = error_of(
        [&] { load_dump(replace_first(bytes, "mult 0 1 2 3 4 5", "mult 0 1 2 3 4 4")); });
    CHECK(err.find("element 0 is not an identity") != std::string::npos);
  }
  SUBCASE("unknown section") {
    const std::string err = error_of(
        [&] { load_dump(replace_first(bytes, "[points]", "[odd]")); });
    CHECK(err.find("expected section [points]") != std::string::npos);
  }
}

TEST_CASE("seed files round-trip and are validated on parse") {
  const std::string bytes = dump_g0(builtin_pgl2_f8());
  CHECK(bytes.starts_with("triact-g0 v1\n"));
  const G0Spec back = parse_g0(bytes);
  CHECK(back.mult == builtin_pgl2_f8().mult);
  CHECK(back.act == builtin_pgl2_f8().act);
  CHECK(back.names == builtin_pgl2_f8().names);
  CHECK(back.a == 1);
  CHECK(back.t == 3);
  CHECK(back.x0 == 1);
  CHECK(dump_g0(back) == bytes);

  CHECK(error_of([&] { parse_g0(replace_first(bytes, "\nt 3\n", "\nt 1\n")); })
            .find("t must have order 2") != std::string::npos);
  CHECK(error_of([&] { parse_g0("bogus\n"); })
            .find("parse error at offset 0") != std::string::npos);
}

TEST_CASE("replay flags a log that disagrees with execution") {
  ActionState st = mixed_run(12);
  std::vector<StageEntry> log = st.log;
  // aim the second accepted extend of a matching direction at a point the
  // first one already covered: replay must reject where the log accepted
  size_t first = log.size(), second = log.size();
  for (size_t k = 0; k < log.size(); ++k) {
    const StageEntry& e = log[k];
    if (!(e.accepted && e.op == StageOp::Extend)) continue;
    if (first == log.size()) {
      first = k;
    } else if (log[first].cls == e.cls && log[first].gen_index == e.gen_index &&
               log[first].inverse == e.inverse) {
      second = k;
      break;
    }
  }
  REQUIRE(second < log.size());
  log[second].at = log[first].at;
  const std::string err =
      error_of([&] { replay_log(st.g0, log, 6); });
  CHECK(err.find("replay diverged at step " + std::to_string(second)) !=
        std::string::npos);
}
