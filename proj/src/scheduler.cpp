#include "triact/scheduler.hpp"

#include <array>
#include <cstdio>
#include <deque>
#include <random>
#include <set>
#include <string>

#include "triact/extend.hpp"
#include "triact/verify.hpp"

namespace triact {

namespace {

char class_letter(LetterClass c) {
  switch (c) {
    case LetterClass::R: return 'r';
    case LetterClass::S: return 's';
    case LetterClass::U: return 'u';
  }
  return '?';
}

// a- and t-set tally against a reach index; shared by coverage() and the
// progress line so both report the same fraction
std::pair<long, long> join_set_counts(const ActionState& st,
                                      const ReachIndex& reach) {
  std::set<TripleSetKey> seen;
  long reached = 0;
  const int n = st.n_points();
  for (PointId p = 0; p < n; ++p) {
    const TripleSetKey a_key =
        triple_set_key({p, st.image(p, st.g0.a), st.image(p, st.g0.a2)});
    if (seen.insert(a_key).second && reach.contains(a_key)) ++reached;
  }
  const PointId x0 = st.A.x;
  for (PointId y = 0; y < n; ++y) {
    if (y == x0) continue;
    const TripleSetKey t_key = triple_set_key({x0, y, st.image(y, st.g0.t)});
    if (seen.insert(t_key).second && reach.contains(t_key)) ++reached;
  }
  return {reached, static_cast<long>(seen.size())};
}

struct Driver {
  const BuildConfig& cfg;
  ActionState st;
  std::deque<Task> queue;
  std::set<std::array<long, 4>> enqueued;  // one shot per task key, ever
  ReachIndex reach;
  std::mt19937 rng;
  long accepted = 0;

  explicit Driver(const BuildConfig& c)
      : cfg(c), st(init_state(c.g0)), rng(c.shuffle_seed) {}

  void push(const Task& t, const std::array<long, 4>& key) {
    if (enqueued.insert(key).second) queue.push_back(t);
  }

  // idempotent full sweep; the dedupe set makes repetition cheap and keeps
  // the enqueue order a function of (scan index, point id, generator id)
  void scan() {
    reach = reachable_from_A(st, cfg.word_bound);
    const int n = st.n_points();
    for (PointId p = 0; p < n; ++p) {
      for (const GenMap& m : st.genmaps) {
        const long gen = (static_cast<long>(m.cls) << 24) | m.index;
        if (m.forward[p] == kUndefined)
          push({Task::Kind::Totalize, m.cls, m.index, false, p, {}},
               {0, gen, p, 0});
        if (m.backward[p] == kUndefined)
          push({Task::Kind::Totalize, m.cls, m.index, true, p, {}},
               {0, gen, p, 1});
      }
    }
    for (PointId p = 0; p < n; ++p) {
      const TripleSetKey k =
          triple_set_key({p, st.image(p, st.g0.a), st.image(p, st.g0.a2)});
      if (reach.contains(k)) continue;
      push({Task::Kind::JoinA, {}, 0, false, kUndefined, {k[0], k[1], k[2]}},
           {1, k[0], k[1], k[2]});
    }
    const PointId x0 = st.A.x;
    for (PointId y = 0; y < n; ++y) {
      if (y == x0) continue;
      const TripleSetKey k = triple_set_key({x0, y, st.image(y, st.g0.t)});
      if (reach.contains(k)) continue;
      push({Task::Kind::JoinT, {}, 0, false, kUndefined, {k[0], k[1], k[2]}},
           {2, k[0], k[1], k[2]});
    }
    const PointId limit = std::min<PointId>(n, cfg.join_free_limit);
    for (PointId x = 0; x < limit; ++x)
      for (PointId y = x + 1; y < limit; ++y)
        for (PointId z = y + 1; z < limit; ++z) {
          const TripleSetKey k{x, y, z};
          if (reach.contains(k)) continue;
          // a- and t-sets have their own queues
          if (k == triple_set_key(
                       {x, st.image(x, st.g0.a), st.image(x, st.g0.a2)}))
            continue;
          if ((x == x0 && st.image(y, st.g0.t) == z) ||
              (y == x0 && st.image(x, st.g0.t) == z) ||
              (z == x0 && st.image(x, st.g0.t) == y))
            continue;
          push({Task::Kind::JoinFree, {}, 0, false, kUndefined, {x, y, z}},
               {3, x, y, z});
        }
  }

  Task dequeue() {
    size_t at = 0;
    if (cfg.shuffle_seed != 0)
      at = std::uniform_int_distribution<size_t>(0, queue.size() - 1)(rng);
    Task t = queue[at];
    queue.erase(queue.begin() + at);
    return t;
  }

  bool execute(const Task& t) {
    switch (t.kind) {
      case Task::Kind::Totalize:
        return bool(extend_generator(st, t.cls, t.index, t.inverse, t.point));
      case Task::Kind::JoinA:
        return bool(connect_triple(st, t.triple, TripleClass::ATriple,
                                   fresh_index(st, LetterClass::U),
                                   cfg.word_bound, cfg.classify_budget));
      case Task::Kind::JoinT:
        return bool(connect_triple(st, t.triple, TripleClass::TTriple,
                                   fresh_index(st, LetterClass::S),
                                   cfg.word_bound, cfg.classify_budget));
      case Task::Kind::JoinFree:
        return bool(connect_triple(st, t.triple, TripleClass::Free,
                                   fresh_index(st, LetterClass::R),
                                   cfg.word_bound, cfg.classify_budget));
    }
    return false;
  }

  void run() {
    for (int i = 0; i < cfg.activate_r; ++i)
      introduce_generator(st, LetterClass::R, fresh_index(st, LetterClass::R));
    for (int i = 0; i < cfg.activate_s; ++i)
      introduce_generator(st, LetterClass::S, fresh_index(st, LetterClass::S));
    for (int i = 0; i < cfg.activate_u; ++i)
      introduce_generator(st, LetterClass::U, fresh_index(st, LetterClass::U));
    scan();
    while (accepted < cfg.steps && !queue.empty()) {
      const Task t = dequeue();
      if (!execute(t)) continue;  // rejection is logged by the engine
      ++accepted;
      scan();
      if (cfg.progress) {
        const auto [got, total] = join_set_counts(st, reach);
        std::printf("step=%ld kind=%s |X|=%d reach=%.3f\n", accepted,
                    to_string(t).c_str(), st.n_points(),
                    total ? double(got) / total : 1.0);
      }
      if (cfg.verify_every > 0 && accepted % cfg.verify_every == 0) {
        const GoodnessReport rep = check_good(st, cfg.word_bound);
        if (!rep.ok())
          throw G0Error("goodness violation at step " +
                        std::to_string(accepted) + ": " + rep.summary());
      }
    }
  }
};

}  // namespace

std::string to_string(const Task& t) {
  char buf[64];
  switch (t.kind) {
    case Task::Kind::Totalize:
      std::snprintf(buf, sizeof buf, "totalize(%c%d,%d,%s)",
                    class_letter(t.cls), t.index, t.point,
                    t.inverse ? "bwd" : "fwd");
      break;
    case Task::Kind::JoinA:
      std::snprintf(buf, sizeof buf, "join_a(%d,%d,%d)", t.triple.x,
                    t.triple.y, t.triple.z);
      break;
    case Task::Kind::JoinT:
      std::snprintf(buf, sizeof buf, "join_t(%d,%d,%d)", t.triple.x,
                    t.triple.y, t.triple.z);
      break;
    case Task::Kind::JoinFree:
      std::snprintf(buf, sizeof buf, "join_free(%d,%d,%d)", t.triple.x,
                    t.triple.y, t.triple.z);
      break;
  }
  return buf;
}

ActionState build(const BuildConfig& cfg) {
  if (cfg.steps < 0) throw G0Error("steps must be >= 0");
  if (cfg.word_bound < 2) throw G0Error("word_bound must be >= 2");
  Driver d(cfg);
  d.run();
  return std::move(d.st);
}

CoverageReport coverage(const ActionState& st, int max_depth) {
  CoverageReport rep;
  const ReachIndex reach = reachable_from_A(st, max_depth);
  rep.reached_sets = static_cast<long>(reach.witness.size());
  const double n = st.n_points();
  rep.triple_sets = rep.reached_sets / (n * (n - 1) * (n - 2) / 6.0);
  std::tie(rep.join_sets_reached, rep.join_sets_total) =
      join_set_counts(st, reach);
  for (const GenMap& m : st.genmaps) {
    rep.pairs_total += 2 * st.n_points();
    for (PointId p = 0; p < st.n_points(); ++p) {
      rep.pairs_defined += (m.forward[p] != kUndefined);
      rep.pairs_defined += (m.backward[p] != kUndefined);
    }
  }
  return rep;
}

}  // namespace triact
