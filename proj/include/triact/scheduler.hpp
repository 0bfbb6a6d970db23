#pragma once

#include <string>

#include "triact/action.hpp"

namespace triact {

// Build driver. A FIFO queue totalizes every active generator at every
// point and connects every a-triple and t-triple (plus free triples among
// a bounded id prefix) to A; each accepted step rescans for new work, so
// every task that becomes possible is eventually enqueued exactly once.

struct BuildConfig {
  G0Spec g0 = builtin_s3();
  int steps = 0;             // accepted mutations; rejections are free
  int word_bound = 4;        // length bound for classification and checks
  int activate_r = 0;        // generators introduced before the queue runs
  int activate_s = 0;
  int activate_u = 0;
  int verify_every = 0;      // 0 = never; else goodness-check cadence
  int join_free_limit = 12;  // free joins only among the first K point ids
  long classify_budget = 200000;
  unsigned shuffle_seed = 0;  // 0 = FIFO; else seeded random dequeue
  bool progress = false;      // one line per accepted step on stdout
};

struct Task {
  enum class Kind { Totalize, JoinA, JoinT, JoinFree };

  Kind kind = Kind::Totalize;
  LetterClass cls = LetterClass::R;  // Totalize target generator
  int index = 0;
  bool inverse = false;
  PointId point = kUndefined;
  Triple triple;  // Join target
};

std::string to_string(const Task& t);

// Runs up to cfg.steps accepted steps; the full audit log rides along in
// the returned state. Throws on bad config, failed seed hypotheses, or
// (with verify_every set) a goodness violation mid-build.
ActionState build(const BuildConfig& cfg);

// Connection and totalization progress. The raw counts grow monotonically
// over a run; the fractions can dip when a step grows the denominator
// (new points bring new unreached sets), so trend tests watch the counts.
struct CoverageReport {
  long reached_sets = 0;       // triple sets reachable from A
  double triple_sets = 0.0;    // ...as a fraction of C(n,3)
  long join_sets_reached = 0;  // a- and t-sets reached
  long join_sets_total = 0;
  long pairs_defined = 0;      // defined (generator, point, direction) slots
  long pairs_total = 0;

  double join_sets() const {
    return join_sets_total ? double(join_sets_reached) / join_sets_total : 1.0;
  }
  double gen_pairs() const {
    return pairs_total ? double(pairs_defined) / pairs_total : 1.0;
  }
};

// max_depth < 0 saturates the closure (small states only); pass the run's
// word bound to measure what that run could see.
CoverageReport coverage(const ActionState& st, int max_depth = -1);

}  // namespace triact
