#include "triact/extend.hpp"

#include <algorithm>
#include <utility>

namespace triact {

namespace {

StageEntry blank_entry(StageOp op, LetterClass cls, int index) {
  StageEntry e{};
  e.op = op;
  e.cls = cls;
  e.gen_index = index;
  e.inverse = false;
  e.at = kUndefined;
  e.new_base = kUndefined;
  e.target = Triple{kUndefined, kUndefined, kUndefined};
  e.target_class = TripleClass::Unknown;
  return e;
}

StepResult reject(ActionState& st, StageEntry e, std::string reason) {
  e.accepted = false;
  e.reject_reason = reason;
  st.log.push_back(std::move(e));
  return {false, std::move(reason)};
}

StepResult accept(ActionState& st, StageEntry e) {
  e.accepted = true;
  st.log.push_back(std::move(e));
  return {true, {}};
}

void require_free_class(LetterClass cls) {
  if (cls == LetterClass::G0) throw G0Error("free generator class expected");
}

LetterClass join_class(TripleClass cls) {
  switch (cls) {
    case TripleClass::ATriple:
      return LetterClass::U;
    case TripleClass::TTriple:
      return LetterClass::S;
    case TripleClass::Free:
      return LetterClass::R;
    default:
      throw G0Error("join target class must be ATriple, TTriple or Free");
  }
}

// "does not yet act anywhere": S keeps the forced x0 pair from activation,
// everything else must be empty.
bool generator_fresh(const ActionState& st, const GenMap& m) {
  if (m.cls == LetterClass::S)
    return m.defined_pairs() == 1 && m.forward[st.g0.x0] == st.g0.x0;
  return m.defined_pairs() == 0;
}

}  // namespace

StepResult introduce_generator(ActionState& st, LetterClass cls, int index) {
  require_free_class(cls);
  if (index < 0) throw G0Error("generator index must be nonnegative");
  StageEntry e = blank_entry(StageOp::Activate, cls, index);
  if (st.find_genmap(cls, index) != nullptr)
    return reject(st, std::move(e), "generator already active");
  activate_generator(st, cls, index);
  return accept(st, std::move(e));
}

StepResult extend_generator(ActionState& st, LetterClass cls, int index,
                            bool inverse, PointId x) {
  require_free_class(cls);
  if (x < 0 || x >= st.n_points()) throw G0Error("point id out of range");
  StageEntry e = blank_entry(StageOp::Extend, cls, index);
  e.inverse = inverse;
  e.at = x;

  GenMap* m = st.find_genmap(cls, index);
  if (m == nullptr) return reject(st, std::move(e), "generator not active");
  const std::vector<PointId>& dir = inverse ? m->backward : m->forward;
  if (dir[x] != kUndefined)
    return reject(st, std::move(e), "image already defined");

  const PointId base = adjoin_block(st, static_cast<int>(st.log.size()));
  // The map always stores forward pairs; a backward extension writes them
  // from the fresh base back to x. Companions use the same group elements
  // on both sides, which is exactly the closure law.
  const PointId from = inverse ? base : x;
  const PointId to = inverse ? x : base;
  define_pair(st, *m, from, to);
  if (cls == LetterClass::S)
    define_pair(st, *m, st.image(from, st.g0.t), st.image(to, st.g0.t));
  if (cls == LetterClass::U) {
    define_pair(st, *m, st.image(from, st.g0.a), st.image(to, st.g0.a));
    define_pair(st, *m, st.image(from, st.g0.a2), st.image(to, st.g0.a2));
  }
  e.new_base = base;
  return accept(st, std::move(e));
}

StepResult connect_triple(ActionState& st, Triple B, TripleClass cls,
                          int gen_index, int word_bound,
                          long classify_budget) {
  const LetterClass gcls = join_class(cls);
  if (gen_index < 0) throw G0Error("generator index must be nonnegative");
  StageEntry e = blank_entry(StageOp::Join, gcls, gen_index);
  e.target = B;
  e.target_class = cls;

  TripleClassification tc = classify_triple(st, B, word_bound, classify_budget);
  if (tc.cls != cls)
    return reject(st, std::move(e),
                  "classification mismatch: expected " + to_string(cls) +
                      ", found " + to_string(tc.cls));
  // connectivity at the scale the run observes: a set connected only by
  // words longer than the bound counts as fresh, and a double connection
  // then sits beyond every length-bounded check of this run
  const ReachIndex reach = reachable_from_A(st, word_bound);
  if (reach.truncated)
    return reject(st, std::move(e), "reachability budget exhausted");
  if (reach.contains(triple_set_key(B)))
    return reject(st, std::move(e), "triple already connected");
  if (const GenMap* existing = st.find_genmap(gcls, gen_index))
    if (!generator_fresh(st, *existing))
      return reject(st, std::move(e), "generator not fresh");

  const G0Spec& g0 = st.g0;
  Triple tgt = B;
  if (cls == TripleClass::ATriple) {
    tgt = Triple{B.x, st.image(B.x, g0.a), st.image(B.x, g0.a2)};
  } else if (cls == TripleClass::TTriple) {
    // the set is {x0, y, y·t}; orient it from the smaller moved point
    PointId moved[2];
    int k = 0;
    for (PointId p : {B.x, B.y, B.z})
      if (p != g0.x0) {
        if (k == 2) throw G0Error("t-triple must contain x0");
        moved[k++] = p;
      }
    const PointId y = std::min(moved[0], moved[1]);
    tgt = Triple{g0.x0, y, st.image(y, g0.t)};
  }

  GenMap& m = activate_generator(st, gcls, gen_index);
  const PointId xa = st.image(g0.x0, g0.a);
  const PointId xa2 = st.image(g0.x0, g0.a2);
  switch (cls) {
    case TripleClass::ATriple:
      // x0·f = x; the closure companions land on x·a and x·a²
      define_pair(st, m, g0.x0, tgt.x);
      define_pair(st, m, xa, tgt.y);
      define_pair(st, m, xa2, tgt.z);
      break;
    case TripleClass::TTriple:
      // x0·f = x0 is pre-installed; (x0·a)·f = y and its t-companion
      // (x0·a)·t = x0·a² -> y·t finish A·f = B
      define_pair(st, m, xa, tgt.y);
      define_pair(st, m, st.image(xa, g0.t), st.image(tgt.y, g0.t));
      break;
    default:  // Free: three independent pairs in the given order
      define_pair(st, m, g0.x0, tgt.x);
      define_pair(st, m, xa, tgt.y);
      define_pair(st, m, xa2, tgt.z);
      break;
  }
  validate_state(st);
  e.target = tgt;
  return accept(st, std::move(e));
}

int fresh_index(const ActionState& st, LetterClass cls) {
  int next = 0;
  for (const GenMap& m : st.genmaps)
    if (m.cls == cls) next = std::max(next, m.index + 1);
  return next;
}

}  // namespace triact
