#pragma once

#include <array>
#include <optional>
#include <map>
#include <string>
#include <vector>

#include "triact/g0.hpp"
#include "triact/word.hpp"

namespace triact {

using PointId = int;

inline constexpr PointId kUndefined = -1;

// Ordered triple of pairwise distinct points.
struct Triple {
  PointId x = kUndefined;
  PointId y = kUndefined;
  PointId z = kUndefined;

  bool operator==(const Triple&) const = default;
};

// Sorted components; two triples share a key iff they are equal as sets.
using TripleSetKey = std::array<PointId, 3>;

TripleSetKey triple_set_key(const Triple& c);

// Where a point came from: the seed action's base set, or one of the regular
// orbit blocks adjoined by generator extensions.
struct PointInfo {
  PointId id = kUndefined;
  bool base = false;
  int block = -1;  // orbit block number, -1 for base points
  int step = -1;   // log index of the extension that created the block
  int elem = 0;    // base point index, or G0-element index within the block
};

// Partial injection for one active free generator. forward[x] is the image
// of x under the generator (kUndefined if none); backward is its inverse.
struct GenMap {
  LetterClass cls = LetterClass::R;
  int index = 0;
  std::vector<PointId> forward;
  std::vector<PointId> backward;

  int defined_pairs() const;
};

enum class StageOp { Activate, Extend, Join };

enum class TripleClass { ATriple, TTriple, S3Stabilized, Free, Unknown };

std::string to_string(TripleClass c);

// One construction step, kept for audit and deterministic replay. Rejected
// steps record their reason and mutate nothing.
struct StageEntry {
  StageOp op = StageOp::Activate;
  LetterClass cls = LetterClass::R;
  int gen_index = 0;
  bool inverse = false;          // Extend: whether x·f⁻¹ was totalized
  PointId at = kUndefined;       // Extend: anchor point
  PointId new_base = kUndefined; // Extend: identity point of the fresh block
  Triple target;                 // Join: the triple connected to A
  TripleClass target_class = TripleClass::Unknown;  // Join
  bool accepted = true;
  std::string reject_reason;

  bool operator==(const StageEntry&) const = default;
};

// Growing partial action. G0 acts totally on every point: base points via
// the seed act table, orbit points by right multiplication on their element
// index (each block is a regular G0-orbit). Active generators act by partial
// injections subject to the closure laws (x·t)·s = (x·s)·t and
// (x·a^k)·u = (x·u)·a^k, with x0·s = x0 installed at activation.
struct ActionState {
  G0Spec g0;
  int n_base = 0;
  std::vector<int> block_step;  // per orbit block: log index of its Extend
  std::vector<GenMap> genmaps;  // activation order
  Triple A;
  std::vector<StageEntry> log;

  int n_points() const {
    return n_base + static_cast<int>(block_step.size()) * g0.order;
  }
  PointInfo point_info(PointId p) const;
  PointId image(PointId p, int g) const;  // total G0 action
  GenMap* find_genmap(LetterClass cls, int index);
  const GenMap* find_genmap(LetterClass cls, int index) const;
};

// Requires all seed hypotheses; throws G0Error naming the first failing
// condition id otherwise. A = (x0, x0·a, x0·a²).
ActionState init_state(const G0Spec& g0);

// Point evaluation. Free letters of inactive generators, or outside the
// defined domain, give nullopt — partiality is a value, not an error.
// Unknown point ids and malformed letters throw.
std::optional<PointId> apply_letter(const ActionState& st, PointId x,
                                    Letter l);

struct WordEval {
  std::optional<PointId> result;   // set iff every prefix was defined
  size_t defined_prefix = 0;       // letters applied before the undefined one
};

WordEval apply_word(const ActionState& st, PointId x, const Word& w);

// Componentwise apply_word; defined iff all three components are.
std::optional<Triple> apply_word_triple(const ActionState& st, const Triple& c,
                                        const Word& w);

// Letters that currently act: every nonidentity G0 syllable plus both
// directions of every active generator.
std::vector<Letter> active_alphabet(const ActionState& st);

struct TripleClassification {
  TripleClass cls = TripleClass::Unknown;
  int bound = 0;            // word-length bound the verdict is relative to
  Word stabilizer;          // nontrivial stabilizing word, when one was found
  bool budget_exhausted = false;
};

// ATriple / TTriple / S3Stabilized by exact set-closure under a and t.
// Otherwise searches canonical cyclically reduced words of length <= bound
// along defined moves for a set stabilizer: none found => Free (at the
// bound); found => Unknown with the witness; search cut off by the node
// budget => Unknown with budget_exhausted set.
TripleClassification classify_triple(const ActionState& st, const Triple& c,
                                     int bound, long budget = 200000);

// Breadth-first closure of the A-set under all currently defined letter
// moves on triples, with one canonical witness word per reached set.
//
// max_depth < 0 runs to saturation — only viable on small states, because
// the closure deliberately grows toward every triple set as construction
// progresses. A bounded run finds exactly the sets connected by a word of
// length <= max_depth (the scale at which the bounded verifier observes
// the state); set_budget is the hard stop, recorded in `truncated`.
struct ReachIndex {
  std::map<TripleSetKey, Word> witness;
  int depth = -1;
  bool truncated = false;

  bool contains(const TripleSetKey& k) const { return witness.count(k) != 0; }
};

ReachIndex reachable_from_A(const ActionState& st, int max_depth = -1,
                            long set_budget = 2000000);

// Ordered connection: a canonical word w with A·w = b exactly, if the set of
// b has been reached. Orderings are bridged through the G0 stabilizer of A.
std::optional<Word> find_connection(const ActionState& st,
                                    const ReachIndex& reach, const Triple& b);
std::optional<Word> find_connection(const ActionState& st, const Triple& b,
                                    int max_depth = -1);

// Low-level mutation primitives composed by the extension engine (and used
// by tests to assemble states by hand). adjoin_block appends one regular
// orbit block and grows every genmap; activate_generator creates the map if
// absent (installing x0·s = x0 for class S) and is idempotent; define_pair
// writes one forward/backward pair, throwing on redefinition or an
// injectivity clash. None of them write log entries.
PointId adjoin_block(ActionState& st, int step_index);
GenMap& activate_generator(ActionState& st, LetterClass cls, int index);
void define_pair(ActionState& st, GenMap& m, PointId from, PointId to);

// Full invariant sweep: mutual-inverse maps, S/U closure laws, x0·s = x0,
// a fixed-point free, t fixing exactly x0, block bookkeeping. Throws
// G0Error naming the first violation. Run after every mutation and on load.
void validate_state(const ActionState& st);

// Naming: base points keep their seed names; orbit points render as
// "q<block>.<g0 element name>".
std::string point_name(const ActionState& st, PointId p);
PointId point_by_name(const ActionState& st, const std::string& name);

// Letter naming context covering every active generator ("r0", "s2", ...).
LetterNames letter_names(const ActionState& st);

}  // namespace triact
