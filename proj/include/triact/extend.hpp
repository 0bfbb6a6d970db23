#pragma once

#include <string>

#include "triact/action.hpp"

namespace triact {

// Outcome of one construction step. Rejections leave the state untouched
// apart from the log entry recording the reason.
struct StepResult {
  bool accepted = false;
  std::string reason;  // empty when accepted

  explicit operator bool() const { return accepted; }
};

// Create the generator map for (cls, index) and log the activation.
// Class S gets its forced fixed pair x0·s = x0. Rejected if the map
// already exists, so a log never contains duplicate activations.
StepResult introduce_generator(ActionState& st, LetterClass cls, int index);

// Totalize one direction of an active generator f = (cls, index) at x by
// adjoining a fresh regular orbit block based at x'. Forward installs
// x·f = x' plus the closure companions of the class (t-pair for S, a- and
// a²-pairs for U); backward installs x·f⁻¹ = x', i.e. the forward pairs
// from x' back to x. Rejected when the direction is already defined at x
// or the generator is not active.
StepResult extend_generator(ActionState& st, LetterClass cls, int index,
                            bool inverse, PointId x);

// Join the distinguished triple to B with a fresh generator whose class
// matches B's shape: U for a-triples, S for t-triples, R for free triples.
// Re-checks at execution time that B's set is still unreached, that the
// classification at word_bound agrees with cls, and that gen_index does
// not act anywhere yet. A- and t-triples are reordered to their canonical
// orientation before the pairs are written; free triples keep the given
// order.
StepResult connect_triple(ActionState& st, Triple B, TripleClass cls,
                          int gen_index, int word_bound,
                          long classify_budget = 200000);

// Smallest index of the class no genmap has used yet.
int fresh_index(const ActionState& st, LetterClass cls);

}  // namespace triact
