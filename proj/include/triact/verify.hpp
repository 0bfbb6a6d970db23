#pragma once

#include <string>
#include <utility>
#include <vector>

#include "triact/action.hpp"

namespace triact {

// One bad incident. condition is the clause number of the goodness
// definition (1..6); point-level incidents carry the point in triple.x
// with the other slots undefined.
struct Violation {
  int condition = 0;
  Triple triple{kUndefined, kUndefined, kUndefined};
  Word word;
  std::string detail;
};

// A bounded check that could not settle: typically a flip/shift of a
// triple not yet connected to A, or an exhausted search budget.
struct UnknownCase {
  int condition = 0;
  Triple triple{kUndefined, kUndefined, kUndefined};
  Word word;
  std::string detail;
};

struct GoodnessReport {
  int bound = 0;
  long incidents = 0;  // setwise-stabilizing (triple, word) pairs examined
  std::vector<Violation> violations;
  std::vector<UnknownCase> unknowns;
  bool ok() const { return violations.empty(); }
  std::string summary() const;
};

// Scan the six goodness conditions at word-length bound `bound`.
// Fixed-point conditions and pure-G0 stabilizers are checked exactly;
// stabilizing words with free letters are enumerated by a definedness-
// pruned walk over canonical words, seeded at the (small) domains of the
// free generators and parallelized across seeds.
GoodnessReport check_good(const ActionState& st, int bound,
                          long node_budget = 500000000);

// Serial reference: raw enumeration of every letter string up to the
// bound against every triple. Exponential in the bound; intended for
// small states and for cross-checking the seeded scan.
GoodnessReport check_good_reference(const ActionState& st, int bound);

struct Sharp3Report {
  int bound = 0;
  std::vector<Violation> violations;
  std::vector<UnknownCase> unknowns;  // budget exhaustion only
  bool ok() const { return violations.empty() && unknowns.empty(); }
  std::string summary() const;
};

// Condition 3 restricted to ordered (pointwise) fixing, reported alone.
Sharp3Report check_sharp3(const ActionState& st, int bound,
                          long node_budget = 500000000);

struct InvolutionReport {
  int bound = 0;           // conjugator length bound
  long conjugators = 0;    // words h enumerated
  long involutions = 0;    // distinct values of reduce(h t h^-1)
  long pairs_checked = 0;
  bool truncated = false;  // a budget cut enumeration or pairing short
  std::vector<std::pair<Word, Word>> commuting;  // distinct commuting pairs
  bool ok() const { return commuting.empty(); }
  std::string summary() const;
};

// Enumerate involutions h t h^-1 for canonical words h up to the bound
// and report any two distinct ones that commute. Budgets keep the
// quadratic pair scan finite on large alphabets; cuts are reported, never
// silent.
InvolutionReport check_involutions(const ActionState& st, int bound,
                                   long conjugator_budget = 200000,
                                   long pair_budget = 20000000);

struct EquivarianceReport {
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }
};

// Full scan of the S- and U-closure laws and the x0 fixed pairs.
EquivarianceReport check_equivariance(const ActionState& st);

}  // namespace triact
