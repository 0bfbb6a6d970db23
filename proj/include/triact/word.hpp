#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "triact/g0.hpp"

namespace triact {

// A letter is either a nonidentity element of G0 or a free generator from one
// of the three families R, S, U (optionally inverted). Packed into 32 bits:
//   [0..23]  element index (G0) or generator index (free families)
//   [24..25] family
//   [26]     inverse flag (free letters only; G0 letters carry their own
//            inverse as a different element index)
enum class LetterClass : uint32_t { G0 = 0, R = 1, S = 2, U = 3 };

struct Letter {
  uint32_t bits = 0;

  Letter() = default;
  static Letter g0(int elem) { return Letter{static_cast<uint32_t>(elem)}; }
  static Letter free(LetterClass c, int index, bool inverse) {
    return Letter{static_cast<uint32_t>(index) |
                  (static_cast<uint32_t>(c) << 24) |
                  (inverse ? (1u << 26) : 0u)};
  }

  LetterClass cls() const { return static_cast<LetterClass>((bits >> 24) & 3u); }
  bool is_g0() const { return cls() == LetterClass::G0; }
  bool is_free() const { return !is_g0(); }
  int index() const { return static_cast<int>(bits & 0xffffffu); }
  bool inverted() const { return (bits >> 26) & 1u; }
  Letter opposite() const { return Letter{bits ^ (1u << 26)}; }

  bool operator==(const Letter&) const = default;

private:
  explicit Letter(uint32_t b) : bits(b) {}
};

using Word = std::vector<Letter>;

// True when the G0 letter is exactly t (resp. exactly a or a^2).
bool is_exact_t(Letter l, const G0Spec& g0);
bool is_exact_shift(Letter l, const G0Spec& g0);

// Rewriting rules used by reduce(). Exposed so tests can drive the rule
// engine with a randomized strategy and confirm the normal form does not
// depend on application order.
enum class RuleKind { FreeCancel, Merge, SwapTS, SwapAU, LeftMergeT, LeftMergeA };

struct RewriteStep {
  RuleKind kind;
  size_t pos;  // index of the left letter of the redex
};

std::vector<RewriteStep> applicable_rules(const Word& w, const G0Spec& g0);
Word apply_rule(const Word& w, const RewriteStep& step, const G0Spec& g0);

// Deterministic normal form: repeatedly applies the leftmost applicable rule.
// Throws G0Error on structurally invalid letters (identity G0 syllable,
// out-of-range indices).
Word reduce(Word w, const G0Spec& g0);

// Scans for the six forbidden subword patterns directly; true iff none
// occurs. Necessary but not sufficient for reduce(w) == w: reduced words are
// unique only up to placement of central letters (t within S-blocks, a
// powers within U-blocks).
bool is_reduced(const Word& w, const G0Spec& g0);

// reduce(w) == w: reduced and placement-policy compliant (no rule fires).
bool is_canonical(const Word& w, const G0Spec& g0);

Word invert(const Word& w, const G0Spec& g0);
Word multiply(const Word& lhs, const Word& rhs, const G0Spec& g0);
bool words_equal(const Word& lhs, const Word& rhs, const G0Spec& g0);

// Returns (core, conjugator) with reduce(conj^-1 * core * conj) equal to
// reduce(w); core is empty iff w represents the identity.
std::pair<Word, Word> cyclic_reduce(const Word& w, const G0Spec& g0);
bool is_cyclically_reduced(const Word& w, const G0Spec& g0);

// True when appending `next` to the reduced word `w` keeps it reduced (no
// rewriting rule fires across the seam). Canonical-word enumerators use this
// as a prefix-closed filter.
bool can_append_canonical(const Word& w, Letter next, const G0Spec& g0);

// Rendering / parsing against a generator naming context.
struct LetterNames {
  const G0Spec* g0 = nullptr;
  // free generator names per family, index-aligned (e.g. "r0", "s1")
  std::vector<std::string> r, s, u;

  std::string name_of(Letter l) const;
};

std::string word_to_string(const Word& w, const LetterNames& names);
// Parses whitespace-separated letters; free letters accept an optional ^-1
// suffix. Throws G0Error on unknown names.
Word parse_word(const std::string& text, const LetterNames& names);

}  // namespace triact
