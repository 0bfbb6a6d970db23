#include "triact/word.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace triact {

bool is_exact_t(Letter l, const G0Spec& g0) {
  return l.is_g0() && l.index() == g0.t;
}

bool is_exact_shift(Letter l, const G0Spec& g0) {
  return l.is_g0() && (l.index() == g0.a || l.index() == g0.a2);
}

namespace {

void validate_letter(Letter l, const G0Spec& g0) {
  if (l.is_g0()) {
    if (l.inverted()) throw G0Error("G0 letter with inverse flag");
    if (l.index() <= 0 || l.index() >= g0.order)
      throw G0Error("G0 letter out of range (or identity used as a letter)");
  } else if (l.index() < 0) {
    throw G0Error("free letter index out of range");
  }
}

bool free_cancel_pair(Letter a, Letter b) {
  return a.is_free() && b.is_free() && a.cls() == b.cls() &&
         a.index() == b.index() && a.inverted() != b.inverted();
}

// A central letter commutes with free letters of its companion family:
// exact t with S, exact a/a^2 with U.
bool commutes_over(Letter central, Letter f, const G0Spec& g0) {
  if (is_exact_t(central, g0)) return f.cls() == LetterClass::S;
  if (is_exact_shift(central, g0)) return f.cls() == LetterClass::U;
  return false;
}

// Merge of (g,h) is deferred while h is a central letter that still has to
// travel right through its companion block; merging first would bury the
// central letter inside a composite syllable and miss the right-adjacent
// merge the placement policy asks for.
bool merge_deferred(const Word& w, size_t i, const G0Spec& g0) {
  if (i + 2 >= w.size()) return false;
  return commutes_over(w[i + 1], w[i + 2], g0);
}

// Left-merge redex at i: G0 syllable, then a run of the companion family,
// then the matching central letter which has nowhere to go on the right.
// Returns the position of the central letter, or 0 if no redex.
size_t left_merge_redex(const Word& w, size_t i, LetterClass family,
                        const G0Spec& g0) {
  if (!w[i].is_g0()) return 0;
  const bool t_side = family == LetterClass::S;
  if (t_side ? is_exact_t(w[i], g0) : is_exact_shift(w[i], g0)) return 0;
  size_t j = i + 1;
  while (j < w.size() && w[j].is_free() && w[j].cls() == family) ++j;
  if (j == i + 1 || j == w.size()) return 0;
  if (!(t_side ? is_exact_t(w[j], g0) : is_exact_shift(w[j], g0))) return 0;
  if (j + 1 < w.size() &&
      (w[j + 1].is_g0() || w[j + 1].cls() == family))
    return 0;
  return j;
}

bool rule_applies(const Word& w, size_t i, RuleKind k, const G0Spec& g0) {
  switch (k) {
    case RuleKind::FreeCancel:
      return free_cancel_pair(w[i], w[i + 1]);
    case RuleKind::Merge:
      // runs of G0 syllables collapse from their left edge; pairing in any
      // other order could manufacture an exact central letter mid-run and
      // leak it into an adjacent block
      return w[i].is_g0() && w[i + 1].is_g0() &&
             (i == 0 || !w[i - 1].is_g0()) && !merge_deferred(w, i, g0);
    case RuleKind::SwapTS:
      return is_exact_t(w[i], g0) && w[i + 1].cls() == LetterClass::S &&
             w[i + 1].is_free();
    case RuleKind::SwapAU:
      return is_exact_shift(w[i], g0) && w[i + 1].cls() == LetterClass::U &&
             w[i + 1].is_free();
    case RuleKind::LeftMergeT:
      return left_merge_redex(w, i, LetterClass::S, g0) != 0;
    case RuleKind::LeftMergeA:
      return left_merge_redex(w, i, LetterClass::U, g0) != 0;
  }
  return false;
}

}  // namespace

std::vector<RewriteStep> applicable_rules(const Word& w, const G0Spec& g0) {
  std::vector<RewriteStep> out;
  if (w.size() < 2) return out;
  // Rules are admitted in layers. Free cancellations run first; merges wait
  // for them because the merge/defer decision reads the letter beyond the
  // pair, which a cancellation can replace. Placement rules wait for both
  // and are handed out one at a time, leftmost first: a placement further
  // right can cascade cancellations that rewrite the neighbourhood an
  // earlier placement decision depends on. Within a layer the order is
  // free; across layers this keeps the normal form order-independent.
  for (size_t i = 0; i + 1 < w.size(); ++i)
    if (rule_applies(w, i, RuleKind::FreeCancel, g0))
      out.push_back({RuleKind::FreeCancel, i});
  if (!out.empty()) return out;
  for (size_t i = 0; i + 1 < w.size(); ++i)
    if (rule_applies(w, i, RuleKind::Merge, g0))
      out.push_back({RuleKind::Merge, i});
  if (!out.empty()) return out;
  for (size_t i = 0; i + 1 < w.size(); ++i)
    for (RuleKind k : {RuleKind::SwapTS, RuleKind::SwapAU,
                       RuleKind::LeftMergeT, RuleKind::LeftMergeA})
      if (rule_applies(w, i, k, g0)) {
        out.push_back({k, i});
        return out;
      }
  return out;
}

Word apply_rule(const Word& w, const RewriteStep& step, const G0Spec& g0) {
  if (!rule_applies(w, step.pos, step.kind, g0))
    throw G0Error("rewrite step does not apply");
  Word r = w;
  const size_t i = step.pos;
  switch (step.kind) {
    case RuleKind::FreeCancel:
      r.erase(r.begin() + i, r.begin() + i + 2);
      break;
    case RuleKind::Merge: {
      int p = g0.mul(r[i].index(), r[i + 1].index());
      if (p == 0) {
        r.erase(r.begin() + i, r.begin() + i + 2);
      } else {
        r[i] = Letter::g0(p);
        r.erase(r.begin() + i + 1);
      }
      break;
    }
    case RuleKind::SwapTS:
    case RuleKind::SwapAU:
      std::swap(r[i], r[i + 1]);
      break;
    case RuleKind::LeftMergeT:
    case RuleKind::LeftMergeA: {
      LetterClass fam = step.kind == RuleKind::LeftMergeT ? LetterClass::S
                                                          : LetterClass::U;
      size_t j = left_merge_redex(r, i, fam, g0);
      // product cannot be the identity: the landing is not the central
      // letter's inverse (guarded above)
      r[i] = Letter::g0(g0.mul(r[i].index(), r[j].index()));
      r.erase(r.begin() + j);
      break;
    }
  }
  return r;
}

Word reduce(Word w, const G0Spec& g0) {
  for (Letter l : w) validate_letter(l, g0);
  while (true) {
    auto rules = applicable_rules(w, g0);
    if (rules.empty()) return w;
    w = apply_rule(w, rules.front(), g0);
  }
}

bool is_canonical(const Word& w, const G0Spec& g0) {
  return applicable_rules(w, g0).empty();
}

bool is_reduced(const Word& w, const G0Spec& g0) {
  const size_t n = w.size();
  for (size_t i = 0; i + 1 < n; ++i) {
    if (free_cancel_pair(w[i], w[i + 1])) return false;
    if (w[i].is_g0() && w[i + 1].is_g0()) return false;
  }
  // s1 t s2  and  u1 a^k u2
  for (size_t i = 0; i + 2 < n; ++i) {
    if (w[i].cls() == LetterClass::S && w[i].is_free() &&
        is_exact_t(w[i + 1], g0) && w[i + 2].cls() == LetterClass::S)
      return false;
    if (w[i].cls() == LetterClass::U && w[i].is_free() &&
        is_exact_shift(w[i + 1], g0) && w[i + 2].cls() == LetterClass::U)
      return false;
  }
  // t s_1..s_n g and its mirror g s_1..s_n t; same for a^k with U-runs
  auto run_pattern = [&](LetterClass fam, auto&& central) {
    for (size_t i = 0; i < n; ++i) {
      if (!w[i].is_g0()) continue;
      size_t j = i + 1;
      while (j < n && w[j].is_free() && w[j].cls() == fam) ++j;
      if (j == i + 1 || j == n || !w[j].is_g0()) continue;
      if (central(w[i]) || central(w[j])) return true;
    }
    return false;
  };
  if (run_pattern(LetterClass::S,
                  [&](Letter l) { return is_exact_t(l, g0); }))
    return false;
  if (run_pattern(LetterClass::U,
                  [&](Letter l) { return is_exact_shift(l, g0); }))
    return false;
  return true;
}

Word invert(const Word& w, const G0Spec& g0) {
  Word r;
  r.reserve(w.size());
  for (auto it = w.rbegin(); it != w.rend(); ++it) {
    if (it->is_g0())
      r.push_back(Letter::g0(g0.inverse_of(it->index())));
    else
      r.push_back(it->opposite());
  }
  return reduce(std::move(r), g0);
}

Word multiply(const Word& lhs, const Word& rhs, const G0Spec& g0) {
  Word r = lhs;
  r.insert(r.end(), rhs.begin(), rhs.end());
  return reduce(std::move(r), g0);
}

bool words_equal(const Word& lhs, const Word& rhs, const G0Spec& g0) {
  return multiply(lhs, invert(rhs, g0), g0).empty();
}

std::pair<Word, Word> cyclic_reduce(const Word& w_in, const G0Spec& g0) {
  Word core = w_in;
  Word conj;
  auto conjugate_by = [&](Word c) {
    // new conjugator composes on the left of whatever we already peeled
    c.insert(c.end(), conj.begin(), conj.end());
    conj = std::move(c);
  };
  // outer peel on the raw word, so explicit f^-1 .. f and g .. h wrappers
  // become conjugators instead of being folded away by interior reduction
  bool peeled = true;
  while (peeled && core.size() >= 2) {
    peeled = false;
    Letter first = core.front(), last = core.back();
    if (free_cancel_pair(last, first)) {
      conjugate_by({last});
      core.pop_back();
      core.erase(core.begin());
      peeled = true;
    } else if (first.is_g0() && last.is_g0()) {
      conjugate_by({last});
      int p = g0.mul(last.index(), first.index());
      core.pop_back();
      core.erase(core.begin());
      if (p != 0) core.insert(core.begin(), Letter::g0(p));
      peeled = true;
    }
  }
  core = reduce(std::move(core), g0);
  // rotation shrink: if some cyclic permutation reduces shorter, take it
  bool shrunk = true;
  while (shrunk && core.size() >= 2) {
    shrunk = false;
    for (size_t k = 1; k < core.size(); ++k) {
      Word rot(core.begin() + k, core.end());
      rot.insert(rot.end(), core.begin(), core.begin() + k);
      Word red = reduce(rot, g0);
      if (red.size() < core.size()) {
        Word prefix(core.begin(), core.begin() + k);
        conjugate_by(invert(prefix, g0));
        core = std::move(red);
        shrunk = true;
        break;
      }
    }
  }
  conj = reduce(std::move(conj), g0);
  return {std::move(core), std::move(conj)};
}

bool is_cyclically_reduced(const Word& w, const G0Spec& g0) {
  if (!is_canonical(w, g0)) return false;
  if (w.size() < 2) return true;
  if (free_cancel_pair(w.back(), w.front())) return false;
  if (w.back().is_g0() && w.front().is_g0()) return false;
  return true;
}

bool can_append_canonical(const Word& w, Letter next, const G0Spec& g0) {
  if (w.empty()) return true;
  Letter last = w.back();
  if (free_cancel_pair(last, next)) return false;
  if (last.is_g0() && next.is_g0()) return false;
  if (commutes_over(last, next, g0)) return false;
  // appending the central letter right after (G0 syllable, companion run)
  // would create a left-merge redex
  auto closes_left_merge = [&](LetterClass fam, bool central_is_t) {
    size_t j = w.size();
    while (j > 0 && w[j - 1].is_free() && w[j - 1].cls() == fam) --j;
    if (j == w.size() || j == 0) return false;
    if (!w[j - 1].is_g0()) return false;
    return central_is_t ? !is_exact_t(w[j - 1], g0)
                        : !is_exact_shift(w[j - 1], g0);
  };
  if (is_exact_t(next, g0) && closes_left_merge(LetterClass::S, true))
    return false;
  if (is_exact_shift(next, g0) && closes_left_merge(LetterClass::U, false))
    return false;
  return true;
}

std::string LetterNames::name_of(Letter l) const {
  if (l.is_g0()) return g0->names[l.index()];
  const std::vector<std::string>* fam = l.cls() == LetterClass::R   ? &r
                                        : l.cls() == LetterClass::S ? &s
                                                                    : &u;
  std::string base;
  if (l.index() < static_cast<int>(fam->size())) {
    base = (*fam)[l.index()];
  } else {
    char c = l.cls() == LetterClass::R ? 'r' : l.cls() == LetterClass::S ? 's' : 'u';
    base = c + std::to_string(l.index());
  }
  return l.inverted() ? base + "^-1" : base;
}

std::string word_to_string(const Word& w, const LetterNames& names) {
  if (w.empty()) return "1";
  std::string out;
  for (size_t i = 0; i < w.size(); ++i) {
    if (i) out += ' ';
    out += names.name_of(w[i]);
  }
  return out;
}

Word parse_word(const std::string& text, const LetterNames& names) {
  Word w;
  std::istringstream in(text);
  std::string tok;
  while (in >> tok) {
    bool inverse = false;
    std::string base = tok;
    if (base.size() > 3 && base.ends_with("^-1")) {
      inverse = true;
      base.resize(base.size() - 3);
    }
    auto find_free = [&](const std::vector<std::string>& fam, LetterClass c,
                         Word& out) {
      for (size_t i = 0; i < fam.size(); ++i)
        if (fam[i] == base) {
          out.push_back(Letter::free(c, static_cast<int>(i), inverse));
          return true;
        }
      return false;
    };
    if (find_free(names.r, LetterClass::R, w)) continue;
    if (find_free(names.s, LetterClass::S, w)) continue;
    if (find_free(names.u, LetterClass::U, w)) continue;
    if (inverse) throw G0Error("unknown free letter: " + tok);
    if (tok == "1") throw G0Error("the identity is not a letter");
    int e = names.g0 ? names.g0->element_by_name(tok) : -1;
    if (e <= 0) throw G0Error("unknown letter: " + tok);
    w.push_back(Letter::g0(e));
  }
  return w;
}

}  // namespace triact
