#include "triact/verify.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <functional>
#include <set>
#include <sstream>
#include <utility>

#include "triact/word.hpp"

namespace triact {

namespace {

struct WordLess {
  bool operator()(const Word& a, const Word& b) const {
    return std::lexicographical_compare(
        a.begin(), a.end(), b.begin(), b.end(),
        [](Letter x, Letter y) { return x.bits < y.bits; });
  }
};

Triple ascending(Triple c) {
  TripleSetKey k = triple_set_key(c);
  return Triple{k[0], k[1], k[2]};
}

// Permutation a set-stabilizing word induces on the three points.
enum class PermShape { Pointwise, Flip, Shift };

PermShape perm_shape(const Triple& before, const Triple& after) {
  const int fixed = (before.x == after.x) + (before.y == after.y) +
                    (before.z == after.z);
  if (fixed == 3) return PermShape::Pointwise;
  if (fixed == 1) return PermShape::Flip;
  return PermShape::Shift;  // an injection on a 3-set cannot fix exactly 2
}

// Conjugacy data anchored at A's stabilizer {1, a, a², t, at, a²t}.
struct ConjTargets {
  std::array<int, 3> flips;   // t and its two a-conjugates
  std::array<int, 2> shifts;  // a, a²
  std::vector<char> g0_conj_t, g0_conj_a;  // table-decided conjugacy in G0

  bool flip_elem(int g) const {
    return g == flips[0] || g == flips[1] || g == flips[2];
  }
  bool shift_elem(int g) const { return g == shifts[0] || g == shifts[1]; }
};

ConjTargets conj_targets(const G0Spec& g0) {
  ConjTargets ct;
  ct.flips = {g0.t, g0.mul(g0.a, g0.t), g0.mul(g0.a2, g0.t)};
  ct.shifts = {g0.a, g0.a2};
  ct.g0_conj_t.assign(g0.order, 0);
  ct.g0_conj_a.assign(g0.order, 0);
  for (int g = 0; g < g0.order; ++g)
    for (int k = 0; k < g0.order; ++k) {
      const int c = g0.mul(g0.mul(k, g), g0.inverse_of(k));
      if (c == g0.t) ct.g0_conj_t[g] = 1;
      if (c == g0.a) ct.g0_conj_a[g] = 1;
    }
  return ct;
}

struct Incident {
  Triple triple;  // ascending representative of the invariant set
  Word word;      // canonical stabilizing word
  PermShape shape;
};

// Turns incidents into report entries, deduplicated per (condition, set).
// In sharp3 mode only pointwise incidents are considered.
struct ReportBuilder {
  const ActionState& st;
  const ConjTargets* ct = nullptr;
  const ReachIndex* reach = nullptr;
  GoodnessReport& rep;
  bool full = true;
  std::set<std::pair<int, TripleSetKey>> seen_violation, seen_unknown;
  std::set<TripleSetKey> with_shift, with_flip;

  void violation(int cond, Triple c, Word w, std::string detail) {
    if (seen_violation.emplace(cond, triple_set_key_or_point(c)).second)
      rep.violations.push_back({cond, c, std::move(w), std::move(detail)});
  }
  void unknown(int cond, Triple c, Word w, std::string detail) {
    if (seen_unknown.emplace(cond, triple_set_key_or_point(c)).second)
      rep.unknowns.push_back({cond, c, std::move(w), std::move(detail)});
  }

  // point-level witnesses reuse the triple slots with kUndefined padding
  static TripleSetKey triple_set_key_or_point(const Triple& c) {
    TripleSetKey k{c.x, c.y, c.z};
    std::sort(k.begin(), k.end());
    return k;
  }

  void handle(const Incident& inc) {
    ++rep.incidents;
    switch (inc.shape) {
      case PermShape::Pointwise:
        if (!inc.word.empty())
          violation(3, inc.triple, inc.word,
                    "nontrivial word fixes the triple pointwise");
        return;
      case PermShape::Flip:
        if (!full) return;
        with_flip.insert(triple_set_key(inc.triple));
        certify(4, inc);
        return;
      case PermShape::Shift:
        if (!full) return;
        with_shift.insert(triple_set_key(inc.triple));
        certify(5, inc);
        return;
    }
  }

  // Condition 4/5: transport the stabilizer to A and compare against the
  // explicit flip/shift elements of A's stabilizer. Pure G0 syllables are
  // settled by the multiplication table instead.
  void certify(int cond, const Incident& inc) {
    const bool want_flip = cond == 4;
    if (inc.word.size() == 1 && inc.word[0].is_g0()) {
      const int g = inc.word[0].index();
      const bool ok =
          want_flip ? ct->g0_conj_t[g] != 0 : ct->g0_conj_a[g] != 0;
      if (!ok)
        violation(cond, inc.triple, inc.word,
                  want_flip ? "G0 flip is not conjugate to t"
                            : "G0 shift is not conjugate to a");
      return;
    }
    const TripleSetKey key = triple_set_key(inc.triple);
    if (!reach->contains(key)) {
      unknown(cond, inc.triple, inc.word,
              "set not connected to A; conjugacy undecided at this stage");
      return;
    }
    auto w0 = find_connection(st, *reach, inc.triple);
    if (!w0) throw G0Error("reached set has no ordered connection");
    const Word conj = multiply(
        multiply(*w0, inc.word, st.g0), invert(*w0, st.g0), st.g0);
    const bool ok = conj.size() == 1 && conj[0].is_g0() &&
                    (want_flip ? ct->flip_elem(conj[0].index())
                               : ct->shift_elem(conj[0].index()));
    if (!ok)
      violation(cond, inc.triple, conj,
                want_flip ? "flip does not transport to a conjugate of t"
                          : "shift does not transport to a conjugate of a");
  }

  void finish_condition6() {
    if (!full) return;
    for (const TripleSetKey& key : with_shift) {
      if (!with_flip.count(key) || reach->contains(key)) continue;
      violation(6, Triple{key[0], key[1], key[2]}, {},
                "set has both a shift and a flip but no connection to A");
    }
  }
};

void scan_fixed_points(const ActionState& st, ReportBuilder& rb) {
  const G0Spec& g0 = st.g0;
  const Triple pad{kUndefined, kUndefined, kUndefined};
  if (st.image(g0.x0, g0.t) != g0.x0) {
    Triple c = pad;
    c.x = g0.x0;
    rb.violation(2, c, {Letter::g0(g0.t)}, "t does not fix x0");
  }
  for (PointId p = 0; p < st.n_points(); ++p) {
    if (st.image(p, g0.a) == p) {
      Triple c = pad;
      c.x = p;
      rb.violation(1, c, {Letter::g0(g0.a)}, "a fixes a point");
    }
    if (p != g0.x0 && st.image(p, g0.t) == p) {
      Triple c = pad;
      c.x = p;
      rb.violation(2, c, {Letter::g0(g0.t)}, "t fixes a second point");
    }
  }
}

// Invariant 3-sets of a single G0 element, read off its cycle structure:
// a 3-cycle is shifted, a fixed point plus a 2-cycle is flipped, and three
// fixed points violate condition 3 outright.
void scan_g0_elements(const ActionState& st, ReportBuilder& rb) {
  const int n = st.n_points();
  std::vector<char> seen(n);
  for (int g = 1; g < st.g0.order; ++g) {
    std::fill(seen.begin(), seen.end(), 0);
    std::vector<PointId> fixed;
    std::vector<std::array<PointId, 2>> swaps;
    std::vector<Triple> cycles3;
    for (PointId p = 0; p < n; ++p) {
      if (seen[p]) continue;
      std::array<PointId, 3> cyc{};
      PointId q = p;
      int len = 0;
      do {
        if (len < 3) cyc[len] = q;
        seen[q] = 1;
        q = st.image(q, g);
        ++len;
      } while (q != p);
      if (len == 1) fixed.push_back(p);
      else if (len == 2) swaps.push_back({cyc[0], cyc[1]});
      else if (len == 3) cycles3.push_back(Triple{cyc[0], cyc[1], cyc[2]});
    }
    const Word wg{Letter::g0(g)};
    if (fixed.size() >= 3)
      rb.violation(3, Triple{fixed[0], fixed[1], fixed[2]}, wg,
                   "G0 element fixes three points");
    if (!rb.full) continue;
    for (const Triple& c : cycles3)
      rb.handle({ascending(c), wg, PermShape::Shift});
    for (PointId f : fixed)
      for (const auto& s : swaps)
        rb.handle({ascending(Triple{f, s[0], s[1]}), wg, PermShape::Flip});
  }
}

struct Seed {
  Letter first;
  Triple c;
};

// All ascending triples inside the domain of one direction of one free
// generator. Every cyclically reduced stabilizing word with a free letter
// rotates to start at one, so these seeds see every braided cycle.
void build_seeds(const ActionState& st, std::vector<Seed>& seeds,
                 std::atomic<long>& budget, bool& exhausted) {
  for (const GenMap& m : st.genmaps)
    for (const bool inv : {false, true}) {
      const std::vector<PointId>& dir = inv ? m.backward : m.forward;
      std::vector<PointId> dom;
      for (PointId p = 0; p < static_cast<PointId>(dir.size()); ++p)
        if (dir[p] != kUndefined) dom.push_back(p);
      if (dom.size() < 3) continue;
      const Letter l = Letter::free(m.cls, m.index, inv);
      for (size_t i = 0; i < dom.size(); ++i)
        for (size_t j = i + 1; j < dom.size(); ++j)
          for (size_t k = j + 1; k < dom.size(); ++k) {
            if (budget.fetch_sub(1) <= 0) {
              exhausted = true;
              return;
            }
            seeds.push_back({l, Triple{dom[i], dom[j], dom[k]}});
          }
    }
}

// Per-letter total image tables make the walk a pure array scan; they are
// filled through apply_letter, so both routes share one semantics.
using ImageTables = std::vector<std::vector<PointId>>;

ImageTables image_tables(const ActionState& st,
                         const std::vector<Letter>& alphabet) {
  ImageTables img(alphabet.size());
  const int n = st.n_points();
  for (size_t li = 0; li < alphabet.size(); ++li) {
    img[li].assign(n, kUndefined);
    for (PointId p = 0; p < n; ++p)
      if (const auto q = apply_letter(st, p, alphabet[li])) img[li][p] = *q;
  }
  return img;
}

struct DfsBudget {
  std::atomic<long>& shared;
  std::atomic<bool>& exhausted;
  long allowance = 0;
  bool stop = false;

  // amortize the shared atomic by reserving chunks, honoring exact small
  // budgets (tests pin budgets of single digits)
  void charge() {
    if (allowance > 0) {
      --allowance;
      return;
    }
    constexpr long kChunk = 1024;
    const long before = shared.fetch_sub(kChunk);
    if (before <= 0) {
      shared.fetch_add(kChunk);
      exhausted.store(true);
      stop = true;
      return;
    }
    allowance = std::min(before, kChunk) - 1;
  }
  void settle() {
    if (allowance > 0) shared.fetch_add(allowance);
  }
};

void dfs_seed(const ActionState& st, const std::vector<Letter>& alphabet,
              const ImageTables& img, const Seed& sd, int bound,
              std::atomic<long>& budget, std::atomic<bool>& exhausted,
              std::vector<Incident>& out) {
  Word w{sd.first};
  auto first = apply_word_triple(st, sd.c, w);
  if (!first) throw G0Error("seed letter undefined on its own domain");
  const TripleSetKey home = triple_set_key(sd.c);
  DfsBudget bk{budget, exhausted};

  std::function<void(const Triple&)> explore = [&](const Triple& cur) {
    if (triple_set_key(cur) == home) {
      // only genuine cyclic stabilizers; conjugates of shorter ones are
      // found from their own seeds
      if (is_cyclically_reduced(w, st.g0))
        out.push_back({sd.c, w, perm_shape(sd.c, cur)});
    }
    if (static_cast<int>(w.size()) >= bound) return;
    if (exhausted.load(std::memory_order_relaxed)) return;
    for (size_t li = 0; li < alphabet.size(); ++li) {
      const std::vector<PointId>& row = img[li];
      const PointId x = row[cur.x];
      if (x == kUndefined) continue;
      const PointId y = row[cur.y];
      if (y == kUndefined) continue;
      const PointId z = row[cur.z];
      if (z == kUndefined) continue;
      if (!can_append_canonical(w, alphabet[li], st.g0)) continue;
      bk.charge();
      if (bk.stop) return;
      w.push_back(alphabet[li]);
      explore(Triple{x, y, z});
      w.pop_back();
      if (bk.stop) return;
    }
  };
  explore(*first);
  bk.settle();
}

// Shared core of check_good and check_sharp3.
void run_scan(const ActionState& st, int bound, long node_budget,
              ReportBuilder& rb) {
  scan_g0_elements(st, rb);

  std::atomic<long> budget{node_budget};
  bool seed_overflow = false;
  std::vector<Seed> seeds;
  build_seeds(st, seeds, budget, seed_overflow);

  std::vector<std::vector<Incident>> found(seeds.size());
  std::atomic<bool> exhausted{false};
  const std::vector<Letter> alphabet = active_alphabet(st);
  const ImageTables img = image_tables(st, alphabet);
  const long n_seeds = static_cast<long>(seeds.size());
#pragma omp parallel for schedule(dynamic, 64)
  for (long i = 0; i < n_seeds; ++i) {
    if (exhausted.load(std::memory_order_relaxed)) continue;
    dfs_seed(st, alphabet, img, seeds[i], bound, budget, exhausted, found[i]);
  }

  for (const auto& batch : found)
    for (const Incident& inc : batch) rb.handle(inc);
  if (seed_overflow || exhausted.load())
    rb.rep.unknowns.push_back(
        {0, Triple{kUndefined, kUndefined, kUndefined}, {},
         "node budget exhausted; stabilizer enumeration incomplete"});
}

}  // namespace

GoodnessReport check_good(const ActionState& st, int bound,
                          long node_budget) {
  if (bound < 1) throw G0Error("word bound must be positive");
  GoodnessReport rep;
  rep.bound = bound;
  const ConjTargets ct = conj_targets(st.g0);
  const ReachIndex reach = reachable_from_A(st, bound);
  ReportBuilder rb{st, &ct, &reach, rep, true};
  if (reach.truncated)
    rep.unknowns.push_back(
        {0, Triple{kUndefined, kUndefined, kUndefined}, {},
         "reach budget exhausted; connection certificates incomplete"});
  scan_fixed_points(st, rb);
  run_scan(st, bound, node_budget, rb);
  rb.finish_condition6();
  return rep;
}

Sharp3Report check_sharp3(const ActionState& st, int bound,
                          long node_budget) {
  if (bound < 1) throw G0Error("word bound must be positive");
  GoodnessReport rep;
  rep.bound = bound;
  ReportBuilder rb{st, nullptr, nullptr, rep, false};
  run_scan(st, bound, node_budget, rb);
  Sharp3Report out;
  out.bound = bound;
  out.violations = std::move(rep.violations);
  out.unknowns = std::move(rep.unknowns);
  return out;
}

InvolutionReport check_involutions(const ActionState& st, int bound,
                                   long conjugator_budget, long pair_budget) {
  if (bound < 0) throw G0Error("conjugator bound must be nonnegative");
  InvolutionReport rep;
  rep.bound = bound;
  const G0Spec& g0 = st.g0;
  const std::vector<Letter> alphabet = active_alphabet(st);
  const Word tw{Letter::g0(g0.t)};

  std::set<Word, WordLess> invs;
  std::vector<Word> level{Word{}};
  long count = 1;
  invs.insert(tw);  // h = empty
  for (int len = 1; len <= bound && !rep.truncated; ++len) {
    std::vector<Word> next;
    for (const Word& h : level) {
      for (const Letter l : alphabet) {
        if (!can_append_canonical(h, l, g0)) continue;
        Word h2 = h;
        h2.push_back(l);
        if (++count > conjugator_budget) {
          rep.truncated = true;
          break;
        }
        invs.insert(
            multiply(multiply(h2, tw, g0), invert(h2, g0), g0));
        next.push_back(std::move(h2));
      }
      if (rep.truncated) break;
    }
    level = std::move(next);
  }
  rep.conjugators = count;
  rep.involutions = static_cast<long>(invs.size());

  // the pair scan runs even when the ball was truncated: a verdict about
  // the enumerated prefix is still a verdict
  const std::vector<Word> list(invs.begin(), invs.end());
  bool pairs_cut = false;
  for (size_t i = 0; i < list.size() && !pairs_cut; ++i)
    for (size_t j = i + 1; j < list.size(); ++j) {
      if (rep.pairs_checked >= pair_budget) {
        rep.truncated = true;
        pairs_cut = true;
        break;
      }
      ++rep.pairs_checked;
      // multiply returns the normal form, so plain equality decides
      if (multiply(list[i], list[j], g0) == multiply(list[j], list[i], g0))
        rep.commuting.emplace_back(list[i], list[j]);
    }
  return rep;
}

EquivarianceReport check_equivariance(const ActionState& st) {
  EquivarianceReport rep;
  const G0Spec& g0 = st.g0;
  const Triple pad{kUndefined, kUndefined, kUndefined};
  for (const GenMap& m : st.genmaps) {
    const Letter l = Letter::free(m.cls, m.index, false);
    if (m.cls == LetterClass::S && m.forward[g0.x0] != g0.x0) {
      Triple c = pad;
      c.x = g0.x0;
      rep.violations.push_back({0, c, {l}, "x0 pair missing or wrong"});
    }
    if (m.cls == LetterClass::R) continue;
    const std::vector<int> elems =
        m.cls == LetterClass::S ? std::vector<int>{g0.t}
                                : std::vector<int>{g0.a, g0.a2};
    for (PointId p = 0; p < static_cast<PointId>(m.forward.size()); ++p) {
      if (m.forward[p] == kUndefined) continue;
      for (int e : elems) {
        if (m.forward[st.image(p, e)] != st.image(m.forward[p], e)) {
          Triple c = pad;
          c.x = p;
          rep.violations.push_back(
              {0, c, {l}, "closure law broken at this point"});
        }
      }
    }
  }
  return rep;
}

std::string GoodnessReport::summary() const {
  std::ostringstream os;
  os << "goodness bound=" << bound << " incidents=" << incidents
     << " violations=" << violations.size()
     << " unknowns=" << unknowns.size();
  return os.str();
}

std::string Sharp3Report::summary() const {
  std::ostringstream os;
  os << "sharp3 bound=" << bound << " violations=" << violations.size()
     << " unknowns=" << unknowns.size();
  return os.str();
}

std::string InvolutionReport::summary() const {
  std::ostringstream os;
  os << "involutions bound=" << bound << " conjugators=" << conjugators
     << " involutions=" << involutions << " pairs=" << pairs_checked
     << " commuting=" << commuting.size()
     << (truncated ? " (truncated)" : "");
  return os.str();
}

}  // namespace triact
