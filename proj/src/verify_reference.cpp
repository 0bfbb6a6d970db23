#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <set>
#include <utility>

#include "triact/verify.hpp"
#include "triact/word.hpp"

// Serial brute-force goodness checker. Enumerates every raw letter string
// up to the bound — no canonical-form pruning, no rotation seeding — and
// tests it against every point triple. Exponential in the bound: meant as
// the independent cross-check for the seeded scan, on small states only.

namespace triact {

namespace {

struct BruteState {
  const ActionState& st;
  GoodnessReport& rep;
  ReachIndex reach;
  std::array<int, 3> flip_elems;
  std::array<int, 2> shift_elems;
  std::vector<char> conj_t, conj_a;
  std::set<std::pair<int, TripleSetKey>> seen_violation, seen_unknown;
  std::set<TripleSetKey> with_shift, with_flip;

  explicit BruteState(const ActionState& s, GoodnessReport& r)
      : st(s), rep(r), reach(reachable_from_A(s)) {
    const G0Spec& g0 = st.g0;
    flip_elems = {g0.t, g0.mul(g0.a, g0.t), g0.mul(g0.a2, g0.t)};
    shift_elems = {g0.a, g0.a2};
    conj_t.assign(g0.order, 0);
    conj_a.assign(g0.order, 0);
    for (int g = 0; g < g0.order; ++g)
      for (int k = 0; k < g0.order; ++k) {
        const int c = g0.mul(g0.mul(k, g), g0.inverse_of(k));
        if (c == g0.t) conj_t[g] = 1;
        if (c == g0.a) conj_a[g] = 1;
      }
  }

  void violation(int cond, Triple c, Word w, std::string detail) {
    TripleSetKey key = triple_set_key(c);
    if (seen_violation.emplace(cond, key).second)
      rep.violations.push_back({cond, c, std::move(w), std::move(detail)});
  }
  void unknown(int cond, Triple c, Word w, std::string detail) {
    TripleSetKey key = triple_set_key(c);
    if (seen_unknown.emplace(cond, key).second)
      rep.unknowns.push_back({cond, c, std::move(w), std::move(detail)});
  }

  void certify(int cond, const Triple& c, const Word& wr) {
    const bool want_flip = cond == 4;
    if (wr.size() == 1 && wr[0].is_g0()) {
      const int g = wr[0].index();
      if (want_flip ? !conj_t[g] : !conj_a[g])
        violation(cond, c, wr,
                  want_flip ? "G0 flip is not conjugate to t"
                            : "G0 shift is not conjugate to a");
      return;
    }
    if (!reach.contains(triple_set_key(c))) {
      unknown(cond, c, wr, "set not connected to A");
      return;
    }
    auto w0 = find_connection(st, reach, c);
    if (!w0) throw G0Error("reached set has no ordered connection");
    const Word conj =
        multiply(multiply(*w0, wr, st.g0), invert(*w0, st.g0), st.g0);
    bool ok = conj.size() == 1 && conj[0].is_g0();
    if (ok) {
      const int g = conj[0].index();
      ok = want_flip ? (g == flip_elems[0] || g == flip_elems[1] ||
                        g == flip_elems[2])
                     : (g == shift_elems[0] || g == shift_elems[1]);
    }
    if (!ok)
      violation(cond, c, conj,
                want_flip ? "flip does not transport to a conjugate of t"
                          : "shift does not transport to a conjugate of a");
  }

  void incident(const Triple& c, const Triple& image, const Word& w) {
    ++rep.incidents;
    const int fixed =
        (c.x == image.x) + (c.y == image.y) + (c.z == image.z);
    const Word wr = reduce(w, st.g0);
    if (fixed == 3) {
      if (!wr.empty())
        violation(3, c, wr, "nontrivial word fixes the triple pointwise");
      return;
    }
    const TripleSetKey key = triple_set_key(c);
    if (wr.empty()) {
      // the action disagrees with a closure law the rewriter relies on
      violation(3, c, w, "identity word permutes the triple");
      return;
    }
    if (fixed == 1) {
      with_flip.insert(key);
      certify(4, c, wr);
    } else {
      with_shift.insert(key);
      certify(5, c, wr);
    }
  }
};

}  // namespace

GoodnessReport check_good_reference(const ActionState& st, int bound) {
  if (bound < 1) throw G0Error("word bound must be positive");
  GoodnessReport rep;
  rep.bound = bound;
  const G0Spec& g0 = st.g0;
  const int n = st.n_points();
  const std::vector<Letter> alphabet = active_alphabet(st);

  double nodes = 0, layer = 1;
  for (int d = 0; d < bound; ++d) {
    layer *= static_cast<double>(alphabet.size());
    nodes += layer;
  }
  const double sets = static_cast<double>(n) * (n - 1) * (n - 2) / 6.0;
  if (nodes * (n + 3 * sets) > 3e8)
    throw G0Error("reference checker: state too large for exhaustive scan");

  BruteState bs(st, rep);

  const Triple pad{kUndefined, kUndefined, kUndefined};
  if (st.image(g0.x0, g0.t) != g0.x0) {
    Triple c = pad;
    c.x = g0.x0;
    bs.violation(2, c, {Letter::g0(g0.t)}, "t does not fix x0");
  }
  for (PointId p = 0; p < n; ++p) {
    if (st.image(p, g0.a) == p) {
      Triple c = pad;
      c.x = p;
      bs.violation(1, c, {Letter::g0(g0.a)}, "a fixes a point");
    }
    if (p != g0.x0 && st.image(p, g0.t) == p) {
      Triple c = pad;
      c.x = p;
      bs.violation(2, c, {Letter::g0(g0.t)}, "t fixes a second point");
    }
  }

  // depth-first over raw words; maps[d] is the partial image of every
  // point under the length-d prefix
  std::vector<std::vector<PointId>> maps(bound + 1,
                                         std::vector<PointId>(n));
  for (PointId p = 0; p < n; ++p) maps[0][p] = p;
  Word w;

  std::function<void(int)> walk = [&](int depth) {
    if (depth > 0) {
      const std::vector<PointId>& cur = maps[depth];
      for (PointId i = 0; i < n; ++i) {
        if (cur[i] == kUndefined) continue;
        for (PointId j = i + 1; j < n; ++j) {
          if (cur[j] == kUndefined) continue;
          for (PointId k = j + 1; k < n; ++k) {
            if (cur[k] == kUndefined) continue;
            const Triple c{i, j, k};
            const Triple img{cur[i], cur[j], cur[k]};
            if (triple_set_key(c) == triple_set_key(img))
              bs.incident(c, img, w);
          }
        }
      }
    }
    if (depth == bound) return;
    for (const Letter l : alphabet) {
      std::vector<PointId>& nxt = maps[depth + 1];
      bool any = false;
      for (PointId p = 0; p < n; ++p) {
        if (maps[depth][p] == kUndefined) {
          nxt[p] = kUndefined;
          continue;
        }
        const auto img = apply_letter(st, maps[depth][p], l);
        nxt[p] = img ? *img : kUndefined;
        any = any || img.has_value();
      }
      if (!any) continue;
      w.push_back(l);
      walk(depth + 1);
      w.pop_back();
    }
  };
  walk(0);

  for (const TripleSetKey& key : bs.with_shift) {
    if (!bs.with_flip.count(key) || bs.reach.contains(key)) continue;
    bs.violation(6, Triple{key[0], key[1], key[2]}, {},
                 "set has both a shift and a flip but no connection to A");
  }
  return rep;
}

}  // namespace triact
