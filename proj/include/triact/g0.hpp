#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace triact {

// Finite seed group together with a right action on a small base point set.
// Element 0 is always the identity. The distinguished elements `a` (order 3)
// and `t` (order 2) drive the whole construction; `x0` is the distinguished
// base point.
struct G0Spec {
  int order = 0;
  std::vector<std::string> names;        // element names, index 0 = identity
  std::vector<int> mult;                 // row-major: mult[g*order+h] = g*h
  std::vector<std::string> point_names;  // base point names
  std::vector<int> act;                  // row-major: act[g*np+x] = x*g
  int a = -1;
  int t = -1;
  int x0 = -1;

  // derived, filled by finalize_g0
  std::vector<int> inv;
  int a2 = -1;

  int npoints() const { return static_cast<int>(point_names.size()); }
  int mul(int g, int h) const { return mult[g * order + h]; }
  int inverse_of(int g) const { return inv[g]; }
  int image(int x, int g) const { return act[g * npoints() + x]; }
  int elem_order(int g) const;
  int element_by_name(const std::string& n) const;  // -1 if absent
};

struct G0Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Validates group axioms, the action homomorphism and the orders of a/t.
// Throws G0Error naming the first violated axiom. Returns the G0Spec with
// derived fields filled in.
G0Spec finalize_g0(G0Spec raw);

G0Spec builtin_s3();
G0Spec builtin_pgl2_f8();

// One verdict per hypothesis on (G0, a, t, x0). `witness` is human-readable
// evidence for failures (empty when the item passes).
struct HypothesisReport {
  struct Item {
    std::string id;
    bool pass = false;
    std::string witness;
  };
  std::vector<Item> items;

  bool all_pass() const;
  const Item* find(const std::string& id) const;
  std::string summary() const;
};

HypothesisReport check_hypotheses(const G0Spec& g0);

}  // namespace triact
