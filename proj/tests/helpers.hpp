#pragma once

#include <initializer_list>
#include <random>
#include <string>
#include <vector>

#include "meshcat/lincomb.hpp"
#include "meshcat/order.hpp"
#include "meshcat/quiver.hpp"

namespace meshcat::testing {

// Example quiver with three parallel mesh middles: x -> {a,b,c} -> x1 ->
// {ap,bp} -> y, tau(x1) = x, tau(y) = x1. Six paths x ~> y, five
// mesh-canonical relations.
inline TranslationQuiver make_ex1() {
  TranslationQuiver::Builder b;
  for (const char* v : {"x", "a", "b", "c", "x1", "ap", "bp", "y"}) b.add_vertex(v);
  b.add_arrow("alpha1", "x", "a");
  b.add_arrow("alpha2", "x", "b");
  b.add_arrow("alpha3", "x", "c");
  b.add_arrow("beta1", "a", "x1");
  b.add_arrow("beta2", "b", "x1");
  b.add_arrow("beta3", "c", "x1");
  b.add_arrow("gamma1", "x1", "ap");
  b.add_arrow("gamma2", "x1", "bp");
  b.add_arrow("delta1", "ap", "y");
  b.add_arrow("delta2", "bp", "y");
  b.set_tau("x1", "x");
  b.set_tau("y", "x1");
  b.set_sigma("beta1", "alpha1");
  b.set_sigma("beta2", "alpha2");
  b.set_sigma("beta3", "alpha3");
  b.set_sigma("delta1", "gamma1");
  b.set_sigma("delta2", "gamma2");
  return std::move(b).build();
}

// Open-path counterexample: x -> {a,b} -> x1 -> {a1,c} -> y with
// tau(x1) = x, tau(a1) = a, tau(y) = x1; the mesh at a1 has a single middle.
inline TranslationQuiver make_ex2() {
  TranslationQuiver::Builder b;
  for (const char* v : {"x", "a", "b", "x1", "a1", "c", "y"}) b.add_vertex(v);
  b.add_arrow("u1", "x", "a");
  b.add_arrow("u2", "x", "b");
  b.add_arrow("v1", "a", "x1");
  b.add_arrow("v2", "b", "x1");
  b.add_arrow("w1", "x1", "a1");
  b.add_arrow("w2", "x1", "c");
  b.add_arrow("t1", "a1", "y");
  b.add_arrow("t2", "c", "y");
  b.set_tau("x1", "x");
  b.set_tau("a1", "a");
  b.set_tau("y", "x1");
  b.set_sigma("v1", "u1");
  b.set_sigma("v2", "u2");
  b.set_sigma("w1", "v1");
  b.set_sigma("t1", "w1");
  b.set_sigma("t2", "w2");
  return std::move(b).build();
}

// The order e1 > e2 > e3 > e4 > e5 > e6 on EX1's six paths.
inline PathOrder ex1_reference_order(const TranslationQuiver& q) {
  PathOrder o{q.vertex("x"), q.vertex("y"), {}};
  o.rankings[{q.vertex("x")}] = {q.arrow("alpha1"), q.arrow("alpha2"), q.arrow("alpha3")};
  for (const char* mid : {"a", "b", "c"})
    o.rankings[{q.vertex("x"), q.vertex(mid), q.vertex("x1")}] = {q.arrow("gamma1"),
                                                                  q.arrow("gamma2")};
  return normalized_order(q, o);
}

// The mesh-lexicographic order e2 > e1 > e3 > e4 on EX2's four paths.
inline PathOrder ex2_reference_order(const TranslationQuiver& q) {
  PathOrder o{q.vertex("x"), q.vertex("y"), {}};
  o.rankings[{q.vertex("x")}] = {q.arrow("u1"), q.arrow("u2")};
  o.rankings[{q.vertex("x"), q.vertex("a"), q.vertex("x1")}] = {q.arrow("w2"), q.arrow("w1")};
  o.rankings[{q.vertex("x"), q.vertex("b"), q.vertex("x1")}] = {q.arrow("w1"), q.arrow("w2")};
  return normalized_order(q, o);
}

// The variant e1 > e2 > e3 > e4, which fails the mesh compatibility check.
inline PathOrder ex2_bad_order(const TranslationQuiver& q) {
  PathOrder o{q.vertex("x"), q.vertex("y"), {}};
  o.rankings[{q.vertex("x")}] = {q.arrow("u1"), q.arrow("u2")};
  o.rankings[{q.vertex("x"), q.vertex("a"), q.vertex("x1")}] = {q.arrow("w1"), q.arrow("w2")};
  o.rankings[{q.vertex("x"), q.vertex("b"), q.vertex("x1")}] = {q.arrow("w1"), q.arrow("w2")};
  return normalized_order(q, o);
}

// Plain quivers feeding generate_zq_window.
inline TranslationQuiver make_linear(int n) {
  TranslationQuiver::Builder b;
  for (int i = 1; i <= n; ++i) b.add_vertex("p" + std::to_string(i));
  for (int i = 1; i < n; ++i)
    b.add_arrow("e" + std::to_string(i), "p" + std::to_string(i), "p" + std::to_string(i + 1));
  return std::move(b).build();
}

inline TranslationQuiver make_d4(bool source_orientation) {
  TranslationQuiver::Builder b;
  for (const char* v : {"c", "l1", "l2", "l3"}) b.add_vertex(v);
  int i = 0;
  for (const char* leaf : {"l1", "l2", "l3"}) {
    std::string name = "e" + std::to_string(++i);
    if (source_orientation)
      b.add_arrow(name, "c", leaf);
    else
      b.add_arrow(name, leaf, "c");
  }
  return std::move(b).build();
}

// Chain of meshes x0 -> (k_0 middles) -> x1 -> (k_1 middles) -> ... with all
// middles projective-injective; every x0 ~> xn path is closed when all
// k_i >= 2. The two worked examples embed into this family ([3,2] is EX1's
// shape). Vertices: x0..xn, middles m<i>_<j>; arrows a<i>_<j>: xi -> m,
// b<i>_<j>: m -> x(i+1) with sigma(b) = a.
inline TranslationQuiver make_mesh_chain(const std::vector<int>& ks) {
  TranslationQuiver::Builder b;
  for (std::size_t i = 0; i <= ks.size(); ++i) b.add_vertex("x" + std::to_string(i));
  for (std::size_t i = 0; i < ks.size(); ++i)
    for (int j = 0; j < ks[i]; ++j)
      b.add_vertex("m" + std::to_string(i) + "_" + std::to_string(j));
  for (std::size_t i = 0; i < ks.size(); ++i) {
    for (int j = 0; j < ks[i]; ++j) {
      std::string mid = "m" + std::to_string(i) + "_" + std::to_string(j);
      b.add_arrow("a" + std::to_string(i) + "_" + std::to_string(j), "x" + std::to_string(i),
                  mid);
      b.add_arrow("b" + std::to_string(i) + "_" + std::to_string(j), mid,
                  "x" + std::to_string(i + 1));
    }
  }
  for (std::size_t i = 0; i < ks.size(); ++i) {
    b.set_tau("x" + std::to_string(i + 1), "x" + std::to_string(i));
    for (int j = 0; j < ks[i]; ++j)
      b.set_sigma("b" + std::to_string(i) + "_" + std::to_string(j),
                  "a" + std::to_string(i) + "_" + std::to_string(j));
  }
  return std::move(b).build();
}

inline TranslationQuiver make_kronecker() {
  TranslationQuiver::Builder b;
  b.add_vertex("u");
  b.add_vertex("v");
  b.add_arrow("k1", "u", "v");
  b.add_arrow("k2", "u", "v");
  return std::move(b).build();
}

// Random acyclic loop-free plain quiver (forward arrows in a random
// labelling; parallel arrows allowed).
inline TranslationQuiver random_plain_quiver(std::mt19937_64& rng, int max_vertices = 5,
                                             int max_arrows = 7) {
  std::uniform_int_distribution<int> nv(2, max_vertices);
  int n = nv(rng);
  std::uniform_int_distribution<int> na(1, max_arrows);
  int m = na(rng);
  TranslationQuiver::Builder b;
  for (int i = 0; i < n; ++i) b.add_vertex("q" + std::to_string(i));
  std::uniform_int_distribution<int> pick(0, n - 1);
  int added = 0;
  for (int i = 0; i < m; ++i) {
    int s = pick(rng), d = pick(rng);
    if (s == d) continue;
    if (s > d) std::swap(s, d);
    b.add_arrow("r" + std::to_string(added++), "q" + std::to_string(s),
                "q" + std::to_string(d));
  }
  if (added == 0) b.add_arrow("r0", "q0", "q1");
  return std::move(b).build();
}

inline Path path_of(const TranslationQuiver& q, const std::string& text) {
  return path_from_string(q, text);
}

template <class K>
LinComb<K> combo_of(const TranslationQuiver& q, const K& k,
                    std::initializer_list<const char*> paths) {
  LinComb<K> v;
  bool first = true;
  for (const char* s : paths) {
    auto term = lc_path(q, k, path_of(q, s));
    v = first ? term : add(k, v, term);
    first = false;
  }
  return v;
}

// EX1/EX2 relation values written out by hand (labeled labels r1..r5); keeps
// suites independent of the mesh-relations module they cross-check.
template <class K>
std::vector<LinComb<K>> ex1_relations(const TranslationQuiver& q, const K& k) {
  return {
      combo_of(q, k, {"alpha1.beta1.gamma1.delta1", "alpha1.beta1.gamma2.delta2"}),  // r1
      combo_of(q, k, {"alpha2.beta2.gamma1.delta1", "alpha2.beta2.gamma2.delta2"}),  // r2
      combo_of(q, k, {"alpha3.beta3.gamma1.delta1", "alpha3.beta3.gamma2.delta2"}),  // r3
      combo_of(q, k,
               {"alpha1.beta1.gamma1.delta1", "alpha2.beta2.gamma1.delta1",
                "alpha3.beta3.gamma1.delta1"}),  // r4
      combo_of(q, k,
               {"alpha1.beta1.gamma2.delta2", "alpha2.beta2.gamma2.delta2",
                "alpha3.beta3.gamma2.delta2"}),  // r5
  };
}

template <class K>
std::vector<LinComb<K>> ex2_relations(const TranslationQuiver& q, const K& k) {
  return {
      combo_of(q, k, {"u1.v1.w2.t2", "u1.v1.w1.t1"}),  // r1 = e2 + e1
      combo_of(q, k, {"u2.v2.w1.t1", "u2.v2.w2.t2"}),  // r2 = e3 + e4
      combo_of(q, k, {"u1.v1.w1.t1"}),                 // r3 = e1
      combo_of(q, k, {"u1.v1.w2.t2", "u2.v2.w2.t2"}),  // r4 = e2 + e4
      combo_of(q, k, {"u1.v1.w1.t1", "u2.v2.w1.t1"}),  // r5 = e1 + e3
  };
}

// The six EX1 paths e1..e6 / four EX2 paths e1..e4 in labeled numbering.
inline std::vector<std::string> ex1_path_names() {
  return {"alpha1.beta1.gamma1.delta1", "alpha1.beta1.gamma2.delta2",
          "alpha2.beta2.gamma1.delta1", "alpha2.beta2.gamma2.delta2",
          "alpha3.beta3.gamma1.delta1", "alpha3.beta3.gamma2.delta2"};
}

inline std::vector<std::string> ex2_path_names() {
  return {"u1.v1.w1.t1", "u1.v1.w2.t2", "u2.v2.w1.t1", "u2.v2.w2.t2"};
}

}  // namespace meshcat::testing
