#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "meshcat/error.hpp"
#include "meshcat/groebner.hpp"
#include "meshcat/homotopy.hpp"
#include "meshcat/lincomb.hpp"
#include "meshcat/order.hpp"
#include "meshcat/quiver.hpp"
#include "meshcat/span.hpp"

namespace meshcat {

/// m_z = sum over arrows a leaving z of (sigma^{-1} a) after a, as a
/// combination z ~> tau^{-1} z. Zero when nothing leaves z.
template <class K>
LinComb<K> mesh_relation(const TranslationQuiver& q, const K& k, VertexId z) {
  auto w = q.tau_inv(z);
  if (!w)
    fail(errc::no_mesh_relation,
         "vertex '" + q.vertex_name(z) + "' is injective: no mesh relation starts there");
  LinComb<K> m = lc_zero<K>(z, *w);
  for (ArrowId a : q.out_arrows(z)) {
    auto si = q.sigma_inv(a);
    if (!si)
      fail(errc::invalid_quiver, "arrow '" + q.arrow_name(a) +
                                     "' leaves a non-injective vertex but is not a sigma image");
    m.terms.emplace(Path{z, {a, *si}}, k.one());
  }
  return m;
}

/// gamma2 * m_z * gamma1 together with the triple that generated it.
/// Distinct triples can expand to equal combinations; the derived families
/// are defined on triples, so identity is (z, gamma1, gamma2).
template <class K>
struct MeshCanonicalRelation {
  VertexId z;
  Path gamma1;  // x ~> z
  Path gamma2;  // tau^{-1} z ~> y
  LinComb<K> value;

  std::tuple<VertexId, const Path&, const Path&> key() const { return {z, gamma1, gamma2}; }
};

template <class K>
MeshCanonicalRelation<K> make_mesh_canonical(const TranslationQuiver& q, const K& k, VertexId z,
                                             Path gamma1, Path gamma2) {
  require_path(q, gamma1);
  require_path(q, gamma2);
  auto w = q.tau_inv(z);
  if (!w) fail(errc::no_mesh_relation, "relation vertex must be non-injective");
  if (path_target(q, gamma1) != z || gamma2.source != *w)
    fail(errc::endpoint_mismatch, "relation paths do not frame the mesh relation");
  LinComb<K> m = mesh_relation(q, k, z);
  LinComb<K> value = concat(k, lc_path(q, k, gamma2), concat(k, m, lc_path(q, k, gamma1)));
  return {z, std::move(gamma1), std::move(gamma2), std::move(value)};
}

/// All mesh-canonical relations between x and y, deduplicated by triple and
/// listed in canonical (z, gamma1, gamma2) order. With `length` given, only
/// relations of that total length (|gamma1| + 2 + |gamma2|).
template <class K>
std::vector<MeshCanonicalRelation<K>> enumerate_mesh_canonical(
    const TranslationQuiver& q, const K& k, VertexId x, VertexId y,
    std::optional<std::size_t> length = std::nullopt) {
  std::vector<MeshCanonicalRelation<K>> out;
  for (VertexId z : q.vertices()) {
    auto w = q.tau_inv(z);
    if (!w) continue;
    if (q.out_arrows(z).empty()) continue;  // m_z = 0 contributes nothing
    if (length) {
      if (*length < 2) continue;
      for (std::size_t l1 = 0; l1 + 2 <= *length; ++l1) {
        auto g1s = enumerate_paths(q, x, z, l1);
        if (g1s.empty()) continue;
        auto g2s = enumerate_paths(q, *w, y, *length - 2 - l1);
        for (const Path& g1 : g1s)
          for (const Path& g2 : g2s) out.push_back(make_mesh_canonical(q, k, z, g1, g2));
      }
    } else {
      auto g1s = enumerate_paths(q, x, z);
      if (g1s.empty()) continue;
      auto g2s = enumerate_paths(q, *w, y);
      for (const Path& g1 : g1s)
        for (const Path& g2 : g2s) out.push_back(make_mesh_canonical(q, k, z, g1, g2));
    }
  }
  std::sort(out.begin(), out.end(),
            [](const auto& a, const auto& b) { return a.key() < b.key(); });
  return out;
}

template <class K>
std::vector<LinComb<K>> relation_values(const std::vector<MeshCanonicalRelation<K>>& rs) {
  std::vector<LinComb<K>> out;
  out.reserve(rs.size());
  for (const auto& r : rs) out.push_back(r.value);
  return out;
}

/// Partition of R(x,y) by first step: R_x holds the relations with trivial
/// gamma1 (the mesh at the source), R'(x_i,y) groups the rest by the target
/// of gamma1's first arrow. Comesh-derived relations r_alpha are flagged on
/// the side.
template <class K>
struct DerivedPartition {
  std::vector<std::size_t> r_x;  // gamma1 trivial (and z = x)
  std::map<VertexId, std::vector<std::size_t>> r_prime;  // keyed by first-arrow target
  struct ComeshFlag {
    std::size_t index;
    ArrowId alpha;  // first arrow of gamma1; second is sigma^{-1}(alpha)
  };
  std::vector<ComeshFlag> comesh;  // R^d(tau^{-1} x, y)
};

template <class K>
DerivedPartition<K> partition_derived(const TranslationQuiver& q, VertexId x,
                                      const std::vector<MeshCanonicalRelation<K>>& relations) {
  DerivedPartition<K> part;
  for (std::size_t i = 0; i < relations.size(); ++i) {
    const auto& r = relations[i];
    if (r.gamma1.trivial()) {
      if (r.z != x) fail(errc::invalid_argument, "trivial gamma1 must sit at the source");
      part.r_x.push_back(i);
    } else {
      part.r_prime[q.arrow_info(r.gamma1.arrows.front()).dst].push_back(i);
    }
    if (q.tau_inv(x) && r.gamma1.length() >= 2) {
      ArrowId first = r.gamma1.arrows[0];
      ArrowId second = r.gamma1.arrows[1];
      auto s = q.sigma(second);
      if (s && *s == first) part.comesh.push_back({i, first});
    }
  }
  return part;
}

/// Bimesh construction: Sc = { r in R_x : lp(r) matches no lp(s_{alpha_1}) },
/// with alpha_1 the order-maximal arrow leaving x toward predecessors of y.
/// For every r in R_x \ Sc an explicit combination over R^d(tau^{-1}x,y) u Sc
/// is produced through the span oracle.
template <class K>
struct BimeshResult {
  std::optional<ArrowId> alpha1;
  std::vector<MeshCanonicalRelation<K>> r_x;  // canonical order
  std::vector<char> in_sc;                    // parallel to r_x
  std::vector<MeshCanonicalRelation<K>> basis;  // R^d u Sc, canonical order
  struct Expansion {
    std::size_t rx_index;  // into r_x
    bool ok;
    std::vector<typename K::Elem> coeffs;  // over basis
  };
  std::vector<Expansion> expansions;

  std::vector<MeshCanonicalRelation<K>> sc() const {
    std::vector<MeshCanonicalRelation<K>> out;
    for (std::size_t i = 0; i < r_x.size(); ++i)
      if (in_sc[i]) out.push_back(r_x[i]);
    return out;
  }
};

namespace detail {
template <class K>
BimeshResult<K> bimesh_impl(const TranslationQuiver& q, const K& k, VertexId x, VertexId y,
                            const PathOrder& order,
                            const std::vector<MeshCanonicalRelation<K>>& relations) {
  BimeshResult<K> result;
  auto part = partition_derived(q, x, relations);
  for (std::size_t i : part.r_x) result.r_x.push_back(relations[i]);
  result.in_sc.assign(result.r_x.size(), 1);
  if (result.r_x.empty()) return result;

  auto w = q.tau_inv(x);  // exists: R_x nonempty means x is non-injective
  const auto& base_ranking = detail::ranking_at(q, order, {x});
  if (base_ranking.empty())
    fail(errc::invalid_argument, "R_x nonempty but no admissible arrow leaves the source");
  ArrowId alpha1 = base_ranking.front();
  result.alpha1 = alpha1;
  auto si = q.sigma_inv(alpha1);
  if (!si)
    fail(errc::invalid_quiver, "maximal arrow leaving a non-injective vertex has no sigma "
                               "preimage");

  // lp(s_{alpha1}) for s ranging over R(tau^{-1} x, y)
  Path prefix{x, {alpha1, *si}};
  LinComb<K> prefix_lc = lc_path(q, k, prefix);
  std::set<Path> blocked;
  for (const auto& s : enumerate_mesh_canonical(q, k, *w, y)) {
    LinComb<K> lifted = concat(k, s.value, prefix_lc);
    blocked.insert(leading_path(q, order, lifted));
  }
  for (std::size_t i = 0; i < result.r_x.size(); ++i)
    result.in_sc[i] = blocked.count(leading_path(q, order, result.r_x[i].value)) ? 0 : 1;

  // decomposition basis: comesh-derived relations plus Sc
  std::set<std::size_t> basis_indices;
  for (const auto& flag : part.comesh) basis_indices.insert(flag.index);
  for (std::size_t j = 0; j < part.r_x.size(); ++j)
    if (result.in_sc[j]) basis_indices.insert(part.r_x[j]);
  for (std::size_t i : basis_indices) result.basis.push_back(relations[i]);

  auto basis_values = relation_values(result.basis);
  for (std::size_t j = 0; j < result.r_x.size(); ++j) {
    if (result.in_sc[j]) continue;
    auto span = span_oracle<K>(q, k, basis_values, &result.r_x[j].value, order);
    result.expansions.push_back({j, span.member, span.certificate});
  }
  return result;
}
}  // namespace detail

template <class K>
BimeshResult<K> bimesh_Sc(const TranslationQuiver& q, const K& k, VertexId x, VertexId y,
                          const PathOrder& order) {
  if (order.from != x || order.to != y)
    fail(errc::invalid_argument, "order context does not match the requested vertices");
  if (!check_mesh_lexicographic(q, order).empty())
    fail(errc::order_not_mesh_lex, "the Bimesh construction requires a mesh-lexicographic "
                                   "order");
  auto relations = enumerate_mesh_canonical(q, k, x, y);
  return detail::bimesh_impl(q, k, x, y, order, relations);
}

/// Recursive subset S(x,y) with pairwise-distinct leading paths spanning the
/// same subspace as R(x,y): Sc at the source union the lifted S(x_i,y) of
/// every admissible successor, each level using the order induced on its
/// suffix paths.
template <class K>
struct SConstruction {
  std::vector<MeshCanonicalRelation<K>> relations;  // R(x,y), canonical order
  std::vector<MeshCanonicalRelation<K>> s;          // S(x,y), canonical order
  bool distinct_lp = true;
  struct Certificate {
    std::size_t relation_index;  // into relations, for r in R \ S
    bool ok;
    std::vector<typename K::Elem> coeffs;  // over s
  };
  std::vector<Certificate> certificates;
};

namespace detail {
template <class K>
std::vector<MeshCanonicalRelation<K>> build_s_rec(const TranslationQuiver& q, const K& k,
                                                  VertexId x, VertexId y,
                                                  const PathOrder& order) {
  auto relations = enumerate_mesh_canonical(q, k, x, y);
  if (relations.empty()) return {};
  auto bim = bimesh_impl(q, k, x, y, order, relations);
  std::vector<MeshCanonicalRelation<K>> s = bim.sc();

  const auto& base_ranking = ranking_at(q, order, {x});
  std::set<VertexId> successors;
  for (ArrowId a : base_ranking) successors.insert(q.arrow_info(a).dst);
  for (VertexId xi : successors) {
    auto sub_order = restrict_to_successor(q, order, xi);
    auto si = build_s_rec(q, k, xi, y, sub_order);
    if (si.empty()) continue;
    for (ArrowId a : base_ranking) {
      if (q.arrow_info(a).dst != xi) continue;
      for (const auto& r : si) {
        Path lifted{x, {a}};
        lifted.arrows.insert(lifted.arrows.end(), r.gamma1.arrows.begin(),
                             r.gamma1.arrows.end());
        s.push_back(make_mesh_canonical(q, k, r.z, std::move(lifted), r.gamma2));
      }
    }
  }
  return s;
}
}  // namespace detail

template <class K>
SConstruction<K> build_S(const TranslationQuiver& q, const K& k, VertexId x, VertexId y,
                         const PathOrder& order,
                         CountingMode mode = CountingMode::ArrowMultiplicity) {
  if (order.from != x || order.to != y)
    fail(errc::invalid_argument, "order context does not match the requested vertices");
  for (const Path& p : enumerate_paths(q, x, y))
    if (!classify_path(q, p, mode).closed)
      fail(errc::hypothesis_violated,
           "open path between the chosen vertices: '" + path_to_string(q, p) + "'");
  if (!check_mesh_lexicographic(q, order).empty())
    fail(errc::order_not_mesh_lex, "S(x,y) requires a mesh-lexicographic order");

  SConstruction<K> result;
  result.relations = enumerate_mesh_canonical(q, k, x, y);
  result.s = detail::build_s_rec(q, k, x, y, order);
  std::sort(result.s.begin(), result.s.end(),
            [](const auto& a, const auto& b) { return a.key() < b.key(); });

  std::set<Path> lps;
  for (const auto& r : result.s)
    if (!lps.insert(leading_path(q, order, r.value)).second) result.distinct_lp = false;

  std::set<std::tuple<VertexId, Path, Path>> s_keys;
  for (const auto& r : result.s) s_keys.insert({r.z, r.gamma1, r.gamma2});
  auto s_values = relation_values(result.s);
  for (std::size_t i = 0; i < result.relations.size(); ++i) {
    const auto& r = result.relations[i];
    if (s_keys.count({r.z, r.gamma1, r.gamma2})) continue;
    auto span = span_oracle<K>(q, k, s_values, &r.value, order);
    result.certificates.push_back({i, span.member, span.certificate});
  }
  return result;
}

/// Reduction representative plus the oracle's verdict on vanishing in the
/// mesh category. When R(x,y) is Groebner the representative is canonical
/// and the two verdicts coincide; otherwise the span membership decides.
template <class K>
struct NormalFormResult {
  LinComb<K> representative;
  std::size_t path_count = 0;
  std::size_t rank = 0;
  std::size_t quotient_dim = 0;
  bool groebner = false;
  bool zero_by_reduction = false;
  bool zero_in_quotient = false;
  std::vector<typename K::Elem> membership;  // over R(x,y) when zero_in_quotient
  ReductionTrace<K> trace;
};

template <class K>
NormalFormResult<K> normal_form(const TranslationQuiver& q, const K& k, const LinComb<K>& v,
                                VertexId x, VertexId y, const PathOrder& order) {
  if (v.from != x || v.to != y)
    fail(errc::endpoint_mismatch, "combination endpoints do not match the context");
  NormalFormResult<K> result;
  auto relations = enumerate_mesh_canonical(q, k, x, y);
  auto values = relation_values(relations);
  result.path_count = enumerate_paths(q, x, y).size();

  if (values.empty()) {
    result.representative = v;
    result.trace.start = v;
    result.trace.remainder = v;
    result.rank = 0;
    result.quotient_dim = result.path_count;
    result.groebner = true;
    result.zero_by_reduction = v.zero();
    result.zero_in_quotient = v.zero();
    return result;
  }

  result.trace = reduce_full(q, k, v, std::span<const LinComb<K>>(values), order);
  result.representative = result.trace.remainder;
  result.zero_by_reduction = result.representative.zero();

  auto span = span_oracle<K>(q, k, std::span<const LinComb<K>>(values), &v, order);
  result.rank = span.rank;
  result.quotient_dim = result.path_count - span.rank;
  result.zero_in_quotient = span.member;
  if (span.member) result.membership = span.certificate;
  result.groebner = is_groebner(q, k, std::span<const LinComb<K>>(values), order).ok;
  return result;
}

// ---------------------------------------------------------------------------
// Layered composites and the nonvanishing test

/// h_i = sum a_ij alpha_ij over the arrows x_{i-1} -> x_i; every layer needs
/// a nonzero coefficient.
template <class K>
struct LayerSpec {
  std::vector<VertexId> vertices;  // x_0 .. x_n, n >= 1
  std::vector<std::vector<std::pair<ArrowId, typename K::Elem>>> layers;
};

template <class K>
void validate_layer_spec(const TranslationQuiver& q, const K& k, const LayerSpec<K>& spec) {
  if (spec.vertices.size() < 2)
    fail(errc::malformed_layer_spec, "layer spec needs at least two vertices");
  if (spec.layers.size() + 1 != spec.vertices.size())
    fail(errc::malformed_layer_spec, "layer count must be vertex count minus one");
  for (std::size_t i = 0; i < spec.layers.size(); ++i) {
    std::set<ArrowId> seen;
    bool nonzero = false;
    for (const auto& [a, c] : spec.layers[i]) {
      const auto& info = q.arrow_info(a);
      if (info.src != spec.vertices[i] || info.dst != spec.vertices[i + 1])
        fail(errc::malformed_layer_spec,
             "arrow '" + info.name + "' does not run between layer vertices");
      if (!seen.insert(a).second)
        fail(errc::malformed_layer_spec, "arrow '" + info.name + "' listed twice in a layer");
      if (!k.is_zero(c)) nonzero = true;
    }
    if (!nonzero)
      fail(errc::malformed_layer_spec, "layer " + std::to_string(i + 1) + " is zero");
  }
}

template <class K>
struct ZeroTestResult {
  LinComb<K> product;
  LinComb<K> remainder;
  bool groebner = false;
  bool zero_by_reduction = false;
  bool zero_in_quotient = false;
  bool verdicts_agree = true;  // reduction vs span, meaningful when groebner
  bool hyp_pairwise_homotopic = false;
  bool hyp_all_closed = false;
  bool hyp_layers_nonzero = false;
  bool hypotheses_verified = false;
  bool theorem_violation = false;
  std::string label;  // OK | HYPOTHESES_UNVERIFIED | THEOREM_VIOLATION
};

/// Composes the layers and decides vanishing in the mesh category. When the
/// hypotheses verify (restricted-homotopy positives only) the composite must
/// be nonzero; a vanishing one is reported as THEOREM_VIOLATION, a bug trap,
/// never an expected outcome.
template <class K>
ZeroTestResult<K> zero_test_composite(const TranslationQuiver& q, const K& k,
                                      const LayerSpec<K>& spec, const PathOrder& order,
                                      CountingMode mode = CountingMode::ArrowMultiplicity) {
  validate_layer_spec(q, k, spec);
  VertexId x = spec.vertices.front();
  VertexId y = spec.vertices.back();
  if (order.from != x || order.to != y)
    fail(errc::invalid_argument, "order context does not match the layer endpoints");

  ZeroTestResult<K> result;
  result.hyp_layers_nonzero = true;

  LinComb<K> acc = lc_path(q, k, Path{x, {}});
  for (std::size_t i = 0; i < spec.layers.size(); ++i) {
    LinComb<K> h = lc_zero<K>(spec.vertices[i], spec.vertices[i + 1]);
    for (const auto& [a, c] : spec.layers[i])
      if (!k.is_zero(c)) h.terms.emplace(Path{spec.vertices[i], {a}}, c);
    acc = concat(k, h, acc);
  }
  result.product = acc;

  auto paths = enumerate_paths(q, x, y);
  result.hyp_all_closed = true;
  for (const Path& p : paths)
    if (!classify_path(q, p, mode).closed) result.hyp_all_closed = false;
  result.hyp_pairwise_homotopic = homotopy_classes(q, x, y).classes.size() <= 1;
  result.hypotheses_verified =
      result.hyp_all_closed && result.hyp_pairwise_homotopic && result.hyp_layers_nonzero;

  auto relations = enumerate_mesh_canonical(q, k, x, y);
  auto values = relation_values(relations);
  if (values.empty()) {
    result.remainder = result.product;
    result.groebner = true;
    result.zero_by_reduction = result.product.zero();
    result.zero_in_quotient = result.product.zero();
  } else {
    auto trace = reduce_full(q, k, result.product, std::span<const LinComb<K>>(values), order);
    result.remainder = trace.remainder;
    result.zero_by_reduction = result.remainder.zero();
    auto span =
        span_oracle<K>(q, k, std::span<const LinComb<K>>(values), &result.product, order);
    result.zero_in_quotient = span.member;
    result.groebner = is_groebner(q, k, std::span<const LinComb<K>>(values), order).ok;
    if (result.groebner) result.verdicts_agree = result.zero_by_reduction == span.member;
  }

  result.theorem_violation = result.hypotheses_verified && result.zero_in_quotient;
  result.label = result.theorem_violation      ? "THEOREM_VIOLATION"
                 : result.hypotheses_verified  ? "OK"
                                               : "HYPOTHESES_UNVERIFIED";
  return result;
}

// ---------------------------------------------------------------------------
// Branching hypothesis and mesh witnesses

struct MainHypothesisReport {
  bool ok = true;
  std::vector<VertexId> violations;  // non-projective Z failing the branching test
};

/// Passes iff every non-projective Z with X ~> tau Z and Z ~> Y has mesh
/// branching at least two (incoming arrows, or distinct middle vertices
/// under VertexSet counting). Equivalent to every X ~> Y path being closed
/// whenever the failing meshes are non-empty.
inline MainHypothesisReport check_main_hypothesis(
    const TranslationQuiver& q, VertexId x, VertexId y,
    CountingMode mode = CountingMode::ArrowMultiplicity) {
  if (x.index >= q.vertex_count() || y.index >= q.vertex_count())
    fail(errc::unknown_vertex, "vertex out of range");
  auto rx = reachable(q, x);
  auto py = co_reachable(q, y);
  MainHypothesisReport report;
  for (VertexId z : q.vertices()) {
    auto tz = q.tau(z);
    if (!tz) continue;
    if (!rx[tz->index] || !py[z.index]) continue;
    if (in_branching(q, z, mode) < 2) {
      report.ok = false;
      report.violations.push_back(z);
    }
  }
  return report;
}

struct MeshWitness {
  VertexId z;
  Path gamma1;      // X ~> tau Z
  ArrowId into_e;   // tau Z -> E (= sigma of from_e)
  ArrowId from_e;   // E -> Z
  Path gamma2;      // Z ~> Y
  Path witness;     // the composed path X ~> Y
  Homotopy homotopic;
};

/// Searches the factorizations X ~> tau Z -> E -> Z ~> Y of the same length
/// as p through a mesh failing the branching test, checking each against p
/// with the restricted homotopy. A structural candidate is returned with
/// NotShown when no factorization is confirmed (full homotopy could still
/// identify them).
inline std::optional<MeshWitness> find_mesh_witness(
    const TranslationQuiver& q, const Path& p,
    CountingMode mode = CountingMode::ArrowMultiplicity) {
  require_path(q, p);
  if (p.length() < 2) return std::nullopt;
  VertexId x = p.source;
  VertexId y = path_target(q, p);
  auto rx = reachable(q, x);
  auto py = co_reachable(q, y);

  std::optional<MeshWitness> fallback;
  for (VertexId z : q.vertices()) {
    auto tz = q.tau(z);
    if (!tz || !rx[tz->index] || !py[z.index]) continue;
    if (in_branching(q, z, mode) >= 2) continue;
    for (std::size_t l1 = 0; l1 + 2 <= p.length(); ++l1) {
      auto g1s = enumerate_paths(q, x, *tz, l1);
      if (g1s.empty()) continue;
      auto g2s = enumerate_paths(q, z, y, p.length() - 2 - l1);
      if (g2s.empty()) continue;
      for (const Path& g1 : g1s) {
        for (ArrowId b : q.in_arrows(z)) {
          auto s = q.sigma(b);
          if (!s)
            fail(errc::invalid_quiver,
                 "arrow '" + q.arrow_name(b) + "' lacks a sigma partner; quiver is invalid");
          for (const Path& g2 : g2s) {
            Path w{x, g1.arrows};
            w.arrows.push_back(*s);
            w.arrows.push_back(b);
            w.arrows.insert(w.arrows.end(), g2.arrows.begin(), g2.arrows.end());
            MeshWitness candidate{z, g1, *s, b, g2, w, Homotopy::NotShown};
            if (are_homotopic(q, p, w).homotopic()) {
              candidate.homotopic = Homotopy::Homotopic;
              return candidate;
            }
            if (!fallback) fallback = candidate;
          }
        }
      }
    }
  }
  return fallback;
}

}  // namespace meshcat
