#pragma once

#include <algorithm>
#include <deque>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "meshcat/error.hpp"
#include "meshcat/lincomb.hpp"
#include "meshcat/quiver.hpp"

namespace meshcat {

/// Vertex sequence of a path prefix, starting at the order's source vertex.
using Signature = std::vector<VertexId>;

/// Total order on the paths x ~> y, realized by one descending arrow ranking
/// per prefix signature. Keying rankings by vertex sequences (not arrow
/// sequences) makes two prefixes with equal vertex sequences compare their
/// continuations identically by construction.
struct PathOrder {
  VertexId from;
  VertexId to;
  std::map<Signature, std::vector<ArrowId>> rankings;  // front = greatest
};

enum class Cmp { Less, Equal, Greater };

/// Arrows leaving z that stay inside the predecessors of the order target
/// (pred = co_reachable(to)); ascending index, which is also the default
/// descending ranking.
inline std::vector<ArrowId> admissible_arrows(const TranslationQuiver& q,
                                              const std::vector<char>& pred, VertexId z) {
  std::vector<ArrowId> out;
  for (ArrowId a : q.out_arrows(z))
    if (pred[q.arrow_info(a).dst.index]) out.push_back(a);
  return out;
}

/// Paths between x and y must form a finite set for orders to make sense:
/// the subquiver reachable from x and co-reachable to y has to be acyclic.
inline void require_finite_path_set(const TranslationQuiver& q, VertexId x, VertexId y) {
  auto rx = reachable(q, x);
  auto py = co_reachable(q, y);
  std::vector<char> keep(q.vertex_count(), 0);
  for (VertexId v : q.vertices()) keep[v.index] = rx[v.index] && py[v.index];
  std::vector<std::size_t> indeg(q.vertex_count(), 0);
  std::size_t total = 0;
  for (VertexId v : q.vertices())
    if (keep[v.index]) ++total;
  for (ArrowId a : q.arrows()) {
    const auto& info = q.arrow_info(a);
    if (keep[info.src.index] && keep[info.dst.index]) ++indeg[info.dst.index];
  }
  std::deque<VertexId> queue;
  for (VertexId v : q.vertices())
    if (keep[v.index] && indeg[v.index] == 0) queue.push_back(v);
  std::size_t removed = 0;
  while (!queue.empty()) {
    VertexId v = queue.front();
    queue.pop_front();
    ++removed;
    for (ArrowId a : q.out_arrows(v)) {
      VertexId d = q.arrow_info(a).dst;
      if (keep[d.index] && --indeg[d.index] == 0) queue.push_back(d);
    }
  }
  if (removed != total)
    fail(errc::cycle_needs_bound, "infinitely many paths between the chosen vertices");
}

namespace detail {
inline std::string signature_to_string(const TranslationQuiver& q, const Signature& s) {
  std::string out = "(";
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (i) out += ",";
    out += q.vertex_name(s[i]);
  }
  return out + ")";
}
}  // namespace detail

/// Checks that every reachable prefix signature carries a ranking covering
/// exactly its admissible arrows; fills in the forced rankings (zero or one
/// admissible arrow) that files may omit. Rejects entries for signatures
/// that cannot occur.
inline PathOrder normalized_order(const TranslationQuiver& q, const PathOrder& raw) {
  if (raw.from.index >= q.vertex_count() || raw.to.index >= q.vertex_count())
    fail(errc::unknown_vertex, "order endpoints out of range");
  require_finite_path_set(q, raw.from, raw.to);
  auto pred = co_reachable(q, raw.to);

  PathOrder o{raw.from, raw.to, {}};
  std::deque<Signature> queue{{raw.from}};
  while (!queue.empty()) {
    Signature s = std::move(queue.front());
    queue.pop_front();
    VertexId z = s.back();
    auto adm = admissible_arrows(q, pred, z);
    std::vector<ArrowId> rk;
    auto it = raw.rankings.find(s);
    if (it != raw.rankings.end()) {
      rk = it->second;
      auto sorted = rk;
      std::sort(sorted.begin(), sorted.end());
      if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end() || sorted != adm)
        fail(errc::incomplete_order,
             "ranking at signature " + detail::signature_to_string(q, s) +
                 " does not list exactly the admissible arrows");
    } else if (adm.size() <= 1) {
      rk = adm;
    } else {
      fail(errc::incomplete_order, "missing ranking at signature " +
                                       detail::signature_to_string(q, s));
    }
    std::set<VertexId> children;
    for (ArrowId a : rk) children.insert(q.arrow_info(a).dst);
    for (VertexId c : children) {
      Signature child = s;
      child.push_back(c);
      queue.push_back(std::move(child));
    }
    o.rankings.emplace(std::move(s), std::move(rk));
  }

  for (const auto& [sig, rk] : raw.rankings)
    if (!o.rankings.count(sig))
      fail(errc::incomplete_order,
           "ranking listed for unreachable signature " + detail::signature_to_string(q, sig));
  return o;
}

namespace detail {
inline const std::vector<ArrowId>& ranking_at(const TranslationQuiver& q, const PathOrder& o,
                                              const Signature& s) {
  auto it = o.rankings.find(s);
  if (it == o.rankings.end())
    fail(errc::incomplete_order,
         "order has no ranking at signature " + signature_to_string(q, s));
  return it->second;
}

inline std::size_t rank_of(const TranslationQuiver& q, const std::vector<ArrowId>& rk,
                           ArrowId a) {
  auto it = std::find(rk.begin(), rk.end(), a);
  if (it == rk.end())
    fail(errc::incomplete_order, "arrow '" + q.arrow_name(a) + "' missing from a ranking");
  return static_cast<std::size_t>(it - rk.begin());
}
}  // namespace detail

/// Lexicographic comparison: walk the common prefix, then compare the first
/// diverging arrows in the prefix signature's ranking.
inline Cmp compare_paths(const TranslationQuiver& q, const PathOrder& o, const Path& p1,
                         const Path& p2) {
  if (p1.source != o.from || p2.source != o.from || !path_valid(q, p1) || !path_valid(q, p2) ||
      path_target(q, p1) != o.to || path_target(q, p2) != o.to)
    fail(errc::path_outside_context, "paths are not between the order's endpoints");
  if (p1.arrows == p2.arrows) return Cmp::Equal;
  Signature sig{o.from};
  std::size_t n = std::min(p1.length(), p2.length());
  for (std::size_t i = 0; i < n; ++i) {
    if (p1.arrows[i] == p2.arrows[i]) {
      sig.push_back(q.arrow_info(p1.arrows[i]).dst);
      continue;
    }
    const auto& rk = detail::ranking_at(q, o, sig);
    std::size_t r1 = detail::rank_of(q, rk, p1.arrows[i]);
    std::size_t r2 = detail::rank_of(q, rk, p2.arrows[i]);
    return r1 < r2 ? Cmp::Greater : Cmp::Less;
  }
  // one path is a proper prefix of the other (only possible through a cycle
  // at the target); the shorter one compares smaller
  return p1.length() < p2.length() ? Cmp::Less : Cmp::Greater;
}

inline bool path_less(const TranslationQuiver& q, const PathOrder& o, const Path& p1,
                      const Path& p2) {
  return compare_paths(q, o, p1, p2) == Cmp::Less;
}

/// Greatest support path of a nonzero combination.
template <class K>
const Path& leading_path(const TranslationQuiver& q, const PathOrder& o, const LinComb<K>& v) {
  if (v.zero()) fail(errc::lp_of_zero, "leading path of the zero combination");
  const Path* best = nullptr;
  for (const auto& [p, c] : v.terms)
    if (!best || compare_paths(q, o, p, *best) == Cmp::Greater) best = &p;
  return *best;
}

struct MeshLexViolation {
  Signature signature;  // gamma: prefix ending at z
  ArrowId max_arrow;    // alpha, the gamma-maximal admissible arrow
  ArrowId smaller;      // beta ranked below sigma^{-1}(alpha) at (alpha gamma)
};

/// Mesh compatibility: wherever tau^{-1}(z) exists and precedes the target,
/// the partner of the maximal arrow out of z must be ranked minimal one step
/// further along. Empty result = the order is mesh-lexicographic.
inline std::vector<MeshLexViolation> check_mesh_lexicographic(const TranslationQuiver& q,
                                                              const PathOrder& o) {
  auto pred = co_reachable(q, o.to);
  std::vector<MeshLexViolation> violations;
  std::deque<Signature> queue{{o.from}};
  while (!queue.empty()) {
    Signature s = std::move(queue.front());
    queue.pop_front();
    VertexId z = s.back();
    const auto& rk = detail::ranking_at(q, o, s);
    std::set<VertexId> children;
    for (ArrowId a : rk) children.insert(q.arrow_info(a).dst);
    for (VertexId c : children) {
      Signature child = s;
      child.push_back(c);
      queue.push_back(std::move(child));
    }
    if (rk.empty()) continue;
    auto w = q.tau_inv(z);
    if (!w || !pred[w->index]) continue;
    ArrowId alpha = rk.front();
    auto si = q.sigma_inv(alpha);
    if (!si)
      fail(errc::invalid_quiver,
           "arrow '" + q.arrow_name(alpha) + "' leaves a non-injective vertex but is not a "
           "sigma image");
    Signature next = s;
    next.push_back(q.arrow_info(alpha).dst);
    const auto& rk2 = detail::ranking_at(q, o, next);
    std::size_t pos = detail::rank_of(q, rk2, *si);
    for (std::size_t j = pos + 1; j < rk2.size(); ++j)
      violations.push_back({s, alpha, rk2[j]});
  }
  return violations;
}

/// Builds a mesh-lexicographic order extending `base` (the descending
/// ranking of the admissible arrows at x). Prefix signatures are processed
/// in increasing length: each child starts from the arrow-index default and,
/// when the parent's maximal arrow alpha runs into a mesh whose end precedes
/// y, the partner sigma^{-1}(alpha) is rotated to the bottom. The result is
/// re-checked before being returned.
inline PathOrder build_mesh_lex_order(const TranslationQuiver& q, VertexId x, VertexId y,
                                      const std::vector<ArrowId>& base) {
  if (x.index >= q.vertex_count() || y.index >= q.vertex_count())
    fail(errc::unknown_vertex, "order endpoints out of range");
  require_finite_path_set(q, x, y);
  auto pred = co_reachable(q, y);
  auto adm_x = admissible_arrows(q, pred, x);
  {
    auto sorted = base;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end() || sorted != adm_x)
      fail(errc::invalid_argument,
           "base must rank exactly the arrows leaving the source toward predecessors of the "
           "target");
  }

  PathOrder o{x, y, {}};
  o.rankings[{x}] = base;
  std::deque<Signature> queue{{x}};
  while (!queue.empty()) {
    Signature s = std::move(queue.front());
    queue.pop_front();
    VertexId z = s.back();
    const auto& rk = o.rankings.at(s);
    if (rk.empty()) continue;

    std::optional<std::pair<VertexId, ArrowId>> forced;  // child vertex, forced-minimal arrow
    if (auto w = q.tau_inv(z); w && pred[w->index]) {
      ArrowId alpha = rk.front();
      auto si = q.sigma_inv(alpha);
      if (!si)
        fail(errc::invalid_quiver, "arrow '" + q.arrow_name(alpha) +
                                       "' leaves a non-injective vertex but is not a sigma "
                                       "image");
      forced = {q.arrow_info(alpha).dst, *si};
    }

    std::set<VertexId> children;
    for (ArrowId a : rk) children.insert(q.arrow_info(a).dst);
    for (VertexId c : children) {
      Signature child = s;
      child.push_back(c);
      auto child_rk = admissible_arrows(q, pred, c);
      if (forced && forced->first == c) {
        auto it = std::find(child_rk.begin(), child_rk.end(), forced->second);
        if (it != child_rk.end()) {
          child_rk.erase(it);
          child_rk.push_back(forced->second);
        }
      }
      o.rankings.emplace(child, std::move(child_rk));
      queue.push_back(std::move(child));
    }
  }

  if (!check_mesh_lexicographic(q, o).empty())
    fail(errc::mesh_lex_unavailable,
         "constructed order violates the mesh compatibility condition");
  return o;
}

/// The order induced on paths xi ~> y by an order on paths x ~> y, for xi an
/// admissible successor of x: rankings keyed (xi, ...) are the originals
/// keyed (x, xi, ...).
inline PathOrder restrict_to_successor(const TranslationQuiver& q, const PathOrder& o,
                                       VertexId xi) {
  PathOrder r{xi, o.to, {}};
  for (const auto& [sig, rk] : o.rankings) {
    if (sig.size() >= 2 && sig[0] == o.from && sig[1] == xi)
      r.rankings.emplace(Signature(sig.begin() + 1, sig.end()), rk);
  }
  if (!r.rankings.count({xi}))
    fail(errc::invalid_argument, "vertex '" + q.vertex_name(xi) +
                                     "' is not an admissible successor in this order");
  return r;
}

}  // namespace meshcat
