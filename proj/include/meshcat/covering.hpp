#pragma once

#include <set>
#include <string>
#include <utility>
#include <vector>

#include "meshcat/error.hpp"
#include "meshcat/quiver.hpp"

namespace meshcat {

/// Total quiver morphism between two translation quivers, candidate
/// covering. Maps are indexed by source vertex/arrow.
struct CoveringMap {
  TranslationQuiver source;
  TranslationQuiver target;
  std::vector<VertexId> vertex_map;
  std::vector<ArrowId> arrow_map;

  VertexId map_vertex(VertexId v) const { return vertex_map.at(v.index); }
  ArrowId map_arrow(ArrowId a) const { return arrow_map.at(a.index); }
};

/// Checks the covering axioms: endpoint compatibility, preservation and
/// reflection of projectives/injectives, commutation with tau, and local
/// bijectivity on incoming and outgoing arrows at every vertex.
inline ValidationReport validate_covering(const CoveringMap& c) {
  ValidationReport r;
  auto add = [&](std::string code, std::string msg) {
    r.violations.push_back({std::move(code), std::move(msg)});
  };
  const auto& S = c.source;
  const auto& T = c.target;
  if (c.vertex_map.size() != S.vertex_count() || c.arrow_map.size() != S.arrow_count()) {
    add("map-not-total", "vertex or arrow map does not cover the source quiver");
    return r;
  }

  for (ArrowId a : S.arrows()) {
    const auto& sa = S.arrow_info(a);
    const auto& ta = T.arrow_info(c.map_arrow(a));
    if (c.map_vertex(sa.src) != ta.src || c.map_vertex(sa.dst) != ta.dst)
      add("arrow-endpoints",
          "image of arrow '" + sa.name + "' does not respect the vertex map");
  }

  for (VertexId v : S.vertices()) {
    VertexId pv = c.map_vertex(v);
    if (S.is_projective(v) != T.is_projective(pv))
      add("projective-mismatch", "vertex '" + S.vertex_name(v) +
                                     "' and its image disagree on projectivity");
    if (S.is_injective(v) != T.is_injective(pv))
      add("injective-mismatch",
          "vertex '" + S.vertex_name(v) + "' and its image disagree on injectivity");
  }

  for (VertexId v : S.vertices()) {
    auto tv = S.tau(v);
    if (!tv) continue;
    auto t_img = T.tau(c.map_vertex(v));
    if (!t_img || c.map_vertex(*tv) != *t_img)
      add("tau-commute", "tau does not commute with the map at vertex '" + S.vertex_name(v) +
                             "'");
  }

  auto local = [&](VertexId v, std::span<const ArrowId> mine, std::span<const ArrowId> theirs,
                   const char* code) {
    std::set<ArrowId> images;
    for (ArrowId a : mine) images.insert(c.map_arrow(a));
    if (images.size() != mine.size() || mine.size() != theirs.size())
      add(code, "arrow map is not a local bijection at vertex '" + S.vertex_name(v) + "'");
  };
  for (VertexId v : S.vertices()) {
    VertexId pv = c.map_vertex(v);
    local(v, S.out_arrows(v), T.out_arrows(pv), "local-bijection-out");
    local(v, S.in_arrows(v), T.in_arrows(pv), "local-bijection-in");
  }
  return r;
}

inline Path project_path(const CoveringMap& c, const Path& p) {
  require_path(c.source, p);
  Path out{c.map_vertex(p.source), {}};
  for (ArrowId a : p.arrows) out.arrows.push_back(c.map_arrow(a));
  return out;
}

/// Unique lift of a target path through a valid covering, starting at the
/// given source vertex above the path's source.
inline Path lift_path(const CoveringMap& c, const Path& p, VertexId start) {
  require_path(c.target, p);
  if (start.index >= c.source.vertex_count())
    fail(errc::unknown_vertex, "lift start vertex out of range");
  if (c.map_vertex(start) != p.source)
    fail(errc::invalid_argument, "lift start vertex does not sit above the path source");

  Path lifted{start, {}};
  VertexId at = start;
  for (ArrowId a : p.arrows) {
    ArrowId found{};
    bool ok = false;
    for (ArrowId cand : c.source.out_arrows(at)) {
      if (c.map_arrow(cand) == a) {
        found = cand;
        ok = true;
        break;
      }
    }
    if (!ok)
      fail(errc::no_lift, "no preimage of arrow '" + c.target.arrow_name(a) +
                              "' at vertex '" + c.source.vertex_name(at) + "'");
    lifted.arrows.push_back(found);
    at = c.source.arrow_info(found).dst;
  }
  if (project_path(c, lifted).arrows != p.arrows)
    fail(errc::no_lift, "lift does not project back onto the path");
  return lifted;
}

/// Two disjoint copies of a quiver with the fold map, the simplest
/// non-identity covering; sheet s suffixes every name with "_s<s>".
inline CoveringMap disjoint_double(const TranslationQuiver& q) {
  TranslationQuiver::Builder b;
  auto vname = [&](VertexId v, int sheet) {
    return q.vertex_name(v) + "_s" + std::to_string(sheet);
  };
  auto aname = [&](ArrowId a, int sheet) {
    return q.arrow_name(a) + "_s" + std::to_string(sheet);
  };
  for (int sheet = 0; sheet < 2; ++sheet) {
    for (VertexId v : q.vertices()) b.add_vertex(vname(v, sheet));
    for (ArrowId a : q.arrows()) {
      const auto& info = q.arrow_info(a);
      b.add_arrow(aname(a, sheet), vname(info.src, sheet), vname(info.dst, sheet));
    }
  }
  for (int sheet = 0; sheet < 2; ++sheet) {
    for (VertexId v : q.vertices())
      if (auto t = q.tau(v)) b.set_tau(vname(v, sheet), vname(*t, sheet));
    for (ArrowId a : q.arrows())
      if (auto s = q.sigma(a)) b.set_sigma(aname(a, sheet), aname(*s, sheet));
  }
  CoveringMap c;
  c.source = std::move(b).build();
  c.target = q;
  c.vertex_map.resize(c.source.vertex_count());
  c.arrow_map.resize(c.source.arrow_count());
  for (int sheet = 0; sheet < 2; ++sheet) {
    for (VertexId v : q.vertices())
      c.vertex_map[c.source.vertex(vname(v, sheet)).index] = v;
    for (ArrowId a : q.arrows())
      c.arrow_map[c.source.arrow(aname(a, sheet)).index] = a;
  }
  return c;
}

}  // namespace meshcat
