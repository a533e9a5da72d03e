#pragma once

#include <algorithm>
#include <compare>
#include <cstdint>
#include <deque>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "meshcat/error.hpp"

namespace meshcat {

/// Interned vertex handle. The integer index doubles as the canonical
/// tie-break wherever a deterministic choice is needed.
struct VertexId {
  std::uint32_t index = std::numeric_limits<std::uint32_t>::max();

  constexpr bool valid() const { return index != std::numeric_limits<std::uint32_t>::max(); }
  friend constexpr auto operator<=>(VertexId, VertexId) = default;
};

/// Interned arrow handle, same conventions as VertexId.
struct ArrowId {
  std::uint32_t index = std::numeric_limits<std::uint32_t>::max();

  constexpr bool valid() const { return index != std::numeric_limits<std::uint32_t>::max(); }
  friend constexpr auto operator<=>(ArrowId, ArrowId) = default;
};

struct Violation {
  std::string code;
  std::string message;
};

struct ValidationReport {
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }
};

/// A finite quiver with a partial translation tau and the arrow pairing
/// sigma. Immutable once built; all mutation happens through Builder.
class TranslationQuiver {
 public:
  struct Arrow {
    std::string name;
    VertexId src;
    VertexId dst;
  };

  class Builder {
   public:
    VertexId add_vertex(std::string name) {
      if (vertex_index_.count(name))
        fail(errc::duplicate_name, "duplicate vertex name '" + name + "'");
      VertexId id{static_cast<std::uint32_t>(vertex_names_.size())};
      vertex_index_.emplace(name, id);
      vertex_names_.push_back(std::move(name));
      return id;
    }

    ArrowId add_arrow(std::string name, std::string_view src, std::string_view dst) {
      if (arrow_index_.count(std::string(name)))
        fail(errc::duplicate_name, "duplicate arrow name '" + name + "'");
      ArrowId id{static_cast<std::uint32_t>(arrows_.size())};
      arrow_index_.emplace(name, id);
      arrows_.push_back(Arrow{std::move(name), vertex(src), vertex(dst)});
      return id;
    }

    /// tau(from) = to
    void set_tau(std::string_view from, std::string_view to) {
      VertexId f = vertex(from);
      if (tau_.count(f))
        fail(errc::duplicate_name,
             "tau already declared for vertex '" + std::string(from) + "'");
      tau_.emplace(f, vertex(to));
    }

    /// sigma(a) = b
    void set_sigma(std::string_view a, std::string_view b) {
      ArrowId f = arrow(a);
      if (sigma_.count(f))
        fail(errc::duplicate_name,
             "sigma already declared for arrow '" + std::string(a) + "'");
      sigma_.emplace(f, arrow(b));
    }

    TranslationQuiver build() &&;

   private:
    VertexId vertex(std::string_view name) const {
      auto it = vertex_index_.find(std::string(name));
      if (it == vertex_index_.end())
        fail(errc::unknown_vertex, "unknown vertex '" + std::string(name) + "'");
      return it->second;
    }
    ArrowId arrow(std::string_view name) const {
      auto it = arrow_index_.find(std::string(name));
      if (it == arrow_index_.end())
        fail(errc::unknown_arrow, "unknown arrow '" + std::string(name) + "'");
      return it->second;
    }

    std::vector<std::string> vertex_names_;
    std::map<std::string, VertexId> vertex_index_;
    std::vector<Arrow> arrows_;
    std::map<std::string, ArrowId> arrow_index_;
    std::map<VertexId, VertexId> tau_;
    std::map<ArrowId, ArrowId> sigma_;

    friend class TranslationQuiver;
  };

  std::size_t vertex_count() const { return vertex_names_.size(); }
  std::size_t arrow_count() const { return arrows_.size(); }

  std::optional<VertexId> find_vertex(std::string_view name) const {
    auto it = vertex_index_.find(std::string(name));
    if (it == vertex_index_.end()) return std::nullopt;
    return it->second;
  }
  VertexId vertex(std::string_view name) const {
    auto v = find_vertex(name);
    if (!v) fail(errc::unknown_vertex, "unknown vertex '" + std::string(name) + "'");
    return *v;
  }
  const std::string& vertex_name(VertexId v) const { return vertex_names_.at(v.index); }

  std::optional<ArrowId> find_arrow(std::string_view name) const {
    auto it = arrow_index_.find(std::string(name));
    if (it == arrow_index_.end()) return std::nullopt;
    return it->second;
  }
  ArrowId arrow(std::string_view name) const {
    auto a = find_arrow(name);
    if (!a) fail(errc::unknown_arrow, "unknown arrow '" + std::string(name) + "'");
    return *a;
  }
  const Arrow& arrow_info(ArrowId a) const { return arrows_.at(a.index); }
  const std::string& arrow_name(ArrowId a) const { return arrows_.at(a.index).name; }

  /// Arrows leaving / entering a vertex, sorted by arrow index.
  std::span<const ArrowId> out_arrows(VertexId v) const { return out_.at(v.index); }
  std::span<const ArrowId> in_arrows(VertexId v) const { return in_.at(v.index); }

  std::optional<VertexId> tau(VertexId v) const { return tau_.at(v.index); }
  std::optional<VertexId> tau_inv(VertexId v) const { return tau_inv_.at(v.index); }
  std::optional<ArrowId> sigma(ArrowId a) const { return sigma_.at(a.index); }
  std::optional<ArrowId> sigma_inv(ArrowId a) const { return sigma_inv_.at(a.index); }

  bool is_projective(VertexId v) const { return !tau(v); }
  bool is_injective(VertexId v) const { return !tau_inv(v); }

  std::vector<VertexId> vertices() const {
    std::vector<VertexId> out(vertex_count());
    for (std::uint32_t i = 0; i < out.size(); ++i) out[i] = VertexId{i};
    return out;
  }
  std::vector<ArrowId> arrows() const {
    std::vector<ArrowId> out(arrow_count());
    for (std::uint32_t i = 0; i < out.size(); ++i) out[i] = ArrowId{i};
    return out;
  }

 private:
  std::vector<std::string> vertex_names_;
  std::map<std::string, VertexId> vertex_index_;
  std::vector<Arrow> arrows_;
  std::map<std::string, ArrowId> arrow_index_;
  std::vector<std::optional<VertexId>> tau_;
  std::vector<std::optional<VertexId>> tau_inv_;
  std::vector<std::optional<ArrowId>> sigma_;
  std::vector<std::optional<ArrowId>> sigma_inv_;
  std::vector<std::vector<ArrowId>> out_;
  std::vector<std::vector<ArrowId>> in_;
};

inline TranslationQuiver TranslationQuiver::Builder::build() && {
  TranslationQuiver q;
  q.vertex_names_ = std::move(vertex_names_);
  q.vertex_index_ = std::move(vertex_index_);
  q.arrows_ = std::move(arrows_);
  q.arrow_index_ = std::move(arrow_index_);
  std::size_t nv = q.vertex_names_.size();
  std::size_t na = q.arrows_.size();
  q.tau_.resize(nv);
  q.tau_inv_.resize(nv);
  q.sigma_.resize(na);
  q.sigma_inv_.resize(na);
  q.out_.resize(nv);
  q.in_.resize(nv);
  for (auto [from, to] : tau_) {
    q.tau_[from.index] = to;
    // first preimage wins when tau is not injective; validation reports it
    if (!q.tau_inv_[to.index]) q.tau_inv_[to.index] = from;
  }
  for (auto [a, b] : sigma_) {
    q.sigma_[a.index] = b;
    if (!q.sigma_inv_[b.index]) q.sigma_inv_[b.index] = a;
  }
  for (std::uint32_t i = 0; i < na; ++i) {
    q.out_[q.arrows_[i].src.index].push_back(ArrowId{i});
    q.in_[q.arrows_[i].dst.index].push_back(ArrowId{i});
  }
  return q;
}

/// A composable arrow sequence; the empty sequence is the trivial path at
/// `source`. Ordered by (source, arrow indices), which is the canonical
/// path order used for deterministic iteration (not the term order).
struct Path {
  VertexId source;
  std::vector<ArrowId> arrows;

  std::size_t length() const { return arrows.size(); }
  bool trivial() const { return arrows.empty(); }

  friend auto operator<=>(const Path& a, const Path& b) {
    if (auto c = a.source <=> b.source; c != 0) return c;
    return std::lexicographical_compare_three_way(a.arrows.begin(), a.arrows.end(),
                                                  b.arrows.begin(), b.arrows.end());
  }
  friend bool operator==(const Path&, const Path&) = default;
};

inline bool path_valid(const TranslationQuiver& q, const Path& p) {
  if (p.source.index >= q.vertex_count()) return false;
  VertexId at = p.source;
  for (ArrowId a : p.arrows) {
    if (a.index >= q.arrow_count()) return false;
    const auto& info = q.arrow_info(a);
    if (info.src != at) return false;
    at = info.dst;
  }
  return true;
}

inline void require_path(const TranslationQuiver& q, const Path& p) {
  if (!path_valid(q, p)) fail(errc::invalid_path, "arrows do not compose into a path");
}

inline VertexId path_target(const TranslationQuiver& q, const Path& p) {
  return p.trivial() ? p.source : q.arrow_info(p.arrows.back()).dst;
}

/// Vertex sequence x_0, ..., x_n visited by the path.
inline std::vector<VertexId> path_vertices(const TranslationQuiver& q, const Path& p) {
  std::vector<VertexId> vs;
  vs.reserve(p.length() + 1);
  vs.push_back(p.source);
  for (ArrowId a : p.arrows) vs.push_back(q.arrow_info(a).dst);
  return vs;
}

/// "alpha.beta.gamma" for nontrivial paths, "@x" for the trivial path at x.
inline std::string path_to_string(const TranslationQuiver& q, const Path& p) {
  if (p.trivial()) return "@" + q.vertex_name(p.source);
  std::string s;
  for (std::size_t i = 0; i < p.arrows.size(); ++i) {
    if (i) s += '.';
    s += q.arrow_name(p.arrows[i]);
  }
  return s;
}

/// Parses the syntax produced by path_to_string.
inline Path path_from_string(const TranslationQuiver& q, std::string_view text) {
  if (text.empty()) fail(errc::invalid_path, "empty path literal");
  if (text[0] == '@') return Path{q.vertex(text.substr(1)), {}};
  Path p;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t dot = text.find('.', pos);
    std::string_view tok = text.substr(pos, dot == std::string_view::npos ? dot : dot - pos);
    if (tok.empty()) fail(errc::invalid_path, "empty arrow name in path literal");
    p.arrows.push_back(q.arrow(tok));
    if (dot == std::string_view::npos) break;
    pos = dot + 1;
  }
  p.source = q.arrow_info(p.arrows.front()).src;
  require_path(q, p);
  return p;
}

inline Path concat_paths(const TranslationQuiver& q, const Path& first, const Path& second) {
  if (path_target(q, first) != second.source)
    fail(errc::endpoint_mismatch, "paths do not compose");
  Path p{first.source, first.arrows};
  p.arrows.insert(p.arrows.end(), second.arrows.begin(), second.arrows.end());
  return p;
}

// ---------------------------------------------------------------------------
// Axiom validation

inline ValidationReport validate_translation_quiver(const TranslationQuiver& q) {
  ValidationReport r;
  auto add = [&](std::string code, std::string msg) {
    r.violations.push_back({std::move(code), std::move(msg)});
  };

  for (ArrowId a : q.arrows()) {
    const auto& info = q.arrow_info(a);
    if (info.src == info.dst)
      add("loop", "arrow '" + info.name + "' is a loop at vertex '" +
                      q.vertex_name(info.src) + "'");
  }

  // tau injective
  std::map<VertexId, std::vector<VertexId>> preimages;
  for (VertexId v : q.vertices())
    if (auto t = q.tau(v)) preimages[*t].push_back(v);
  for (auto& [img, pre] : preimages) {
    if (pre.size() > 1) {
      std::string names;
      for (VertexId v : pre) {
        if (!names.empty()) names += ", ";
        names += q.vertex_name(v);
      }
      add("tau-not-injective",
          "tau maps {" + names + "} to the same vertex '" + q.vertex_name(img) + "'");
    }
  }

  // sigma domain: exactly the arrows into non-projective vertices
  for (ArrowId a : q.arrows()) {
    const auto& info = q.arrow_info(a);
    bool into_nonproj = !q.is_projective(info.dst);
    bool has_sigma = q.sigma(a).has_value();
    if (into_nonproj && !has_sigma)
      add("sigma-missing", "arrow '" + info.name + "' ends at non-projective vertex '" +
                               q.vertex_name(info.dst) + "' but has no sigma partner");
    if (!into_nonproj && has_sigma)
      add("sigma-domain", "sigma declared for arrow '" + info.name +
                              "' whose end vertex is projective");
  }

  // per-mesh: sigma restricts to a bijection {arrows y->x} -> {arrows tau(x)->y}
  for (VertexId x : q.vertices()) {
    auto tx = q.tau(x);
    if (!tx) continue;
    std::set<ArrowId> images;
    bool mesh_ok = true;
    for (ArrowId a : q.in_arrows(x)) {
      auto s = q.sigma(a);
      if (!s) {
        mesh_ok = false;
        continue;  // already reported as sigma-missing
      }
      const auto& ai = q.arrow_info(a);
      const auto& si = q.arrow_info(*s);
      if (si.src != *tx || si.dst != ai.src) {
        add("sigma-endpoints", "sigma('" + ai.name + "') = '" + si.name +
                                   "' does not run " + q.vertex_name(*tx) + " -> " +
                                   q.vertex_name(ai.src));
        mesh_ok = false;
      }
      if (!images.insert(*s).second) {
        add("sigma-not-bijective",
            "sigma is not injective on the mesh of '" + q.vertex_name(x) + "'");
        mesh_ok = false;
      }
    }
    if (mesh_ok && images.size() != q.out_arrows(*tx).size())
      add("sigma-not-bijective", "sigma on the mesh of '" + q.vertex_name(x) +
                                     "' does not cover all arrows leaving '" +
                                     q.vertex_name(*tx) + "'");
  }

  return r;
}

// ---------------------------------------------------------------------------
// Reachability and neighbourhoods

struct Neighborhood {
  std::vector<VertexId> predecessors;  // distinct, sorted
  std::vector<VertexId> successors;    // distinct, sorted
  std::vector<ArrowId> in_arrows;      // with multiplicity, sorted
  std::vector<ArrowId> out_arrows;     // with multiplicity, sorted
};

inline Neighborhood neighbors(const TranslationQuiver& q, VertexId z) {
  if (z.index >= q.vertex_count()) fail(errc::unknown_vertex, "vertex out of range");
  Neighborhood n;
  std::set<VertexId> pred, succ;
  for (ArrowId a : q.in_arrows(z)) {
    n.in_arrows.push_back(a);
    pred.insert(q.arrow_info(a).src);
  }
  for (ArrowId a : q.out_arrows(z)) {
    n.out_arrows.push_back(a);
    succ.insert(q.arrow_info(a).dst);
  }
  n.predecessors.assign(pred.begin(), pred.end());
  n.successors.assign(succ.begin(), succ.end());
  return n;
}

/// Vertices from which `y` is reachable (including y itself).
inline std::vector<char> co_reachable(const TranslationQuiver& q, VertexId y) {
  std::vector<char> seen(q.vertex_count(), 0);
  std::deque<VertexId> queue{y};
  seen[y.index] = 1;
  while (!queue.empty()) {
    VertexId v = queue.front();
    queue.pop_front();
    for (ArrowId a : q.in_arrows(v)) {
      VertexId s = q.arrow_info(a).src;
      if (!seen[s.index]) {
        seen[s.index] = 1;
        queue.push_back(s);
      }
    }
  }
  return seen;
}

/// Vertices reachable from `x` (including x itself).
inline std::vector<char> reachable(const TranslationQuiver& q, VertexId x) {
  std::vector<char> seen(q.vertex_count(), 0);
  std::deque<VertexId> queue{x};
  seen[x.index] = 1;
  while (!queue.empty()) {
    VertexId v = queue.front();
    queue.pop_front();
    for (ArrowId a : q.out_arrows(v)) {
      VertexId d = q.arrow_info(a).dst;
      if (!seen[d.index]) {
        seen[d.index] = 1;
        queue.push_back(d);
      }
    }
  }
  return seen;
}

inline bool has_directed_cycle(const TranslationQuiver& q) {
  std::vector<std::size_t> indeg(q.vertex_count(), 0);
  for (ArrowId a : q.arrows()) ++indeg[q.arrow_info(a).dst.index];
  std::deque<VertexId> queue;
  for (VertexId v : q.vertices())
    if (indeg[v.index] == 0) queue.push_back(v);
  std::size_t removed = 0;
  while (!queue.empty()) {
    VertexId v = queue.front();
    queue.pop_front();
    ++removed;
    for (ArrowId a : q.out_arrows(v))
      if (--indeg[q.arrow_info(a).dst.index] == 0) queue.push_back(q.arrow_info(a).dst);
  }
  return removed != q.vertex_count();
}

// ---------------------------------------------------------------------------
// Path enumeration

/// All paths x ~> y, lexicographic by arrow index (a prefix precedes its
/// extensions). Without a length bound the quiver must be acyclic.
inline std::vector<Path> enumerate_paths(const TranslationQuiver& q, VertexId x, VertexId y,
                                         std::optional<std::size_t> length = std::nullopt) {
  if (x.index >= q.vertex_count() || y.index >= q.vertex_count())
    fail(errc::unknown_vertex, "vertex out of range");
  if (!length && has_directed_cycle(q))
    fail(errc::cycle_needs_bound,
         "quiver has a directed cycle; path enumeration needs a length bound");

  // shortest distance to y, for pruning (UINT32_MAX = unreachable)
  constexpr std::uint32_t kInf = std::numeric_limits<std::uint32_t>::max();
  std::vector<std::uint32_t> dist(q.vertex_count(), kInf);
  dist[y.index] = 0;
  std::deque<VertexId> queue{y};
  while (!queue.empty()) {
    VertexId v = queue.front();
    queue.pop_front();
    for (ArrowId a : q.in_arrows(v)) {
      VertexId s = q.arrow_info(a).src;
      if (dist[s.index] == kInf) {
        dist[s.index] = dist[v.index] + 1;
        queue.push_back(s);
      }
    }
  }

  std::vector<Path> result;
  Path current{x, {}};
  auto prune = [&](VertexId v, std::size_t used) {
    if (dist[v.index] == kInf) return true;
    if (length && dist[v.index] > *length - used) return true;
    return false;
  };
  // iterative DFS in arrow-index order
  struct Frame {
    VertexId at;
    std::size_t next = 0;
  };
  std::vector<Frame> stack;
  if (!prune(x, 0)) {
    stack.push_back({x});
    if (x == y && (!length || *length == 0)) result.push_back(current);
  }
  while (!stack.empty()) {
    Frame& f = stack.back();
    std::span<const ArrowId> outs = q.out_arrows(f.at);
    bool descended = false;
    while (f.next < outs.size()) {
      ArrowId a = outs[f.next++];
      VertexId d = q.arrow_info(a).dst;
      std::size_t used = current.arrows.size() + 1;
      if (length && used > *length) continue;
      if (prune(d, used)) continue;
      current.arrows.push_back(a);
      stack.push_back({d});
      if (d == y && (!length || *length == used)) result.push_back(current);
      descended = true;
      break;
    }
    if (!descended) {
      stack.pop_back();
      if (!current.arrows.empty()) current.arrows.pop_back();
    }
  }
  return result;
}

// ---------------------------------------------------------------------------
// Path classification

inline bool is_sectional(const TranslationQuiver& q, const Path& p) {
  require_path(q, p);
  auto vs = path_vertices(q, p);
  for (std::size_t i = 0; i + 2 < vs.size(); ++i) {
    auto t = q.tau(vs[i + 2]);
    if (t && *t == vs[i]) return false;
  }
  return true;
}

/// Whether branching tests count parallel arrows separately (middle-term
/// summands with multiplicity) or only distinct neighbour vertices.
enum class CountingMode { ArrowMultiplicity, VertexSet };

inline std::size_t out_branching(const TranslationQuiver& q, VertexId v, CountingMode mode) {
  if (mode == CountingMode::ArrowMultiplicity) return q.out_arrows(v).size();
  std::set<VertexId> succ;
  for (ArrowId a : q.out_arrows(v)) succ.insert(q.arrow_info(a).dst);
  return succ.size();
}

inline std::size_t in_branching(const TranslationQuiver& q, VertexId v, CountingMode mode) {
  if (mode == CountingMode::ArrowMultiplicity) return q.in_arrows(v).size();
  std::set<VertexId> pred;
  for (ArrowId a : q.in_arrows(v)) pred.insert(q.arrow_info(a).src);
  return pred.size();
}

struct PathClassification {
  bool closed = true;
  std::vector<std::size_t> witnesses;  // indices i with x_i = tau x_{i+2} failing the test
};

inline PathClassification classify_path(const TranslationQuiver& q, const Path& p,
                                         CountingMode mode = CountingMode::ArrowMultiplicity) {
  require_path(q, p);
  PathClassification c;
  auto vs = path_vertices(q, p);
  for (std::size_t i = 0; i + 2 < vs.size(); ++i) {
    auto t = q.tau(vs[i + 2]);
    if (t && *t == vs[i] && out_branching(q, vs[i], mode) < 2) {
      c.closed = false;
      c.witnesses.push_back(i);
    }
  }
  return c;
}

// ---------------------------------------------------------------------------
// Meshes

struct MeshView {
  VertexId x;
  VertexId tau_x;
  struct Pair {
    ArrowId in_arrow;       // beta : w -> x
    ArrowId sigma_partner;  // sigma(beta) : tau x -> w
  };
  std::vector<Pair> pairs;       // sorted by in_arrow
  std::vector<VertexId> middle;  // distinct sources of in-arrows, sorted
};

inline MeshView mesh_of(const TranslationQuiver& q, VertexId x) {
  auto tx = q.tau(x);
  if (!tx)
    fail(errc::no_mesh, "vertex '" + q.vertex_name(x) + "' is projective: no mesh ends there");
  MeshView m;
  m.x = x;
  m.tau_x = *tx;
  std::set<VertexId> mid;
  for (ArrowId a : q.in_arrows(x)) {
    auto s = q.sigma(a);
    if (!s)
      fail(errc::invalid_quiver,
           "arrow '" + q.arrow_name(a) + "' has no sigma partner; quiver is invalid");
    m.pairs.push_back({a, *s});
    mid.insert(q.arrow_info(a).src);
  }
  m.middle.assign(mid.begin(), mid.end());
  return m;
}

// ---------------------------------------------------------------------------
// ZQ windows (test scaffolding): layers 0..depth of the repetition quiver.

/// Builds the translation-quiver window over a plain (tau-free, acyclic,
/// loop-free) quiver. Vertices are named "v_i"; the layer-i copy of arrow a
/// is "a_i" and the connecting arrow (i,dst a) -> (i+1,src a) is "a_is".
inline TranslationQuiver generate_zq_window(const TranslationQuiver& base, std::size_t depth) {
  for (VertexId v : base.vertices())
    if (base.tau(v)) fail(errc::invalid_argument, "zq window input must have empty tau");
  for (ArrowId a : base.arrows()) {
    const auto& info = base.arrow_info(a);
    if (info.src == info.dst) fail(errc::invalid_argument, "zq window input must be loop-free");
  }
  if (has_directed_cycle(base))
    fail(errc::invalid_argument, "zq window input must be acyclic");

  TranslationQuiver::Builder b;
  auto vname = [&](VertexId v, std::size_t i) {
    return base.vertex_name(v) + "_" + std::to_string(i);
  };
  auto aname = [&](ArrowId a, std::size_t i) {
    return base.arrow_name(a) + "_" + std::to_string(i);
  };
  auto sname = [&](ArrowId a, std::size_t i) { return aname(a, i) + "s"; };

  for (std::size_t i = 0; i <= depth; ++i)
    for (VertexId v : base.vertices()) b.add_vertex(vname(v, i));
  for (std::size_t i = 0; i <= depth; ++i) {
    for (ArrowId a : base.arrows()) {
      const auto& info = base.arrow_info(a);
      b.add_arrow(aname(a, i), vname(info.src, i), vname(info.dst, i));
    }
    if (i < depth) {
      for (ArrowId a : base.arrows()) {
        const auto& info = base.arrow_info(a);
        b.add_arrow(sname(a, i), vname(info.dst, i), vname(info.src, i + 1));
      }
    }
  }
  for (std::size_t i = 1; i <= depth; ++i)
    for (VertexId v : base.vertices()) b.set_tau(vname(v, i), vname(v, i - 1));
  // mesh at (i,dst a): sigma(a_i) = a_(i-1)s; mesh at (i+1,src a): sigma(a_is) = a_i
  for (std::size_t i = 1; i <= depth; ++i)
    for (ArrowId a : base.arrows()) b.set_sigma(aname(a, i), sname(a, i - 1));
  for (std::size_t i = 0; i < depth; ++i)
    for (ArrowId a : base.arrows()) b.set_sigma(sname(a, i), aname(a, i));
  return std::move(b).build();
}

}  // namespace meshcat
