#pragma once

#include <algorithm>
#include <deque>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "meshcat/error.hpp"
#include "meshcat/quiver.hpp"

namespace meshcat {

/// Paths one elementary move away from p: exchange a mesh's two sides
/// ((sigma a)a -> (sigma a')a' for another arrow a' into the same
/// non-projective vertex) or swap one arrow for a parallel one. p itself is
/// excluded. Moves preserve endpoints and length.
///
/// This is the restricted, path-level homotopy: inverse-arrow cancellation
/// is not implemented, so positive answers are sound and negative ones are
/// only "not shown".
inline std::vector<Path> elementary_neighbors(const TranslationQuiver& q, const Path& p) {
  require_path(q, p);
  std::set<Path> out;

  for (std::size_t i = 0; i < p.arrows.size(); ++i) {
    const auto& info = q.arrow_info(p.arrows[i]);
    for (ArrowId b : q.out_arrows(info.src)) {
      if (b != p.arrows[i] && q.arrow_info(b).dst == info.dst) {
        Path swapped = p;
        swapped.arrows[i] = b;
        out.insert(std::move(swapped));
      }
    }
  }

  for (std::size_t i = 0; i + 1 < p.arrows.size(); ++i) {
    ArrowId second = p.arrows[i + 1];
    auto s = q.sigma(second);
    if (!s || *s != p.arrows[i]) continue;  // need the subpath (sigma a) then a
    VertexId z = q.arrow_info(second).dst;
    for (ArrowId b : q.in_arrows(z)) {
      if (b == second) continue;
      auto sb = q.sigma(b);
      if (!sb)
        fail(errc::invalid_quiver,
             "arrow '" + q.arrow_name(b) + "' lacks a sigma partner; quiver is invalid");
      Path exchanged = p;
      exchanged.arrows[i] = *sb;
      exchanged.arrows[i + 1] = b;
      out.insert(std::move(exchanged));
    }
  }

  out.erase(p);
  return {out.begin(), out.end()};
}

struct HomotopyPartition {
  VertexId from;
  VertexId to;
  std::optional<std::size_t> length;
  std::vector<std::vector<Path>> classes;  // each sorted; classes sorted by first member
};

/// Connected components of the elementary-move graph on the paths x ~> y
/// (of the given length, when bounded).
inline HomotopyPartition homotopy_classes(const TranslationQuiver& q, VertexId x, VertexId y,
                                          std::optional<std::size_t> length = std::nullopt) {
  auto paths = enumerate_paths(q, x, y, length);
  std::map<Path, std::size_t> index;
  for (std::size_t i = 0; i < paths.size(); ++i) index.emplace(paths[i], i);

  std::vector<char> seen(paths.size(), 0);
  HomotopyPartition part{x, y, length, {}};
  for (std::size_t i = 0; i < paths.size(); ++i) {
    if (seen[i]) continue;
    std::vector<Path> cls;
    std::deque<std::size_t> queue{i};
    seen[i] = 1;
    while (!queue.empty()) {
      std::size_t cur = queue.front();
      queue.pop_front();
      cls.push_back(paths[cur]);
      for (const Path& nb : elementary_neighbors(q, paths[cur])) {
        auto it = index.find(nb);
        if (it == index.end())
          fail(errc::invalid_quiver, "elementary move left the enumerated path set");
        if (!seen[it->second]) {
          seen[it->second] = 1;
          queue.push_back(it->second);
        }
      }
    }
    std::sort(cls.begin(), cls.end());
    part.classes.push_back(std::move(cls));
  }
  std::sort(part.classes.begin(), part.classes.end(),
            [](const auto& a, const auto& b) { return a.front() < b.front(); });
  return part;
}

enum class Homotopy { Homotopic, NotShown };

struct HomotopyAnswer {
  Homotopy verdict;
  std::string reason;  // set when NotShown

  bool homotopic() const { return verdict == Homotopy::Homotopic; }
};

/// Sound in the Homotopic direction only: the full homotopy relation (with
/// inverse-walk moves) could still identify paths reported NotShown.
inline HomotopyAnswer are_homotopic(const TranslationQuiver& q, const Path& p, const Path& r) {
  require_path(q, p);
  require_path(q, r);
  if (p.source != r.source || path_target(q, p) != path_target(q, r))
    fail(errc::endpoint_mismatch, "paths do not share endpoints");
  if (p == r) return {Homotopy::Homotopic, ""};
  if (p.length() != r.length())
    return {Homotopy::NotShown, "LENGTH_MISMATCH"};

  std::set<Path> seen{p};
  std::deque<Path> queue{p};
  while (!queue.empty()) {
    Path cur = std::move(queue.front());
    queue.pop_front();
    for (Path& nb : elementary_neighbors(q, cur)) {
      if (nb == r) return {Homotopy::Homotopic, ""};
      if (seen.insert(nb).second) queue.push_back(std::move(nb));
    }
  }
  return {Homotopy::NotShown, "NO_MOVE_CHAIN"};
}

}  // namespace meshcat
