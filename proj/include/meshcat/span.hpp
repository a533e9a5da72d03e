#pragma once

#include <map>
#include <span>
#include <vector>

#include "meshcat/error.hpp"
#include "meshcat/lincomb.hpp"
#include "meshcat/order.hpp"

namespace meshcat {

/// Row-reduction oracle over the ordered path basis. This is the independent
/// route against which the Groebner machinery is verified: plain Gaussian
/// elimination, no reduction strategies, no term rewriting.
template <class K>
struct SpanResult {
  std::size_t rank = 0;
  std::vector<Path> leading;                          // lp per echelon row
  std::vector<LinComb<K>> echelon;                    // monic rows, descending lp
  std::vector<std::vector<typename K::Elem>> combo;   // echelon[i] = sum combo[i][j]*vectors[j]
  bool has_probe = false;
  bool member = false;
  std::vector<typename K::Elem> certificate;          // probe = sum certificate[j]*vectors[j]
  LinComb<K> probe_residue;
};

template <class K>
SpanResult<K> span_oracle(const TranslationQuiver& q, const K& k,
                          std::span<const LinComb<K>> vectors, const LinComb<K>* probe,
                          const PathOrder& order) {
  VertexId from = order.from, to = order.to;
  for (const auto& v : vectors)
    if (v.from != from || v.to != to)
      fail(errc::endpoint_mismatch, "span vectors must share the order's context");
  if (probe && (probe->from != from || probe->to != to))
    fail(errc::endpoint_mismatch, "probe must share the order's context");

  std::vector<LinComb<K>> rows;
  std::vector<std::vector<typename K::Elem>> combos;
  std::vector<Path> lps;
  std::map<Path, std::size_t> pivot;  // lp -> row index (exact-path lookup)

  const std::size_t n = vectors.size();
  auto eliminate = [&](LinComb<K>& cur, std::vector<typename K::Elem>& comb) {
    // reduce cur against existing pivots until its lp is fresh or it vanishes
    while (!cur.zero()) {
      const Path& lp = leading_path(q, order, cur);
      auto it = pivot.find(lp);
      if (it == pivot.end()) return;
      typename K::Elem c = cur.terms.at(lp);  // rows are monic
      cur = sub(k, cur, scale(k, c, rows[it->second]));
      for (std::size_t j = 0; j < n; ++j)
        comb[j] = k.add(comb[j], k.mul(c, combos[it->second][j]));
    }
  };

  for (std::size_t i = 0; i < n; ++i) {
    LinComb<K> cur = vectors[i];
    std::vector<typename K::Elem> comb(n, k.zero());
    eliminate(cur, comb);
    if (cur.zero()) continue;
    // comb currently expresses (vectors[i] - cur); flip to cur = vectors[i] - sum(...)
    for (auto& c : comb) c = k.neg(c);
    comb[i] = k.add(comb[i], k.one());
    const Path lp = leading_path(q, order, cur);
    typename K::Elem lead = cur.terms.at(lp);
    typename K::Elem inv = k.div(k.one(), lead);
    cur = scale(k, inv, cur);
    for (auto& c : comb) c = k.mul(inv, c);
    pivot.emplace(lp, rows.size());
    rows.push_back(std::move(cur));
    combos.push_back(std::move(comb));
    lps.push_back(lp);
  }

  SpanResult<K> result;
  result.rank = rows.size();

  // present rows in descending lp order
  std::vector<std::size_t> perm(rows.size());
  for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = i;
  std::sort(perm.begin(), perm.end(), [&](std::size_t a, std::size_t b) {
    return compare_paths(q, order, lps[a], lps[b]) == Cmp::Greater;
  });
  for (std::size_t i : perm) {
    result.leading.push_back(lps[i]);
    result.echelon.push_back(rows[i]);
    result.combo.push_back(combos[i]);
  }

  if (probe) {
    result.has_probe = true;
    LinComb<K> cur = *probe;
    std::vector<typename K::Elem> cert(n, k.zero());
    eliminate(cur, cert);
    result.member = cur.zero();
    result.probe_residue = std::move(cur);
    if (result.member) result.certificate = std::move(cert);
  }
  return result;
}

}  // namespace meshcat
