#pragma once

#include <algorithm>
#include <optional>
#include <random>
#include <span>
#include <vector>

#include "meshcat/error.hpp"
#include "meshcat/lincomb.hpp"
#include "meshcat/order.hpp"
#include "meshcat/span.hpp"

namespace meshcat {

/// One simple reduction: kill the coefficient of lp(g) in f.
template <class K>
LinComb<K> reduce_once(const TranslationQuiver& q, const K& k, const LinComb<K>& f,
                       const LinComb<K>& g, const PathOrder& order) {
  if (g.zero()) fail(errc::invalid_argument, "cannot reduce modulo the zero combination");
  const Path& lp = leading_path(q, order, g);
  const auto* cf = f.coeff(lp);
  if (!cf)
    fail(errc::not_reducible,
         "coefficient of the reducer's leading path vanishes in the target");
  typename K::Elem mult = k.div(*cf, g.terms.at(lp));
  return sub(k, f, scale(k, mult, g));
}

/// Reducer choice. The strategy is explicit because remainder uniqueness is
/// exactly the property that fails on non-Groebner inputs; a fixed hidden
/// strategy would mask it.
struct ReduceStrategy {
  enum class Kind { FirstMatch, LargestLp, Seeded };
  Kind kind = Kind::FirstMatch;
  std::uint64_t seed = 0;

  static ReduceStrategy first_match() { return {Kind::FirstMatch, 0}; }
  static ReduceStrategy largest_lp() { return {Kind::LargestLp, 0}; }
  static ReduceStrategy seeded(std::uint64_t s) { return {Kind::Seeded, s}; }
};

template <class K>
struct ReductionStep {
  std::size_t reducer;  // index into G
  Path eliminated;      // lp(G[reducer])
  typename K::Elem multiplier;
};

/// Replayable trace: remainder = start - sum multiplier_i * G[reducer_i].
template <class K>
struct ReductionTrace {
  LinComb<K> start;
  std::vector<ReductionStep<K>> steps;
  LinComb<K> remainder;
};

template <class K>
ReductionTrace<K> reduce_full(const TranslationQuiver& q, const K& k, const LinComb<K>& f,
                              std::span<const LinComb<K>> basis, const PathOrder& order,
                              ReduceStrategy strategy = ReduceStrategy::first_match()) {
  std::vector<Path> lps;
  lps.reserve(basis.size());
  for (const auto& g : basis) {
    if (g.zero()) fail(errc::invalid_argument, "reduction basis contains the zero combination");
    lps.push_back(leading_path(q, order, g));
  }

  ReductionTrace<K> trace;
  trace.start = f;
  LinComb<K> cur = f;
  std::mt19937_64 rng(strategy.seed);

  std::vector<std::size_t> candidates;
  while (true) {
    candidates.clear();
    for (std::size_t i = 0; i < basis.size(); ++i)
      if (cur.coeff(lps[i])) candidates.push_back(i);
    if (candidates.empty()) break;

    std::size_t chosen = candidates.front();
    switch (strategy.kind) {
      case ReduceStrategy::Kind::FirstMatch:
        break;
      case ReduceStrategy::Kind::LargestLp:
        for (std::size_t i : candidates)
          if (compare_paths(q, order, lps[i], lps[chosen]) == Cmp::Greater) chosen = i;
        break;
      case ReduceStrategy::Kind::Seeded: {
        std::uniform_int_distribution<std::size_t> pick(0, candidates.size() - 1);
        chosen = candidates[pick(rng)];
        break;
      }
    }

    const LinComb<K>& g = basis[chosen];
    const Path& lp = lps[chosen];
    typename K::Elem mult = k.div(cur.terms.at(lp), g.terms.at(lp));
    cur = sub(k, cur, scale(k, mult, g));
    trace.steps.push_back({chosen, lp, std::move(mult)});
  }
  trace.remainder = std::move(cur);
  return trace;
}

template <class K>
struct GroebnerVerdict {
  bool ok = false;
  std::optional<LinComb<K>> witness;  // span member whose lp matches no lp(g)
  std::vector<Path> lp_set;           // {lp(g) : g in G}, deduplicated, descending
  std::vector<Path> span_lp_set;      // leading paths of the echelonized span, descending
};

/// G is a Groebner basis iff the leading paths of its span are exactly the
/// leading paths of its members (computed via the row-reduction oracle).
template <class K>
GroebnerVerdict<K> is_groebner(const TranslationQuiver& q, const K& k,
                               std::span<const LinComb<K>> basis, const PathOrder& order) {
  GroebnerVerdict<K> verdict;
  std::vector<Path> lp_set;
  for (const auto& g : basis) {
    if (g.zero()) fail(errc::invalid_argument, "basis contains the zero combination");
    lp_set.push_back(leading_path(q, order, g));
  }
  std::sort(lp_set.begin(), lp_set.end(), [&](const Path& a, const Path& b) {
    return compare_paths(q, order, a, b) == Cmp::Greater;
  });
  lp_set.erase(std::unique(lp_set.begin(), lp_set.end()), lp_set.end());

  auto span = span_oracle<K>(q, k, basis, nullptr, order);
  verdict.lp_set = std::move(lp_set);
  verdict.span_lp_set = span.leading;

  verdict.ok = verdict.lp_set == verdict.span_lp_set;
  if (!verdict.ok) {
    for (std::size_t i = 0; i < span.leading.size(); ++i) {
      bool known = std::binary_search(
          verdict.lp_set.begin(), verdict.lp_set.end(), span.leading[i],
          [&](const Path& a, const Path& b) {
            return compare_paths(q, order, a, b) == Cmp::Greater;
          });
      if (!known) {
        verdict.witness = span.echelon[i];
        break;
      }
    }
  }
  return verdict;
}

}  // namespace meshcat
