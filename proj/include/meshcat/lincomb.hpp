#pragma once

#include <map>
#include <string>
#include <utility>

#include "meshcat/error.hpp"
#include "meshcat/quiver.hpp"

namespace meshcat {

/// Finitely supported map path -> nonzero scalar; a morphism x ~> y of the
/// path category. Terms iterate in the canonical path order.
template <class K>
struct LinComb {
  using Elem = typename K::Elem;

  VertexId from;
  VertexId to;
  std::map<Path, Elem> terms;

  bool zero() const { return terms.empty(); }
  std::size_t size() const { return terms.size(); }

  const Elem* coeff(const Path& p) const {
    auto it = terms.find(p);
    return it == terms.end() ? nullptr : &it->second;
  }

  friend bool operator==(const LinComb& a, const LinComb& b) {
    return a.from == b.from && a.to == b.to && a.terms == b.terms;
  }
  // container ordering only; not the term order
  friend bool operator<(const LinComb& a, const LinComb& b) {
    if (a.from != b.from) return a.from < b.from;
    if (a.to != b.to) return a.to < b.to;
    return a.terms < b.terms;
  }
};

template <class K>
LinComb<K> lc_zero(VertexId from, VertexId to) {
  return LinComb<K>{from, to, {}};
}

/// Single term c*p (drops to the zero combination if c = 0).
template <class K>
LinComb<K> lc_term(const TranslationQuiver& q, const K& k, const Path& p,
                   typename K::Elem c) {
  require_path(q, p);
  LinComb<K> v{p.source, path_target(q, p), {}};
  if (!k.is_zero(c)) v.terms.emplace(p, std::move(c));
  return v;
}

template <class K>
LinComb<K> lc_path(const TranslationQuiver& q, const K& k, const Path& p) {
  return lc_term(q, k, p, k.one());
}

namespace detail {
template <class K>
void lc_accumulate(const K& k, LinComb<K>& into, const Path& p,
                   const typename K::Elem& c) {
  auto [it, inserted] = into.terms.emplace(p, c);
  if (!inserted) {
    it->second = k.add(it->second, c);
    if (k.is_zero(it->second)) into.terms.erase(it);
  } else if (k.is_zero(it->second)) {
    into.terms.erase(it);
  }
}
}  // namespace detail

template <class K>
LinComb<K> add(const K& k, const LinComb<K>& f, const LinComb<K>& g) {
  if (f.from != g.from || f.to != g.to)
    fail(errc::endpoint_mismatch, "cannot add combinations with different endpoints");
  LinComb<K> r = f;
  for (const auto& [p, c] : g.terms) detail::lc_accumulate(k, r, p, c);
  return r;
}

template <class K>
LinComb<K> scale(const K& k, const typename K::Elem& c, const LinComb<K>& f) {
  LinComb<K> r{f.from, f.to, {}};
  if (k.is_zero(c)) return r;
  for (const auto& [p, a] : f.terms) r.terms.emplace(p, k.mul(c, a));
  return r;
}

template <class K>
LinComb<K> sub(const K& k, const LinComb<K>& f, const LinComb<K>& g) {
  return add(k, f, scale(k, k.neg(k.one()), g));
}

/// Bilinear composition: each path of g juxtaposed after each path of f,
/// for f : x ~> y and g : y ~> z.
template <class K>
LinComb<K> concat(const K& k, const LinComb<K>& g, const LinComb<K>& f) {
  if (f.to != g.from)
    fail(errc::endpoint_mismatch, "combinations do not compose");
  LinComb<K> r{f.from, g.to, {}};
  for (const auto& [pf, cf] : f.terms) {
    for (const auto& [pg, cg] : g.terms) {
      Path joined{pf.source, pf.arrows};
      joined.arrows.insert(joined.arrows.end(), pg.arrows.begin(), pg.arrows.end());
      detail::lc_accumulate(k, r, joined, k.mul(cf, cg));
    }
  }
  return r;
}

template <class K>
std::string lc_to_string(const TranslationQuiver& q, const K& k, const LinComb<K>& v) {
  if (v.zero()) return "0";
  std::string s;
  for (const auto& [p, c] : v.terms) {
    if (!s.empty()) s += " + ";
    std::string cs = k.to_string(c);
    if (cs != "1") s += "(" + cs + ")*";
    s += path_to_string(q, p);
  }
  return s;
}

}  // namespace meshcat
