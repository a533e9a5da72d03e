#pragma once

#include <json.hpp>

#include <string>
#include <vector>

#include "meshcat/covering.hpp"
#include "meshcat/error.hpp"
#include "meshcat/groebner.hpp"
#include "meshcat/homotopy.hpp"
#include "meshcat/lincomb.hpp"
#include "meshcat/mesh.hpp"
#include "meshcat/order.hpp"
#include "meshcat/quiver.hpp"

namespace meshcat {

using json = nlohmann::json;

inline json path_to_json(const TranslationQuiver& q, const Path& p) {
  json arr = json::array();
  for (ArrowId a : p.arrows) arr.push_back(q.arrow_name(a));
  return arr;
}

inline Path path_from_json(const TranslationQuiver& q, const json& j, VertexId from) {
  if (!j.is_array()) fail(errc::parse_error, "path must be an array of arrow names");
  Path p{from, {}};
  for (const auto& name : j) {
    if (!name.is_string()) fail(errc::parse_error, "arrow names must be strings");
    p.arrows.push_back(q.arrow(name.get<std::string>()));
  }
  if (!p.arrows.empty()) p.source = q.arrow_info(p.arrows.front()).src;
  if (p.source != from)
    fail(errc::endpoint_mismatch, "path does not start at the declared vertex");
  require_path(q, p);
  return p;
}

inline json validation_report_to_json(const ValidationReport& r) {
  json out;
  out["ok"] = r.ok();
  json vs = json::array();
  for (const auto& v : r.violations) vs.push_back({{"code", v.code}, {"message", v.message}});
  out["violations"] = vs;
  return out;
}

// ---------------------------------------------------------------------------
// Linear combinations: {"from": x, "to": y, "terms": [{"path": [...], "coeff": "..."}]}

template <class K>
json lc_to_json(const TranslationQuiver& q, const K& k, const LinComb<K>& v) {
  json out;
  out["from"] = q.vertex_name(v.from);
  out["to"] = q.vertex_name(v.to);
  json terms = json::array();
  for (const auto& [p, c] : v.terms)
    terms.push_back({{"path", path_to_json(q, p)}, {"coeff", k.to_string(c)}});
  out["terms"] = terms;
  return out;
}

template <class K>
LinComb<K> lc_from_json(const TranslationQuiver& q, const K& k, const json& j) {
  if (!j.is_object() || !j.contains("from") || !j.contains("to") || !j.contains("terms"))
    fail(errc::parse_error, "combination needs from, to and terms");
  VertexId from = q.vertex(j.at("from").get<std::string>());
  VertexId to = q.vertex(j.at("to").get<std::string>());
  LinComb<K> v = lc_zero<K>(from, to);
  for (const auto& term : j.at("terms")) {
    Path p = path_from_json(q, term.at("path"), from);
    if (path_target(q, p) != to)
      fail(errc::endpoint_mismatch, "term path does not end at the declared vertex");
    typename K::Elem c = k.from_string(term.at("coeff").get<std::string>());
    detail::lc_accumulate(k, v, p, c);
  }
  return v;
}

// ---------------------------------------------------------------------------
// Path orders: {"from": x, "to": y, "rankings": [{"signature": [...], "arrows": [...desc]}]}

inline json order_to_json(const TranslationQuiver& q, const PathOrder& o) {
  json out;
  out["from"] = q.vertex_name(o.from);
  out["to"] = q.vertex_name(o.to);
  json rankings = json::array();
  for (const auto& [sig, rk] : o.rankings) {
    json sj = json::array();
    for (VertexId v : sig) sj.push_back(q.vertex_name(v));
    json aj = json::array();
    for (ArrowId a : rk) aj.push_back(q.arrow_name(a));
    rankings.push_back({{"signature", sj}, {"arrows", aj}});
  }
  out["rankings"] = rankings;
  return out;
}

inline PathOrder order_from_json(const TranslationQuiver& q, const json& j) {
  if (!j.is_object() || !j.contains("from") || !j.contains("to"))
    fail(errc::parse_error, "order needs from and to");
  PathOrder o;
  o.from = q.vertex(j.at("from").get<std::string>());
  o.to = q.vertex(j.at("to").get<std::string>());
  if (j.contains("rankings")) {
    for (const auto& entry : j.at("rankings")) {
      Signature sig;
      for (const auto& name : entry.at("signature")) sig.push_back(q.vertex(name.get<std::string>()));
      std::vector<ArrowId> rk;
      for (const auto& name : entry.at("arrows")) rk.push_back(q.arrow(name.get<std::string>()));
      if (sig.empty() || sig.front() != o.from)
        fail(errc::parse_error, "ranking signature must start at the order source");
      if (!o.rankings.emplace(std::move(sig), std::move(rk)).second)
        fail(errc::parse_error, "duplicate ranking signature");
    }
  }
  return normalized_order(q, o);
}

// ---------------------------------------------------------------------------
// Reduction traces

template <class K>
json trace_to_json(const TranslationQuiver& q, const K& k, const ReductionTrace<K>& t) {
  json out;
  out["start"] = lc_to_json(q, k, t.start);
  json steps = json::array();
  for (const auto& s : t.steps)
    steps.push_back({{"reducer", s.reducer},
                     {"eliminated", path_to_json(q, s.eliminated)},
                     {"multiplier", k.to_string(s.multiplier)}});
  out["steps"] = steps;
  out["remainder"] = lc_to_json(q, k, t.remainder);
  return out;
}

// ---------------------------------------------------------------------------
// Mesh-canonical relations

template <class K>
json relation_to_json(const TranslationQuiver& q, const K& k,
                      const MeshCanonicalRelation<K>& r) {
  json out;
  out["z"] = q.vertex_name(r.z);
  out["gamma1"] = path_to_json(q, r.gamma1);
  out["gamma2"] = path_to_json(q, r.gamma2);
  out["value"] = lc_to_json(q, k, r.value);
  return out;
}

// ---------------------------------------------------------------------------
// Homotopy partitions (classes as canonical path strings)

inline json homotopy_partition_to_json(const TranslationQuiver& q,
                                       const HomotopyPartition& part) {
  json out;
  out["from"] = q.vertex_name(part.from);
  out["to"] = q.vertex_name(part.to);
  if (part.length) out["length"] = *part.length;
  json classes = json::array();
  for (const auto& cls : part.classes) {
    json cj = json::array();
    for (const Path& p : cls) cj.push_back(path_to_string(q, p));
    classes.push_back(cj);
  }
  out["classes"] = classes;
  return out;
}

// ---------------------------------------------------------------------------
// Mesh views

inline json meshview_to_json(const TranslationQuiver& q, const MeshView& m) {
  json out;
  out["x"] = q.vertex_name(m.x);
  out["tau_x"] = q.vertex_name(m.tau_x);
  json pairs = json::array();
  for (const auto& pr : m.pairs)
    pairs.push_back({{"in_arrow", q.arrow_name(pr.in_arrow)},
                     {"sigma_partner", q.arrow_name(pr.sigma_partner)}});
  out["pairs"] = pairs;
  json middle = json::array();
  for (VertexId v : m.middle) middle.push_back(q.vertex_name(v));
  out["middle"] = middle;
  return out;
}

// ---------------------------------------------------------------------------
// Layer specs: {"vertices": [...], "layers": [[{"arrow": name, "coeff": "..."}], ...]}

template <class K>
LayerSpec<K> layer_spec_from_json(const TranslationQuiver& q, const K& k, const json& j) {
  if (!j.is_object() || !j.contains("vertices") || !j.contains("layers"))
    fail(errc::malformed_layer_spec, "layer spec needs vertices and layers");
  LayerSpec<K> spec;
  for (const auto& name : j.at("vertices")) spec.vertices.push_back(q.vertex(name.get<std::string>()));
  for (const auto& layer : j.at("layers")) {
    std::vector<std::pair<ArrowId, typename K::Elem>> terms;
    for (const auto& entry : layer)
      terms.emplace_back(q.arrow(entry.at("arrow").get<std::string>()),
                         k.from_string(entry.at("coeff").get<std::string>()));
    spec.layers.push_back(std::move(terms));
  }
  validate_layer_spec(q, k, spec);
  return spec;
}

template <class K>
json layer_spec_to_json(const TranslationQuiver& q, const K& k, const LayerSpec<K>& spec) {
  json out;
  json vs = json::array();
  for (VertexId v : spec.vertices) vs.push_back(q.vertex_name(v));
  out["vertices"] = vs;
  json layers = json::array();
  for (const auto& layer : spec.layers) {
    json lj = json::array();
    for (const auto& [a, c] : layer)
      lj.push_back({{"arrow", q.arrow_name(a)}, {"coeff", k.to_string(c)}});
    layers.push_back(lj);
  }
  out["layers"] = layers;
  return out;
}

// ---------------------------------------------------------------------------
// Covering documents: {"source": file, "target": file, "vertex_map": {...},
// "arrow_map": {...}} -- quiver loading is the caller's business.

struct CoveringDoc {
  std::string source_file;
  std::string target_file;
  std::vector<std::pair<std::string, std::string>> vertex_map;
  std::vector<std::pair<std::string, std::string>> arrow_map;
};

inline CoveringDoc covering_doc_from_json(const json& j) {
  if (!j.is_object() || !j.contains("source") || !j.contains("target") ||
      !j.contains("vertex_map") || !j.contains("arrow_map"))
    fail(errc::parse_error, "covering needs source, target, vertex_map and arrow_map");
  CoveringDoc doc;
  doc.source_file = j.at("source").get<std::string>();
  doc.target_file = j.at("target").get<std::string>();
  for (const auto& [key, value] : j.at("vertex_map").items())
    doc.vertex_map.emplace_back(key, value.get<std::string>());
  for (const auto& [key, value] : j.at("arrow_map").items())
    doc.arrow_map.emplace_back(key, value.get<std::string>());
  return doc;
}

inline CoveringMap covering_from_doc(const CoveringDoc& doc, TranslationQuiver source,
                                     TranslationQuiver target) {
  CoveringMap c;
  c.source = std::move(source);
  c.target = std::move(target);
  c.vertex_map.assign(c.source.vertex_count(), VertexId{});
  c.arrow_map.assign(c.source.arrow_count(), ArrowId{});
  std::vector<char> v_seen(c.source.vertex_count(), 0), a_seen(c.source.arrow_count(), 0);
  for (const auto& [from, to] : doc.vertex_map) {
    VertexId v = c.source.vertex(from);
    c.vertex_map[v.index] = c.target.vertex(to);
    v_seen[v.index] = 1;
  }
  for (const auto& [from, to] : doc.arrow_map) {
    ArrowId a = c.source.arrow(from);
    c.arrow_map[a.index] = c.target.arrow(to);
    a_seen[a.index] = 1;
  }
  for (VertexId v : c.source.vertices())
    if (!v_seen[v.index])
      fail(errc::invalid_covering,
           "vertex '" + c.source.vertex_name(v) + "' missing from vertex_map");
  for (ArrowId a : c.source.arrows())
    if (!a_seen[a.index])
      fail(errc::invalid_covering,
           "arrow '" + c.source.arrow_name(a) + "' missing from arrow_map");
  return c;
}

inline json covering_to_json(const CoveringMap& c, const std::string& source_file,
                             const std::string& target_file) {
  json out;
  out["source"] = source_file;
  out["target"] = target_file;
  json vm = json::object(), am = json::object();
  for (VertexId v : c.source.vertices())
    vm[c.source.vertex_name(v)] = c.target.vertex_name(c.map_vertex(v));
  for (ArrowId a : c.source.arrows())
    am[c.source.arrow_name(a)] = c.target.arrow_name(c.map_arrow(a));
  out["vertex_map"] = vm;
  out["arrow_map"] = am;
  return out;
}

}  // namespace meshcat
