#pragma once

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "meshcat/covering.hpp"
#include "meshcat/dsl.hpp"
#include "meshcat/error.hpp"
#include "meshcat/field.hpp"
#include "meshcat/groebner.hpp"
#include "meshcat/homotopy.hpp"
#include "meshcat/jsonio.hpp"
#include "meshcat/mesh.hpp"
#include "meshcat/order.hpp"
#include "meshcat/quiver.hpp"
#include "meshcat/span.hpp"

namespace meshcat::cli {

/// Default descending base at x: admissible arrows by index.
inline std::vector<ArrowId> default_mesh_lex_base(const TranslationQuiver& q, VertexId x,
                                                  VertexId y) {
  auto pred = co_reachable(q, y);
  return admissible_arrows(q, pred, x);
}

namespace detail {

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(errc::parse_error, "cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline TranslationQuiver load_quiver(const std::string& path, std::ostream& err) {
  auto doc = parse_quiver_file(read_file(path));
  if (!doc.ok()) {
    for (const auto& d : doc.diagnostics) {
      err << path << ":";
      if (d.line) err << d.line << ":" << d.col << ":";
      err << " error: " << d.message;
      if (!d.hint.empty()) err << " (" << d.hint << ")";
      err << "\n";
    }
    fail(errc::parse_error, "quiver file '" + path + "' has errors");
  }
  return *std::move(doc.quiver);
}

inline json load_json(const std::string& path) {
  json j = json::parse(read_file(path), nullptr, false);
  if (j.is_discarded()) fail(errc::parse_error, "'" + path + "' is not valid JSON");
  return j;
}

inline std::string dir_of(const std::string& path) {
  auto slash = path.find_last_of('/');
  return slash == std::string::npos ? std::string() : path.substr(0, slash + 1);
}

inline int exit_code_for(errc c) {
  switch (c) {
    case errc::hypothesis_violated:
    case errc::order_not_mesh_lex:
    case errc::mesh_lex_unavailable:
      return 1;
    default:
      return 2;
  }
}

struct Options {
  std::string field = "Q";
  std::string order_file;
  std::string counting = "arrows";
  bool as_json = false;
  bool with_trace = false;
  std::uint64_t seed = 0;

  std::string quiver_file;
  std::string from, to, at, start;
  std::string path_text;
  std::string vector_file, spec_file, cover_file, base_text, strategy = "first";
  std::optional<std::size_t> length;
  std::size_t depth = 1;

  CountingMode mode() const {
    if (counting == "arrows") return CountingMode::ArrowMultiplicity;
    if (counting == "vertices") return CountingMode::VertexSet;
    fail(errc::invalid_argument, "--counting must be 'arrows' or 'vertices'");
  }

  ReduceStrategy reduce_strategy() const {
    if (strategy == "first") return ReduceStrategy::first_match();
    if (strategy == "largest") return ReduceStrategy::largest_lp();
    if (strategy == "seeded") return ReduceStrategy::seeded(seed);
    fail(errc::invalid_argument, "--strategy must be first, largest or seeded");
  }
};

inline PathOrder resolve_order(const TranslationQuiver& q, const Options& opts, VertexId x,
                               VertexId y) {
  if (!opts.order_file.empty()) {
    auto o = order_from_json(q, load_json(opts.order_file));
    if (o.from != x || o.to != y)
      fail(errc::invalid_argument, "order file context does not match the requested vertices");
    return o;
  }
  return build_mesh_lex_order(q, x, y, default_mesh_lex_base(q, x, y));
}

inline std::vector<ArrowId> parse_base(const TranslationQuiver& q, const std::string& text) {
  std::vector<ArrowId> base;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto comma = text.find(',', pos);
    auto tok = text.substr(pos, comma == std::string::npos ? comma : comma - pos);
    if (!tok.empty()) base.push_back(q.arrow(tok));
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return base;
}

template <class K>
json relations_json(const TranslationQuiver& q, const K& k,
                    const std::vector<MeshCanonicalRelation<K>>& rel) {
  json arr = json::array();
  for (const auto& r : rel) arr.push_back(relation_to_json(q, k, r));
  return arr;
}

template <class K>
json coeffs_json(const K& k, const std::vector<typename K::Elem>& cs) {
  json arr = json::array();
  for (const auto& c : cs) arr.push_back(k.to_string(c));
  return arr;
}

// Per-field implementations of the algebraic subcommands. Each returns the
// process exit code.

template <class K>
int cmd_relations(const TranslationQuiver& q, const K& k, const Options& opts,
                  std::ostream& out) {
  VertexId x = q.vertex(opts.from), y = q.vertex(opts.to);
  auto rel = enumerate_mesh_canonical(q, k, x, y, opts.length);
  if (opts.as_json) {
    json j;
    j["from"] = opts.from;
    j["to"] = opts.to;
    j["count"] = rel.size();
    j["relations"] = relations_json(q, k, rel);
    out << j.dump(2) << "\n";
  } else {
    out << rel.size() << " mesh-canonical relation(s) from " << opts.from << " to " << opts.to
        << "\n";
    for (const auto& r : rel)
      out << "  z=" << q.vertex_name(r.z) << " gamma1=" << path_to_string(q, r.gamma1)
          << " gamma2=" << path_to_string(q, r.gamma2) << "  value: " << lc_to_string(q, k, r.value)
          << "\n";
  }
  return 0;
}

template <class K>
int cmd_reduce(const TranslationQuiver& q, const K& k, const Options& opts, std::ostream& out) {
  VertexId x = q.vertex(opts.from), y = q.vertex(opts.to);
  auto order = resolve_order(q, opts, x, y);
  auto v = lc_from_json(q, k, load_json(opts.vector_file));
  if (v.from != x || v.to != y)
    fail(errc::endpoint_mismatch, "vector endpoints do not match --from/--to");
  auto rel = enumerate_mesh_canonical(q, k, x, y);
  auto values = relation_values(rel);
  auto trace = reduce_full(q, k, v, std::span<const LinComb<K>>(values), order,
                           opts.reduce_strategy());
  if (opts.as_json) {
    json j;
    j["remainder"] = lc_to_json(q, k, trace.remainder);
    j["steps"] = trace.steps.size();
    if (opts.with_trace) {
      j["trace"] = trace_to_json(q, k, trace);
      j["reducers"] = relations_json(q, k, rel);
    }
    out << j.dump(2) << "\n";
  } else {
    out << "remainder: " << lc_to_string(q, k, trace.remainder) << "\n";
    if (opts.with_trace)
      for (const auto& s : trace.steps)
        out << "  step: reducer " << s.reducer << " eliminated "
            << path_to_string(q, s.eliminated) << " multiplier " << k.to_string(s.multiplier)
            << "\n";
  }
  return 0;
}

template <class K>
int cmd_groebner_check(const TranslationQuiver& q, const K& k, const Options& opts,
                       std::ostream& out) {
  VertexId x = q.vertex(opts.from), y = q.vertex(opts.to);
  auto order = resolve_order(q, opts, x, y);
  auto rel = enumerate_mesh_canonical(q, k, x, y, opts.length);
  auto values = relation_values(rel);
  GroebnerVerdict<K> verdict;
  if (values.empty())
    verdict.ok = true;
  else
    verdict = is_groebner(q, k, std::span<const LinComb<K>>(values), order);
  if (opts.as_json) {
    json j;
    j["ok"] = verdict.ok;
    json lp = json::array(), span_lp = json::array();
    for (const auto& p : verdict.lp_set) lp.push_back(path_to_string(q, p));
    for (const auto& p : verdict.span_lp_set) span_lp.push_back(path_to_string(q, p));
    j["lp_set"] = lp;
    j["span_lp_set"] = span_lp;
    if (verdict.witness)
      j["witness"] = lc_to_json(q, k, *verdict.witness);
    else
      j["witness"] = nullptr;
    out << j.dump(2) << "\n";
  } else {
    out << (verdict.ok ? "groebner: yes" : "groebner: no") << "\n";
    if (verdict.witness) {
      out << "witness: " << lc_to_string(q, k, *verdict.witness) << "\n";
      out << "witness lp: " << path_to_string(q, leading_path(q, order, *verdict.witness))
          << "\n";
    }
  }
  return verdict.ok ? 0 : 1;
}

template <class K>
int cmd_bimesh(const TranslationQuiver& q, const K& k, const Options& opts, std::ostream& out) {
  VertexId x = q.vertex(opts.from), y = q.vertex(opts.to);
  auto order = resolve_order(q, opts, x, y);
  auto bim = bimesh_Sc(q, k, x, y, order);
  if (opts.as_json) {
    json j;
    j["alpha1"] = bim.alpha1 ? json(q.arrow_name(*bim.alpha1)) : json(nullptr);
    j["r_x"] = relations_json(q, k, bim.r_x);
    j["sc"] = relations_json(q, k, bim.sc());
    j["basis"] = relations_json(q, k, bim.basis);
    json exp = json::array();
    for (const auto& e : bim.expansions)
      exp.push_back({{"rx_index", e.rx_index}, {"ok", e.ok}, {"coeffs", coeffs_json(k, e.coeffs)}});
    j["expansions"] = exp;
    out << j.dump(2) << "\n";
  } else {
    out << "Sc has " << bim.sc().size() << " element(s) out of " << bim.r_x.size()
        << " in R_x\n";
    for (const auto& r : bim.sc()) out << "  " << lc_to_string(q, k, r.value) << "\n";
    for (const auto& e : bim.expansions) {
      out << "decomposition of " << lc_to_string(q, k, bim.r_x[e.rx_index].value)
          << (e.ok ? "" : " FAILED") << ":";
      for (std::size_t i = 0; i < e.coeffs.size(); ++i)
        if (!k.is_zero(e.coeffs[i]))
          out << " (" << k.to_string(e.coeffs[i]) << ")*[" << i << "]";
      out << "\n";
    }
  }
  return 0;
}

template <class K>
int cmd_build_s(const TranslationQuiver& q, const K& k, const Options& opts, std::ostream& out) {
  VertexId x = q.vertex(opts.from), y = q.vertex(opts.to);
  auto order = resolve_order(q, opts, x, y);
  auto s = build_S(q, k, x, y, order, opts.mode());
  if (opts.as_json) {
    json j;
    j["count"] = s.s.size();
    j["s"] = relations_json(q, k, s.s);
    j["distinct_lp"] = s.distinct_lp;
    j["relation_count"] = s.relations.size();
    json certs = json::array();
    for (const auto& c : s.certificates)
      certs.push_back({{"relation_index", c.relation_index},
                       {"ok", c.ok},
                       {"coeffs", coeffs_json(k, c.coeffs)}});
    j["certificates"] = certs;
    out << j.dump(2) << "\n";
  } else {
    out << "S(" << opts.from << "," << opts.to << ") has " << s.s.size() << " element(s), "
        << (s.distinct_lp ? "distinct" : "NON-DISTINCT") << " leading paths\n";
    for (const auto& r : s.s) out << "  " << lc_to_string(q, k, r.value) << "\n";
  }
  return 0;
}

template <class K>
int cmd_normal_form(const TranslationQuiver& q, const K& k, const Options& opts,
                    std::ostream& out) {
  VertexId x = q.vertex(opts.from), y = q.vertex(opts.to);
  auto order = resolve_order(q, opts, x, y);
  auto v = lc_from_json(q, k, load_json(opts.vector_file));
  auto nf = normal_form(q, k, v, x, y, order);
  if (opts.as_json) {
    json j;
    j["representative"] = lc_to_json(q, k, nf.representative);
    j["path_count"] = nf.path_count;
    j["rank"] = nf.rank;
    j["quotient_dim"] = nf.quotient_dim;
    j["groebner"] = nf.groebner;
    j["zero_by_reduction"] = nf.zero_by_reduction;
    j["zero_in_quotient"] = nf.zero_in_quotient;
    j["membership"] = nf.zero_in_quotient ? coeffs_json(k, nf.membership) : json(nullptr);
    if (opts.with_trace) j["trace"] = trace_to_json(q, k, nf.trace);
    out << j.dump(2) << "\n";
  } else {
    out << "representative: " << lc_to_string(q, k, nf.representative) << "\n";
    out << "zero in quotient: " << (nf.zero_in_quotient ? "yes" : "no")
        << (nf.groebner ? " (groebner: reduction is canonical)" : " (decided by span oracle)")
        << "\n";
    out << "quotient dimension: " << nf.quotient_dim << "\n";
  }
  return 0;
}

template <class K>
int cmd_quotient_dim(const TranslationQuiver& q, const K& k, const Options& opts,
                     std::ostream& out) {
  VertexId x = q.vertex(opts.from), y = q.vertex(opts.to);
  auto order = resolve_order(q, opts, x, y);
  auto rel = enumerate_mesh_canonical(q, k, x, y, opts.length);
  auto values = relation_values(rel);
  std::size_t paths = enumerate_paths(q, x, y, opts.length).size();
  std::size_t rank =
      values.empty()
          ? 0
          : span_oracle<K>(q, k, std::span<const LinComb<K>>(values), nullptr, order).rank;
  if (opts.as_json) {
    json j;
    j["from"] = opts.from;
    j["to"] = opts.to;
    j["paths"] = paths;
    j["rank"] = rank;
    j["quotient_dim"] = paths - rank;
    out << j.dump(2) << "\n";
  } else {
    out << paths - rank << "\n";
  }
  return 0;
}

template <class K>
int cmd_zero_test(const TranslationQuiver& q, const K& k, const Options& opts,
                  std::ostream& out) {
  auto spec = layer_spec_from_json(q, k, load_json(opts.spec_file));
  Options inner = opts;
  inner.from = q.vertex_name(spec.vertices.front());
  inner.to = q.vertex_name(spec.vertices.back());
  auto order = resolve_order(q, inner, spec.vertices.front(), spec.vertices.back());
  auto zt = zero_test_composite(q, k, spec, order, opts.mode());
  if (opts.as_json) {
    json j;
    j["product"] = lc_to_json(q, k, zt.product);
    j["remainder"] = lc_to_json(q, k, zt.remainder);
    j["zero_in_quotient"] = zt.zero_in_quotient;
    j["zero_by_reduction"] = zt.zero_by_reduction;
    j["groebner"] = zt.groebner;
    j["verdicts_agree"] = zt.verdicts_agree;
    j["hypotheses"] = {{"pairwise_homotopic", zt.hyp_pairwise_homotopic},
                       {"all_closed", zt.hyp_all_closed},
                       {"layers_nonzero", zt.hyp_layers_nonzero},
                       {"verified", zt.hypotheses_verified}};
    j["label"] = zt.label;
    out << j.dump(2) << "\n";
  } else {
    out << "product: " << lc_to_string(q, k, zt.product) << "\n";
    out << "zero in quotient: " << (zt.zero_in_quotient ? "yes" : "no") << "\n";
    out << "label: " << zt.label << "\n";
  }
  return zt.theorem_violation ? 1 : 0;
}

}  // namespace detail

/// Parses and executes one CLI invocation; results go to `out`, diagnostics
/// to `err`. Exit codes: 0 success, 1 failed property/check, 2 input error.
inline int run_command(const std::vector<std::string>& args, std::ostream& out,
                       std::ostream& err) {
  using detail::Options;
  Options opts;

  CLI::App app{"exact computations in path and mesh categories of translation quivers"};
  app.require_subcommand(1);
  app.add_option("--field", opts.field, "scalar field: Q or Fp:<prime>")
      ->capture_default_str();
  app.add_option("--order", opts.order_file, "path-order JSON file (overrides the builder)");
  app.add_option("--counting", opts.counting, "branching count: arrows or vertices")
      ->capture_default_str();
  app.add_flag("--json", opts.as_json, "emit JSON on stdout");
  app.add_flag("--trace", opts.with_trace, "include reduction traces");
  app.add_option("--seed", opts.seed, "seed for seeded strategies");

  auto add_quiver = [&](CLI::App* sub) {
    sub->add_option("file", opts.quiver_file, "quiver description file")->required();
    sub->fallthrough();
  };
  auto add_from_to = [&](CLI::App* sub) {
    sub->add_option("--from", opts.from, "source vertex")->required();
    sub->add_option("--to", opts.to, "target vertex")->required();
  };

  auto* c_validate = app.add_subcommand("validate", "check the translation-quiver axioms");
  add_quiver(c_validate);

  auto* c_paths = app.add_subcommand("paths", "enumerate paths between two vertices");
  add_quiver(c_paths);
  add_from_to(c_paths);
  std::optional<std::size_t> length_opt;
  c_paths->add_option("--length", length_opt, "restrict to paths of this length");

  auto* c_sectional = app.add_subcommand("sectional", "test whether a path is sectional");
  add_quiver(c_sectional);
  c_sectional->add_option("--path", opts.path_text, "path as dot-joined arrows or @vertex")
      ->required();

  auto* c_classify = app.add_subcommand("classify", "classify a path as closed or open");
  add_quiver(c_classify);
  c_classify->add_option("--path", opts.path_text, "path as dot-joined arrows or @vertex")
      ->required();

  auto* c_mesh = app.add_subcommand("mesh", "show the mesh ending at a vertex");
  add_quiver(c_mesh);
  c_mesh->add_option("--at", opts.at, "non-projective vertex")->required();

  auto* c_homotopy = app.add_subcommand("homotopy", "partition paths into homotopy classes");
  add_quiver(c_homotopy);
  add_from_to(c_homotopy);
  c_homotopy->add_option("--length", length_opt, "restrict to paths of this length");

  auto* c_relations = app.add_subcommand("relations", "enumerate mesh-canonical relations");
  add_quiver(c_relations);
  add_from_to(c_relations);
  c_relations->add_option("--length", length_opt, "restrict to relations of this length");

  auto* c_order_build = app.add_subcommand("order-build", "build a mesh-lexicographic order");
  add_quiver(c_order_build);
  add_from_to(c_order_build);
  c_order_build->add_option("--base", opts.base_text,
                            "comma-separated descending arrow ranking at the source");

  auto* c_order_check =
      app.add_subcommand("order-check", "check an order for mesh compatibility");
  add_quiver(c_order_check);
  add_from_to(c_order_check);

  auto* c_reduce = app.add_subcommand("reduce", "reduce a combination modulo the relations");
  add_quiver(c_reduce);
  add_from_to(c_reduce);
  c_reduce->add_option("--vector", opts.vector_file, "combination JSON file")->required();
  c_reduce->add_option("--strategy", opts.strategy, "reducer choice: first, largest, seeded")
      ->capture_default_str();

  auto* c_groebner = app.add_subcommand("groebner-check",
                                        "test whether the relations form a Groebner basis");
  add_quiver(c_groebner);
  add_from_to(c_groebner);
  c_groebner->add_option("--length", length_opt, "restrict to relations of this length");

  auto* c_bimesh = app.add_subcommand("bimesh", "compute Sc and its decompositions");
  add_quiver(c_bimesh);
  add_from_to(c_bimesh);

  auto* c_build_s = app.add_subcommand("build-s", "build the S(x,y) subset recursively");
  add_quiver(c_build_s);
  add_from_to(c_build_s);

  auto* c_normal = app.add_subcommand("normal-form", "normal form in the mesh category");
  add_quiver(c_normal);
  add_from_to(c_normal);
  c_normal->add_option("--vector", opts.vector_file, "combination JSON file")->required();

  auto* c_qdim = app.add_subcommand("quotient-dim", "dimension of the mesh-category hom space");
  add_quiver(c_qdim);
  add_from_to(c_qdim);
  c_qdim->add_option("--length", length_opt, "restrict to one length slice");

  auto* c_zero = app.add_subcommand("zero-test", "nonvanishing test for a layered composite");
  add_quiver(c_zero);
  c_zero->add_option("--spec", opts.spec_file, "layer spec JSON file")->required();

  auto* c_main = app.add_subcommand("main-hypothesis",
                                    "branching test for every mesh between the two vertices");
  add_quiver(c_main);
  add_from_to(c_main);

  auto* c_witness = app.add_subcommand("witness", "search for a mesh witness along a path");
  add_quiver(c_witness);
  c_witness->add_option("--path", opts.path_text, "path as dot-joined arrows")->required();

  auto* c_cover = app.add_subcommand("cover-check", "validate a covering map");
  c_cover->add_option("--cover", opts.cover_file, "covering JSON file")->required();
  c_cover->fallthrough();

  auto* c_lift = app.add_subcommand("lift", "lift a target path through a covering");
  c_lift->add_option("--cover", opts.cover_file, "covering JSON file")->required();
  c_lift->add_option("--path", opts.path_text, "target path")->required();
  c_lift->add_option("--start", opts.start, "source vertex to lift from")->required();
  c_lift->fallthrough();

  auto* c_genzq = app.add_subcommand("gen-zq", "generate a repetition-quiver window");
  add_quiver(c_genzq);
  c_genzq->add_option("--depth", opts.depth, "number of translation layers")
      ->capture_default_str();

  std::vector<std::string> argv = args;
  std::reverse(argv.begin(), argv.end());
  try {
    app.parse(argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  opts.length = length_opt;

  auto with_field = [&](auto&& fn) -> int {
    FieldSpec fs = FieldSpec::parse(opts.field);
    if (fs.rational) return fn(RationalField{});
    return fn(PrimeField(fs.p));
  };

  try {
    if (app.got_subcommand(c_validate)) {
      auto text = detail::read_file(opts.quiver_file);
      auto doc = parse_quiver_file(text);
      json j;
      j["ok"] = doc.ok();
      json diags = json::array();
      for (const auto& d : doc.diagnostics)
        diags.push_back(
            {{"line", d.line}, {"col", d.col}, {"message", d.message}, {"hint", d.hint}});
      j["diagnostics"] = diags;
      j["vertices"] = doc.quiver ? doc.quiver->vertex_count() : 0;
      j["arrows"] = doc.quiver ? doc.quiver->arrow_count() : 0;
      if (opts.as_json) {
        out << j.dump(2) << "\n";
      } else if (doc.ok()) {
        out << "ok: " << doc.quiver->vertex_count() << " vertex(es), "
            << doc.quiver->arrow_count() << " arrow(s)\n";
      } else {
        for (const auto& d : doc.diagnostics) {
          err << opts.quiver_file << ":";
          if (d.line) err << d.line << ":" << d.col << ":";
          err << " error: " << d.message;
          if (!d.hint.empty()) err << " (" << d.hint << ")";
          err << "\n";
        }
      }
      // files that never resolved to a quiver are input errors; axiom or
      // declaration violations on a parsed quiver are failed checks
      if (doc.ok()) return 0;
      return doc.quiver ? 1 : 2;
    }

    if (app.got_subcommand(c_cover) || app.got_subcommand(c_lift)) {
      auto doc = covering_doc_from_json(detail::load_json(opts.cover_file));
      auto base = detail::dir_of(opts.cover_file);
      auto source = detail::load_quiver(base + doc.source_file, err);
      auto target = detail::load_quiver(base + doc.target_file, err);
      auto cover = covering_from_doc(doc, std::move(source), std::move(target));
      if (app.got_subcommand(c_cover)) {
        auto report = validate_covering(cover);
        if (opts.as_json)
          out << validation_report_to_json(report).dump(2) << "\n";
        else if (report.ok())
          out << "ok: covering\n";
        else
          for (const auto& v : report.violations)
            out << v.code << ": " << v.message << "\n";
        return report.ok() ? 0 : 1;
      }
      auto p = path_from_string(cover.target, opts.path_text);
      auto lifted = lift_path(cover, p, cover.source.vertex(opts.start));
      if (opts.as_json) {
        json j;
        j["path"] = path_to_string(cover.target, p);
        j["start"] = opts.start;
        j["lifted"] = path_to_string(cover.source, lifted);
        out << j.dump(2) << "\n";
      } else {
        out << path_to_string(cover.source, lifted) << "\n";
      }
      return 0;
    }

    auto q = detail::load_quiver(opts.quiver_file, err);

    if (app.got_subcommand(c_paths)) {
      auto paths = enumerate_paths(q, q.vertex(opts.from), q.vertex(opts.to), opts.length);
      if (opts.as_json) {
        json j;
        j["from"] = opts.from;
        j["to"] = opts.to;
        j["count"] = paths.size();
        json arr = json::array();
        for (const auto& p : paths) arr.push_back(path_to_string(q, p));
        j["paths"] = arr;
        out << j.dump(2) << "\n";
      } else {
        for (const auto& p : paths) out << path_to_string(q, p) << "\n";
      }
      return 0;
    }

    if (app.got_subcommand(c_sectional)) {
      auto p = path_from_string(q, opts.path_text);
      bool s = is_sectional(q, p);
      if (opts.as_json) {
        json j{{"path", path_to_string(q, p)}, {"sectional", s}};
        out << j.dump(2) << "\n";
      } else {
        out << (s ? "sectional" : "not sectional") << "\n";
      }
      return 0;
    }

    if (app.got_subcommand(c_classify)) {
      auto p = path_from_string(q, opts.path_text);
      auto c = classify_path(q, p, opts.mode());
      if (opts.as_json) {
        json j;
        j["path"] = path_to_string(q, p);
        j["closed"] = c.closed;
        j["witnesses"] = c.witnesses;
        j["counting"] = opts.counting;
        out << j.dump(2) << "\n";
      } else if (c.closed) {
        out << "closed\n";
      } else {
        out << "open at";
        for (auto w : c.witnesses) out << " " << w;
        out << "\n";
      }
      return 0;
    }

    if (app.got_subcommand(c_mesh)) {
      auto m = mesh_of(q, q.vertex(opts.at));
      if (opts.as_json)
        out << meshview_to_json(q, m).dump(2) << "\n";
      else {
        out << "mesh at " << opts.at << ": tau = " << q.vertex_name(m.tau_x) << "\n";
        for (const auto& pr : m.pairs)
          out << "  " << q.arrow_name(pr.in_arrow) << "  <->  "
              << q.arrow_name(pr.sigma_partner) << "\n";
      }
      return 0;
    }

    if (app.got_subcommand(c_homotopy)) {
      auto part = homotopy_classes(q, q.vertex(opts.from), q.vertex(opts.to), opts.length);
      if (opts.as_json)
        out << homotopy_partition_to_json(q, part).dump(2) << "\n";
      else {
        out << part.classes.size() << " class(es)\n";
        for (const auto& cls : part.classes) {
          out << "  class of size " << cls.size() << ":";
          for (const auto& p : cls) out << " " << path_to_string(q, p);
          out << "\n";
        }
      }
      return 0;
    }

    if (app.got_subcommand(c_order_build)) {
      VertexId x = q.vertex(opts.from), y = q.vertex(opts.to);
      auto base = opts.base_text.empty() ? default_mesh_lex_base(q, x, y)
                                         : detail::parse_base(q, opts.base_text);
      auto order = build_mesh_lex_order(q, x, y, base);
      out << order_to_json(q, order).dump(2) << "\n";
      return 0;
    }

    if (app.got_subcommand(c_order_check)) {
      VertexId x = q.vertex(opts.from), y = q.vertex(opts.to);
      auto order = detail::resolve_order(q, opts, x, y);
      auto violations = check_mesh_lexicographic(q, order);
      if (opts.as_json) {
        json j;
        j["ok"] = violations.empty();
        json arr = json::array();
        for (const auto& v : violations) {
          json sig = json::array();
          for (VertexId s : v.signature) sig.push_back(q.vertex_name(s));
          arr.push_back({{"signature", sig},
                         {"max_arrow", q.arrow_name(v.max_arrow)},
                         {"smaller", q.arrow_name(v.smaller)}});
        }
        j["violations"] = arr;
        out << j.dump(2) << "\n";
      } else if (violations.empty()) {
        out << "ok: mesh-lexicographic\n";
      } else {
        for (const auto& v : violations) {
          out << "violation at (";
          for (std::size_t i = 0; i < v.signature.size(); ++i)
            out << (i ? "," : "") << q.vertex_name(v.signature[i]);
          out << "): max arrow " << q.arrow_name(v.max_arrow) << " forces partner below "
              << q.arrow_name(v.smaller) << "\n";
        }
      }
      return violations.empty() ? 0 : 1;
    }

    if (app.got_subcommand(c_main)) {
      auto report = check_main_hypothesis(q, q.vertex(opts.from), q.vertex(opts.to),
                                          opts.mode());
      if (opts.as_json) {
        json j;
        j["ok"] = report.ok;
        json arr = json::array();
        for (VertexId v : report.violations) arr.push_back(q.vertex_name(v));
        j["violations"] = arr;
        j["counting"] = opts.counting;
        out << j.dump(2) << "\n";
      } else if (report.ok) {
        out << "ok\n";
      } else {
        out << "violations:";
        for (VertexId v : report.violations) out << " " << q.vertex_name(v);
        out << "\n";
      }
      return report.ok ? 0 : 1;
    }

    if (app.got_subcommand(c_witness)) {
      auto p = path_from_string(q, opts.path_text);
      auto w = find_mesh_witness(q, p, opts.mode());
      if (opts.as_json) {
        json j;
        j["found"] = w.has_value();
        if (w) {
          j["z"] = q.vertex_name(w->z);
          j["gamma1"] = path_to_string(q, w->gamma1);
          j["gamma2"] = path_to_string(q, w->gamma2);
          j["into_e"] = q.arrow_name(w->into_e);
          j["from_e"] = q.arrow_name(w->from_e);
          j["witness"] = path_to_string(q, w->witness);
          j["homotopic"] = w->homotopic == Homotopy::Homotopic ? "Homotopic" : "NotShown";
        }
        out << j.dump(2) << "\n";
      } else if (!w) {
        out << "no witness\n";
      } else {
        out << "Z = " << q.vertex_name(w->z) << ", witness path "
            << path_to_string(q, w->witness) << " ("
            << (w->homotopic == Homotopy::Homotopic ? "Homotopic" : "NotShown") << ")\n";
      }
      return 0;
    }

    if (app.got_subcommand(c_genzq)) {
      auto window = generate_zq_window(q, opts.depth);
      if (opts.as_json) {
        json j;
        j["dsl"] = emit_quiver_dsl(window);
        j["vertices"] = window.vertex_count();
        j["arrows"] = window.arrow_count();
        j["depth"] = opts.depth;
        out << j.dump(2) << "\n";
      } else {
        out << emit_quiver_dsl(window);
      }
      return 0;
    }

    if (app.got_subcommand(c_relations))
      return with_field([&](const auto& k) { return detail::cmd_relations(q, k, opts, out); });
    if (app.got_subcommand(c_reduce))
      return with_field([&](const auto& k) { return detail::cmd_reduce(q, k, opts, out); });
    if (app.got_subcommand(c_groebner))
      return with_field(
          [&](const auto& k) { return detail::cmd_groebner_check(q, k, opts, out); });
    if (app.got_subcommand(c_bimesh))
      return with_field([&](const auto& k) { return detail::cmd_bimesh(q, k, opts, out); });
    if (app.got_subcommand(c_build_s))
      return with_field([&](const auto& k) { return detail::cmd_build_s(q, k, opts, out); });
    if (app.got_subcommand(c_normal))
      return with_field([&](const auto& k) { return detail::cmd_normal_form(q, k, opts, out); });
    if (app.got_subcommand(c_qdim))
      return with_field([&](const auto& k) { return detail::cmd_quotient_dim(q, k, opts, out); });
    if (app.got_subcommand(c_zero))
      return with_field([&](const auto& k) { return detail::cmd_zero_test(q, k, opts, out); });

    err << "error: no subcommand selected\n";
    return 2;
  } catch (const Error& e) {
    err << "error: " << errc_name(e.code()) << ": " << e.what() << "\n";
    return detail::exit_code_for(e.code());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace meshcat::cli
