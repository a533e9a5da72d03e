#pragma once

#include <cctype>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "meshcat/error.hpp"
#include "meshcat/quiver.hpp"

namespace meshcat {

struct Diagnostic {
  std::size_t line = 0;  // 1-based; 0 = file level
  std::size_t col = 0;   // 1-based
  std::string message;
  std::string hint;
};

/// Parse result for the line-oriented quiver description language:
///
///   vertices v1 v2 ... ;
///   arrow NAME : SRC -> DST ;
///   tau V1 -> V2 ;            # tau(V1) = V2
///   sigma A1 -> A2 ;          # sigma(A1) = A2
///   projective v1 ... ;       # optional declarations, cross-checked
///   injective v1 ... ;
///
/// '#' starts a comment; one statement per line. Parsing collects every
/// diagnostic it can instead of stopping at the first.
struct QuiverDocument {
  std::vector<Diagnostic> diagnostics;
  std::optional<TranslationQuiver> quiver;  // set when the text resolved to a quiver
  ValidationReport validation;              // axiom violations, also mirrored below

  bool ok() const { return diagnostics.empty(); }
};

namespace dsl_detail {

struct Token {
  std::string text;
  std::size_t col;  // 1-based
};

inline std::vector<Token> tokenize(std::string_view line) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < line.size()) {
    if (line[i] == '#') break;
    if (std::isspace(static_cast<unsigned char>(line[i]))) {
      ++i;
      continue;
    }
    std::size_t start = i;
    if (line[i] == ';' || line[i] == ':') {
      ++i;
    } else {
      while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i])) &&
             line[i] != ';' && line[i] != ':' && line[i] != '#')
        ++i;
    }
    out.push_back({std::string(line.substr(start, i - start)), start + 1});
  }
  return out;
}

}  // namespace dsl_detail

inline QuiverDocument parse_quiver_file(std::string_view text) {
  QuiverDocument doc;
  auto diag = [&](std::size_t line, std::size_t col, std::string msg, std::string hint) {
    doc.diagnostics.push_back({line, col, std::move(msg), std::move(hint)});
  };

  struct ArrowDecl {
    std::string name, src, dst;
    std::size_t line, col;
  };
  struct PairDecl {
    std::string from, to;
    std::size_t line, col;
  };
  std::vector<std::pair<std::string, std::pair<std::size_t, std::size_t>>> vertex_decls;
  std::vector<ArrowDecl> arrow_decls;
  std::vector<PairDecl> tau_decls, sigma_decls;
  std::vector<std::pair<std::string, std::pair<std::size_t, std::size_t>>> projective_decls,
      injective_decls;

  std::size_t lineno = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t eol = text.find('\n', pos);
    std::string_view line = text.substr(pos, eol == std::string_view::npos ? eol : eol - pos);
    pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
    ++lineno;

    auto tokens = dsl_detail::tokenize(line);
    if (tokens.empty()) continue;
    if (tokens.back().text != ";") {
      diag(lineno, tokens.back().col, "statement does not end with ';'",
           "terminate every statement with ' ;'");
      continue;
    }
    tokens.pop_back();
    if (tokens.empty()) continue;

    const std::string& head = tokens[0].text;
    auto rest_names = [&](auto& into) {
      for (std::size_t i = 1; i < tokens.size(); ++i)
        into.push_back({tokens[i].text, {lineno, tokens[i].col}});
    };

    if (head == "vertices") {
      if (tokens.size() < 2)
        diag(lineno, tokens[0].col, "'vertices' needs at least one name",
             "write 'vertices a b c ;'");
      rest_names(vertex_decls);
    } else if (head == "arrow") {
      // arrow NAME : SRC -> DST
      if (tokens.size() != 6 || tokens[2].text != ":" || tokens[4].text != "->") {
        diag(lineno, tokens[0].col, "malformed arrow statement",
             "write 'arrow name : src -> dst ;'");
        continue;
      }
      arrow_decls.push_back(
          {tokens[1].text, tokens[3].text, tokens[5].text, lineno, tokens[1].col});
    } else if (head == "tau" || head == "sigma") {
      if (tokens.size() != 4 || tokens[2].text != "->") {
        diag(lineno, tokens[0].col, "malformed " + head + " statement",
             "write '" + head + " a -> b ;'");
        continue;
      }
      auto& into = head == "tau" ? tau_decls : sigma_decls;
      into.push_back({tokens[1].text, tokens[3].text, lineno, tokens[1].col});
    } else if (head == "projective" || head == "injective") {
      if (tokens.size() < 2)
        diag(lineno, tokens[0].col, "'" + head + "' needs at least one name",
             "list the declared vertices before ';'");
      rest_names(head == "projective" ? projective_decls : injective_decls);
    } else {
      diag(lineno, tokens[0].col, "unknown statement '" + head + "'",
           "expected vertices / arrow / tau / sigma / projective / injective");
    }
  }

  // resolve names
  std::set<std::string> vertex_names, arrow_names;
  for (const auto& [name, at] : vertex_decls)
    if (!vertex_names.insert(name).second)
      diag(at.first, at.second, "duplicate vertex '" + name + "'",
           "vertex names must be unique");
  for (const auto& a : arrow_decls) {
    if (vertex_names.count(a.name))
      diag(a.line, a.col, "arrow '" + a.name + "' reuses a vertex name",
           "use distinct names for arrows and vertices");
    if (!arrow_names.insert(a.name).second)
      diag(a.line, a.col, "duplicate arrow '" + a.name + "'", "arrow names must be unique");
    for (const std::string* v : {&a.src, &a.dst})
      if (!vertex_names.count(*v))
        diag(a.line, a.col, "unknown vertex '" + *v + "' in arrow '" + a.name + "'",
             "declare it in a 'vertices' statement first");
  }
  std::set<std::string> tau_sources;
  for (const auto& t : tau_decls) {
    for (const std::string* v : {&t.from, &t.to})
      if (!vertex_names.count(*v))
        diag(t.line, t.col, "unknown vertex '" + *v + "' in tau statement",
             "declare it in a 'vertices' statement first");
    if (!tau_sources.insert(t.from).second)
      diag(t.line, t.col, "tau declared twice for '" + t.from + "'",
           "tau is a partial map: one image per vertex");
  }
  std::set<std::string> sigma_sources;
  for (const auto& s : sigma_decls) {
    for (const std::string* a : {&s.from, &s.to})
      if (!arrow_names.count(*a))
        diag(s.line, s.col, "unknown arrow '" + *a + "' in sigma statement",
             "declare it with an 'arrow' statement first");
    if (!sigma_sources.insert(s.from).second)
      diag(s.line, s.col, "sigma declared twice for '" + s.from + "'",
           "sigma is a map: one partner per arrow");
  }
  for (const auto& decls : {&projective_decls, &injective_decls})
    for (const auto& [name, at] : *decls)
      if (!vertex_names.count(name))
        diag(at.first, at.second, "unknown vertex '" + name + "' in status declaration",
             "declare it in a 'vertices' statement first");

  if (!doc.diagnostics.empty()) return doc;

  TranslationQuiver::Builder b;
  for (const auto& [name, at] : vertex_decls) b.add_vertex(name);
  for (const auto& a : arrow_decls) b.add_arrow(a.name, a.src, a.dst);
  for (const auto& t : tau_decls) b.set_tau(t.from, t.to);
  for (const auto& s : sigma_decls) b.set_sigma(s.from, s.to);
  TranslationQuiver q = std::move(b).build();

  doc.validation = validate_translation_quiver(q);
  for (const auto& v : doc.validation.violations)
    diag(0, 0, "validation: " + v.code + ": " + v.message,
         "fix the quiver data so every translation-quiver axiom holds");

  // declared statuses are cross-checked against the derived ones
  std::set<std::string> declared_proj, declared_inj;
  for (const auto& [name, at] : projective_decls) declared_proj.insert(name);
  for (const auto& [name, at] : injective_decls) declared_inj.insert(name);
  if (!declared_proj.empty()) {
    for (VertexId v : q.vertices()) {
      bool derived = q.is_projective(v);
      bool declared = declared_proj.count(q.vertex_name(v)) > 0;
      if (derived != declared)
        diag(0, 0,
             "vertex '" + q.vertex_name(v) + "' is " + (derived ? "" : "not ") +
                 "projective but the declaration says otherwise",
             "projective vertices are exactly those without tau");
    }
  }
  if (!declared_inj.empty()) {
    for (VertexId v : q.vertices()) {
      bool derived = q.is_injective(v);
      bool declared = declared_inj.count(q.vertex_name(v)) > 0;
      if (derived != declared)
        diag(0, 0,
             "vertex '" + q.vertex_name(v) + "' is " + (derived ? "" : "not ") +
                 "injective but the declaration says otherwise",
             "injective vertices are exactly those outside the range of tau");
    }
  }

  doc.quiver = std::move(q);
  return doc;
}

/// Emits the DSL text for a quiver (used by gen-zq); parsing it back yields
/// an identical quiver.
inline std::string emit_quiver_dsl(const TranslationQuiver& q) {
  std::string out;
  if (q.vertex_count()) {
    out += "vertices";
    for (VertexId v : q.vertices()) out += " " + q.vertex_name(v);
    out += " ;\n";
  }
  for (ArrowId a : q.arrows()) {
    const auto& info = q.arrow_info(a);
    out += "arrow " + info.name + " : " + q.vertex_name(info.src) + " -> " +
           q.vertex_name(info.dst) + " ;\n";
  }
  for (VertexId v : q.vertices())
    if (auto t = q.tau(v)) out += "tau " + q.vertex_name(v) + " -> " + q.vertex_name(*t) + " ;\n";
  for (ArrowId a : q.arrows())
    if (auto s = q.sigma(a))
      out += "sigma " + q.arrow_name(a) + " -> " + q.arrow_name(*s) + " ;\n";
  return out;
}

}  // namespace meshcat
