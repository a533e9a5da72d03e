#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <random>
#include <set>

#include "helpers.hpp"
#include "meshcat/field.hpp"
#include "meshcat/mesh.hpp"

using namespace meshcat;
using namespace meshcat::testing;

namespace {

using RLC = LinComb<RationalField>;

std::multiset<RLC> value_set(const std::vector<MeshCanonicalRelation<RationalField>>& rs) {
  std::multiset<RLC> out;
  for (const auto& r : rs) out.insert(r.value);
  return out;
}

}  // namespace

TEST_CASE("mesh relation at x in EX1") {
  auto q = make_ex1();
  RationalField k;
  auto m = mesh_relation(q, k, q.vertex("x"));
  CHECK(m == combo_of(q, k, {"alpha1.beta1", "alpha2.beta2", "alpha3.beta3"}));
}

TEST_CASE("mesh relation at x1 in EX1") {
  auto q = make_ex1();
  RationalField k;
  CHECK(mesh_relation(q, k, q.vertex("x1")) ==
        combo_of(q, k, {"gamma1.delta1", "gamma2.delta2"}));
}

TEST_CASE("mesh relation at a in EX2 is a single term") {
  auto q = make_ex2();
  RationalField k;
  CHECK(mesh_relation(q, k, q.vertex("a")) == combo_of(q, k, {"v1.w1"}));
}

TEST_CASE("injective vertices have no mesh relation") {
  auto q = make_ex1();
  RationalField k;
  CHECK_THROWS_AS(mesh_relation(q, k, q.vertex("y")), Error);
}

TEST_CASE("EX1 has exactly the five listed mesh-canonical relations") {
  auto q = make_ex1();
  RationalField k;
  auto rel = enumerate_mesh_canonical(q, k, q.vertex("x"), q.vertex("y"));
  REQUIRE(rel.size() == 5);
  auto labeled = ex1_relations(q, k);
  CHECK(value_set(rel) == std::multiset<RLC>(labeled.begin(), labeled.end()));
  for (const auto& r : rel) {
    CHECK_FALSE(r.value.zero());
    // value = gamma2 * m_z * gamma1, re-derived
    auto expanded = concat(k, lc_path(q, k, r.gamma2),
                           concat(k, mesh_relation(q, k, r.z), lc_path(q, k, r.gamma1)));
    CHECK(expanded == r.value);
    std::set<std::size_t> lengths;
    for (const auto& [p, c] : r.value.terms) lengths.insert(p.length());
    CHECK(lengths == std::set<std::size_t>{r.gamma1.length() + 2 + r.gamma2.length()});
  }
}

TEST_CASE("EX2 has exactly the five listed mesh-canonical relations") {
  auto q = make_ex2();
  RationalField k;
  auto rel = enumerate_mesh_canonical(q, k, q.vertex("x"), q.vertex("y"));
  REQUIRE(rel.size() == 5);
  auto labeled = ex2_relations(q, k);
  CHECK(value_set(rel) == std::multiset<RLC>(labeled.begin(), labeled.end()));
}

TEST_CASE("contexts without non-injective vertices have no relations") {
  auto q = make_ex1();
  RationalField k;
  CHECK(enumerate_mesh_canonical(q, k, q.vertex("ap"), q.vertex("y")).empty());
}

TEST_CASE("the length filter keeps only matching relations") {
  auto q = make_ex1();
  RationalField k;
  CHECK(enumerate_mesh_canonical(q, k, q.vertex("x"), q.vertex("y"), 4).size() == 5);
  CHECK(enumerate_mesh_canonical(q, k, q.vertex("x"), q.vertex("y"), 3).empty());
}

TEST_CASE("EX1 partition: R_x = {r4, r5}, comesh-derived = {r1, r2, r3}") {
  auto q = make_ex1();
  RationalField k;
  auto x = q.vertex("x");
  auto rel = enumerate_mesh_canonical(q, k, x, q.vertex("y"));
  auto part = partition_derived(q, x, rel);

  REQUIRE(part.r_x.size() == 2);
  std::multiset<RLC> rx_values;
  for (auto i : part.r_x) rx_values.insert(rel[i].value);
  auto labeled = ex1_relations(q, k);
  CHECK(rx_values == std::multiset<RLC>{labeled[3], labeled[4]});  // r4, r5

  REQUIRE(part.comesh.size() == 3);
  std::multiset<RLC> comesh_values;
  for (const auto& flag : part.comesh) comesh_values.insert(rel[flag.index].value);
  CHECK(comesh_values == std::multiset<RLC>{labeled[0], labeled[1], labeled[2]});  // r1, r2, r3

  // r1 = (delta1 gamma1 + delta2 gamma2) beta1 alpha1 sits in R'(a, y)
  auto a = q.vertex("a");
  REQUIRE(part.r_prime.count(a));
  REQUIRE(part.r_prime.at(a).size() == 1);
  CHECK(rel[part.r_prime.at(a)[0]].value == labeled[0]);

  // every relation lies in exactly one part
  std::size_t covered = part.r_x.size();
  for (const auto& [v, idx] : part.r_prime) covered += idx.size();
  CHECK(covered == rel.size());
}

TEST_CASE("an injective source has empty R_x") {
  auto q = make_ex2();
  RationalField k;
  auto b = q.vertex("b");
  auto rel = enumerate_mesh_canonical(q, k, b, q.vertex("y"));
  REQUIRE(rel.size() == 1);  // m_{x1} * v2
  auto part = partition_derived(q, b, rel);
  CHECK(part.r_x.empty());
  REQUIRE(part.r_prime.size() == 1);
  CHECK(part.r_prime.begin()->first == q.vertex("x1"));
}

TEST_CASE("Bimesh on EX1: Sc = {r5} and r4 = r1 + r2 + r3 - r5") {
  auto q = make_ex1();
  RationalField k;
  auto order = ex1_reference_order(q);
  auto bim = bimesh_Sc(q, k, q.vertex("x"), q.vertex("y"), order);
  auto labeled = ex1_relations(q, k);

  REQUIRE(bim.alpha1.has_value());
  CHECK(q.arrow_name(*bim.alpha1) == "alpha1");

  auto sc = bim.sc();
  REQUIRE(sc.size() == 1);
  CHECK(sc[0].value == labeled[4]);  // r5

  // basis is R^d u Sc = {r5, r1, r2, r3} in canonical order
  REQUIRE(bim.basis.size() == 4);
  CHECK(bim.basis[0].value == labeled[4]);
  CHECK(bim.basis[1].value == labeled[0]);
  CHECK(bim.basis[2].value == labeled[1]);
  CHECK(bim.basis[3].value == labeled[2]);

  REQUIRE(bim.expansions.size() == 1);
  const auto& e = bim.expansions[0];
  REQUIRE(e.ok);
  CHECK(bim.r_x[e.rx_index].value == labeled[3]);  // r4
  REQUIRE(e.coeffs.size() == 4);
  CHECK(k.to_string(e.coeffs[0]) == "-1");  // r5
  CHECK(k.to_string(e.coeffs[1]) == "1");   // r1
  CHECK(k.to_string(e.coeffs[2]) == "1");   // r2
  CHECK(k.to_string(e.coeffs[3]) == "1");   // r3
}

TEST_CASE("Bimesh item 2 on EX1: nothing else shares lp(r5)") {
  auto q = make_ex1();
  RationalField k;
  auto order = ex1_reference_order(q);
  auto rel = enumerate_mesh_canonical(q, k, q.vertex("x"), q.vertex("y"));
  auto bim = bimesh_Sc(q, k, q.vertex("x"), q.vertex("y"), order);
  for (const auto& r : bim.sc()) {
    auto lp = leading_path(q, order, r.value);
    for (const auto& other : rel)
      if (!(other.key() == r.key()))
        CHECK_FALSE(leading_path(q, order, other.value) == lp);
  }
}

TEST_CASE("Bimesh with empty R_x is empty") {
  auto q = make_ex2();
  RationalField k;
  auto b = q.vertex("b");
  auto order = build_mesh_lex_order(q, b, q.vertex("y"), {q.arrow("v2")});
  auto bim = bimesh_Sc(q, k, b, q.vertex("y"), order);
  CHECK_FALSE(bim.alpha1.has_value());
  CHECK(bim.r_x.empty());
  CHECK(bim.sc().empty());
}

TEST_CASE("Bimesh refuses orders that are not mesh-lexicographic") {
  auto q = make_ex2();
  RationalField k;
  auto bad = ex2_bad_order(q);
  REQUIRE_THROWS_AS(bimesh_Sc(q, k, q.vertex("x"), q.vertex("y"), bad), Error);
  try {
    bimesh_Sc(q, k, q.vertex("x"), q.vertex("y"), bad);
  } catch (const Error& e) {
    CHECK(e.code() == errc::order_not_mesh_lex);
  }
}

TEST_CASE("S(x,y) on EX1 has four elements with the right leading paths") {
  auto q = make_ex1();
  RationalField k;
  auto order = ex1_reference_order(q);
  auto s = build_S(q, k, q.vertex("x"), q.vertex("y"), order);
  REQUIRE(s.s.size() == 4);
  CHECK(s.distinct_lp);

  std::set<std::string> lps;
  for (const auto& r : s.s) lps.insert(path_to_string(q, leading_path(q, order, r.value)));
  auto es = ex1_path_names();
  CHECK(lps == std::set<std::string>{es[0], es[1], es[2], es[4]});  // e1, e2, e3, e5

  // S spans the same subspace as R: rank 4 on both sides
  auto s_values = relation_values(s.s);
  auto r_values = relation_values(s.relations);
  CHECK(span_oracle<RationalField>(q, k, s_values, nullptr, order).rank == 4);
  CHECK(span_oracle<RationalField>(q, k, r_values, nullptr, order).rank == 4);

  // the one excluded relation (r4) is certified over S
  REQUIRE(s.certificates.size() == 1);
  CHECK(s.certificates[0].ok);
  auto recombined = lc_zero<RationalField>(q.vertex("x"), q.vertex("y"));
  for (std::size_t i = 0; i < s_values.size(); ++i)
    recombined = add(k, recombined, scale(k, s.certificates[0].coeffs[i], s_values[i]));
  CHECK(recombined == s.relations[s.certificates[0].relation_index].value);
}

TEST_CASE("S is empty on a single-path context") {
  auto q = make_ex1();
  RationalField k;
  auto order = build_mesh_lex_order(q, q.vertex("ap"), q.vertex("y"), {q.arrow("delta1")});
  auto s = build_S(q, k, q.vertex("ap"), q.vertex("y"), order);
  CHECK(s.s.empty());
  CHECK(s.relations.empty());
}

TEST_CASE("build_S refuses open contexts") {
  auto q = make_ex2();
  RationalField k;
  auto order = ex2_reference_order(q);
  REQUIRE_THROWS_AS(build_S(q, k, q.vertex("x"), q.vertex("y"), order), Error);
  try {
    build_S(q, k, q.vertex("x"), q.vertex("y"), order);
  } catch (const Error& e) {
    CHECK(e.code() == errc::hypothesis_violated);
  }
}

TEST_CASE("normal form on EX1: quotient dimension 2") {
  auto q = make_ex1();
  RationalField k;
  auto order = ex1_reference_order(q);
  auto v = combo_of(q, k, {"alpha1.beta1.gamma1.delta1"});
  auto nf = normal_form(q, k, v, q.vertex("x"), q.vertex("y"), order);
  CHECK(nf.path_count == 6);
  CHECK(nf.rank == 4);
  CHECK(nf.quotient_dim == 2);
  CHECK(nf.groebner);
  CHECK_FALSE(nf.zero_in_quotient);
  CHECK(nf.zero_by_reduction == nf.zero_in_quotient);
}

TEST_CASE("relations are zero in the quotient") {
  auto q = make_ex1();
  RationalField k;
  auto order = ex1_reference_order(q);
  for (const auto& r : enumerate_mesh_canonical(q, k, q.vertex("x"), q.vertex("y"))) {
    auto nf = normal_form(q, k, r.value, q.vertex("x"), q.vertex("y"), order);
    CHECK(nf.representative.zero());
    CHECK(nf.zero_in_quotient);
  }
}

TEST_CASE("EX2: e4 is reduced but still vanishes in the quotient") {
  auto q = make_ex2();
  RationalField k;
  auto order = ex2_reference_order(q);
  auto e4 = combo_of(q, k, {"u2.v2.w2.t2"});
  auto nf = normal_form(q, k, e4, q.vertex("x"), q.vertex("y"), order);
  CHECK(nf.representative == e4);
  CHECK_FALSE(nf.zero_by_reduction);
  CHECK(nf.zero_in_quotient);
  CHECK_FALSE(nf.groebner);
  REQUIRE(nf.membership.size() == 5);
  // recombine the certificate
  auto rel = enumerate_mesh_canonical(q, k, q.vertex("x"), q.vertex("y"));
  auto recombined = lc_zero<RationalField>(q.vertex("x"), q.vertex("y"));
  for (std::size_t i = 0; i < rel.size(); ++i)
    recombined = add(k, recombined, scale(k, nf.membership[i], rel[i].value));
  CHECK(recombined == e4);
}

TEST_CASE("zero test on EX1 with all-ones layers") {
  auto q = make_ex1();
  RationalField k;
  auto order = ex1_reference_order(q);
  LayerSpec<RationalField> spec;
  for (const char* v : {"x", "a", "x1", "ap", "y"}) spec.vertices.push_back(q.vertex(v));
  spec.layers = {{{q.arrow("alpha1"), k.one()}},
                 {{q.arrow("beta1"), k.one()}},
                 {{q.arrow("gamma1"), k.one()}},
                 {{q.arrow("delta1"), k.one()}}};
  auto zt = zero_test_composite(q, k, spec, order);
  CHECK(zt.hyp_all_closed);
  CHECK(zt.hyp_pairwise_homotopic);
  CHECK(zt.hypotheses_verified);
  CHECK_FALSE(zt.zero_in_quotient);
  CHECK(zt.verdicts_agree);
  CHECK(zt.label == "OK");
  CHECK_FALSE(zt.theorem_violation);
}

TEST_CASE("a single-arrow composite never vanishes") {
  auto q = make_ex1();
  RationalField k;
  auto order = build_mesh_lex_order(q, q.vertex("x"), q.vertex("a"), {q.arrow("alpha1")});
  LayerSpec<RationalField> spec;
  spec.vertices = {q.vertex("x"), q.vertex("a")};
  spec.layers = {{{q.arrow("alpha1"), k.from_long(7)}}};
  auto zt = zero_test_composite(q, k, spec, order);
  CHECK(zt.hypotheses_verified);
  CHECK_FALSE(zt.zero_in_quotient);
  CHECK(zt.label == "OK");
}

TEST_CASE("zero layers are rejected") {
  auto q = make_ex1();
  RationalField k;
  LayerSpec<RationalField> spec;
  spec.vertices = {q.vertex("x"), q.vertex("a")};
  spec.layers = {{{q.arrow("alpha1"), k.zero()}}};
  CHECK_THROWS_AS(validate_layer_spec(q, k, spec), Error);
}

TEST_CASE("Kronecker layers with two parallel arrows stay nonzero") {
  auto window = generate_zq_window(make_kronecker(), 1);
  RationalField k;
  auto u0 = window.vertex("u_0");
  auto u1 = window.vertex("u_1");
  auto order = build_mesh_lex_order(window, u0, u1,
                                    {window.arrow("k1_0"), window.arrow("k2_0")});
  std::mt19937_64 rng(61);
  std::uniform_int_distribution<long> coeff(-3, 3);
  for (int trial = 0; trial < 40; ++trial) {
    LayerSpec<RationalField> spec;
    spec.vertices = {u0, window.vertex("v_0"), u1};
    spec.layers = {{{window.arrow("k1_0"), k.from_long(coeff(rng))},
                    {window.arrow("k2_0"), k.from_long(coeff(rng))}},
                   {{window.arrow("k1_0s"), k.from_long(coeff(rng))},
                    {window.arrow("k2_0s"), k.from_long(coeff(rng))}}};
    bool ok = true;
    try {
      validate_layer_spec(window, k, spec);
    } catch (const Error&) {
      ok = false;  // a randomly zero layer; skip
    }
    if (!ok) continue;
    auto zt = zero_test_composite(window, k, spec, order);
    CHECK(zt.hypotheses_verified);
    CHECK_FALSE(zt.zero_in_quotient);
    CHECK(zt.verdicts_agree);
  }
}

TEST_CASE("composing the two EX1 mesh relations sums all six paths and vanishes") {
  auto q = make_ex1();
  RationalField k;
  auto order = ex1_reference_order(q);
  auto total = concat(k, mesh_relation(q, k, q.vertex("x1")), mesh_relation(q, k, q.vertex("x")));
  auto expected = combo_of(q, k, {"alpha1.beta1.gamma1.delta1", "alpha1.beta1.gamma2.delta2",
                                  "alpha2.beta2.gamma1.delta1", "alpha2.beta2.gamma2.delta2",
                                  "alpha3.beta3.gamma1.delta1", "alpha3.beta3.gamma2.delta2"});
  REQUIRE(total == expected);
  // = r4 + r5, so it lies in the mesh ideal
  auto labeled = ex1_relations(q, k);
  CHECK(total == add(k, labeled[3], labeled[4]));
  auto nf = normal_form(q, k, total, q.vertex("x"), q.vertex("y"), order);
  CHECK(nf.zero_in_quotient);
  CHECK(nf.zero_by_reduction);
}

TEST_CASE("every single path is nonzero in the EX1 mesh category") {
  auto q = make_ex1();
  RationalField k;
  auto order = ex1_reference_order(q);
  for (const auto& p : enumerate_paths(q, q.vertex("x"), q.vertex("y"))) {
    auto nf = normal_form(q, k, lc_path(q, k, p), q.vertex("x"), q.vertex("y"), order);
    CHECK_FALSE(nf.zero_in_quotient);
    CHECK_FALSE(nf.zero_by_reduction);
  }
}

TEST_CASE("unverified hypotheses are labelled, not trusted") {
  // The chain through EX2's open path: e1 vanishes in the quotient (it is a
  // relation), but the context has an open path, so the run must be labelled
  // HYPOTHESES_UNVERIFIED rather than reported as a theorem violation.
  auto q = make_ex2();
  RationalField k;
  auto order = ex2_reference_order(q);
  LayerSpec<RationalField> spec;
  for (const char* v : {"x", "a", "x1", "a1", "y"}) spec.vertices.push_back(q.vertex(v));
  spec.layers = {{{q.arrow("u1"), k.one()}},
                 {{q.arrow("v1"), k.one()}},
                 {{q.arrow("w1"), k.one()}},
                 {{q.arrow("t1"), k.one()}}};
  auto zt = zero_test_composite(q, k, spec, order);
  CHECK_FALSE(zt.hyp_all_closed);
  CHECK_FALSE(zt.hypotheses_verified);
  CHECK(zt.zero_in_quotient);  // e1 = r3 is a mesh-canonical relation
  CHECK(zt.label == "HYPOTHESES_UNVERIFIED");
  CHECK_FALSE(zt.theorem_violation);
}

TEST_CASE("main hypothesis holds on EX1") {
  auto q = make_ex1();
  auto report = check_main_hypothesis(q, q.vertex("x"), q.vertex("y"));
  CHECK(report.ok);
  CHECK(report.violations.empty());
}

TEST_CASE("main hypothesis fails on EX2 at a1") {
  auto q = make_ex2();
  auto report = check_main_hypothesis(q, q.vertex("x"), q.vertex("y"));
  REQUIRE_FALSE(report.ok);
  REQUIRE(report.violations.size() == 1);
  CHECK(report.violations[0] == q.vertex("a1"));
}

TEST_CASE("main hypothesis is vacuous without reachability") {
  auto q = make_ex1();
  CHECK(check_main_hypothesis(q, q.vertex("y"), q.vertex("x")).ok);
}

TEST_CASE("mesh witness for e1 in EX2") {
  auto q = make_ex2();
  auto witness = find_mesh_witness(q, path_of(q, "u1.v1.w1.t1"));
  REQUIRE(witness.has_value());
  CHECK(witness->z == q.vertex("a1"));
  CHECK(path_to_string(q, witness->gamma1) == "u1");
  CHECK(path_to_string(q, witness->gamma2) == "t1");
  CHECK(q.arrow_name(witness->into_e) == "v1");
  CHECK(q.arrow_name(witness->from_e) == "w1");
  CHECK(witness->witness == path_of(q, "u1.v1.w1.t1"));
  CHECK(witness->homotopic == Homotopy::Homotopic);
}

TEST_CASE("no witness on EX1") {
  auto q = make_ex1();
  for (const auto& p : enumerate_paths(q, q.vertex("x"), q.vertex("y")))
    CHECK_FALSE(find_mesh_witness(q, p).has_value());
}

TEST_CASE("short paths have no witness") {
  auto q = make_ex2();
  CHECK_FALSE(find_mesh_witness(q, path_of(q, "u1")).has_value());
}

TEST_CASE("witnesses are found deep inside longer chains") {
  // chain with a single-middle mesh in the middle: every full path is open
  // exactly there, and the witness factorization threads through it
  auto q = make_mesh_chain({2, 1, 2});
  REQUIRE(validate_translation_quiver(q).ok());
  auto x = q.vertex("x0");
  auto y = q.vertex("x3");

  auto report = check_main_hypothesis(q, x, y);
  REQUIRE_FALSE(report.ok);
  REQUIRE(report.violations == std::vector<VertexId>{q.vertex("x2")});

  for (const auto& p : enumerate_paths(q, x, y)) {
    auto c = classify_path(q, p);
    REQUIRE_FALSE(c.closed);
    CHECK(c.witnesses == std::vector<std::size_t>{2});
    auto w = find_mesh_witness(q, p);
    REQUIRE(w.has_value());
    CHECK(w->z == q.vertex("x2"));
    CHECK(w->homotopic == Homotopy::Homotopic);
    CHECK(w->witness.length() == p.length());
    CHECK(are_homotopic(q, w->witness, p).homotopic());
  }
}
