#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <random>
#include <set>

#include "helpers.hpp"
#include "meshcat/homotopy.hpp"

using namespace meshcat;
using namespace meshcat::testing;

TEST_CASE("elementary neighbors of e1 in EX1") {
  auto q = make_ex1();
  auto nbs = elementary_neighbors(q, path_of(q, "alpha1.beta1.gamma1.delta1"));
  std::set<std::string> names;
  for (const auto& p : nbs) names.insert(path_to_string(q, p));
  CHECK(names == std::set<std::string>{"alpha2.beta2.gamma1.delta1",
                                       "alpha3.beta3.gamma1.delta1",
                                       "alpha1.beta1.gamma2.delta2"});
}

TEST_CASE("elementary neighbors of e1 in EX2") {
  auto q = make_ex2();
  auto nbs = elementary_neighbors(q, path_of(q, "u1.v1.w1.t1"));
  std::set<std::string> names;
  for (const auto& p : nbs) names.insert(path_to_string(q, p));
  // mesh at y swaps (w1,t1) for (w2,t2); mesh at x1 swaps (u1,v1) for (u2,v2);
  // the mesh at a1 has a single middle, so no move there
  CHECK(names == std::set<std::string>{"u1.v1.w2.t2", "u2.v2.w1.t1"});
}

TEST_CASE("a lone arrow has no neighbors") {
  auto q = make_ex1();
  CHECK(elementary_neighbors(q, path_of(q, "alpha1")).empty());
}

TEST_CASE("parallel arrows are swappable") {
  auto window = generate_zq_window(make_kronecker(), 1);
  auto nbs = elementary_neighbors(window, path_of(window, "k1_0"));
  REQUIRE(nbs.size() == 1);
  CHECK(path_to_string(window, nbs[0]) == "k2_0");
}

TEST_CASE("moves preserve endpoints and length") {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 20; ++trial) {
    auto window = generate_zq_window(random_plain_quiver(rng), 2);
    for (VertexId x : window.vertices())
      for (VertexId y : window.vertices())
        for (const auto& p : enumerate_paths(window, x, y))
          for (const auto& nb : elementary_neighbors(window, p)) {
            CHECK(nb.source == p.source);
            CHECK(nb.length() == p.length());
            CHECK(path_target(window, nb) == path_target(window, p));
            CHECK(path_valid(window, nb));
          }
  }
}

TEST_CASE("EX1 has a single homotopy class of size 6") {
  auto q = make_ex1();
  auto part = homotopy_classes(q, q.vertex("x"), q.vertex("y"), 4);
  REQUIRE(part.classes.size() == 1);
  CHECK(part.classes[0].size() == 6);
}

TEST_CASE("EX2 has a single homotopy class of size 4") {
  auto q = make_ex2();
  auto part = homotopy_classes(q, q.vertex("x"), q.vertex("y"), 4);
  REQUIRE(part.classes.size() == 1);
  CHECK(part.classes[0].size() == 4);
}

TEST_CASE("a single-path context yields one singleton class") {
  auto q = make_ex1();
  auto part = homotopy_classes(q, q.vertex("ap"), q.vertex("y"));
  REQUIRE(part.classes.size() == 1);
  CHECK(part.classes[0].size() == 1);
}

TEST_CASE("partitions are deterministic and cover the path set") {
  std::mt19937_64 rng(43);
  for (int trial = 0; trial < 10; ++trial) {
    auto window = generate_zq_window(random_plain_quiver(rng), 2);
    for (VertexId x : window.vertices())
      for (VertexId y : window.vertices()) {
        auto part = homotopy_classes(window, x, y);
        auto again = homotopy_classes(window, x, y);
        REQUIRE(part.classes == again.classes);
        std::set<Path> all;
        std::size_t total = 0;
        for (const auto& cls : part.classes) {
          total += cls.size();
          std::set<std::size_t> lengths;
          for (const auto& p : cls) {
            all.insert(p);
            lengths.insert(p.length());
          }
          CHECK(lengths.size() == 1);  // classes are length-homogeneous
        }
        auto paths = enumerate_paths(window, x, y);
        CHECK(total == paths.size());
        CHECK(all.size() == paths.size());
      }
  }
}

TEST_CASE("e1 and e6 are homotopic in EX1") {
  auto q = make_ex1();
  auto e1 = path_of(q, "alpha1.beta1.gamma1.delta1");
  auto e6 = path_of(q, "alpha3.beta3.gamma2.delta2");
  CHECK(are_homotopic(q, e1, e6).homotopic());
}

TEST_CASE("reflexivity") {
  auto q = make_ex1();
  auto p = path_of(q, "alpha1.beta1.gamma1.delta1");
  CHECK(are_homotopic(q, p, p).homotopic());
}

TEST_CASE("length mismatch is NotShown") {
  TranslationQuiver::Builder b;
  for (const char* v : {"x", "m", "y"}) b.add_vertex(v);
  b.add_arrow("direct", "x", "y");
  b.add_arrow("f", "x", "m");
  b.add_arrow("g", "m", "y");
  auto q = std::move(b).build();
  auto answer = are_homotopic(q, path_of(q, "direct"), path_of(q, "f.g"));
  CHECK(answer.verdict == Homotopy::NotShown);
  CHECK(answer.reason == "LENGTH_MISMATCH");
}

TEST_CASE("distinct components are NotShown, symmetrically") {
  TranslationQuiver::Builder b;
  for (const char* v : {"x", "m", "n", "y"}) b.add_vertex(v);
  b.add_arrow("f1", "x", "m");
  b.add_arrow("f2", "m", "y");
  b.add_arrow("g1", "x", "n");
  b.add_arrow("g2", "n", "y");
  auto q = std::move(b).build();  // two length-2 paths, no tau, no moves
  auto p = path_of(q, "f1.f2");
  auto r = path_of(q, "g1.g2");
  auto a = are_homotopic(q, p, r);
  CHECK(a.verdict == Homotopy::NotShown);
  CHECK(a.reason == "NO_MOVE_CHAIN");
  CHECK(are_homotopic(q, r, p).verdict == Homotopy::NotShown);
}

TEST_CASE("endpoint mismatch is an error") {
  auto q = make_ex1();
  CHECK_THROWS_AS(are_homotopic(q, path_of(q, "alpha1"), path_of(q, "alpha2")), Error);
}

TEST_CASE("homotopy is transitive on random triples") {
  std::mt19937_64 rng(47);
  for (int trial = 0; trial < 10; ++trial) {
    auto window = generate_zq_window(random_plain_quiver(rng), 2);
    std::vector<std::pair<VertexId, VertexId>> pairs;
    for (VertexId x : window.vertices())
      for (VertexId y : window.vertices())
        if (enumerate_paths(window, x, y).size() >= 3) pairs.emplace_back(x, y);
    if (pairs.empty()) continue;
    std::uniform_int_distribution<std::size_t> pickpair(0, pairs.size() - 1);
    auto [x, y] = pairs[pickpair(rng)];
    auto paths = enumerate_paths(window, x, y);
    std::uniform_int_distribution<std::size_t> pick(0, paths.size() - 1);
    for (int inner = 0; inner < 10; ++inner) {
      const auto& p = paths[pick(rng)];
      const auto& r = paths[pick(rng)];
      const auto& s = paths[pick(rng)];
      if (are_homotopic(window, p, r).homotopic() && are_homotopic(window, r, s).homotopic())
        CHECK(are_homotopic(window, p, s).homotopic());
    }
  }
}
