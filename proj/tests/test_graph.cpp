#include <doctest.h>

#include "support.hpp"
#include "vccts/error.hpp"
#include "vccts/graph.hpp"

using namespace vccts;

TEST_SUITE("location-graph") {
  TEST_CASE("substitution into a lone vertex gives H") {
    LocGraph g({1}, {});
    LocGraph h({10, 11}, {{10, 11}});
    CHECK(graph_subst(g, 1, h) == h);
  }

  TEST_CASE("substituted vertices inherit the neighbours") {
    LocGraph g({1, 2}, {{1, 2}});
    LocGraph h({10, 11}, {});
    auto out = graph_subst(g, 1, h);
    CHECK(out.vertices() == std::vector<Loc>{2, 10, 11});
    CHECK(out.edges() == std::vector<LocPair>{{2, 10}, {2, 11}});
  }

  TEST_CASE("non-neighbours inherit nothing") {
    LocGraph g({1, 2, 3}, {{1, 2}});
    auto out = graph_subst(g, 1, LocGraph({10}, {}));
    CHECK(out.edges() == std::vector<LocPair>{{2, 10}});
    CHECK(out.neighbors(3).empty());
  }

  TEST_CASE("oplus") {
    LocGraph g({1}, {}), h({2}, {});
    CHECK(oplus(g, h, {}).edge_count() == 0);
    CHECK(oplus(g, h, {{1, 2}}).adjacent(1, 2));
    LocGraph g2({1, 2}, {}), h2({3, 4}, {});
    CHECK(oplus(g2, h2, {{1, 3}, {1, 4}, {2, 3}, {2, 4}}).edge_count() == 4);
    CHECK_THROWS_AS(oplus(g, LocGraph({1}, {}), {}), GraphError);
  }

  TEST_CASE("graph invariants are enforced") {
    LocGraph g({1, 2}, {});
    CHECK_THROWS_AS(g.add_edge(1, 1), GraphError);
    CHECK_THROWS_AS(g.add_edge(1, 5), GraphError);
    g.add_edge(2, 1);
    CHECK(g.adjacent(1, 2));
    CHECK(g.adjacent(2, 1));
  }

  TEST_CASE("residual maps compose") {
    ResidualMap a({{5, 1}, {6, 2}});
    ResidualMap b({{9, 5}, {10, 6}, {11, 6}});
    auto c = ResidualMap::compose(a, b);
    CHECK(c(9) == 1);
    CHECK(c(11) == 2);
    CHECK_THROWS_AS(c(1), GraphError);
  }

  TEST_CASE("canonical keys") {
    LocGraph a({1, 2}, {{1, 2}}), b({7, 3}, {{3, 7}});
    CHECK(canonical_key(a, {{1, "x"}, {2, "y"}}) == canonical_key(b, {{7, "x"}, {3, "y"}}));
    CHECK(canonical_key(a, {{1, "x"}, {2, "y"}}) != canonical_key(a, {{1, "x"}, {2, "x"}}));
    LocGraph path({1, 2, 3}, {{1, 2}, {2, 3}}), tri({1, 2, 3}, {{1, 2}, {2, 3}, {1, 3}});
    std::map<Loc, std::string> same{{1, "c"}, {2, "c"}, {3, "c"}};
    CHECK(canonical_key(path, same) != canonical_key(tri, same));
  }

  TEST_CASE("canonical keys agree with brute-force isomorphism") {
    auto rng = testing::rng(1);
    for (int round = 0; round < 60; ++round) {
      const int n = 2 + static_cast<int>(rng() % 4);
      std::vector<Loc> vs;
      for (int i = 1; i <= n; ++i) vs.push_back(static_cast<Loc>(i));
      auto random_graph = [&] {
        LocGraph g(vs, {});
        for (int i = 1; i <= n; ++i)
          for (int j = i + 1; j <= n; ++j)
            if (rng() % 2) g.add_edge(i, j);
        return g;
      };
      auto g = random_graph(), h = random_graph();
      std::map<Loc, std::string> col;
      for (Loc v : vs) col[v] = "c";
      bool iso = false;
      std::vector<Loc> perm = vs;
      do {
        bool ok = true;
        for (Loc i : vs)
          for (Loc j : vs)
            if (i < j && g.adjacent(i, j) != h.adjacent(perm[i - 1], perm[j - 1])) ok = false;
        iso |= ok;
      } while (!iso && std::next_permutation(perm.begin(), perm.end()));
      CHECK((canonical_key(g, col) == canonical_key(h, col)) == iso);
    }
  }
}
