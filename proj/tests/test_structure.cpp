#include <doctest.h>

#include <algorithm>
#include <set>
#include <stdexcept>
#include <vector>

#include "causaldna/ci.hpp"
#include "causaldna/common.hpp"
#include "causaldna/dna_learn.hpp"
#include "causaldna/graph.hpp"
#include "causaldna/rng.hpp"
#include "causaldna/structure.hpp"
#include "support.hpp"

using namespace causaldna;
using testsupport::chain_collider_dag;
using testsupport::random_test_dag;
using testsupport::sink_dag;

namespace {

Dag collider3() { return Dag(3, {{0, 2}, {1, 2}}); }

bool same_class(const Dag& a, const Dag& b) { return cpdag_of(a) == cpdag_of(b); }

}  // namespace

TEST_CASE("ordering-derived graph goldens") {
    auto oracle = make_dsep_oracle(collider3());
    Dag g = dag_from_ordering(*oracle, {2, 0, 1});
    std::vector<Edge> expected{{0, 1}, {2, 0}, {2, 1}};
    CHECK(g.edges() == expected);

    auto chain_oracle = make_dsep_oracle(chain_collider_dag());
    Dag fixpoint = dag_from_ordering(*chain_oracle, {0, 1, 2, 3, 4});
    CHECK(fixpoint.edges() == chain_collider_dag().edges());

    auto single = make_dsep_oracle(Dag(1, {}));
    CHECK(dag_from_ordering(*single, {0}).num_edges() == 0);

    CHECK_THROWS_AS(dag_from_ordering(*chain_oracle, {0, 0, 1}), std::invalid_argument);
    CHECK_THROWS_AS(dag_from_ordering(*chain_oracle, {0, 7}), std::out_of_range);
}

TEST_CASE("ordering-derived graph over a subset leaves the rest isolated") {
    auto oracle = make_dsep_oracle(chain_collider_dag());
    Dag g = dag_from_ordering(*oracle, {1, 3, 2});
    for (auto [u, v] : g.edges()) {
        CHECK(u != 0);
        CHECK(u != 4);
        CHECK(v != 0);
        CHECK(v != 4);
    }
    CHECK(g.num_vertices() == 5);
}

TEST_CASE("ordering-derived graph equals the truth on topological orders") {
    Rng rng(7101);
    for (int rep = 0; rep < 25; ++rep) {
        Dag g = random_test_dag(rng, 6, 0.4);
        auto oracle = make_dsep_oracle(g);
        CHECK(dag_from_ordering(*oracle, g.topological_order()).edges() == g.edges());
    }
}

TEST_CASE("pc goldens") {
    auto oracle = make_dsep_oracle(chain_collider_dag());
    LearnResult result = pc(*oracle);
    REQUIRE(result.cpdag() != nullptr);
    CHECK(*result.cpdag() == Cpdag(5, {{1, 3}, {2, 3}, {3, 4}}, {{0, 1}}));
    CHECK(result.counts.ci_tests == result.counts.independences + result.counts.dependences);
    CHECK(result.counts.ci_tests > 0);

    auto edgeless = make_dsep_oracle(Dag(3, {}));
    CHECK(*pc(*edgeless).cpdag() == Cpdag(3, {}, {}));

    auto vstruct = make_dsep_oracle(collider3());
    CHECK(*pc(*vstruct).cpdag() == Cpdag(3, {{0, 2}, {1, 2}}, {}));
}

TEST_CASE("pc recovers the completed graph on random instances") {
    Rng rng(8115);
    for (int rep = 0; rep < 40; ++rep) {
        int p = 4 + static_cast<int>(rng.uniform_below(7));
        Dag g = random_test_dag(rng, p, 0.35);
        auto oracle = make_dsep_oracle(g);
        CHECK(*pc(*oracle).cpdag() == cpdag_of(g));
    }
}

TEST_CASE("candidate pruning leaves the pc output unchanged") {
    Rng rng(9021);
    for (int rep = 0; rep < 30; ++rep) {
        int p = 4 + static_cast<int>(rng.uniform_below(6));
        Dag g = random_test_dag(rng, p, 0.35);
        Cpdag expected = cpdag_of(g);

        auto with_truth = make_dsep_oracle(g);
        CHECK(*pc_with_dna(*with_truth, dna_from_cpdag(expected)).cpdag() == expected);

        auto learner = make_dsep_oracle(g);
        DnaSet learned = learn_dna_small(*learner, 1);
        auto with_learned = make_dsep_oracle(g);
        CHECK(*pc_with_dna(*with_learned, learned).cpdag() == expected);

        auto with_empty = make_dsep_oracle(g);
        CHECK(*pc_with_dna(*with_empty, DnaSet(p)).cpdag() == expected);
    }
}

TEST_CASE("pruned pc never conditions on a known sink") {
    DnaSet d(6);
    for (int w = 0; w < 5; ++w) d.add(5, w);
    auto oracle = make_dsep_oracle(sink_dag());
    LearnResult result = pc_with_dna(*oracle, d);
    CHECK(*result.cpdag() == cpdag_of(sink_dag()));
    for (const auto& queries : {oracle->ledger().independences(), oracle->ledger().dependences()})
        for (const CiQuery& q : queries)
            CHECK(std::find(q.s.begin(), q.s.end(), 5) == q.s.end());
}

TEST_CASE("exhaustive sparsest permutation goldens") {
    auto oracle = make_dsep_oracle(chain_collider_dag());
    LearnResult result = sp_exhaustive(*oracle);
    REQUIRE(result.dag() != nullptr);
    CHECK(result.dag()->num_edges() == 4);
    CHECK(result.ordering == Ordering{0, 1, 2, 3, 4});
    CHECK(result.dag()->edges() == chain_collider_dag().edges());
    CHECK(same_class(*result.dag(), chain_collider_dag()));

    auto vstruct = make_dsep_oracle(collider3());
    LearnResult two = sp_exhaustive(*vstruct);
    CHECK(two.dag()->num_edges() == 2);
    CHECK(same_class(*two.dag(), collider3()));

    auto single = make_dsep_oracle(Dag(1, {}));
    CHECK(sp_exhaustive(*single).dag()->num_edges() == 0);

    auto big = make_dsep_oracle(Dag(9, {}));
    CHECK_THROWS_AS(sp_exhaustive(*big), capacity_error);
}

TEST_CASE("exhaustive sparsest permutation is optimal on random instances") {
    Rng rng(3433);
    for (int rep = 0; rep < 20; ++rep) {
        int p = 4 + static_cast<int>(rng.uniform_below(3));
        Dag g = random_test_dag(rng, p, 0.4);
        auto oracle = make_dsep_oracle(g);
        LearnResult result = sp_exhaustive(*oracle);
        CHECK(result.dag()->num_edges() == g.num_edges());
        CHECK(same_class(*result.dag(), g));
    }
}

TEST_CASE("greedy search goldens") {
    auto chain = make_dsep_oracle(Dag(2, {{0, 1}}));
    SpConfig config;
    config.depth = 1;
    config.restarts = 1;
    LearnResult flipped = tsp_greedy(*chain, config, {1, 0});
    CHECK(flipped.dag()->num_edges() == 1);

    auto oracle = make_dsep_oracle(chain_collider_dag());
    LearnResult optimal = tsp_greedy(*oracle, config, {0, 1, 2, 3, 4});
    CHECK(optimal.ordering == Ordering{0, 1, 2, 3, 4});
    CHECK(optimal.dag()->edges() == chain_collider_dag().edges());

    SpConfig bad;
    bad.depth = 0;
    CHECK_THROWS_AS(tsp_greedy(*oracle, bad, {0, 1, 2, 3, 4}), std::invalid_argument);
}

TEST_CASE("greedy search matches the exhaustive optimum on small instances") {
    Rng rng(6060);
    SpConfig config;
    config.depth = 4;
    config.restarts = 5;
    for (int rep = 0; rep < 25; ++rep) {
        int p = 4 + static_cast<int>(rng.uniform_below(3));
        Dag g = random_test_dag(rng, p, 0.4);
        config.seed = derive_seed(6060, rep, "tsp");

        auto exhaustive_oracle = make_dsep_oracle(g);
        int optimum = sp_exhaustive(*exhaustive_oracle).dag()->num_edges();

        auto greedy_oracle = make_dsep_oracle(g);
        Ordering init(p);
        for (int i = 0; i < p; ++i) init[i] = i;
        std::vector<std::vector<int>> traces;
        LearnResult result = tsp_greedy(*greedy_oracle, config, init, &traces);
        CHECK(result.dag()->num_edges() == optimum);

        CHECK(traces.size() == 5);
        for (const auto& trace : traces)
            for (std::size_t i = 1; i < trace.size(); ++i) CHECK(trace[i] < trace[i - 1]);
    }
}

TEST_CASE("greedy search is deterministic for a fixed seed") {
    SpConfig config;
    config.depth = 3;
    config.restarts = 4;
    config.seed = 555;
    Rng rng(1812);
    Dag g = random_test_dag(rng, 6, 0.4);
    auto first = make_dsep_oracle(g);
    auto second = make_dsep_oracle(g);
    Ordering init{0, 1, 2, 3, 4, 5};
    CHECK(tsp_greedy(*first, config, init).ordering == tsp_greedy(*second, config, init).ordering);
}

TEST_CASE("layered search returns a class member") {
    DnaConfig small_level1{DnaMode::SmallSets, 1, std::nullopt};
    SpConfig exhaustive;
    exhaustive.mode = SpMode::Exhaustive;

    auto oracle = make_dsep_oracle(chain_collider_dag());
    LearnResult result = layered_sp(*oracle, small_level1, exhaustive);
    REQUIRE(result.dag() != nullptr);
    REQUIRE(result.ordering.has_value());
    CHECK(same_class(*result.dag(), chain_collider_dag()));
    CHECK(result.dag()->num_edges() == 4);

    DnaConfig large_level1{DnaMode::LargeSets, 1, std::nullopt};
    auto sink_oracle = make_dsep_oracle(sink_dag());
    LearnResult sink_result = layered_sp(*sink_oracle, large_level1, exhaustive);
    CHECK(same_class(*sink_result.dag(), sink_dag()));
    // The sink layering leaves subproblems of at most five vertices, so the
    // exhaustive backend works although p = 6 split into {0..4}, {5}.
    CHECK(sink_result.ordering->back() == 5);
}

TEST_CASE("layered search with no relations reduces to plain search") {
    Dag chain(3, {{0, 1}, {1, 2}});
    DnaConfig level0{DnaMode::SmallSets, 0, std::nullopt};
    SpConfig exhaustive;
    exhaustive.mode = SpMode::Exhaustive;

    auto check_oracle = make_dsep_oracle(chain);
    CHECK(learn_dna_small(*check_oracle, 0).size() == 0);

    auto layered_oracle = make_dsep_oracle(chain);
    auto plain_oracle = make_dsep_oracle(chain);
    CHECK(layered_sp(*layered_oracle, level0, exhaustive).ordering ==
          sp_exhaustive(*plain_oracle).ordering);
}

TEST_CASE("layered search stays in the class on random instances") {
    Rng rng(2718);
    SpConfig exhaustive;
    exhaustive.mode = SpMode::Exhaustive;
    for (int rep = 0; rep < 20; ++rep) {
        int p = 4 + static_cast<int>(rng.uniform_below(4));
        Dag g = random_test_dag(rng, p, 0.35);
        for (DnaMode mode : {DnaMode::SmallSets, DnaMode::LargeSets}) {
            DnaConfig base{mode, 1, std::nullopt};
            auto oracle = make_dsep_oracle(g);
            LearnResult result = layered_sp(*oracle, base, exhaustive);
            CHECK(same_class(*result.dag(), g));
            CHECK(result.dag()->num_edges() == g.num_edges());
        }
    }
}

TEST_CASE("layered greedy search stays in the class and respects its relations") {
    Rng rng(3141);
    SpConfig greedy;
    greedy.mode = SpMode::GreedyTsp;
    greedy.depth = 2;
    greedy.restarts = 3;
    DnaConfig base{DnaMode::SmallSets, 1, std::nullopt};
    for (int rep = 0; rep < 15; ++rep) {
        int p = 5 + static_cast<int>(rng.uniform_below(3));
        Dag g = random_test_dag(rng, p, 0.35);
        greedy.seed = rng.next_u64();
        auto oracle = make_dsep_oracle(g);
        LearnResult result = layered_sp(*oracle, base, greedy);
        CHECK(same_class(*result.dag(), g));
        CHECK(result.dag()->num_edges() == g.num_edges());

        // Within each layer the chosen ordering keeps u after v for every
        // surviving relation (u, v); only same-layer pairs are pinned.
        auto relation_oracle = make_dsep_oracle(g);
        DnaSet d = learn_dna_small(*relation_oracle, 1);
        DnaSet constraints = order_constraining_subset(d);
        Layering layers = layering_from_dna(d);
        std::vector<int> layer_of(static_cast<std::size_t>(p));
        for (std::size_t l = 0; l < layers.size(); ++l)
            for (int x : layers[l]) layer_of[static_cast<std::size_t>(x)] = static_cast<int>(l);
        std::vector<int> pos(static_cast<std::size_t>(p));
        for (int i = 0; i < p; ++i) pos[static_cast<std::size_t>((*result.ordering)[i])] = i;
        for (auto [u, v] : constraints.pairs())
            if (layer_of[static_cast<std::size_t>(u)] == layer_of[static_cast<std::size_t>(v)])
                CHECK(pos[u] > pos[v]);

        auto repeat_oracle = make_dsep_oracle(g);
        CHECK(layered_sp(*repeat_oracle, base, greedy).ordering == result.ordering);
    }
}

TEST_CASE("swap construction goldens") {
    Dag g = chain_collider_dag();
    Ordering identity{0, 1, 2, 3, 4};
    CHECK(swap_for_dna(g, identity, {0, 2}) == Ordering{2, 0, 1, 3, 4});
    CHECK(swap_for_dna(g, identity, {1, 2}) == Ordering{0, 2, 1, 3, 4});

    // Segment vertices that are ancestors of the moved vertex stay in front.
    Dag isolated_plus_collider(4, {{0, 2}, {1, 2}});
    CHECK(swap_for_dna(isolated_plus_collider, {3, 0, 1, 2}, {3, 2}) == Ordering{0, 1, 2, 3});

    CHECK_THROWS_AS(swap_for_dna(g, identity, {0, 1}), std::invalid_argument);
    CHECK_THROWS_AS(swap_for_dna(g, identity, {2, 0}), std::invalid_argument);
    CHECK_THROWS_AS(swap_for_dna(g, {4, 3, 2, 1, 0}, {0, 2}), std::invalid_argument);
    CHECK_THROWS_AS(swap_for_dna(g, {0, 1, 2, 3}, {0, 2}), std::invalid_argument);
}

TEST_CASE("swap construction preserves class membership") {
    Rng rng(1123);
    int checked = 0;
    for (int rep = 0; rep < 12; ++rep) {
        int p = 4 + static_cast<int>(rng.uniform_below(4));
        Dag g = random_test_dag(rng, p, 0.4);
        std::vector<Dag> members = enumerate_mec(g);
        const Dag& member = members[rng.uniform_below(members.size())];
        Ordering pi0 = member.topological_order();
        std::vector<int> pos(p);
        for (int i = 0; i < p; ++i) pos[pi0[i]] = i;

        DnaSet truth = dna_ground_truth(g);
        for (auto [u, v] : truth.pairs()) {
            if (pos[u] >= pos[v]) continue;
            Ordering swapped = swap_for_dna(g, pi0, {u, v});

            Ordering sorted = swapped;
            std::sort(sorted.begin(), sorted.end());
            REQUIRE(static_cast<int>(sorted.size()) == p);
            for (int i = 0; i < p; ++i) REQUIRE(sorted[i] == i);

            std::vector<int> new_pos(p);
            for (int i = 0; i < p; ++i) new_pos[swapped[i]] = i;
            CHECK(new_pos[v] < new_pos[u]);

            std::vector<Edge> oriented;
            for (auto [a, b] : g.edges())
                oriented.emplace_back(new_pos[a] < new_pos[b] ? a : b,
                                      new_pos[a] < new_pos[b] ? b : a);
            Dag reoriented(p, oriented);
            CHECK(v_structures(reoriented) == v_structures(g));
            ++checked;
        }
    }
    CHECK(checked > 30);
}
