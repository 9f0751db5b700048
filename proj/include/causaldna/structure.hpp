#ifndef CAUSALDNA_STRUCTURE_HPP
#define CAUSALDNA_STRUCTURE_HPP

#include <cstdint>
#include <optional>
#include <variant>
#include <vector>

#include "causaldna/ci.hpp"
#include "causaldna/dna_learn.hpp"
#include "causaldna/graph.hpp"

namespace causaldna {

// Position -> vertex map. Most functions expect a permutation of all
// variables; dag_from_ordering also accepts an ordering of a subset.
using Ordering = std::vector<int>;

enum class SpMode { Exhaustive, GreedyTsp };

struct SpConfig {
    SpMode mode = SpMode::GreedyTsp;
    // Greedy search: depth of the covered-arrow walk between improvements and
    // number of initial orderings tried (the caller's, then random draws).
    int depth = 4;
    int restarts = 5;
    std::uint64_t seed = 0;
};

struct LearnCounts {
    long ci_tests = 0;
    long independences = 0;
    long dependences = 0;
};

LearnCounts counts_of(const TestLedger& ledger);

// Output of a structure-learning run. The counts are the tester ledger's
// totals when the call returned; with a fresh tester they are the run's own.
struct LearnResult {
    std::variant<Cpdag, Dag> graph;
    std::optional<Ordering> ordering;
    LearnCounts counts;

    const Cpdag* cpdag() const { return std::get_if<Cpdag>(&graph); }
    const Dag* dag() const { return std::get_if<Dag>(&graph); }
    // The stored completed graph, or the completion of the stored DAG.
    Cpdag completed() const;
};

// Classic PC: level-wise skeleton search with lexicographic pair and subset
// order and first-found separating sets, collider orientation against the
// recorded separators, Meek closure.
LearnResult pc(CiTester& tester);

// PC with conditioning candidates pruned by known non-ancestral relations.
// When testing (u, v) from u's side the candidate pool is adj(u) minus every
// w with (w, u) in d if (u, v) in d, else minus every w with both (w, v) and
// (w, u) in d. With a sound d the output matches pc.
LearnResult pc_with_dna(CiTester& tester, const DnaSet& d);

// DAG induced by an ordering: edge order[i] -> order[j] for i < j unless the
// tester judges the pair independent given the earlier elements minus
// order[i]; inconclusive verdicts keep the edge. Vertices outside the
// ordering are isolated.
Dag dag_from_ordering(CiTester& tester, const Ordering& order);

// Sparsest permutation by enumeration of all orderings; ties go to the
// lexicographically smallest minimizer. Guarded to p <= 8.
LearnResult sp_exhaustive(CiTester& tester);

// Greedy sparsest-permutation search: walks covered-arrow reversals up to
// config.depth moves deep, jumps to any strictly sparser ordering found and
// restarts the walk there; repeats from config.restarts initial orderings
// (init first, then random). Ties across restarts go to the earliest. When
// restart_traces is given it receives, per restart, the initial edge count
// followed by each accepted one.
LearnResult tsp_greedy(CiTester& tester, const SpConfig& config, const Ordering& init,
                       std::vector<std::vector<int>>* restart_traces = nullptr);

// Sparsest-permutation search restricted by learned non-ancestral relations:
// learns a DnaSet per base (adjacency search at level base.k with the
// base.lambda_dep d-connection floor, or the moral-graph method through the
// tester's graph or covariance view), derives its layering, then orders each
// layer by SP with every query conditioned on all earlier layers, initialized
// compatibly with the order-constraining subset. Returns the DAG induced by
// the concatenated ordering.
LearnResult layered_sp(CiTester& tester, const DnaConfig& base, const SpConfig& config);

// For pair = (u, v) non-ancestral across the class of g and pi0 a topological
// order (X, u, Y, v, Z) of some class member, returns (X, A, v, u, Y\A, Z)
// with A the members of Y that are ancestors of v in that member. The result
// is again a topological order of a class member and places v before u.
Ordering swap_for_dna(const Dag& g, const Ordering& pi0, Edge pair);

}  // namespace causaldna

#endif  // CAUSALDNA_STRUCTURE_HPP
