#ifndef CAUSALDNA_DNA_LEARN_HPP
#define CAUSALDNA_DNA_LEARN_HPP

#include <optional>
#include <vector>

#include "causaldna/ci.hpp"
#include "causaldna/graph.hpp"

namespace causaldna {

// Ordered partition of {0, ..., p-1}; earlier layers may only contain
// ancestors of later ones, never the other way around.
using Layering = std::vector<std::vector<int>>;

enum class DnaMode { SmallSets, LargeSets, General };

struct DnaConfig {
    DnaMode mode = DnaMode::SmallSets;
    // Learning level: maximum conditioning-set size (SmallSets) or number of
    // removable vertices (LargeSets).
    int k = 0;
    // Minimum reported strength for d-connection verdicts in the SmallSets
    // flip scan; unset, or a tester without strengths, leaves verdicts as is.
    std::optional<double> lambda_dep;
};

// Records the consequences of one independence flip on d: given that u and v
// are independent given s but dependent given s plus the witness, the witness
// is non-ancestral to u, to v and to every member of s. When s is empty the
// marginal pair itself yields (u, v) and (v, u).
void apply_dna_rules(DnaSet& d, int u, int v, const std::vector<int>& s, int witness);

// Scans every recorded independence (u, v, S) in omega, queries (u, v, S + z)
// for each outside vertex z and applies the flip rules on dependence. Marginal
// entries contribute their symmetric pairs regardless of witnesses. When
// lambda_dep is set, a dependence verdict that reports a strength must exceed
// it for the flip to count; strength-free verdicts always count.
DnaSet learn_dna_general(CiTester& tester, const std::vector<CiQuery>& omega,
                         std::optional<double> lambda_dep = std::nullopt);

// Adjacency-search front end: runs the edge-removal phase of the PC algorithm
// restricted to conditioning sets of size at most k, collects every
// independence it finds and feeds them to learn_dna_general. lambda_dep is
// forwarded to the flip scan; the adjacency search itself ignores it.
DnaSet learn_dna_small(CiTester& tester, int k, std::optional<double> lambda_dep = std::nullopt);

// Iterative moral-graph comparison: repeatedly looks for a vertex whose
// removal makes the moral graph over the remaining vertices lose edges
// relative to the induced subgraph, records that vertex as non-ancestral to
// everything remaining and drops it. Stops after k removals or a clean scan.
DnaSet learn_dna_large(const Dag& g, int k);
DnaSet learn_dna_large(const CovarianceMatrix& sigma_hat, int k, double threshold);

// Maximal subset of d, built in greedy lexicographic order, whose pairs admit a
// vertex ordering placing u after v for every kept pair (u, v). Mutual pairs
// keep the lexicographically smaller one.
DnaSet order_constraining_subset(const DnaSet& d);

// Ordered partition deduced from d: repeatedly extracts the smallest vertex
// set that is a source set (everything outside is non-ancestral to it) or a
// sink set (it is non-ancestral to everything outside), preferring sources,
// then lexicographically smaller sets. Sources accumulate at the front,
// sinks at the back.
Layering layering_from_dna(const DnaSet& d);

}  // namespace causaldna

#endif  // CAUSALDNA_DNA_LEARN_HPP
