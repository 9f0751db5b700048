#include "causaldna/structure.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <stdexcept>
#include <string>

#include "causaldna/combinations.hpp"
#include "causaldna/common.hpp"
#include "causaldna/rng.hpp"

namespace causaldna {

LearnCounts counts_of(const TestLedger& ledger) {
    return {ledger.total(), static_cast<long>(ledger.independences().size()),
            static_cast<long>(ledger.dependences().size())};
}

Cpdag LearnResult::completed() const {
    if (const Cpdag* c = cpdag()) return *c;
    return cpdag_of(*dag());
}

namespace {

void check_ordering(const Ordering& order, int p, bool full, const char* who) {
    if (full && static_cast<int>(order.size()) != p)
        throw std::invalid_argument(std::string(who) + ": ordering must cover every variable.");
    std::vector<char> seen(p, 0);
    for (int x : order) {
        if (x < 0 || x >= p)
            throw std::out_of_range(std::string(who) + ": vertex index out of range.");
        if (seen[x])
            throw std::invalid_argument(std::string(who) + ": ordering repeats a vertex.");
        seen[x] = 1;
    }
}

void check_sp_config(const SpConfig& config, const char* who) {
    if (config.mode != SpMode::GreedyTsp) return;
    if (config.depth < 1) throw std::invalid_argument(std::string(who) + ": depth must be >= 1.");
    if (config.restarts < 1)
        throw std::invalid_argument(std::string(who) + ": restarts must be >= 1.");
}

// Edge-removal phase shared by pc and pc_with_dna; d prunes the candidate
// pools when present. Fills the final adjacency and the first-found
// separating set per removed pair, keyed (min, max).
void pc_skeleton(CiTester& tester, const DnaSet* d, std::vector<std::vector<char>>& adj,
                 std::map<Edge, std::vector<int>>& sepsets) {
    int p = tester.num_variables();
    adj.assign(p, std::vector<char>(p, 1));
    for (int v = 0; v < p; ++v) adj[v][v] = 0;
    for (int level = 0;; ++level) {
        bool any_pool_large_enough = false;
        for (int u = 0; u < p; ++u) {
            for (int v = 0; v < p; ++v) {
                if (v == u || !adj[u][v]) continue;
                std::vector<int> pool;
                for (int w = 0; w < p; ++w) {
                    if (w == v || !adj[u][w]) continue;
                    if (d) {
                        if (d->contains(u, v)) {
                            if (d->contains(w, u)) continue;
                        } else if (d->contains(w, v) && d->contains(w, u)) {
                            continue;
                        }
                    }
                    pool.push_back(w);
                }
                if (static_cast<int>(pool.size()) < level) continue;
                any_pool_large_enough = true;
                for_each_combination(pool, level, [&](const std::vector<int>& s) {
                    if (tester.test(u, v, s).independent()) {
                        adj[u][v] = adj[v][u] = 0;
                        sepsets[{std::min(u, v), std::max(u, v)}] = s;
                        return true;
                    }
                    return false;
                });
            }
        }
        if (!any_pool_large_enough) break;
    }
}

LearnResult orient_pc_skeleton(CiTester& tester, const std::vector<std::vector<char>>& adj,
                               const std::map<Edge, std::vector<int>>& sepsets) {
    int p = tester.num_variables();
    std::vector<Edge> skeleton;
    for (int a = 0; a < p; ++a)
        for (int b = a + 1; b < p; ++b)
            if (adj[a][b]) skeleton.emplace_back(a, b);
    std::vector<Edge> arrows;
    for (int c = 0; c < p; ++c) {
        for (int a = 0; a < p; ++a) {
            if (a == c || !adj[a][c]) continue;
            for (int b = a + 1; b < p; ++b) {
                if (b == c || !adj[b][c] || adj[a][b]) continue;
                const auto& s = sepsets.at({a, b});
                if (std::find(s.begin(), s.end(), c) == s.end()) {
                    arrows.emplace_back(a, c);
                    arrows.emplace_back(b, c);
                }
            }
        }
    }
    return LearnResult{complete_pattern(p, skeleton, arrows), std::nullopt,
                       counts_of(tester.ledger())};
}

int extension_size(CiTester& tester, const Ordering& prefix, const Ordering& tail) {
    Ordering full = prefix;
    full.insert(full.end(), tail.begin(), tail.end());
    return dag_from_ordering(tester, full).num_edges();
}

// Exhaustive sparsest-permutation core over a vertex subset, scored as an
// extension of the fixed prefix: the objective counts edges into the subset
// from the prefix as well as edges inside it. Enumerates the orderings
// lexicographically, so the returned minimizer is the smallest one.
Ordering sp_best_order(CiTester& tester, const Ordering& prefix, std::vector<int> vertices) {
    if (vertices.size() > 8)
        throw capacity_error("sp_exhaustive: exhaustive search is limited to 8 vertices.");
    std::sort(vertices.begin(), vertices.end());
    Ordering best = vertices;
    int best_size = extension_size(tester, prefix, vertices);
    Ordering current = vertices;
    while (std::next_permutation(current.begin(), current.end())) {
        int size = extension_size(tester, prefix, current);
        if (size < best_size) {
            best = current;
            best_size = size;
        }
    }
    return best;
}

// Topological order of the layer under the precedence "v before u per
// constraint (u, v)". Picks the smallest available vertex, or a uniformly
// random one when an rng is supplied.
Ordering constrained_order(const DnaSet& constraints, const std::vector<int>& layer,
                           Rng* rng = nullptr) {
    int m = static_cast<int>(layer.size());
    std::vector<std::vector<char>> precedes(m, std::vector<char>(m, 0));
    std::vector<int> blockers(m, 0);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
            if (i != j && constraints.contains(layer[i], layer[j])) {
                precedes[j][i] = 1;
                ++blockers[i];
            }
    Ordering out;
    out.reserve(m);
    std::vector<char> used(m, 0);
    std::vector<int> available;
    for (int step = 0; step < m; ++step) {
        available.clear();
        for (int i = 0; i < m; ++i)
            if (!used[i] && blockers[i] == 0) available.push_back(i);
        if (available.empty()) throw std::logic_error("layered_sp: constraint subset admits no order.");
        int pick = rng ? available[static_cast<std::size_t>(rng->uniform_below(available.size()))]
                       : available.front();
        used[pick] = 1;
        out.push_back(layer[pick]);
        for (int i = 0; i < m; ++i)
            if (!used[i] && precedes[pick][i]) --blockers[i];
    }
    return out;
}

// Arrows u -> v with pa(u) = pa(v) \ {u}; reversing one keeps the graph a
// minimal representation of the same independences. Only arrows whose both
// endpoints are movable qualify, so a fixed prefix is never disturbed.
std::vector<Edge> covered_arrows(const Dag& g, const std::vector<char>& movable) {
    std::vector<Edge> out;
    for (auto [u, v] : g.edges()) {
        if (!movable[u] || !movable[v]) continue;
        std::vector<int> rest = g.parents(v);
        rest.erase(std::find(rest.begin(), rest.end(), u));
        if (rest == g.parents(u)) out.emplace_back(u, v);
    }
    return out;
}

// (X, u, A, v, Z) -> (X, v, u, A, Z): moves v directly before u.
Ordering reversal_order(const Ordering& order, int u, int v) {
    Ordering out;
    out.reserve(order.size());
    std::size_t i = 0;
    while (order[i] != u) out.push_back(order[i++]);
    out.push_back(v);
    out.push_back(u);
    ++i;
    while (order[i] != v) out.push_back(order[i++]);
    ++i;
    for (; i < order.size(); ++i) out.push_back(order[i]);
    return out;
}

// Depth-first walk over covered-arrow reversals, depth counting reversals
// from the incumbent: returns the first ordering strictly below bound, moving
// through equal-size orderings while depth allows.
std::optional<Ordering> sparser_by_reversals(CiTester& tester, const Ordering& order, const Dag& g,
                                             const std::vector<char>& movable, int bound, int depth,
                                             int depth_limit, std::set<Ordering>& visited) {
    for (auto [u, v] : covered_arrows(g, movable)) {
        Ordering next = reversal_order(order, u, v);
        if (!visited.insert(next).second) continue;
        Dag h = dag_from_ordering(tester, next);
        if (h.num_edges() < bound) return next;
        if (h.num_edges() == bound && depth < depth_limit) {
            auto found = sparser_by_reversals(tester, next, h, movable, bound, depth + 1,
                                              depth_limit, visited);
            if (found) return found;
        }
    }
    return std::nullopt;
}

std::pair<Ordering, int> tsp_run(CiTester& tester, Ordering order,
                                 const std::vector<char>& movable, int depth_limit,
                                 std::vector<int>* trace) {
    int size = dag_from_ordering(tester, order).num_edges();
    if (trace) trace->push_back(size);
    while (true) {
        Dag g = dag_from_ordering(tester, order);
        std::set<Ordering> visited{order};
        auto better =
            sparser_by_reversals(tester, order, g, movable, size, 1, depth_limit, visited);
        if (!better) break;
        order = std::move(*better);
        size = dag_from_ordering(tester, order).num_edges();
        if (trace) trace->push_back(size);
    }
    return {std::move(order), size};
}

// Greedy core over a vertex subset, scored like sp_best_order as an extension
// of the fixed prefix: the given initial ordering first, then random
// permutations of the same vertices. Earliest restart wins ties. With
// constraints, the first restart draws a random ordering that keeps u after v
// for every constrained pair within the subset; later restarts stay uniform,
// so a misleading constraint set cannot capture every start. The walk itself
// moves freely in either case.
Ordering tsp_best_order(CiTester& tester, const SpConfig& config, const Ordering& prefix,
                        const Ordering& init, std::vector<std::vector<int>>* restart_traces,
                        const DnaSet* constraints = nullptr) {
    std::vector<int> vertices = init;
    std::sort(vertices.begin(), vertices.end());
    std::vector<char> movable(tester.num_variables(), 0);
    for (int x : vertices) movable[x] = 1;
    bool constrained = false;
    if (constraints)
        for (int a : vertices)
            for (int b : vertices)
                if (a != b && constraints->contains(a, b)) constrained = true;
    Rng rng(config.seed);
    Ordering best;
    int best_size = -1;
    for (int r = 0; r < config.restarts; ++r) {
        Ordering start = prefix;
        if (r == 0) {
            start.insert(start.end(), init.begin(), init.end());
        } else if (constrained && r == 1) {
            Ordering extension = constrained_order(*constraints, vertices, &rng);
            start.insert(start.end(), extension.begin(), extension.end());
        } else {
            auto perm = rng.permutation(static_cast<int>(vertices.size()));
            for (std::size_t i = 0; i < vertices.size(); ++i) start.push_back(vertices[perm[i]]);
        }
        std::vector<int>* trace = nullptr;
        if (restart_traces) {
            restart_traces->emplace_back();
            trace = &restart_traces->back();
        }
        auto [order, size] = tsp_run(tester, std::move(start), movable, config.depth, trace);
        if (best_size < 0 || size < best_size) {
            best = std::move(order);
            best_size = size;
        }
    }
    return Ordering(best.begin() + static_cast<long>(prefix.size()), best.end());
}

}  // namespace

LearnResult pc(CiTester& tester) {
    std::vector<std::vector<char>> adj;
    std::map<Edge, std::vector<int>> sepsets;
    pc_skeleton(tester, nullptr, adj, sepsets);
    return orient_pc_skeleton(tester, adj, sepsets);
}

LearnResult pc_with_dna(CiTester& tester, const DnaSet& d) {
    if (d.num_vertices() != tester.num_variables())
        throw std::invalid_argument("pc_with_dna: relation set and tester sizes differ.");
    std::vector<std::vector<char>> adj;
    std::map<Edge, std::vector<int>> sepsets;
    pc_skeleton(tester, &d, adj, sepsets);
    return orient_pc_skeleton(tester, adj, sepsets);
}

Dag dag_from_ordering(CiTester& tester, const Ordering& order) {
    int p = tester.num_variables();
    check_ordering(order, p, false, "dag_from_ordering");
    int m = static_cast<int>(order.size());
    std::vector<Edge> edges;
    for (int j = 1; j < m; ++j) {
        for (int i = 0; i < j; ++i) {
            std::vector<int> s;
            s.reserve(j - 1);
            for (int k = 0; k < j; ++k)
                if (k != i) s.push_back(order[k]);
            if (!tester.test(order[i], order[j], s).independent())
                edges.emplace_back(order[i], order[j]);
        }
    }
    return Dag(p, std::move(edges));
}

LearnResult sp_exhaustive(CiTester& tester) {
    std::vector<int> vertices(tester.num_variables());
    std::iota(vertices.begin(), vertices.end(), 0);
    Ordering best = sp_best_order(tester, {}, std::move(vertices));
    Dag g = dag_from_ordering(tester, best);
    return LearnResult{std::move(g), std::move(best), counts_of(tester.ledger())};
}

LearnResult tsp_greedy(CiTester& tester, const SpConfig& config, const Ordering& init,
                       std::vector<std::vector<int>>* restart_traces) {
    SpConfig greedy = config;
    greedy.mode = SpMode::GreedyTsp;
    check_sp_config(greedy, "tsp_greedy");
    check_ordering(init, tester.num_variables(), true, "tsp_greedy");
    Ordering best = tsp_best_order(tester, greedy, {}, init, restart_traces);
    Dag g = dag_from_ordering(tester, best);
    return LearnResult{std::move(g), std::move(best), counts_of(tester.ledger())};
}

LearnResult layered_sp(CiTester& tester, const DnaConfig& base, const SpConfig& config) {
    check_sp_config(config, "layered_sp");
    int p = tester.num_variables();
    DnaSet d(p);
    if (base.mode == DnaMode::LargeSets) {
        if (tester.oracle_dag()) {
            d = learn_dna_large(*tester.oracle_dag(), base.k);
        } else if (tester.covariance() && tester.dependence_threshold()) {
            d = learn_dna_large(*tester.covariance(), base.k, *tester.dependence_threshold());
        } else {
            throw std::invalid_argument(
                "layered_sp: large-sets learning needs a tester with a graph or covariance view.");
        }
    } else {
        d = learn_dna_small(tester, base.k, base.lambda_dep);
    }
    DnaSet constraints = order_constraining_subset(d);
    Layering layers = layering_from_dna(d);

    Ordering full;
    full.reserve(p);
    for (const auto& layer : layers) {
        Ordering chosen = constrained_order(constraints, layer);
        if (layer.size() > 1) {
            chosen = config.mode == SpMode::Exhaustive
                         ? sp_best_order(tester, full, layer)
                         : tsp_best_order(tester, config, full, chosen, nullptr, &constraints);
        }
        full.insert(full.end(), chosen.begin(), chosen.end());
    }
    Dag g = dag_from_ordering(tester, full);
    Ordering order = full;
    return LearnResult{std::move(g), std::move(order), counts_of(tester.ledger())};
}

Ordering swap_for_dna(const Dag& g, const Ordering& pi0, Edge pair) {
    int p = g.num_vertices();
    check_ordering(pi0, p, true, "swap_for_dna");
    auto [u, v] = pair;
    if (u < 0 || u >= p || v < 0 || v >= p || u == v)
        throw std::invalid_argument("swap_for_dna: invalid vertex pair.");
    std::vector<int> pos(p);
    for (int i = 0; i < p; ++i) pos[pi0[i]] = i;
    if (pos[u] >= pos[v])
        throw std::invalid_argument("swap_for_dna: u must precede v in the ordering.");

    // The class member that has pi0 as a topological order: the skeleton
    // oriented along pi0. It exists iff the v-structures of g survive.
    std::vector<Edge> oriented;
    oriented.reserve(g.edges().size());
    for (auto [a, b] : g.edges()) {
        if (pos[a] < pos[b])
            oriented.emplace_back(a, b);
        else
            oriented.emplace_back(b, a);
    }
    Dag member(p, std::move(oriented));
    if (v_structures(member) != v_structures(g))
        throw std::invalid_argument("swap_for_dna: the ordering fits no member of the class.");
    if (classify_relation(cpdag_of(g), u, v) != RelationVerdict::DefiniteNonAncestral)
        throw std::invalid_argument("swap_for_dna: the pair is not definitely non-ancestral.");

    Ordering out;
    out.reserve(p);
    for (int i = 0; i < pos[u]; ++i) out.push_back(pi0[i]);
    for (int i = pos[u] + 1; i < pos[v]; ++i)
        if (member.is_ancestor(pi0[i], v)) out.push_back(pi0[i]);
    out.push_back(v);
    out.push_back(u);
    for (int i = pos[u] + 1; i < pos[v]; ++i)
        if (!member.is_ancestor(pi0[i], v)) out.push_back(pi0[i]);
    for (int i = pos[v] + 1; i < p; ++i) out.push_back(pi0[i]);
    return out;
}

}  // namespace causaldna
