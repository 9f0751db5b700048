#include "causaldna/dna_learn.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <stdexcept>

#include "causaldna/combinations.hpp"

namespace causaldna {

void apply_dna_rules(DnaSet& d, int u, int v, const std::vector<int>& s, int witness) {
    if (witness == u || witness == v)
        throw std::invalid_argument("apply_dna_rules: witness must differ from u and v.");
    for (int w : s)
        if (w == witness)
            throw std::invalid_argument("apply_dna_rules: witness may not belong to s.");
    d.add(witness, u);
    d.add(witness, v);
    for (int w : s) d.add(witness, w);
    if (s.empty()) {
        d.add(u, v);
        d.add(v, u);
    }
}

DnaSet learn_dna_general(CiTester& tester, const std::vector<CiQuery>& omega,
                         std::optional<double> lambda_dep) {
    int p = tester.num_variables();
    DnaSet d(p);
    std::vector<char> in_s(p);
    for (const CiQuery& q : omega) {
        if (q.s.empty()) {
            d.add(q.u, q.v);
            d.add(q.v, q.u);
        }
        std::fill(in_s.begin(), in_s.end(), 0);
        for (int w : q.s) in_s[w] = 1;
        for (int z = 0; z < p; ++z) {
            if (z == q.u || z == q.v || in_s[z]) continue;
            std::vector<int> extended(q.s);
            extended.insert(std::lower_bound(extended.begin(), extended.end(), z), z);
            CiVerdict verdict = tester.test(q.u, q.v, extended);
            if (!verdict.dependent()) continue;
            if (lambda_dep && verdict.strength && *verdict.strength <= *lambda_dep) continue;
            apply_dna_rules(d, q.u, q.v, q.s, z);
        }
    }
    return d;
}

DnaSet learn_dna_small(CiTester& tester, int k, std::optional<double> lambda_dep) {
    if (k < 0) throw std::invalid_argument("learn_dna_small: k must be nonnegative.");
    int p = tester.num_variables();
    std::vector<std::vector<char>> adj(p, std::vector<char>(p, 1));
    for (int v = 0; v < p; ++v) adj[v][v] = 0;

    std::set<std::pair<std::pair<int, int>, std::vector<int>>> found;
    int max_level = std::min(k, p - 2);
    for (int level = 0; level <= max_level; ++level) {
        bool any_candidates = false;
        for (int u = 0; u < p; ++u) {
            for (int v = 0; v < p; ++v) {
                if (v == u || !adj[u][v]) continue;
                std::vector<int> candidates;
                for (int w = 0; w < p; ++w)
                    if (w != v && adj[u][w]) candidates.push_back(w);
                if (static_cast<int>(candidates.size()) < level) continue;
                any_candidates = true;
                for_each_combination(candidates, level, [&](const std::vector<int>& s) {
                    if (tester.test(u, v, s).independent()) {
                        adj[u][v] = adj[v][u] = 0;
                        found.insert({{std::min(u, v), std::max(u, v)}, s});
                        return true;
                    }
                    return false;
                });
            }
        }
        if (!any_candidates) break;
    }

    std::vector<CiQuery> omega;
    omega.reserve(found.size());
    for (const auto& [pair, s] : found) omega.push_back({pair.first, pair.second, s});
    return learn_dna_general(tester, omega, lambda_dep);
}

namespace {

DnaSet learn_dna_large_impl(int p, int k,
                            const std::function<UndirectedGraph(const std::vector<int>&)>& moral) {
    if (k < 0 || k > p) throw std::invalid_argument("learn_dna_large: k must lie in [0, p].");
    std::vector<int> remaining(p);
    for (int i = 0; i < p; ++i) remaining[i] = i;
    DnaSet d(p);
    while (static_cast<int>(remaining.size()) > p - k) {
        UndirectedGraph full = moral(remaining);
        int flagged = -1;
        for (int u : remaining) {
            std::vector<int> rest;
            rest.reserve(remaining.size() - 1);
            for (int w : remaining)
                if (w != u) rest.push_back(w);
            UndirectedGraph marginal = moral(rest);
            if (full.num_edges_within(rest) > marginal.num_edges()) {
                flagged = u;
                break;
            }
        }
        if (flagged < 0) break;
        for (int w : remaining)
            if (w != flagged) d.add(flagged, w);
        remaining.erase(std::find(remaining.begin(), remaining.end(), flagged));
    }
    return d;
}

}  // namespace

DnaSet learn_dna_large(const Dag& g, int k) {
    return learn_dna_large_impl(g.num_vertices(), k, [&g](const std::vector<int>& subset) {
        return moral_graph_over(g, subset);
    });
}

DnaSet learn_dna_large(const CovarianceMatrix& sigma_hat, int k, double threshold) {
    return learn_dna_large_impl(
        sigma_hat.dim(), k, [&sigma_hat, threshold](const std::vector<int>& subset) {
            return precision_moral_edges(sigma_hat, subset, threshold);
        });
}

DnaSet order_constraining_subset(const DnaSet& d) {
    int p = d.num_vertices();
    // reach[x][y]: vertex x must precede vertex y under the pairs kept so far.
    std::vector<std::vector<char>> reach(p, std::vector<char>(p, 0));
    DnaSet out(p);
    for (auto [u, v] : d.pairs()) {
        if (reach[u][v]) continue;
        out.add(u, v);
        // New precedence edge v -> u; close the relation transitively.
        std::vector<int> before{v}, after{u};
        for (int x = 0; x < p; ++x) {
            if (reach[x][v]) before.push_back(x);
            if (reach[u][x]) after.push_back(x);
        }
        for (int x : before)
            for (int y : after) reach[x][y] = 1;
    }
    return out;
}

Layering layering_from_dna(const DnaSet& d) {
    int p = d.num_vertices();
    std::vector<int> remaining(p);
    for (int i = 0; i < p; ++i) remaining[i] = i;
    Layering sources, sinks;

    while (!remaining.empty()) {
        std::vector<char> outside(p);
        auto is_source = [&](const std::vector<int>& s) {
            for (int x : s) outside[x] = 1;
            bool ok = true;
            for (int u : remaining) {
                if (outside[u]) continue;
                for (int x : s)
                    if (!d.contains(u, x)) {
                        ok = false;
                        break;
                    }
                if (!ok) break;
            }
            for (int x : s) outside[x] = 0;
            return ok;
        };
        auto is_sink = [&](const std::vector<int>& s) {
            for (int x : s) outside[x] = 1;
            bool ok = true;
            for (int x : s) {
                for (int v : remaining) {
                    if (outside[v]) continue;
                    if (!d.contains(x, v)) {
                        ok = false;
                        break;
                    }
                }
                if (!ok) break;
            }
            for (int x : s) outside[x] = 0;
            return ok;
        };

        std::vector<int> layer;
        bool source_layer = false;
        for (int size = 1; size <= static_cast<int>(remaining.size()); ++size) {
            if (for_each_combination(remaining, size, [&](const std::vector<int>& s) {
                    if (is_source(s)) {
                        layer = s;
                        source_layer = true;
                        return true;
                    }
                    return false;
                }))
                break;
            if (for_each_combination(remaining, size, [&](const std::vector<int>& s) {
                    if (is_sink(s)) {
                        layer = s;
                        return true;
                    }
                    return false;
                }))
                break;
        }

        if (source_layer)
            sources.push_back(layer);
        else
            sinks.insert(sinks.begin(), layer);
        std::vector<int> next;
        std::vector<char> drop(p);
        for (int x : layer) drop[x] = 1;
        for (int v : remaining)
            if (!drop[v]) next.push_back(v);
        remaining = std::move(next);
    }

    sources.insert(sources.end(), sinks.begin(), sinks.end());
    return sources;
}

}  // namespace causaldna
