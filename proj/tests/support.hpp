#ifndef CAUSALDNA_TESTS_SUPPORT_HPP
#define CAUSALDNA_TESTS_SUPPORT_HPP

#include <Eigen/Dense>
#include <algorithm>
#include <vector>

#include "causaldna/graph.hpp"
#include "causaldna/rng.hpp"

namespace testsupport {

using causaldna::Edge;

// Reference d-separation oracle: enumerates every simple path between u and v
// and checks the blocking conditions on each, with its own reachability code.
// Deliberately naive; used to validate the production implementation.
class PathOracle {
public:
    PathOracle(int p, const std::vector<Edge>& edges) : p_(p), has_edge_(p, std::vector<char>(p, 0)), skeleton_(p) {
        for (auto [a, b] : edges) {
            has_edge_[a][b] = 1;
            skeleton_[a].push_back(b);
            skeleton_[b].push_back(a);
        }
        // Reflexive ancestor relation by repeated expansion.
        anc_.assign(p, std::vector<char>(p, 0));
        for (int v = 0; v < p; ++v) anc_[v][v] = 1;
        bool changed = true;
        while (changed) {
            changed = false;
            for (int a = 0; a < p; ++a)
                for (int b = 0; b < p; ++b)
                    if (has_edge_[a][b])
                        for (int w = 0; w < p; ++w)
                            if (anc_[b][w] && !anc_[a][w]) {
                                anc_[a][w] = 1;
                                changed = true;
                            }
        }
    }

    bool d_separated(int u, int v, const std::vector<int>& s) const {
        std::vector<char> in_s(p_, 0);
        for (int x : s) in_s[x] = 1;
        std::vector<int> path{u};
        std::vector<char> on_path(p_, 0);
        on_path[u] = 1;
        return !connecting_path_exists(v, in_s, path, on_path);
    }

private:
    bool connecting_path_exists(int target, const std::vector<char>& in_s, std::vector<int>& path,
                                std::vector<char>& on_path) const {
        int cur = path.back();
        if (cur == target) return path_connects(path, in_s);
        for (int next = 0; next < p_; ++next) {
            if (on_path[next] || (!has_edge_[cur][next] && !has_edge_[next][cur])) continue;
            path.push_back(next);
            on_path[next] = 1;
            bool found = connecting_path_exists(target, in_s, path, on_path);
            path.pop_back();
            on_path[next] = 0;
            if (found) return true;
        }
        return false;
    }

    bool path_connects(const std::vector<int>& path, const std::vector<char>& in_s) const {
        for (std::size_t i = 1; i + 1 < path.size(); ++i) {
            int a = path[i - 1], m = path[i], b = path[i + 1];
            bool collider = has_edge_[a][m] && has_edge_[b][m];
            if (collider) {
                bool opens = false;
                for (int w = 0; w < p_ && !opens; ++w)
                    if (in_s[w] && anc_[m][w]) opens = true;
                if (!opens) return false;
            } else if (in_s[m]) {
                return false;
            }
        }
        return true;
    }

    int p_;
    std::vector<std::vector<char>> has_edge_;
    std::vector<std::vector<int>> skeleton_;
    std::vector<std::vector<char>> anc_;
};

// Five-vertex DAG 0 -> 1 -> 3 <- 2, 3 -> 4 used across test suites.
inline causaldna::Dag chain_collider_dag() {
    return causaldna::Dag(5, {{0, 1}, {1, 3}, {2, 3}, {3, 4}});
}

// Six-vertex DAG whose last vertex is a sink with three parents:
// 0 -> 5, 1 -> 2, 1 -> 3, 2 -> 3, 3 -> 4, 4 -> 5, 3 -> 5.
inline causaldna::Dag sink_dag() {
    return causaldna::Dag(6, {{0, 5}, {1, 2}, {1, 3}, {2, 3}, {3, 4}, {4, 5}, {3, 5}});
}

// Five-vertex DAG 0 -> 2 <- 1, 2 -> 3 -> 4: vertex 4 is non-ancestral to 2 in
// every class member, but no conditional independence pattern reveals it.
inline causaldna::Dag hidden_nonancestor_dag() {
    return causaldna::Dag(5, {{0, 2}, {1, 2}, {2, 3}, {3, 4}});
}

// Completed graphs mirroring the three ancestral-relation classification cases.
inline causaldna::Cpdag pattern_two_forks() {
    return causaldna::Cpdag(4, {{1, 3}, {2, 3}}, {{0, 1}, {0, 2}});
}

inline causaldna::Cpdag pattern_shielded_chain() {
    return causaldna::Cpdag(6, {{3, 4}, {5, 4}}, {{0, 1}, {1, 2}, {2, 3}, {0, 2}, {0, 3}});
}

inline causaldna::Cpdag pattern_clique_frontier() {
    return causaldna::Cpdag(5, {}, {{0, 1}, {1, 2}, {2, 3}, {0, 2}, {2, 4}, {0, 3}, {3, 4}});
}

// Random DAG for property tests: random topological order, independent edges.
inline causaldna::Dag random_test_dag(causaldna::Rng& rng, int p, double edge_prob) {
    auto order = rng.permutation(p);
    std::vector<int> pos(p);
    for (int i = 0; i < p; ++i) pos[order[i]] = i;
    std::vector<Edge> edges;
    for (int u = 0; u < p; ++u)
        for (int v = 0; v < p; ++v)
            if (pos[u] < pos[v] && rng.bernoulli(edge_prob)) edges.emplace_back(u, v);
    return causaldna::Dag(p, std::move(edges));
}

// All DAGs on p vertices, built by assigning each vertex pair one of
// {no edge, forward, backward} and keeping the acyclic results.
std::vector<causaldna::Dag> all_dags(int p);

// Reference covariance of the linear model X = B^T X + eps with the given edge
// coefficients and noise variances, by direct matrix inversion.
Eigen::MatrixXd sem_covariance_by_inversion(int p, const std::vector<std::pair<Edge, double>>& coefficients,
                                            const std::vector<double>& variances);

// Random coefficients in +-[0.3, 1.0] and variances in [1.0, 2.0] for g.
std::pair<std::vector<std::pair<Edge, double>>, std::vector<double>> random_sem_parameters(
    const causaldna::Dag& g, causaldna::Rng& rng);

// Partial correlation by the regression route: residual covariances of i and j
// after projecting onto the conditioning block.
double residual_partial_correlation(const Eigen::MatrixXd& sigma, int i, int j,
                                    const std::vector<int>& s);

}  // namespace testsupport

#endif  // CAUSALDNA_TESTS_SUPPORT_HPP
