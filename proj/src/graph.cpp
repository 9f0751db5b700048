#include "causaldna/graph.hpp"

#include <algorithm>
#include <array>
#include <cstdint>
#include <deque>
#include <stdexcept>

#include "causaldna/common.hpp"

namespace causaldna {

namespace {

void check_vertex_index(int p, int v, const char* who) {
    if (v < 0 || v >= p) throw std::out_of_range(std::string(who) + ": vertex index out of range.");
}

std::vector<int> kahn_topological_order(int p, const std::vector<std::vector<int>>& children) {
    std::vector<int> indegree(p, 0);
    for (int u = 0; u < p; ++u)
        for (int v : children[u]) ++indegree[v];
    std::deque<int> ready;
    for (int v = 0; v < p; ++v)
        if (indegree[v] == 0) ready.push_back(v);
    std::vector<int> order;
    order.reserve(p);
    while (!ready.empty()) {
        int v = ready.front();
        ready.pop_front();
        order.push_back(v);
        for (int c : children[v])
            if (--indegree[c] == 0) ready.push_back(c);
    }
    return order;
}

// Canonical (min(a,b), c, max(a,b)) triples of colliders a -> c <- b with a, b
// non-adjacent.
std::vector<std::array<int, 3>> v_structures(int p, const std::vector<std::vector<int>>& parents,
                                             const std::vector<std::vector<char>>& adjacent) {
    std::vector<std::array<int, 3>> out;
    for (int c = 0; c < p; ++c) {
        const auto& pa = parents[c];
        for (std::size_t i = 0; i < pa.size(); ++i) {
            for (std::size_t j = i + 1; j < pa.size(); ++j) {
                int a = std::min(pa[i], pa[j]);
                int b = std::max(pa[i], pa[j]);
                if (!adjacent[a][b]) out.push_back({a, c, b});
            }
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace

Dag::Dag(int p, std::vector<Edge> edges, std::optional<std::vector<std::string>> labels)
    : p_(p), edges_(std::move(edges)), labels_(std::move(labels)) {
    if (p_ < 0) throw std::invalid_argument("Dag: vertex count must be nonnegative.");
    if (labels_ && static_cast<int>(labels_->size()) != p_)
        throw std::invalid_argument("Dag: label count must match vertex count.");
    parents_.resize(p_);
    children_.resize(p_);
    std::sort(edges_.begin(), edges_.end());
    for (std::size_t i = 0; i < edges_.size(); ++i) {
        auto [u, v] = edges_[i];
        check_vertex_index(p_, u, "Dag");
        check_vertex_index(p_, v, "Dag");
        if (u == v) throw std::invalid_argument("Dag: self loops are not allowed.");
        if (i > 0 && edges_[i] == edges_[i - 1])
            throw std::invalid_argument("Dag: duplicate edge.");
        children_[u].push_back(v);
        parents_[v].push_back(u);
    }
    for (auto& pa : parents_) std::sort(pa.begin(), pa.end());
    topo_order_ = kahn_topological_order(p_, children_);
    if (static_cast<int>(topo_order_.size()) != p_)
        throw std::invalid_argument("Dag: edge set contains a cycle.");
    ancestor_.assign(p_, std::vector<char>(p_, 0));
    for (int i = p_ - 1; i >= 0; --i) {
        int v = topo_order_[i];
        ancestor_[v][v] = 1;
        for (int c : children_[v])
            for (int w = 0; w < p_; ++w)
                if (ancestor_[c][w]) ancestor_[v][w] = 1;
    }
}

void Dag::check_vertex(int v) const { check_vertex_index(p_, v, "Dag"); }

const std::vector<int>& Dag::parents(int v) const {
    check_vertex(v);
    return parents_[v];
}

const std::vector<int>& Dag::children(int v) const {
    check_vertex(v);
    return children_[v];
}

bool Dag::has_edge(int parent, int child) const {
    check_vertex(parent);
    check_vertex(child);
    return std::binary_search(children_[parent].begin(), children_[parent].end(), child);
}

bool Dag::is_ancestor(int u, int v) const {
    check_vertex(u);
    check_vertex(v);
    return ancestor_[u][v] != 0;
}

std::vector<int> Dag::ancestors_of(int v) const {
    check_vertex(v);
    std::vector<int> out;
    for (int u = 0; u < p_; ++u)
        if (ancestor_[u][v]) out.push_back(u);
    return out;
}

UndirectedGraph::UndirectedGraph(int p, std::vector<Edge> edges) : p_(p), edges_(std::move(edges)) {
    if (p_ < 0) throw std::invalid_argument("UndirectedGraph: vertex count must be nonnegative.");
    for (auto& [a, b] : edges_) {
        check_vertex_index(p_, a, "UndirectedGraph");
        check_vertex_index(p_, b, "UndirectedGraph");
        if (a == b) throw std::invalid_argument("UndirectedGraph: self loops are not allowed.");
        if (a > b) std::swap(a, b);
    }
    std::sort(edges_.begin(), edges_.end());
    if (std::adjacent_find(edges_.begin(), edges_.end()) != edges_.end())
        throw std::invalid_argument("UndirectedGraph: duplicate edge.");
    adj_.resize(p_);
    for (auto [a, b] : edges_) {
        adj_[a].push_back(b);
        adj_[b].push_back(a);
    }
    for (auto& nb : adj_) std::sort(nb.begin(), nb.end());
}

bool UndirectedGraph::has_edge(int u, int v) const {
    check_vertex_index(p_, u, "UndirectedGraph");
    check_vertex_index(p_, v, "UndirectedGraph");
    return std::binary_search(adj_[u].begin(), adj_[u].end(), v);
}

const std::vector<int>& UndirectedGraph::neighbors(int v) const {
    check_vertex_index(p_, v, "UndirectedGraph");
    return adj_[v];
}

int UndirectedGraph::num_edges_within(const std::vector<int>& vertices) const {
    std::vector<char> in(p_, 0);
    for (int v : vertices) {
        check_vertex_index(p_, v, "UndirectedGraph");
        in[v] = 1;
    }
    int count = 0;
    for (auto [a, b] : edges_)
        if (in[a] && in[b]) ++count;
    return count;
}

Cpdag::Cpdag(int p, std::vector<Edge> directed, std::vector<Edge> undirected)
    : p_(p), directed_(std::move(directed)), undirected_(std::move(undirected)) {
    if (p_ < 0) throw std::invalid_argument("Cpdag: vertex count must be nonnegative.");
    mark_.assign(p_, std::vector<char>(p_, 0));
    for (auto [u, v] : directed_) {
        check_vertex_index(p_, u, "Cpdag");
        check_vertex_index(p_, v, "Cpdag");
        if (u == v) throw std::invalid_argument("Cpdag: self loops are not allowed.");
        if (mark_[u][v] != 0 || mark_[v][u] != 0)
            throw std::invalid_argument("Cpdag: at most one edge per vertex pair.");
        mark_[u][v] = 2;
    }
    for (auto& [a, b] : undirected_) {
        check_vertex_index(p_, a, "Cpdag");
        check_vertex_index(p_, b, "Cpdag");
        if (a == b) throw std::invalid_argument("Cpdag: self loops are not allowed.");
        if (a > b) std::swap(a, b);
        if (mark_[a][b] != 0 || mark_[b][a] != 0)
            throw std::invalid_argument("Cpdag: at most one edge per vertex pair.");
        mark_[a][b] = mark_[b][a] = 1;
    }
    std::sort(directed_.begin(), directed_.end());
    std::sort(undirected_.begin(), undirected_.end());
    succ_.resize(p_);
    for (int u = 0; u < p_; ++u)
        for (int v = 0; v < p_; ++v)
            if (mark_[u][v] != 0) succ_[u].push_back(v);
}

bool Cpdag::has_directed(int u, int v) const {
    check_vertex_index(p_, u, "Cpdag");
    check_vertex_index(p_, v, "Cpdag");
    return mark_[u][v] == 2;
}

bool Cpdag::has_undirected(int u, int v) const {
    check_vertex_index(p_, u, "Cpdag");
    check_vertex_index(p_, v, "Cpdag");
    return mark_[u][v] == 1;
}

bool Cpdag::adjacent(int u, int v) const {
    check_vertex_index(p_, u, "Cpdag");
    check_vertex_index(p_, v, "Cpdag");
    return mark_[u][v] != 0 || mark_[v][u] != 0;
}

UndirectedGraph Cpdag::skeleton() const {
    std::vector<Edge> edges;
    edges.reserve(directed_.size() + undirected_.size());
    for (auto [u, v] : directed_) edges.emplace_back(std::min(u, v), std::max(u, v));
    edges.insert(edges.end(), undirected_.begin(), undirected_.end());
    return UndirectedGraph(p_, std::move(edges));
}

const std::vector<int>& Cpdag::possible_successors(int v) const {
    check_vertex_index(p_, v, "Cpdag");
    return succ_[v];
}

bool Cpdag::operator==(const Cpdag& other) const {
    return p_ == other.p_ && directed_ == other.directed_ && undirected_ == other.undirected_;
}

DnaSet::DnaSet(int p) : p_(p), count_(0) {
    if (p_ < 0) throw std::invalid_argument("DnaSet: vertex count must be nonnegative.");
    matrix_.assign(static_cast<std::size_t>(p_) * p_, 0);
}

void DnaSet::add(int u, int v) {
    check_vertex_index(p_, u, "DnaSet");
    check_vertex_index(p_, v, "DnaSet");
    if (u == v) throw std::invalid_argument("DnaSet: pairs (v, v) are not allowed.");
    char& cell = matrix_[static_cast<std::size_t>(u) * p_ + v];
    if (!cell) {
        cell = 1;
        ++count_;
    }
}

bool DnaSet::contains(int u, int v) const {
    check_vertex_index(p_, u, "DnaSet");
    check_vertex_index(p_, v, "DnaSet");
    return matrix_[static_cast<std::size_t>(u) * p_ + v] != 0;
}

std::vector<Edge> DnaSet::pairs() const {
    std::vector<Edge> out;
    out.reserve(count_);
    for (int u = 0; u < p_; ++u)
        for (int v = 0; v < p_; ++v)
            if (matrix_[static_cast<std::size_t>(u) * p_ + v]) out.emplace_back(u, v);
    return out;
}

bool d_separated(const Dag& g, int u, int v, const std::vector<int>& s) {
    int p = g.num_vertices();
    check_vertex_index(p, u, "d_separated");
    check_vertex_index(p, v, "d_separated");
    if (u == v) throw std::invalid_argument("d_separated: u and v must differ.");
    std::vector<char> cond(p, 0);
    for (int x : s) {
        check_vertex_index(p, x, "d_separated");
        if (x == u || x == v)
            throw std::invalid_argument("d_separated: conditioning set may not contain u or v.");
        cond[x] = 1;
    }

    std::vector<char> in_anc(p, 0);
    for (int x = 0; x < p; ++x) {
        if (g.is_ancestor(x, u) || g.is_ancestor(x, v)) {
            in_anc[x] = 1;
            continue;
        }
        for (int y : s)
            if (g.is_ancestor(x, y)) {
                in_anc[x] = 1;
                break;
            }
    }

    std::vector<std::vector<char>> moral(p, std::vector<char>(p, 0));
    for (auto [a, b] : g.edges()) {
        if (in_anc[a] && in_anc[b]) moral[a][b] = moral[b][a] = 1;
    }
    for (int c = 0; c < p; ++c) {
        if (!in_anc[c]) continue;
        const auto& pa = g.parents(c);
        for (std::size_t i = 0; i < pa.size(); ++i) {
            if (!in_anc[pa[i]]) continue;
            for (std::size_t j = i + 1; j < pa.size(); ++j) {
                if (!in_anc[pa[j]]) continue;
                moral[pa[i]][pa[j]] = moral[pa[j]][pa[i]] = 1;
            }
        }
    }

    std::deque<int> queue{u};
    std::vector<char> seen(p, 0);
    seen[u] = 1;
    while (!queue.empty()) {
        int x = queue.front();
        queue.pop_front();
        if (x == v) return false;
        for (int y = 0; y < p; ++y) {
            if (moral[x][y] && !seen[y] && !cond[y]) {
                seen[y] = 1;
                queue.push_back(y);
            }
        }
    }
    return true;
}

namespace {

// mark[u][v]: 0 none, 1 undirected, 2 arrow u -> v (the mirror entry is 0).
using MarkMatrix = std::vector<std::vector<char>>;

bool mark_adjacent(const MarkMatrix& m, int u, int v) { return m[u][v] != 0 || m[v][u] != 0; }

void orient(MarkMatrix& m, int u, int v) {
    m[u][v] = 2;
    m[v][u] = 0;
}

void meek_closure(MarkMatrix& m) {
    int p = static_cast<int>(m.size());
    bool changed = true;
    while (changed) {
        changed = false;
        for (int b = 0; b < p; ++b) {
            for (int c = 0; c < p; ++c) {
                if (m[b][c] != 1) continue;
                // R1: a -> b - c with a, c non-adjacent.
                for (int a = 0; a < p && m[b][c] == 1; ++a) {
                    if (m[a][b] == 2 && !mark_adjacent(m, a, c)) {
                        orient(m, b, c);
                        changed = true;
                    }
                }
                // R2: b -> x -> c with b - c.
                for (int x = 0; x < p && m[b][c] == 1; ++x) {
                    if (m[b][x] == 2 && m[x][c] == 2) {
                        orient(m, b, c);
                        changed = true;
                    }
                }
                // R3: b - x, b - y, x -> c, y -> c with x, y non-adjacent.
                for (int x = 0; x < p && m[b][c] == 1; ++x) {
                    if (m[b][x] != 1 || m[x][c] != 2) continue;
                    for (int y = x + 1; y < p && m[b][c] == 1; ++y) {
                        if (m[b][y] == 1 && m[y][c] == 2 && !mark_adjacent(m, x, y)) {
                            orient(m, b, c);
                            changed = true;
                        }
                    }
                }
            }
        }
    }
}

Cpdag cpdag_from_marks(int p, const MarkMatrix& m) {
    std::vector<Edge> directed, undirected;
    for (int u = 0; u < p; ++u) {
        for (int v = 0; v < p; ++v) {
            if (m[u][v] == 2) directed.emplace_back(u, v);
            if (m[u][v] == 1 && u < v) undirected.emplace_back(u, v);
        }
    }
    return Cpdag(p, std::move(directed), std::move(undirected));
}

}  // namespace

Cpdag cpdag_of(const Dag& g) {
    int p = g.num_vertices();
    MarkMatrix m(p, std::vector<char>(p, 0));
    for (auto [u, v] : g.edges()) m[u][v] = m[v][u] = 1;
    for (int c = 0; c < p; ++c) {
        const auto& pa = g.parents(c);
        for (std::size_t i = 0; i < pa.size(); ++i) {
            for (std::size_t j = i + 1; j < pa.size(); ++j) {
                if (!g.adjacent(pa[i], pa[j])) {
                    orient(m, pa[i], c);
                    orient(m, pa[j], c);
                }
            }
        }
    }
    meek_closure(m);
    return cpdag_from_marks(p, m);
}

Cpdag complete_pattern(int p, const std::vector<Edge>& skeleton, const std::vector<Edge>& arrows) {
    MarkMatrix m(p, std::vector<char>(p, 0));
    for (auto [a, b] : skeleton) {
        check_vertex_index(p, a, "complete_pattern");
        check_vertex_index(p, b, "complete_pattern");
        m[a][b] = m[b][a] = 1;
    }
    for (auto [u, v] : arrows) {
        if (!mark_adjacent(m, u, v))
            throw std::invalid_argument("complete_pattern: arrow outside the skeleton.");
        orient(m, u, v);
    }
    meek_closure(m);
    return cpdag_from_marks(p, m);
}

std::vector<std::array<int, 3>> v_structures(const Dag& g) {
    int p = g.num_vertices();
    std::vector<std::vector<int>> parents(p);
    std::vector<std::vector<char>> adjacent(p, std::vector<char>(p, 0));
    for (int v = 0; v < p; ++v) parents[v] = g.parents(v);
    for (auto [u, v] : g.edges()) adjacent[u][v] = adjacent[v][u] = 1;
    return v_structures(p, parents, adjacent);
}

std::vector<Dag> enumerate_mec(const Dag& g) {
    int p = g.num_vertices();
    Cpdag c = cpdag_of(g);
    const auto& und = c.undirected();
    int k = static_cast<int>(und.size());
    if (p > 12 && k > 20)
        throw capacity_error("enumerate_mec: graph too large for class enumeration.");
    if (k > 25) throw capacity_error("enumerate_mec: too many undirected edges to enumerate.");

    std::vector<std::vector<char>> adjacent(p, std::vector<char>(p, 0));
    for (auto [u, v] : g.edges()) adjacent[u][v] = adjacent[v][u] = 1;
    std::vector<std::vector<int>> dag_parents(p);
    for (auto [u, v] : g.edges()) dag_parents[v].push_back(u);
    auto target_vs = v_structures(p, dag_parents, adjacent);

    std::vector<Dag> members;
    std::vector<Edge> edges(c.directed());
    edges.resize(c.directed().size() + und.size());
    for (std::uint32_t mask = 0; mask < (1u << k); ++mask) {
        std::vector<std::vector<int>> children(p), parents(p);
        for (auto [u, v] : c.directed()) {
            children[u].push_back(v);
            parents[v].push_back(u);
        }
        for (int i = 0; i < k; ++i) {
            auto [a, b] = und[i];
            int from = (mask >> i & 1) ? b : a;
            int to = (mask >> i & 1) ? a : b;
            edges[c.directed().size() + i] = {from, to};
            children[from].push_back(to);
            parents[to].push_back(from);
        }
        if (static_cast<int>(kahn_topological_order(p, children).size()) != p) continue;
        if (v_structures(p, parents, adjacent) != target_vs) continue;
        members.emplace_back(p, edges);
    }
    return members;
}

namespace {

bool unshielded_pd_path_exists(const Cpdag& c, int prev, int cur, int target,
                               std::vector<char>& visited) {
    if (cur == target) return true;
    visited[cur] = 1;
    for (int next : c.possible_successors(cur)) {
        if (visited[next] || c.adjacent(prev, next)) continue;
        if (unshielded_pd_path_exists(c, cur, next, target, visited)) {
            visited[cur] = 0;
            return true;
        }
    }
    visited[cur] = 0;
    return false;
}

}  // namespace

RelationVerdict classify_relation(const Cpdag& c, int u, int v) {
    int p = c.num_vertices();
    check_vertex_index(p, u, "classify_relation");
    check_vertex_index(p, v, "classify_relation");
    if (u == v) throw std::invalid_argument("classify_relation: u and v must differ.");

    std::vector<char> reach(p, 0);
    std::deque<int> queue{u};
    reach[u] = 1;
    while (!queue.empty()) {
        int x = queue.front();
        queue.pop_front();
        for (int y : c.possible_successors(x)) {
            if (!reach[y]) {
                reach[y] = 1;
                queue.push_back(y);
            }
        }
    }
    if (!reach[v]) return RelationVerdict::DefiniteNonAncestral;

    std::vector<int> first;
    std::vector<char> visited(p, 0);
    visited[u] = 1;
    for (int w : c.possible_successors(u)) {
        if (w == v) {
            first.push_back(w);
            continue;
        }
        if (unshielded_pd_path_exists(c, u, w, v, visited)) first.push_back(w);
    }
    if (!first.empty()) {
        for (int a : first)
            if (c.has_directed(u, a)) return RelationVerdict::DefiniteAncestral;
        for (std::size_t i = 0; i < first.size(); ++i)
            for (std::size_t j = i + 1; j < first.size(); ++j)
                if (!c.adjacent(first[i], first[j])) return RelationVerdict::DefiniteAncestral;
    }
    return RelationVerdict::Undetermined;
}

DnaSet dna_ground_truth(const Dag& g) {
    auto members = enumerate_mec(g);
    int p = g.num_vertices();
    DnaSet d(p);
    for (int u = 0; u < p; ++u) {
        for (int v = 0; v < p; ++v) {
            if (u == v) continue;
            bool ancestral_somewhere = false;
            for (const auto& member : members) {
                if (member.is_ancestor(u, v)) {
                    ancestral_somewhere = true;
                    break;
                }
            }
            if (!ancestral_somewhere) d.add(u, v);
        }
    }
    return d;
}

DnaSet dna_from_cpdag(const Cpdag& c) {
    int p = c.num_vertices();
    DnaSet d(p);
    for (int u = 0; u < p; ++u)
        for (int v = 0; v < p; ++v)
            if (u != v && classify_relation(c, u, v) == RelationVerdict::DefiniteNonAncestral)
                d.add(u, v);
    return d;
}

UndirectedGraph moral_graph_over(const Dag& g, const std::vector<int>& subset) {
    int p = g.num_vertices();
    std::vector<char> in(p, 0);
    for (int v : subset) {
        check_vertex_index(p, v, "moral_graph_over");
        if (in[v]) throw std::invalid_argument("moral_graph_over: duplicate vertex in subset.");
        in[v] = 1;
    }
    std::vector<int> vertices(subset);
    std::sort(vertices.begin(), vertices.end());
    std::vector<Edge> edges;
    for (std::size_t i = 0; i < vertices.size(); ++i) {
        for (std::size_t j = i + 1; j < vertices.size(); ++j) {
            std::vector<int> cond;
            cond.reserve(vertices.size() - 2);
            for (int w : vertices)
                if (w != vertices[i] && w != vertices[j]) cond.push_back(w);
            if (!d_separated(g, vertices[i], vertices[j], cond))
                edges.emplace_back(vertices[i], vertices[j]);
        }
    }
    return UndirectedGraph(p, std::move(edges));
}

}  // namespace causaldna
