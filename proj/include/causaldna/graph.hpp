#ifndef CAUSALDNA_GRAPH_HPP
#define CAUSALDNA_GRAPH_HPP

#include <array>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace causaldna {

using Edge = std::pair<int, int>;

// Directed acyclic graph over vertices {0, ..., p-1}. Immutable after
// construction; construction validates indices, rejects self loops, duplicate
// edges and cycles.
class Dag {
public:
    Dag(int p, std::vector<Edge> edges, std::optional<std::vector<std::string>> labels = std::nullopt);

    int num_vertices() const { return p_; }
    const std::vector<Edge>& edges() const { return edges_; }
    int num_edges() const { return static_cast<int>(edges_.size()); }
    const std::vector<int>& parents(int v) const;
    const std::vector<int>& children(int v) const;
    bool has_edge(int parent, int child) const;
    bool adjacent(int u, int v) const { return has_edge(u, v) || has_edge(v, u); }

    // Ancestor relation with the reflexive convention: is_ancestor(v, v) is true.
    bool is_ancestor(int u, int v) const;
    // Ancestors of v, including v itself, in ascending order.
    std::vector<int> ancestors_of(int v) const;

    const std::vector<int>& topological_order() const { return topo_order_; }
    const std::optional<std::vector<std::string>>& labels() const { return labels_; }

private:
    void check_vertex(int v) const;

    int p_;
    std::vector<Edge> edges_;
    std::vector<std::vector<int>> parents_;
    std::vector<std::vector<int>> children_;
    std::vector<int> topo_order_;
    std::vector<std::vector<char>> ancestor_;  // ancestor_[u][v]: u is ancestor of v
    std::optional<std::vector<std::string>> labels_;
};

// Undirected graph over {0, ..., p-1}; edges stored as ordered pairs (a, b)
// with a < b.
class UndirectedGraph {
public:
    UndirectedGraph(int p, std::vector<Edge> edges);

    int num_vertices() const { return p_; }
    const std::vector<Edge>& edges() const { return edges_; }
    int num_edges() const { return static_cast<int>(edges_.size()); }
    bool has_edge(int u, int v) const;
    const std::vector<int>& neighbors(int v) const;

    // Number of edges with both endpoints in the given vertex set.
    int num_edges_within(const std::vector<int>& vertices) const;

private:
    int p_;
    std::vector<Edge> edges_;
    std::vector<std::vector<int>> adj_;
};

// Partially directed graph with disjoint directed and undirected edge sets,
// as produced by completing a DAG under Meek's rules.
class Cpdag {
public:
    Cpdag(int p, std::vector<Edge> directed, std::vector<Edge> undirected);

    int num_vertices() const { return p_; }
    const std::vector<Edge>& directed() const { return directed_; }
    const std::vector<Edge>& undirected() const { return undirected_; }
    bool has_directed(int u, int v) const;
    bool has_undirected(int u, int v) const;
    bool adjacent(int u, int v) const;
    UndirectedGraph skeleton() const;
    // Neighbors reachable from v by an out-arrow or an undirected edge.
    const std::vector<int>& possible_successors(int v) const;

    bool operator==(const Cpdag& other) const;

private:
    int p_;
    std::vector<Edge> directed_;
    std::vector<Edge> undirected_;
    std::vector<std::vector<char>> mark_;  // 0 none, 1 undirected, 2 arrow from row to col
    std::vector<std::vector<int>> succ_;
};

enum class RelationVerdict { DefiniteAncestral, DefiniteNonAncestral, Undetermined };

// Set of ordered vertex pairs (u, v) meaning "u is an ancestor of v in no
// member of the equivalence class". Pairs (v, v) are rejected.
class DnaSet {
public:
    explicit DnaSet(int p);

    int num_vertices() const { return p_; }
    void add(int u, int v);
    bool contains(int u, int v) const;
    int size() const { return count_; }
    // All pairs in lexicographic order.
    std::vector<Edge> pairs() const;

    bool operator==(const DnaSet& other) const { return p_ == other.p_ && matrix_ == other.matrix_; }

private:
    int p_;
    int count_;
    std::vector<char> matrix_;
};

// d-separation of u and v given s, decided on the moralized ancestral subgraph.
bool d_separated(const Dag& g, int u, int v, const std::vector<int>& s);

// Completed partially directed graph of the equivalence class of g:
// v-structure arrows plus the closure under Meek rules R1-R3.
Cpdag cpdag_of(const Dag& g);

// Orients the given arrows within the skeleton, closes under Meek rules R1-R3
// and returns the resulting partially directed graph. Later arrows overwrite
// earlier conflicting ones.
Cpdag complete_pattern(int p, const std::vector<Edge>& skeleton, const std::vector<Edge>& arrows);

// Colliders a -> c <- b of g with a, b non-adjacent, as sorted canonical
// (min(a,b), c, max(a,b)) triples. Two DAGs on the same skeleton are Markov
// equivalent iff these lists coincide.
std::vector<std::array<int, 3>> v_structures(const Dag& g);

// Every DAG Markov equivalent to g, by orienting the undirected edges of
// cpdag_of(g) in all ways and keeping acyclic orientations with unchanged
// v-structures. Guarded against infeasible enumeration sizes.
std::vector<Dag> enumerate_mec(const Dag& g);

// Classifies the ancestral relation of u to v across the class described by c.
RelationVerdict classify_relation(const Cpdag& c, int u, int v);

// Definite non-ancestral pairs of g, brute forced over enumerate_mec(g).
DnaSet dna_ground_truth(const Dag& g);

// Definite non-ancestral pairs read off a completed graph: (u, v) is included
// iff classify_relation(c, u, v) is DefiniteNonAncestral. Agrees with
// dna_ground_truth on completed graphs of DAGs without enumerating the class.
DnaSet dna_from_cpdag(const Cpdag& c);

// Moral graph of the marginal model over the given vertex subset: i and j are
// joined iff they are d-connected given the rest of the subset. Vertex indices
// are preserved; vertices outside the subset are isolated.
UndirectedGraph moral_graph_over(const Dag& g, const std::vector<int>& subset);

}  // namespace causaldna

#endif  // CAUSALDNA_GRAPH_HPP
