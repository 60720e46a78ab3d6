#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "ogo/dataset.hpp"

namespace ogo {

// Ordered pairs (i, j): x_j is one of the k nearest targets of x_i.
struct DirectedNeighborSet {
    std::vector<std::pair<int, int>> edges;
};

enum class EdgeTag { intra, inter_low, inter_high };

const char* edge_tag_name(EdgeTag tag);

struct WeightedEdge {
    int a; // a < b
    int b;
    double weight; // L2 distance between the endpoint samples
    EdgeTag tag;
};

// Per-class frontier graph G_q: the edges that lie on shortest paths between
// the two adjacent-class frontiers.
struct FrontierGraph {
    int augment_class = 0;
    std::vector<int> vertices;       // sorted, every vertex incident to >= 1 edge
    std::vector<WeightedEdge> edges; // E_q
    std::size_t unreachable_pairs = 0; // endpoint pairs with no connecting path
};

// Sparse undirected graph over sample indices. Vertices must be registered
// (add_vertex / add_edge) before running shortest paths.
struct WeightedGraph {
    std::vector<std::vector<std::pair<int, double>>> adj;
    std::vector<char> present;

    void ensure(int v);
    void add_vertex(int v);
    void add_edge(int a, int b, double w);
    bool contains(int v) const;
    int capacity() const { return static_cast<int>(present.size()); }
};

struct ShortestPaths {
    std::vector<double> dist; // +inf if unreachable or absent
    std::vector<int> pred;    // -1 if none
};

// Directed k-nearest-neighbour set from source_class into target_class.
// Distance ties break toward the lower sample index; when the classes
// coincide the query point itself is excluded.
DirectedNeighborSet knn_neighborhood(const LabeledDataset& ds, int source_class,
                                     int target_class, int k);

// Mutual kNN edges between two classes: (i, j) kept iff each endpoint is in
// the other's neighbour set. Pairs are normalized (min, max).
std::vector<std::pair<int, int>> frontier_edges(const LabeledDataset& ds, int low_class,
                                                int high_class, int k);

// Intra-class kNN edges, no mutuality requirement; the union of both
// directions stored as unordered pairs.
std::vector<std::pair<int, int>> intra_edges(const LabeledDataset& ds, int q, int k);

// Dijkstra with canonical predecessors: after distances are fixed, pred[v]
// is the neighbour u with dist[u] + w(u,v) == dist[v] minimizing
// (dist[u], u) lexicographically. Any exact-tie path reconstruction
// therefore picks the same edges as the brute-force reference that applies
// the identical rule.
ShortestPaths dijkstra(const WeightedGraph& g, int source);

// The three constituent edge sets of G'_q plus the endpoint vertex sets used
// for the shortest-path sweep. For extreme classes the missing side is empty
// and V_{q,q} substitutes as the endpoint set.
struct FrontierComponents {
    std::vector<std::pair<int, int>> inter_low;  // E_{q-1,q}
    std::vector<std::pair<int, int>> intra;      // E_{q,q}
    std::vector<std::pair<int, int>> inter_high; // E_{q,q+1}
    std::vector<int> low_endpoints;              // sorted
    std::vector<int> high_endpoints;             // sorted
};

FrontierComponents frontier_components(const LabeledDataset& ds, int q, int k);

// Full construction: union graph G'_q, all shortest paths from every low
// endpoint to every high endpoint, E_q = edges appearing on those paths.
// An empty E_q is returned as-is (degenerate but valid).
FrontierGraph build_frontier_graph(const LabeledDataset& ds, int q, int k);

// Edge-list dump: header + one "i,j,weight,tag" row per edge.
void write_graph_csv(const std::string& path, const FrontierGraph& g);

} // namespace ogo
