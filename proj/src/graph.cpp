#include "ogo/graph.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <queue>
#include <set>
#include <stdexcept>

namespace ogo {

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();

std::vector<int> indices_of_class(const LabeledDataset& ds, int c) {
    std::vector<int> out;
    for (int i = 0; i < ds.size(); ++i)
        if (ds.labels[i] == c) out.push_back(i);
    return out;
}

std::pair<int, int> normalized(int a, int b) { return {std::min(a, b), std::max(a, b)}; }

} // namespace

const char* edge_tag_name(EdgeTag tag) {
    switch (tag) {
    case EdgeTag::intra: return "intra";
    case EdgeTag::inter_low: return "inter-low";
    case EdgeTag::inter_high: return "inter-high";
    }
    return "?";
}

void WeightedGraph::ensure(int v) {
    if (v >= static_cast<int>(present.size())) {
        present.resize(v + 1, 0);
        adj.resize(v + 1);
    }
}

void WeightedGraph::add_vertex(int v) {
    if (v < 0) throw std::invalid_argument("WeightedGraph: negative vertex id");
    ensure(v);
    present[v] = 1;
}

void WeightedGraph::add_edge(int a, int b, double w) {
    if (a == b) throw std::invalid_argument("WeightedGraph: self loop");
    if (w < 0.0) throw std::invalid_argument("WeightedGraph: negative weight");
    add_vertex(a);
    add_vertex(b);
    adj[a].emplace_back(b, w);
    adj[b].emplace_back(a, w);
}

bool WeightedGraph::contains(int v) const {
    return v >= 0 && v < static_cast<int>(present.size()) && present[v];
}

DirectedNeighborSet knn_neighborhood(const LabeledDataset& ds, int source_class, int target_class,
                                     int k) {
    ds.validate();
    if (k < 1) throw std::invalid_argument("knn_neighborhood: k must be >= 1");
    const std::vector<int> sources = indices_of_class(ds, source_class);
    const std::vector<int> targets = indices_of_class(ds, target_class);
    if (sources.empty())
        throw std::invalid_argument("knn_neighborhood: empty source class " +
                                    std::to_string(source_class));
    if (targets.empty())
        throw std::invalid_argument("knn_neighborhood: empty target class " +
                                    std::to_string(target_class));
    const int available =
        static_cast<int>(targets.size()) - (source_class == target_class ? 1 : 0);
    if (k > available)
        throw std::invalid_argument("knn_neighborhood: k=" + std::to_string(k) +
                                    " exceeds available targets (" + std::to_string(available) +
                                    ") in class " + std::to_string(target_class));

    DirectedNeighborSet out;
    std::vector<std::pair<double, int>> cand; // (squared distance, index)
    for (int i : sources) {
        cand.clear();
        for (int j : targets) {
            if (j == i) continue; // self excluded when classes coincide
            cand.emplace_back(squared_distance(ds.features.row(i), ds.features.row(j)), j);
        }
        // Ties break toward the lower sample index.
        std::sort(cand.begin(), cand.end());
        for (int t = 0; t < k; ++t) out.edges.emplace_back(i, cand[t].second);
    }
    return out;
}

std::vector<std::pair<int, int>> frontier_edges(const LabeledDataset& ds, int low_class,
                                                int high_class, int k) {
    const DirectedNeighborSet forward = knn_neighborhood(ds, low_class, high_class, k);
    const DirectedNeighborSet backward = knn_neighborhood(ds, high_class, low_class, k);
    std::set<std::pair<int, int>> fwd;
    for (const auto& [i, j] : forward.edges) fwd.insert(normalized(i, j));
    std::set<std::pair<int, int>> mutual;
    for (const auto& [i, j] : backward.edges) {
        const auto e = normalized(i, j);
        if (fwd.count(e)) mutual.insert(e);
    }
    return {mutual.begin(), mutual.end()};
}

std::vector<std::pair<int, int>> intra_edges(const LabeledDataset& ds, int q, int k) {
    const std::vector<int> members = indices_of_class(ds, q);
    if (members.size() < 2)
        throw std::invalid_argument("intra_edges: class " + std::to_string(q) +
                                    " has fewer than 2 samples");
    const DirectedNeighborSet nn = knn_neighborhood(ds, q, q, k);
    std::set<std::pair<int, int>> edges;
    for (const auto& [i, j] : nn.edges) edges.insert(normalized(i, j));
    return {edges.begin(), edges.end()};
}

ShortestPaths dijkstra(const WeightedGraph& g, int source) {
    if (!g.contains(source))
        throw std::invalid_argument("dijkstra: source vertex " + std::to_string(source) +
                                    " not in graph");
    const int n = g.capacity();
    ShortestPaths sp;
    sp.dist.assign(n, inf);
    sp.pred.assign(n, -1);
    sp.dist[source] = 0.0;

    using Item = std::pair<double, int>; // (distance, vertex), lexicographic
    std::priority_queue<Item, std::vector<Item>, std::greater<Item>> queue;
    queue.emplace(0.0, source);
    std::vector<char> settled(n, 0);
    while (!queue.empty()) {
        const auto [d, u] = queue.top();
        queue.pop();
        if (settled[u]) continue;
        settled[u] = 1;
        for (const auto& [v, w] : g.adj[u]) {
            if (d + w < sp.dist[v]) {
                sp.dist[v] = d + w;
                queue.emplace(sp.dist[v], v);
            }
        }
    }

    // Canonical predecessors, fixed after the distances: among neighbours u
    // with dist[u] + w == dist[v], take the one minimizing (dist[u], u).
    // The brute-force reference applies the same rule, so equal-cost paths
    // decompose into identical edge sets on both sides.
    for (int v = 0; v < n; ++v) {
        if (v == source || !g.contains(v) || sp.dist[v] == inf) continue;
        double best_d = inf;
        int best_u = -1;
        for (const auto& [u, w] : g.adj[v]) {
            if (sp.dist[u] + w == sp.dist[v]) {
                if (sp.dist[u] < best_d || (sp.dist[u] == best_d && u < best_u)) {
                    best_d = sp.dist[u];
                    best_u = u;
                }
            }
        }
        sp.pred[v] = best_u;
    }
    return sp;
}

FrontierComponents frontier_components(const LabeledDataset& ds, int q, int k) {
    ds.validate();
    if (q < 0 || q >= ds.q_count)
        throw std::invalid_argument("frontier_components: class index out of range");
    if (indices_of_class(ds, q).empty())
        throw std::invalid_argument("frontier_components: class " + std::to_string(q) +
                                    " is empty");

    FrontierComponents fc;
    if (q > 0) fc.inter_low = frontier_edges(ds, q - 1, q, k);
    fc.intra = intra_edges(ds, q, k);
    if (q + 1 < ds.q_count) fc.inter_high = frontier_edges(ds, q, q + 1, k);

    auto endpoint_set = [](const std::vector<std::pair<int, int>>& edges) {
        std::set<int> s;
        for (const auto& [a, b] : edges) {
            s.insert(a);
            s.insert(b);
        }
        return std::vector<int>(s.begin(), s.end());
    };
    // Extreme classes have no frontier on one side; V_{q,q} substitutes.
    fc.low_endpoints = (q > 0) ? endpoint_set(fc.inter_low) : endpoint_set(fc.intra);
    fc.high_endpoints =
        (q + 1 < ds.q_count) ? endpoint_set(fc.inter_high) : endpoint_set(fc.intra);
    return fc;
}

FrontierGraph build_frontier_graph(const LabeledDataset& ds, int q, int k) {
    const FrontierComponents fc = frontier_components(ds, q, k);

    WeightedGraph g;
    std::set<std::pair<int, int>> union_edges;
    auto add_edges = [&](const std::vector<std::pair<int, int>>& edges) {
        for (const auto& [a, b] : edges) {
            if (union_edges.insert(normalized(a, b)).second) {
                const double w = std::sqrt(
                    squared_distance(ds.features.row(a), ds.features.row(b)));
                g.add_edge(a, b, w);
            }
        }
    };
    add_edges(fc.inter_low);
    add_edges(fc.intra);
    add_edges(fc.inter_high);

    FrontierGraph out;
    out.augment_class = q;
    if (union_edges.empty()) return out;

    std::set<std::pair<int, int>> path_edges;
    const int n = g.capacity();
    for (int a : fc.low_endpoints) {
        if (!g.contains(a)) continue;
        const ShortestPaths sp = dijkstra(g, a);
        for (int b : fc.high_endpoints) {
            if (b == a) continue;
            if (!g.contains(b) || sp.dist[b] == inf) {
                ++out.unreachable_pairs;
                continue;
            }
            int v = b;
            int steps = 0;
            while (v != a) {
                const int u = sp.pred[v];
                if (u < 0 || ++steps > n)
                    throw std::runtime_error("build_frontier_graph: broken predecessor chain");
                path_edges.insert(normalized(u, v));
                v = u;
            }
        }
    }

    std::set<std::pair<int, int>> low_set(fc.inter_low.begin(), fc.inter_low.end());
    std::set<std::pair<int, int>> high_set(fc.inter_high.begin(), fc.inter_high.end());
    std::set<int> vertices;
    for (const auto& [a, b] : path_edges) {
        WeightedEdge e;
        e.a = a;
        e.b = b;
        e.weight = std::sqrt(squared_distance(ds.features.row(a), ds.features.row(b)));
        if (low_set.count({a, b})) {
            e.tag = EdgeTag::inter_low;
        } else if (high_set.count({a, b})) {
            e.tag = EdgeTag::inter_high;
        } else {
            e.tag = EdgeTag::intra;
        }
        out.edges.push_back(e);
        vertices.insert(a);
        vertices.insert(b);
    }
    out.vertices.assign(vertices.begin(), vertices.end());
    return out;
}

void write_graph_csv(const std::string& path, const FrontierGraph& g) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("write_graph_csv: cannot open '" + path + "'");
    out << "i,j,weight,tag\n";
    char buf[40];
    for (const auto& e : g.edges) {
        std::snprintf(buf, sizeof(buf), "%.17g", e.weight);
        out << e.a << ',' << e.b << ',' << buf << ',' << edge_tag_name(e.tag) << '\n';
    }
    if (!out) throw std::runtime_error("write_graph_csv: write failed for '" + path + "'");
}

} // namespace ogo
