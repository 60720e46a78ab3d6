// Test-only reference implementations. Everything here is written directly
// from the defining formulas, independently of the library code paths it
// checks (the only shared pieces are the dataset type and the documented
// tie-break rules, which both sides must implement identically).
#pragma once

#include <cstdint>
#include <functional>
#include <set>
#include <utility>
#include <vector>

#include "ogo/dataset.hpp"
#include "ogo/distribution.hpp"

namespace oracle {

// --- all-pairs shortest paths (brute force) --------------------------------

struct RefGraph {
    std::vector<std::vector<std::pair<int, double>>> adj;
    std::vector<char> present;

    void ensure(int v);
    void add_edge(int a, int b, double w);
};

struct RefShortest {
    std::vector<double> dist;
    std::vector<int> pred; // canonical: argmin (dist[u], u) over exact ties
};

// Relaxation to fixpoint (Bellman-Ford style), followed by the canonical
// predecessor rule shared with the library.
RefShortest ref_shortest_paths(const RefGraph& g, int source);

// --- frontier graph reference ----------------------------------------------

struct RefFrontier {
    std::set<std::pair<int, int>> edges;
    std::size_t unreachable_pairs = 0;
    std::vector<int> low_endpoints, high_endpoints;
};

std::vector<std::pair<int, int>> ref_knn_directed(const ogo::LabeledDataset& ds, int from_class,
                                                  int to_class, int k);
std::set<std::pair<int, int>> ref_mutual_edges(const ogo::LabeledDataset& ds, int a_class,
                                               int b_class, int k);
std::set<std::pair<int, int>> ref_intra_edges(const ogo::LabeledDataset& ds, int q, int k);
RefFrontier ref_frontier_graph(const ogo::LabeledDataset& ds, int q, int k);

// --- brute force metrics ----------------------------------------------------

struct RefMetrics {
    double ccr, gms, ms, gmsp, msp;
    double mae, amae, mmae;
    double kappa, tau, rho;
};

// Assumes every class occurs in y, y is not constant, and y_hat is not
// constant, so all metrics are defined.
RefMetrics ref_metrics(const std::vector<int>& y, const std::vector<int>& y_hat, int q_count);

// Full 2^n sign-pattern enumeration (zero differences dropped, midranks).
double ref_wilcoxon_enumeration(const std::vector<double>& a, const std::vector<double>& b);

// --- quadrature for special-function checks ---------------------------------

// Regularized incomplete beta/gamma by Gauss-Legendre panels with geometric
// refinement toward the singular endpoint and an analytic head term.
double quad_reg_inc_beta(double a, double b, double x);
double quad_reg_lower_inc_gamma(double a, double x);

// Integral of pdf(dist, x) over its support (checks normalization).
double integrate_pdf(const ogo::FrontierDistribution& dist);

// Kolmogorov-Smirnov distance between samples and an analytic CDF.
double ks_distance(std::vector<double> samples, const std::function<double(double)>& cdf);

} // namespace oracle
