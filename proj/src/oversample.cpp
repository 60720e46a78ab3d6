#include "ogo/oversample.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "ogo/graph.hpp"

namespace ogo {

const char* provenance_tag_name(ProvenanceTag tag) {
    switch (tag) {
    case ProvenanceTag::intra: return "intra";
    case ProvenanceTag::inter_low: return "inter-low";
    case ProvenanceTag::inter_high: return "inter-high";
    case ProvenanceTag::smote: return "smote";
    }
    return "?";
}

BalancePlan balance_plan(const LabeledDataset& ds) {
    ds.validate();
    const std::vector<int> counts = class_counts(ds);
    for (int c = 0; c < ds.q_count; ++c)
        if (counts[c] == 0)
            throw std::invalid_argument("balance_plan: class " + std::to_string(c) + " is empty");
    const int target = *std::max_element(counts.begin(), counts.end());
    BalancePlan plan;
    plan.synth_counts.reserve(counts.size());
    for (int c : counts) plan.synth_counts.push_back(target - c);
    return plan;
}

namespace {

void interpolate(const LabeledDataset& ds, int i, int j, double delta, std::span<double> out) {
    const auto xi = ds.features.row(i);
    const auto xj = ds.features.row(j);
    for (std::size_t c = 0; c < out.size(); ++c)
        out[c] = (1.0 - delta) * xi[c] + delta * xj[c];
}

} // namespace

SyntheticBatch smote(const LabeledDataset& ds, int q, int n, int k, Rng& rng) {
    ds.validate();
    if (n < 0) throw std::invalid_argument("smote: negative sample count");
    std::vector<int> members;
    for (int i = 0; i < ds.size(); ++i)
        if (ds.labels[i] == q) members.push_back(i);
    if (members.size() < 2)
        throw std::invalid_argument("smote: class " + std::to_string(q) +
                                    " needs at least 2 samples");
    if (k > static_cast<int>(members.size()) - 1)
        throw std::invalid_argument("smote: k exceeds class size - 1");

    SyntheticBatch batch;
    batch.label = q;
    batch.features = Matrix(n, ds.dim());
    if (n == 0) return batch;

    // Intra-class kNN table with the shared tie-breaking (lower index wins).
    const DirectedNeighborSet nn = knn_neighborhood(ds, q, q, k);
    std::vector<std::vector<int>> neighbors(ds.size());
    for (const auto& [i, j] : nn.edges) neighbors[i].push_back(j);

    for (int s = 0; s < n; ++s) {
        const int i = members[rng.below(members.size())];
        const int j = neighbors[i][rng.below(neighbors[i].size())];
        const double delta = rng.u01();
        interpolate(ds, i, j, delta, batch.features.row(s));
        batch.provenance.push_back({i, j, delta, ProvenanceTag::smote, 0});
    }
    return batch;
}

SyntheticBatch ogo_sp(const LabeledDataset& ds, int q, int n, int k,
                      const FrontierDistribution& frontier, Rng& rng) {
    ds.validate();
    if (n < 0) throw std::invalid_argument("ogo_sp: negative sample count");
    const FrontierGraph graph = build_frontier_graph(ds, q, k);
    if (graph.edges.empty())
        throw std::runtime_error("ogo_sp: frontier graph for class " + std::to_string(q) +
                                 " has no edges; try a larger neighbourhood size k");

    SyntheticBatch batch;
    batch.label = q;
    batch.features = Matrix(n, ds.dim());

    constexpr int max_edge_tries = 1000;
    constexpr int max_gamma_redraws = 100000;
    for (int s = 0; s < n; ++s) {
        // Alg. 1 loop guard: resample until one endpoint carries class q.
        const WeightedEdge* edge = nullptr;
        for (int tries = 0; tries < max_edge_tries; ++tries) {
            const WeightedEdge& e = graph.edges[rng.below(graph.edges.size())];
            if (ds.labels[e.a] == q || ds.labels[e.b] == q) {
                edge = &e;
                break;
            }
        }
        if (!edge)
            throw std::runtime_error("ogo_sp: zero eligible edges (no class-" + std::to_string(q) +
                                     " endpoint found after " + std::to_string(max_edge_tries) +
                                     " draws)");

        int i = edge->a, j = edge->b;
        double delta;
        int redraws = 0;
        ProvenanceTag tag;
        if (ds.labels[i] == q && ds.labels[j] == q) {
            tag = ProvenanceTag::intra;
            delta = rng.u01();
        } else {
            if (ds.labels[i] != q) std::swap(i, j); // x_i must be the class-q endpoint
            tag = (ds.labels[j] == q - 1) ? ProvenanceTag::inter_low : ProvenanceTag::inter_high;
            delta = sample(frontier, rng);
            // Gamma is unbounded; draws past the segment end are rejected so
            // the sample stays between the endpoints.
            while (delta > 1.0) {
                if (++redraws > max_gamma_redraws)
                    throw std::runtime_error("ogo_sp: frontier distribution keeps drawing > 1");
                delta = sample(frontier, rng);
            }
        }
        interpolate(ds, i, j, delta, batch.features.row(s));
        batch.provenance.push_back({i, j, delta, tag, redraws});
        batch.gamma_redraws_total += redraws;
    }
    return batch;
}

AugmentResult augment(const LabeledDataset& ds, AugmentMethod method,
                      const FrontierDistribution& frontier, int k, std::uint64_t seed) {
    const BalancePlan plan = balance_plan(ds);

    // Generate every class batch first so a failure leaves nothing behind.
    std::vector<SyntheticBatch> batches;
    for (int q = 0; q < ds.q_count; ++q) {
        if (plan.synth_counts[q] == 0) continue;
        Rng rng(derive_seed(seed, "augment-class", static_cast<std::uint64_t>(q)));
        batches.push_back(method == AugmentMethod::smote
                              ? smote(ds, q, plan.synth_counts[q], k, rng)
                              : ogo_sp(ds, q, plan.synth_counts[q], k, frontier, rng));
    }

    int total = ds.size();
    for (const auto& b : batches) total += b.features.rows;

    AugmentResult res;
    res.dataset.q_count = ds.q_count;
    res.dataset.features = Matrix(total, ds.dim());
    res.dataset.labels.reserve(total);
    std::copy(ds.features.data.begin(), ds.features.data.end(), res.dataset.features.data.begin());
    res.dataset.labels = ds.labels;

    int row = ds.size();
    for (const auto& b : batches) {
        for (int s = 0; s < b.features.rows; ++s, ++row) {
            const auto src = b.features.row(s);
            std::copy(src.begin(), src.end(), res.dataset.features.row(row).begin());
            res.dataset.labels.push_back(b.label);
            res.synthetic_class.push_back(b.label);
            res.provenance.push_back(b.provenance[s]);
        }
        res.gamma_redraws_total += b.gamma_redraws_total;
    }
    return res;
}

void write_provenance_csv(const std::string& path, const AugmentResult& res) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("write_provenance_csv: cannot open '" + path + "'");
    out << "sample_id,class,edge_i,edge_j,delta,tag,gamma_redraws\n";
    const int originals = res.dataset.size() - static_cast<int>(res.provenance.size());
    char buf[40];
    for (std::size_t s = 0; s < res.provenance.size(); ++s) {
        const Provenance& p = res.provenance[s];
        std::snprintf(buf, sizeof(buf), "%.17g", p.delta);
        out << originals + s << ',' << res.synthetic_class[s] << ',' << p.endpoint_a << ','
            << p.endpoint_b << ',' << buf << ',' << provenance_tag_name(p.tag) << ','
            << p.gamma_redraws << '\n';
    }
    if (!out) throw std::runtime_error("write_provenance_csv: write failed for '" + path + "'");
}

} // namespace ogo
