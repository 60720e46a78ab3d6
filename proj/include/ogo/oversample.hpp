#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ogo/dataset.hpp"
#include "ogo/distribution.hpp"
#include "ogo/rng.hpp"

namespace ogo {

// Per-class synthetic counts: (max_k n_k) - n_q.
struct BalancePlan {
    std::vector<int> synth_counts;
};

enum class ProvenanceTag { intra, inter_low, inter_high, smote };

const char* provenance_tag_name(ProvenanceTag tag);

// One synthetic sample's origin: row = (1-delta)*x[endpoint_a] +
// delta*x[endpoint_b]. For inter-class edges endpoint_a is always the
// augmented-class endpoint. gamma_redraws counts rejected draws > 1.
struct Provenance {
    int endpoint_a;
    int endpoint_b;
    double delta;
    ProvenanceTag tag;
    int gamma_redraws = 0;
};

struct SyntheticBatch {
    Matrix features; // m x d
    int label = 0;
    std::vector<Provenance> provenance;
    long long gamma_redraws_total = 0;
};

BalancePlan balance_plan(const LabeledDataset& ds);

// Classic SMOTE restricted to class q: random sample, random one of its k
// intra-class nearest neighbours, uniform interpolation weight.
SyntheticBatch smote(const LabeledDataset& ds, int q, int n, int k, Rng& rng);

// OGO-SP generation on the frontier graph of class q. Uniform edge choice
// repeated (bounded at 1000 tries) until one endpoint has class q; intra
// edges use uniform delta, inter edges draw delta from `frontier` with
// rejection of gamma draws > 1.
SyntheticBatch ogo_sp(const LabeledDataset& ds, int q, int n, int k,
                      const FrontierDistribution& frontier, Rng& rng);

enum class AugmentMethod { smote, ogo_sp };

struct AugmentResult {
    LabeledDataset dataset; // original rows first, then synthetics by class
    // Parallel to the synthetic suffix of dataset: class + provenance.
    std::vector<int> synthetic_class;
    std::vector<Provenance> provenance;
    long long gamma_redraws_total = 0;
};

// Balances every class up to the majority count. Per-class generation uses a
// sub-stream derived from `seed`, so the result is reproducible and classes
// could be generated concurrently. Fails atomically: nothing is produced if
// any class's generation fails. `frontier` is ignored for SMOTE.
AugmentResult augment(const LabeledDataset& ds, AugmentMethod method,
                      const FrontierDistribution& frontier, int k, std::uint64_t seed);

// Provenance CSV: sample id (row index in the augmented dataset), edge
// endpoints, delta, tag, gamma redraw count.
void write_provenance_csv(const std::string& path, const AugmentResult& res);

} // namespace ogo
