#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "ogo/matrix.hpp"

namespace ogo {

// A feature matrix with ordinal class labels 0..q_count-1. Immutable by
// convention: everything downstream takes it by const reference.
struct LabeledDataset {
    Matrix features;         // N x d, all entries finite
    std::vector<int> labels; // length N, values in [0, q_count)
    int q_count = 0;

    int size() const { return features.rows; }
    int dim() const { return features.cols; }

    // Throws std::invalid_argument on any violated invariant.
    void validate() const;
};

struct SplitPlan {
    struct Fold {
        std::vector<int> train_indices;
        std::vector<int> test_indices;
    };
    std::vector<Fold> folds;
    std::uint64_t seed = 0;
};

struct CsvDataset {
    LabeledDataset dataset;
    std::vector<std::string> feature_names;
    std::string label_column;
    // Original label values in ascending order; position = contiguous label.
    std::vector<double> label_values;
};

// Loads a headered CSV with one numeric column per feature and one label
// column. Labels are remapped to contiguous 0..Q-1 preserving numeric order;
// the mapping is returned in label_values.
CsvDataset load_csv(const std::string& path, const std::string& label_column);

// Writes the dataset back out with full double precision (%.17g), so a
// load/write cycle preserves every feature value.
void write_csv(const std::string& path, const LabeledDataset& ds,
               const std::vector<std::string>& feature_names, const std::string& label_column);

std::vector<int> class_counts(const LabeledDataset& ds);

// Stratified k-fold: samples of each class are shuffled with a per-class
// sub-stream of the seed, then dealt to folds by a single round-robin
// pointer that keeps advancing across classes.
SplitPlan stratified_kfold(const LabeledDataset& ds, int k, std::uint64_t seed);

// Stratified single split; first member gets round(train_fraction * n_c) of
// every class c.
std::pair<std::vector<int>, std::vector<int>>
holdout_split(const LabeledDataset& ds, double train_fraction, std::uint64_t seed);

// Synthetic ordinal benchmark: class q is an isotropic Gaussian with mean
// q*spacing along the first axis and standard deviation `spread`.
LabeledDataset synth_ordinal_gaussians(const std::vector<int>& class_sizes, int d,
                                       double spacing, double spread, std::uint64_t seed);

// Row subset (e.g. one side of a split). Keeps q_count.
LabeledDataset subset(const LabeledDataset& ds, const std::vector<int>& indices);

} // namespace ogo
