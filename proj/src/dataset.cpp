#include "ogo/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "ogo/rng.hpp"

namespace ogo {

void LabeledDataset::validate() const {
    if (features.rows < 1) throw std::invalid_argument("dataset: N must be >= 1");
    if (q_count < 2) throw std::invalid_argument("dataset: q_count must be >= 2");
    if (static_cast<int>(labels.size()) != features.rows)
        throw std::invalid_argument("dataset: label count does not match row count");
    for (double v : features.data)
        if (!std::isfinite(v)) throw std::invalid_argument("dataset: non-finite feature value");
    for (int y : labels)
        if (y < 0 || y >= q_count)
            throw std::invalid_argument("dataset: label out of range");
}

namespace {

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cell;
    std::stringstream ss(line);
    while (std::getline(ss, cell, ',')) out.push_back(trim(cell));
    if (!line.empty() && line.back() == ',') out.push_back("");
    return out;
}

double parse_number(const std::string& cell, const char* what, int row) {
    if (cell.empty())
        throw std::runtime_error(std::string("load_csv: empty ") + what + " cell at data row " +
                                 std::to_string(row));
    char* end = nullptr;
    const double v = std::strtod(cell.c_str(), &end);
    if (end != cell.c_str() + cell.size())
        throw std::runtime_error(std::string("load_csv: non-numeric ") + what + " '" + cell +
                                 "' at data row " + std::to_string(row));
    return v;
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

} // namespace

CsvDataset load_csv(const std::string& path, const std::string& label_column) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("load_csv: cannot open '" + path + "'");

    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("load_csv: empty file '" + path + "'");
    const std::vector<std::string> header = split_csv_line(line);

    int label_idx = -1;
    for (std::size_t i = 0; i < header.size(); ++i)
        if (header[i] == label_column) label_idx = static_cast<int>(i);
    if (label_idx < 0)
        throw std::runtime_error("load_csv: label column '" + label_column + "' not found");
    if (header.size() < 2)
        throw std::runtime_error("load_csv: need at least one feature column");

    CsvDataset out;
    out.label_column = label_column;
    for (std::size_t i = 0; i < header.size(); ++i)
        if (static_cast<int>(i) != label_idx) out.feature_names.push_back(header[i]);

    std::vector<double> values;
    std::vector<double> raw_labels;
    const int d = static_cast<int>(header.size()) - 1;
    int row = 0;
    while (std::getline(in, line)) {
        if (trim(line).empty()) continue;
        const std::vector<std::string> cells = split_csv_line(line);
        if (cells.size() != header.size())
            throw std::runtime_error("load_csv: row " + std::to_string(row) + " has " +
                                     std::to_string(cells.size()) + " cells, expected " +
                                     std::to_string(header.size()));
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (static_cast<int>(i) == label_idx) {
                raw_labels.push_back(parse_number(cells[i], "label", row));
            } else {
                const double v = parse_number(cells[i], "feature", row);
                if (!std::isfinite(v))
                    throw std::runtime_error("load_csv: non-finite feature at data row " +
                                             std::to_string(row));
                values.push_back(v);
            }
        }
        ++row;
    }
    if (row == 0) throw std::runtime_error("load_csv: no data rows in '" + path + "'");

    // Remap labels to contiguous 0..Q-1 preserving numeric order.
    std::map<double, int> mapping;
    for (double v : raw_labels) mapping.emplace(v, 0);
    if (mapping.size() < 2)
        throw std::runtime_error("load_csv: fewer than 2 distinct labels");
    int next = 0;
    for (auto& [value, idx] : mapping) {
        idx = next++;
        out.label_values.push_back(value);
    }

    out.dataset.features = Matrix(row, d);
    out.dataset.features.data = std::move(values);
    out.dataset.labels.reserve(raw_labels.size());
    for (double v : raw_labels) out.dataset.labels.push_back(mapping.at(v));
    out.dataset.q_count = static_cast<int>(mapping.size());
    out.dataset.validate();
    return out;
}

void write_csv(const std::string& path, const LabeledDataset& ds,
               const std::vector<std::string>& feature_names, const std::string& label_column) {
    if (static_cast<int>(feature_names.size()) != ds.dim())
        throw std::invalid_argument("write_csv: feature name count mismatch");
    std::ofstream outf(path);
    if (!outf) throw std::runtime_error("write_csv: cannot open '" + path + "' for writing");
    for (const auto& name : feature_names) outf << name << ',';
    outf << label_column << '\n';
    for (int i = 0; i < ds.size(); ++i) {
        for (int j = 0; j < ds.dim(); ++j) outf << format_double(ds.features(i, j)) << ',';
        outf << ds.labels[i] << '\n';
    }
    if (!outf) throw std::runtime_error("write_csv: write failed for '" + path + "'");
}

std::vector<int> class_counts(const LabeledDataset& ds) {
    std::vector<int> counts(ds.q_count, 0);
    for (int y : ds.labels) ++counts[y];
    return counts;
}

namespace {

// Indices of each class, then shuffled in place with a per-class sub-stream.
std::vector<std::vector<int>> shuffled_class_indices(const LabeledDataset& ds, std::uint64_t seed,
                                                     const char* tag) {
    std::vector<std::vector<int>> by_class(ds.q_count);
    for (int i = 0; i < ds.size(); ++i) by_class[ds.labels[i]].push_back(i);
    for (int c = 0; c < ds.q_count; ++c) {
        Rng rng(derive_seed(seed, tag, static_cast<std::uint64_t>(c)));
        auto& idx = by_class[c];
        for (std::size_t i = idx.size(); i > 1; --i)
            std::swap(idx[i - 1], idx[rng.below(i)]);
    }
    return by_class;
}

} // namespace

SplitPlan stratified_kfold(const LabeledDataset& ds, int k, std::uint64_t seed) {
    ds.validate();
    if (k < 2) throw std::invalid_argument("stratified_kfold: k must be >= 2");
    const std::vector<int> counts = class_counts(ds);
    for (int c = 0; c < ds.q_count; ++c)
        if (counts[c] < k)
            throw std::invalid_argument("stratified_kfold: class " + std::to_string(c) + " has " +
                                        std::to_string(counts[c]) + " samples, fewer than k=" +
                                        std::to_string(k));

    const auto by_class = shuffled_class_indices(ds, seed, "kfold-class");
    std::vector<std::vector<int>> test(k);
    // One round-robin pointer kept across classes, so remainders spread over
    // all folds instead of piling up on the first ones.
    int pointer = 0;
    for (int c = 0; c < ds.q_count; ++c) {
        for (int idx : by_class[c]) {
            test[pointer].push_back(idx);
            pointer = (pointer + 1) % k;
        }
    }

    SplitPlan plan;
    plan.seed = seed;
    plan.folds.resize(k);
    std::vector<char> in_test(ds.size());
    for (int f = 0; f < k; ++f) {
        std::fill(in_test.begin(), in_test.end(), 0);
        for (int idx : test[f]) in_test[idx] = 1;
        auto& fold = plan.folds[f];
        fold.test_indices = test[f];
        std::sort(fold.test_indices.begin(), fold.test_indices.end());
        for (int i = 0; i < ds.size(); ++i)
            if (!in_test[i]) fold.train_indices.push_back(i);
    }
    return plan;
}

std::pair<std::vector<int>, std::vector<int>>
holdout_split(const LabeledDataset& ds, double train_fraction, std::uint64_t seed) {
    ds.validate();
    if (!(train_fraction > 0.0 && train_fraction < 1.0))
        throw std::invalid_argument("holdout_split: train_fraction must be in (0, 1)");

    const auto by_class = shuffled_class_indices(ds, seed, "holdout-class");
    std::vector<int> train, val;
    for (int c = 0; c < ds.q_count; ++c) {
        const auto& idx = by_class[c];
        const int n_train = static_cast<int>(std::floor(train_fraction * idx.size() + 0.5));
        for (std::size_t i = 0; i < idx.size(); ++i)
            (static_cast<int>(i) < n_train ? train : val).push_back(idx[i]);
    }
    if (train.empty() || val.empty())
        throw std::runtime_error("holdout_split: a side is empty after stratified rounding");
    std::sort(train.begin(), train.end());
    std::sort(val.begin(), val.end());
    return {std::move(train), std::move(val)};
}

LabeledDataset synth_ordinal_gaussians(const std::vector<int>& class_sizes, int d, double spacing,
                                       double spread, std::uint64_t seed) {
    if (class_sizes.empty()) throw std::invalid_argument("synth_ordinal_gaussians: empty class_sizes");
    if (!(spacing > 0.0)) throw std::invalid_argument("synth_ordinal_gaussians: spacing must be > 0");
    if (!(spread > 0.0)) throw std::invalid_argument("synth_ordinal_gaussians: spread must be > 0");
    if (d < 1) throw std::invalid_argument("synth_ordinal_gaussians: d must be >= 1");

    const int n = std::accumulate(class_sizes.begin(), class_sizes.end(), 0);
    LabeledDataset ds;
    ds.features = Matrix(n, d);
    ds.labels.reserve(n);
    ds.q_count = static_cast<int>(class_sizes.size());

    Rng rng(seed);
    int row = 0;
    for (int q = 0; q < ds.q_count; ++q) {
        for (int s = 0; s < class_sizes[q]; ++s, ++row) {
            for (int j = 0; j < d; ++j) {
                const double mean = (j == 0) ? q * spacing : 0.0;
                ds.features(row, j) = mean + spread * rng.normal();
            }
            ds.labels.push_back(q);
        }
    }
    ds.validate();
    return ds;
}

LabeledDataset subset(const LabeledDataset& ds, const std::vector<int>& indices) {
    LabeledDataset out;
    out.features = Matrix(static_cast<int>(indices.size()), ds.dim());
    out.labels.reserve(indices.size());
    out.q_count = ds.q_count;
    for (std::size_t r = 0; r < indices.size(); ++r) {
        const auto src = ds.features.row(indices[r]);
        std::copy(src.begin(), src.end(), out.features.row(static_cast<int>(r)).begin());
        out.labels.push_back(ds.labels[indices[r]]);
    }
    return out;
}

} // namespace ogo
