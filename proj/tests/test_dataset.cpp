#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>

#include "ogo/dataset.hpp"

using namespace ogo;

namespace {

std::string temp_path(const std::string& name) {
    return (std::filesystem::temp_directory_path() / name).string();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    out << content;
}

// Fold sizes and per-class stratification checks for a SplitPlan.
void check_plan(const SplitPlan& plan, const LabeledDataset& ds) {
    const std::vector<int> counts = class_counts(ds);
    for (const auto& fold : plan.folds) {
        std::set<int> seen(fold.train_indices.begin(), fold.train_indices.end());
        for (int idx : fold.test_indices) {
            CHECK(seen.count(idx) == 0);
            seen.insert(idx);
        }
        CHECK(static_cast<int>(seen.size()) == ds.size());

        for (int c = 0; c < ds.q_count; ++c) {
            int in_test = 0;
            for (int idx : fold.test_indices)
                if (ds.labels[idx] == c) ++in_test;
            // Round-robin dealing gives each fold floor or ceil of n_c / k.
            const int k = static_cast<int>(plan.folds.size());
            CHECK(in_test >= counts[c] / k);
            CHECK(in_test <= (counts[c] + k - 1) / k);
        }
    }
}

} // namespace

TEST_CASE("load_csv basic readback and label remapping") {
    const std::string path = temp_path("ogo_test_basic.csv");
    write_file(path, "f0,f1,label\n1.5,2.0,0\n3.25,-1.0,1\n0.0,0.5,1\n9.0,4.0,2\n");
    const CsvDataset csv = load_csv(path, "label");
    CHECK(csv.dataset.size() == 4);
    CHECK(csv.dataset.dim() == 2);
    CHECK(csv.dataset.q_count == 3);
    CHECK(csv.dataset.labels == std::vector<int>{0, 1, 1, 2});
    CHECK(csv.dataset.features(1, 0) == 3.25);
    CHECK(csv.feature_names == std::vector<std::string>{"f0", "f1"});
}

TEST_CASE("load_csv remaps non-contiguous labels preserving order") {
    const std::string path = temp_path("ogo_test_remap.csv");
    write_file(path, "x,label\n1,30\n2,10\n3,20\n");
    const CsvDataset csv = load_csv(path, "label");
    CHECK(csv.dataset.labels == std::vector<int>{2, 0, 1});
    CHECK(csv.label_values == std::vector<double>{10.0, 20.0, 30.0});
}

TEST_CASE("load_csv error cases") {
    const std::string path = temp_path("ogo_test_err.csv");
    CHECK_THROWS(load_csv(temp_path("ogo_does_not_exist.csv"), "label"));

    write_file(path, "x,label\nfoo,0\n2,1\n");
    CHECK_THROWS_WITH_AS(load_csv(path, "label"), doctest::Contains("non-numeric feature"),
                         std::runtime_error);

    write_file(path, "x,label\n1,0\n2,0\n");
    CHECK_THROWS(load_csv(path, "label")); // fewer than 2 distinct labels

    write_file(path, "x,label\n1,0\n2,1\n");
    CHECK_THROWS(load_csv(path, "wrong_column"));

    write_file(path, "x,label\nnan,0\n2,1\n");
    CHECK_THROWS(load_csv(path, "label")); // non-finite feature rejected
}

TEST_CASE("csv write-back round-trips features") {
    LabeledDataset ds = synth_ordinal_gaussians({5, 5}, 3, 2.0, 1.0, 99);
    const std::string path = temp_path("ogo_test_roundtrip.csv");
    write_csv(path, ds, {"a", "b", "c"}, "y");
    const CsvDataset back = load_csv(path, "y");
    REQUIRE(back.dataset.size() == ds.size());
    for (int i = 0; i < ds.size(); ++i) {
        CHECK(back.dataset.labels[i] == ds.labels[i]);
        for (int j = 0; j < ds.dim(); ++j) {
            const double a = ds.features(i, j), b = back.dataset.features(i, j);
            // 15 significant digits (we write 17, so this is exact).
            CHECK(std::fabs(a - b) <= 1e-15 * std::fabs(a));
        }
    }
}

TEST_CASE("class_counts") {
    LabeledDataset ds = synth_ordinal_gaussians({314, 42, 52, 100}, 2, 3.0, 1.0, 7);
    CHECK(class_counts(ds) == std::vector<int>{314, 42, 52, 100});

    // Class absent: counts stay zero-filled for it.
    LabeledDataset tiny;
    tiny.features = Matrix(1, 1);
    tiny.labels = {0};
    tiny.q_count = 3;
    CHECK(class_counts(tiny) == std::vector<int>{1, 0, 0});

    int total = 0;
    for (int c : class_counts(ds)) total += c;
    CHECK(total == ds.size());
}

TEST_CASE("stratified_kfold exact divisibility") {
    LabeledDataset ds = synth_ordinal_gaussians({5, 5}, 1, 4.0, 0.5, 3);
    const SplitPlan plan = stratified_kfold(ds, 5, 17);
    REQUIRE(plan.folds.size() == 5);
    check_plan(plan, ds);
    for (const auto& fold : plan.folds) {
        REQUIRE(fold.test_indices.size() == 2);
        int c0 = 0, c1 = 0;
        for (int idx : fold.test_indices) (ds.labels[idx] == 0 ? c0 : c1)++;
        CHECK(c0 == 1);
        CHECK(c1 == 1);
    }
}

TEST_CASE("stratified_kfold on the 508-sample class distribution") {
    LabeledDataset ds = synth_ordinal_gaussians({314, 42, 52, 100}, 2, 3.0, 1.0, 11);
    const SplitPlan plan = stratified_kfold(ds, 5, 1234);
    check_plan(plan, ds);
    std::multiset<std::size_t> sizes;
    for (const auto& fold : plan.folds) sizes.insert(fold.test_indices.size());
    CHECK(sizes == std::multiset<std::size_t>{101, 101, 102, 102, 102});
}

TEST_CASE("stratified_kfold rejects classes smaller than k") {
    LabeledDataset ds = synth_ordinal_gaussians({8, 3}, 1, 4.0, 0.5, 3);
    CHECK_THROWS(stratified_kfold(ds, 5, 0));
}

TEST_CASE("stratified_kfold deterministic") {
    LabeledDataset ds = synth_ordinal_gaussians({20, 13, 9}, 2, 3.0, 1.0, 5);
    const SplitPlan a = stratified_kfold(ds, 3, 42);
    const SplitPlan b = stratified_kfold(ds, 3, 42);
    for (std::size_t f = 0; f < a.folds.size(); ++f) {
        CHECK(a.folds[f].test_indices == b.folds[f].test_indices);
        CHECK(a.folds[f].train_indices == b.folds[f].train_indices);
    }
    const SplitPlan c = stratified_kfold(ds, 3, 43);
    bool any_different = false;
    for (std::size_t f = 0; f < a.folds.size(); ++f)
        if (a.folds[f].test_indices != c.folds[f].test_indices) any_different = true;
    CHECK(any_different);
}

TEST_CASE("holdout_split 90/10 on balanced classes") {
    LabeledDataset ds = synth_ordinal_gaussians({50, 50}, 2, 4.0, 1.0, 21);
    const auto [train, val] = holdout_split(ds, 0.9, 77);
    CHECK(train.size() == 90);
    CHECK(val.size() == 10);
    int t0 = 0, v0 = 0;
    for (int i : train)
        if (ds.labels[i] == 0) ++t0;
    for (int i : val)
        if (ds.labels[i] == 0) ++v0;
    CHECK(t0 == 45);
    CHECK(v0 == 5);

    const auto [train2, val2] = holdout_split(ds, 0.9, 77);
    CHECK(train == train2);
    CHECK(val == val2);

    CHECK_THROWS(holdout_split(ds, 1.0, 1));
    CHECK_THROWS(holdout_split(ds, 0.0, 1));
}

TEST_CASE("synth_ordinal_gaussians places class means in order") {
    LabeledDataset ds = synth_ordinal_gaussians({300, 30, 300}, 2, 4.0, 1.0, 2024);
    double m0 = 0, m1 = 0, m2 = 0;
    int n0 = 0, n1 = 0, n2 = 0;
    for (int i = 0; i < ds.size(); ++i) {
        if (ds.labels[i] == 0) { m0 += ds.features(i, 0); ++n0; }
        if (ds.labels[i] == 1) { m1 += ds.features(i, 0); ++n1; }
        if (ds.labels[i] == 2) { m2 += ds.features(i, 0); ++n2; }
    }
    m0 /= n0;
    m1 /= n1;
    m2 /= n2;
    CHECK(m0 < m1);
    CHECK(m1 < m2);

    // Degenerate spread: two points separated by ~spacing.
    LabeledDataset two = synth_ordinal_gaussians({1, 1}, 3, 5.0, 1e-9, 1);
    double d2 = 0;
    for (int j = 0; j < 3; ++j) {
        const double d = two.features(0, j) - two.features(1, j);
        d2 += d * d;
    }
    CHECK(std::sqrt(d2) == doctest::Approx(5.0).epsilon(1e-6));

    // Bitwise determinism.
    LabeledDataset a = synth_ordinal_gaussians({10, 10}, 4, 2.0, 1.5, 55);
    LabeledDataset b = synth_ordinal_gaussians({10, 10}, 4, 2.0, 1.5, 55);
    CHECK(a.features.data == b.features.data);

    CHECK_THROWS(synth_ordinal_gaussians({}, 2, 1.0, 1.0, 0));
}
