#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ogo/dataset.hpp"
#include "ogo/metrics.hpp"
#include "ogo/model.hpp"
#include "ogo/oversample.hpp"

namespace ogo {

enum class Method {
    nominal,        // softmax head; SMOTE balancing unless no_augment
    smote_nominal,  // alias of nominal with SMOTE always on
    ogo_sp_gamma,   // ordinal head; OGO-SP with Gamma(2, 0.15)
    ogo_sp_beta_a,  // ordinal head; OGO-SP-beta configuration (a)
    ogo_sp_beta_b,  // (b)
    ogo_sp_beta_c,  // (c)
};

const char* method_name(Method m);
Method method_from_name(std::string_view name);

struct GridSpec {
    std::vector<double> learning_rates;
    std::vector<int> hidden_sizes;
    std::vector<int> neighborhood_ks;

    std::size_t combination_count() const {
        return learning_rates.size() * hidden_sizes.size() * neighborhood_ks.size();
    }
};

struct HyperCombo {
    double learning_rate;
    int hidden;
    int k;
};

struct ExperimentConfig {
    std::vector<Method> methods;
    bool no_augment = false;
    GridSpec grid;
    int folds = 5;
    int holdout_repeats = 3;
    int eval_repeats = 30;
    std::uint64_t master_seed = 0;
    int workers = 1;
    // Shared training settings (the paper's fixed choices).
    int patience = 50;
    int batch_size = 32;
    int max_epochs = 500;
    double val_fraction = 0.1;
};

struct SelectionRun {
    int combo_index;
    int holdout_index;
    HyperCombo combo;
    double val_mae; // +inf when the run diverged
    bool failed = false;
    std::string error;
};

struct SelectionResult {
    HyperCombo best;
    int best_index = 0;
    std::vector<SelectionRun> runs; // |grid| x holdout_repeats entries
};

struct RunRecord {
    int fold = 0;
    int repeat = 0;
    HyperCombo combo{};
    MetricsReport metrics;
    bool failed = false;
    std::string error;
};

struct MethodReport {
    Method method = Method::nominal;
    bool no_augment = false;
    int q_count = 0;
    std::vector<SelectionResult> selection; // one per fold
    std::vector<RunRecord> runs;            // folds x eval_repeats, fixed order
};

struct ExperimentReport {
    ExperimentConfig config;
    std::vector<MethodReport> methods;
};

// What one method means operationally.
struct PipelineSpec {
    HeadKind head = HeadKind::nominal;
    enum class Augment { none, smote, ogo } augment = Augment::none;
    FrontierDistribution frontier; // only for Augment::ogo
    int k = 3;
};

PipelineSpec pipeline_for(Method m, bool no_augment, int k);

// The five-step procedure: train the full net, project the training data
// through the encoder, balance-augment in the projected space, retrain the
// head on the augmented data. With Augment::none only step 1 runs.
FeedforwardNet fit_pipeline(const LabeledDataset& train, const PipelineSpec& spec,
                            const TrainConfig& cfg, std::uint64_t augment_seed);

// Grid search over three shared, seeded 90/10 holdouts; combinations ranked
// by mean validation MAE, ties broken by declaration order. A diverged
// combination scores +inf.
SelectionResult run_model_selection(const LabeledDataset& fold_train, Method method,
                                    const ExperimentConfig& cfg, int fold);

MethodReport run_method(const LabeledDataset& ds, Method method, const ExperimentConfig& cfg);

// Runs every configured method on the same fold plan.
ExperimentReport run_experiment(const LabeledDataset& ds, const ExperimentConfig& cfg);

struct ComparisonResult {
    std::string metric;
    WilcoxonResult wilcoxon;
    double mean_a = 0.0;
    double mean_b = 0.0;
    // +1: a better on this metric, -1: b better, 0: tied mean.
    int advantage = 0;
    int paired_runs = 0;
};

// Pairs runs on (fold, repeat); runs where either side failed or lacks the
// metric are dropped from the pairing.
ComparisonResult compare(const MethodReport& a, const MethodReport& b,
                         const std::string& metric);

// Writes runs.csv, summary.csv, wilcoxon.csv (when >= 2 methods), one SVG
// boxplot per metric, and the frontier-distribution density curves.
void emit_reports(const ExperimentReport& report, const std::string& outdir);

// runs.csv serialization for a single method (also used by emit_reports).
std::string runs_csv(const MethodReport& report);

} // namespace ogo
