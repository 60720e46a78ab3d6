#include "ogo/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <functional>
#include <limits>
#include <map>
#include <mutex>
#include <stdexcept>
#include <thread>

namespace ogo {

const char* method_name(Method m) {
    switch (m) {
    case Method::nominal: return "nominal";
    case Method::smote_nominal: return "smote-nominal";
    case Method::ogo_sp_gamma: return "ogo-sp-gamma";
    case Method::ogo_sp_beta_a: return "ogo-sp-beta-a";
    case Method::ogo_sp_beta_b: return "ogo-sp-beta-b";
    case Method::ogo_sp_beta_c: return "ogo-sp-beta-c";
    }
    return "?";
}

Method method_from_name(std::string_view name) {
    for (Method m : {Method::nominal, Method::smote_nominal, Method::ogo_sp_gamma,
                     Method::ogo_sp_beta_a, Method::ogo_sp_beta_b, Method::ogo_sp_beta_c})
        if (name == method_name(m)) return m;
    throw std::invalid_argument("unknown method '" + std::string(name) + "'");
}

PipelineSpec pipeline_for(Method m, bool no_augment, int k) {
    PipelineSpec spec;
    spec.k = k;
    switch (m) {
    case Method::nominal:
        spec.head = HeadKind::nominal;
        spec.augment = no_augment ? PipelineSpec::Augment::none : PipelineSpec::Augment::smote;
        break;
    case Method::smote_nominal:
        spec.head = HeadKind::nominal;
        spec.augment = PipelineSpec::Augment::smote;
        break;
    case Method::ogo_sp_gamma:
    case Method::ogo_sp_beta_a:
    case Method::ogo_sp_beta_b:
    case Method::ogo_sp_beta_c:
        spec.head = HeadKind::ordinal;
        spec.augment = no_augment ? PipelineSpec::Augment::none : PipelineSpec::Augment::ogo;
        switch (m) {
        case Method::ogo_sp_gamma: spec.frontier = preset("gamma"); break;
        case Method::ogo_sp_beta_a: spec.frontier = preset("beta-a"); break;
        case Method::ogo_sp_beta_b: spec.frontier = preset("beta-b"); break;
        default: spec.frontier = preset("beta-c"); break;
        }
        break;
    }
    return spec;
}

FeedforwardNet fit_pipeline(const LabeledDataset& train_ds, const PipelineSpec& spec,
                            const TrainConfig& cfg, std::uint64_t augment_seed) {
    TrainResult base = train(train_ds, spec.head, cfg);
    if (spec.augment == PipelineSpec::Augment::none) return std::move(base.net);

    const LabeledDataset projected = project(base.net, train_ds);
    const AugmentResult augmented =
        augment(projected,
                spec.augment == PipelineSpec::Augment::smote ? AugmentMethod::smote
                                                             : AugmentMethod::ogo_sp,
                spec.frontier, spec.k, augment_seed);

    TrainConfig head_cfg = cfg;
    head_cfg.seed = derive_seed(cfg.seed, "retrain");
    TrainResult retrained = retrain_head(base.net, augmented.dataset, head_cfg);
    return std::move(retrained.net);
}

namespace {

void parallel_for(int n, int workers, const std::function<void(int)>& fn) {
    if (n <= 0) return;
    workers = std::max(1, std::min(workers, n));
    if (workers == 1) {
        for (int i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    std::exception_ptr first_error;
    std::mutex error_lock;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (;;) {
                const int i = next.fetch_add(1);
                if (i >= n) return;
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard<std::mutex> hold(error_lock);
                    if (!first_error) first_error = std::current_exception();
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

std::vector<HyperCombo> grid_combinations(const GridSpec& grid) {
    std::vector<HyperCombo> combos;
    for (double eta : grid.learning_rates)
        for (int hidden : grid.hidden_sizes)
            for (int k : grid.neighborhood_ks) combos.push_back({eta, hidden, k});
    return combos;
}

TrainConfig base_config(const ExperimentConfig& cfg, const HyperCombo& combo,
                        std::uint64_t seed) {
    TrainConfig tc;
    tc.learning_rate = combo.learning_rate;
    tc.hidden = combo.hidden;
    tc.patience = cfg.patience;
    tc.batch_size = cfg.batch_size;
    tc.max_epochs = cfg.max_epochs;
    tc.val_fraction = cfg.val_fraction;
    tc.seed = seed;
    return tc;
}

MetricsReport evaluate_on(const FeedforwardNet& net, const LabeledDataset& test) {
    const std::vector<int> y_hat = predict_labels(net, test);
    const Matrix scores = predict_scores(net, test);
    return evaluate_predictions(test.labels, y_hat, scores, test.q_count);
}

} // namespace

SelectionResult run_model_selection(const LabeledDataset& fold_train, Method method,
                                    const ExperimentConfig& cfg, int fold) {
    if (cfg.grid.combination_count() == 0)
        throw std::invalid_argument("run_model_selection: empty hyperparameter grid");
    const std::vector<HyperCombo> combos = grid_combinations(cfg.grid);
    const std::uint64_t fold_seed =
        derive_seed(cfg.master_seed, "select-fold", static_cast<std::uint64_t>(fold));

    SelectionResult result;
    result.runs.resize(combos.size() * cfg.holdout_repeats);

    const int total = static_cast<int>(result.runs.size());
    parallel_for(total, cfg.workers, [&](int t) {
        const int ci = t / cfg.holdout_repeats;
        const int h = t % cfg.holdout_repeats;
        // All combinations share the per-holdout seed, so they see the same
        // three 90/10 splits and are ranked on identical data.
        const std::uint64_t seed =
            derive_seed(fold_seed, "select-holdout", static_cast<std::uint64_t>(h));
        SelectionRun run;
        run.combo_index = ci;
        run.holdout_index = h;
        run.combo = combos[ci];
        try {
            const PipelineSpec spec = pipeline_for(method, cfg.no_augment, combos[ci].k);
            const TrainConfig tc = base_config(cfg, combos[ci], seed);
            const FeedforwardNet net =
                fit_pipeline(fold_train, spec, tc, derive_seed(seed, "augment"));
            // Validation side of the training split scores the combination.
            const auto [train_idx, val_idx] =
                holdout_split(fold_train, 1.0 - cfg.val_fraction, derive_seed(seed, "val-split"));
            (void)train_idx;
            const LabeledDataset val = subset(fold_train, val_idx);
            const std::vector<int> y_hat = predict_labels(net, val);
            run.val_mae = ordinal_error_metrics(val.labels, y_hat, val.q_count).mae;
        } catch (const std::exception& e) {
            run.failed = true;
            run.error = e.what();
            run.val_mae = std::numeric_limits<double>::infinity();
        }
        result.runs[t] = std::move(run);
    });

    int best = 0;
    double best_score = std::numeric_limits<double>::infinity();
    for (std::size_t ci = 0; ci < combos.size(); ++ci) {
        double mean = 0.0;
        for (int h = 0; h < cfg.holdout_repeats; ++h)
            mean += result.runs[ci * cfg.holdout_repeats + h].val_mae;
        mean /= cfg.holdout_repeats;
        if (mean < best_score) { // strict: ties keep the earliest combination
            best_score = mean;
            best = static_cast<int>(ci);
        }
    }
    result.best_index = best;
    result.best = combos[best];
    return result;
}

MethodReport run_method(const LabeledDataset& ds, Method method, const ExperimentConfig& cfg) {
    ds.validate();
    if (cfg.folds < 2) throw std::invalid_argument("run_method: folds must be >= 2");
    if (cfg.eval_repeats < 1 || cfg.holdout_repeats < 1)
        throw std::invalid_argument("run_method: repeats must be >= 1");

    const SplitPlan plan = stratified_kfold(ds, cfg.folds, derive_seed(cfg.master_seed, "kfold"));

    MethodReport report;
    report.method = method;
    report.no_augment = cfg.no_augment;
    report.q_count = ds.q_count;
    report.runs.resize(static_cast<std::size_t>(cfg.folds) * cfg.eval_repeats);

    for (int fold = 0; fold < cfg.folds; ++fold) {
        const LabeledDataset fold_train = subset(ds, plan.folds[fold].train_indices);
        const LabeledDataset fold_test = subset(ds, plan.folds[fold].test_indices);

        SelectionResult selection = run_model_selection(fold_train, method, cfg, fold);
        const HyperCombo chosen = selection.best;
        report.selection.push_back(std::move(selection));

        const std::uint64_t eval_seed =
            derive_seed(cfg.master_seed, "eval-fold", static_cast<std::uint64_t>(fold));
        const PipelineSpec spec = pipeline_for(method, cfg.no_augment, chosen.k);
        parallel_for(cfg.eval_repeats, cfg.workers, [&](int r) {
            RunRecord rec;
            rec.fold = fold;
            rec.repeat = r;
            rec.combo = chosen;
            const std::uint64_t seed =
                derive_seed(eval_seed, "eval-repeat", static_cast<std::uint64_t>(r));
            try {
                const TrainConfig tc = base_config(cfg, chosen, seed);
                const FeedforwardNet net =
                    fit_pipeline(fold_train, spec, tc, derive_seed(seed, "augment"));
                rec.metrics = evaluate_on(net, fold_test);
            } catch (const std::exception& e) {
                rec.failed = true;
                rec.error = e.what();
            }
            report.runs[static_cast<std::size_t>(fold) * cfg.eval_repeats + r] = std::move(rec);
        });
    }
    return report;
}

ExperimentReport run_experiment(const LabeledDataset& ds, const ExperimentConfig& cfg) {
    if (cfg.methods.empty()) throw std::invalid_argument("run_experiment: no methods configured");
    ExperimentReport report;
    report.config = cfg;
    for (Method m : cfg.methods) report.methods.push_back(run_method(ds, m, cfg));
    return report;
}

ComparisonResult compare(const MethodReport& a, const MethodReport& b,
                         const std::string& metric) {
    ComparisonResult res;
    res.metric = metric;

    std::map<std::pair<int, int>, const RunRecord*> b_index;
    for (const RunRecord& rb : b.runs) b_index[{rb.fold, rb.repeat}] = &rb;

    std::vector<double> va, vb;
    for (const RunRecord& ra : a.runs) {
        const auto it = b_index.find({ra.fold, ra.repeat});
        if (it == b_index.end())
            throw std::invalid_argument("compare: unmatched (fold, repeat) pairing");
        const RunRecord* rb = it->second;
        if (ra.failed || rb->failed) continue;
        const auto ma = metric_value(ra.metrics, metric);
        const auto mb = metric_value(rb->metrics, metric);
        if (!ma || !mb) continue;
        va.push_back(*ma);
        vb.push_back(*mb);
    }
    if (va.empty()) throw std::invalid_argument("compare: no paired runs with metric '" + metric + "'");

    res.paired_runs = static_cast<int>(va.size());
    res.wilcoxon = wilcoxon_signed_rank(va, vb);
    for (double v : va) res.mean_a += v;
    for (double v : vb) res.mean_b += v;
    res.mean_a /= va.size();
    res.mean_b /= vb.size();
    if (res.mean_a != res.mean_b) {
        const bool a_better = metric_higher_is_better(metric) ? (res.mean_a > res.mean_b)
                                                              : (res.mean_a < res.mean_b);
        res.advantage = a_better ? 1 : -1;
    }
    return res;
}

} // namespace ogo
