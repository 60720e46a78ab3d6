#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ogo/matrix.hpp"

namespace ogo {

// Entry (i, j) counts samples with y = i predicted as j.
struct ConfusionMatrix {
    int q_count = 0;
    std::vector<long long> counts; // Q x Q row-major
    long long total = 0;

    long long operator()(int i, int j) const { return counts[static_cast<std::size_t>(i) * q_count + j]; }

    static ConfusionMatrix from_predictions(std::span<const int> y, std::span<const int> y_hat,
                                            int q_count);
};

struct NominalMetrics {
    double ccr = 0.0;
    std::vector<std::optional<double>> sensitivity; // S_q, missing if class absent from y
    std::optional<double> gms, ms;                  // over available classes
    std::vector<std::optional<double>> specificity; // Sp_q, missing if class covers all of y
    std::optional<double> gmsp, msp;
    std::vector<std::string> flags;
};

NominalMetrics nominal_metrics(std::span<const int> y, std::span<const int> y_hat, int q_count);

struct OrdinalErrorMetrics {
    double mae = 0.0;
    std::vector<std::optional<double>> mae_per_class;
    std::optional<double> amae, mmae;
    std::vector<std::string> flags;
};

OrdinalErrorMetrics ordinal_error_metrics(std::span<const int> y, std::span<const int> y_hat,
                                          int q_count);

// Linear-weight Cohen's kappa, w_ij = |i - j|. Missing when the expected
// disagreement is zero.
std::optional<double> weighted_kappa(std::span<const int> y, std::span<const int> y_hat,
                                     int q_count);

struct TauCounts {
    long long concordant = 0;
    long long discordant = 0;
    long long tied_only_first = 0;  // n_1: tied in y only
    long long tied_only_second = 0; // n_2: tied in y_hat only
};

// O(n^2) pair enumeration.
TauCounts tau_counts_enumeration(std::span<const int> y, std::span<const int> y_hat);
// O(n log n) merge-sort inversion counting; exact integer agreement with the
// enumeration route.
TauCounts tau_counts_fast(std::span<const int> y, std::span<const int> y_hat);

// tau_b = (n_c - n_d) / sqrt((n_c+n_d+n_1)(n_c+n_d+n_2)); enumeration is
// used up to n = 2000, the fast algorithm above. Missing when a denominator
// factor is zero (constant sequence).
std::optional<double> kendall_tau_b(std::span<const int> y, std::span<const int> y_hat);

// Pearson correlation of the raw integer labels (population moments), which
// is the formula as printed in the source material; NOT rank-transformed.
std::optional<double> spearman(std::span<const int> y, std::span<const int> y_hat);

struct OvrAuc {
    std::vector<std::optional<double>> per_class; // missing if class absent from y
    std::optional<double> mean;                   // over available classes
    std::vector<std::string> flags;
};

// One-vs-rest AUC per class via the Mann-Whitney rank formulation with
// midrank tie handling; scores is N x Q.
OvrAuc roc_auc_ovr(const Matrix& scores, std::span<const int> y);

struct BinaryCollapse {
    std::optional<double> accuracy;
    std::optional<double> sensitivity; // missing when no positive samples
    std::optional<double> specificity; // missing when no negative samples
};

// Class 0 is negative, all others positive.
BinaryCollapse binary_collapse(std::span<const int> y, std::span<const int> y_hat);

struct WilcoxonResult {
    double p_value = 1.0;
    int n_effective = 0; // pairs left after dropping zero differences
    double w_plus = 0.0;
    double w_minus = 0.0;
    bool exact = false;    // exact tail enumeration (n_effective <= 25)
    bool all_zero = false; // every difference was zero; p = 1 by convention
};

// Two-tailed Wilcoxon signed-rank test on paired samples. Zero differences
// are dropped; midranks handle ties. Exact distribution for effective
// n <= 25 (dynamic program over doubled rank sums, equivalent to sign-pattern
// enumeration), normal approximation with tie and continuity corrections
// above.
WilcoxonResult wilcoxon_signed_rank(std::span<const double> a, std::span<const double> b);

// One record holding every evaluation metric for a prediction set.
struct MetricsReport {
    int q_count = 0;
    double ccr = 0.0;
    std::vector<std::optional<double>> sensitivity;
    std::optional<double> gms, ms;
    std::vector<std::optional<double>> specificity;
    std::optional<double> gmsp, msp;
    double mae = 0.0;
    std::vector<std::optional<double>> mae_per_class;
    std::optional<double> amae, mmae;
    std::optional<double> kappa, tau_b, spearman_rho;
    std::vector<std::optional<double>> auc_per_class;
    std::optional<double> auc_mean;
    std::optional<double> bin_accuracy, bin_sensitivity, bin_specificity;
    std::vector<std::string> flags;
};

// Computes every metric in one pass. `scores` may be empty (0 x 0) when no
// scores are available; the AUC block is then flagged missing.
MetricsReport evaluate_predictions(std::span<const int> y, std::span<const int> y_hat,
                                   const Matrix& scores, int q_count);

// Scalar metric columns in serialization order (per-class columns excluded).
std::vector<std::string> metric_names();
// Value lookup by metric name; nullopt when missing.
std::optional<double> metric_value(const MetricsReport& r, const std::string& name);
// True if larger values of the named metric are better.
bool metric_higher_is_better(const std::string& name);

} // namespace ogo
