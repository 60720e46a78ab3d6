#include "ogo/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace ogo {

namespace {

void check_lengths(std::span<const int> y, std::span<const int> y_hat) {
    if (y.empty()) throw std::invalid_argument("metrics: empty input");
    if (y.size() != y_hat.size())
        throw std::invalid_argument("metrics: y and y_hat lengths differ");
}

// 1-based ranks with midrank tie handling, relative to the given values.
std::vector<double> midranks(const std::vector<double>& values) {
    const std::size_t n = values.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    std::vector<double> ranks(n);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
        const double rank = 0.5 * (static_cast<double>(i + 1) + static_cast<double>(j + 1));
        for (std::size_t t = i; t <= j; ++t) ranks[order[t]] = rank;
        i = j + 1;
    }
    return ranks;
}

double normal_sf(double z) { return 0.5 * std::erfc(z / std::sqrt(2.0)); }

} // namespace

ConfusionMatrix ConfusionMatrix::from_predictions(std::span<const int> y,
                                                  std::span<const int> y_hat, int q_count) {
    check_lengths(y, y_hat);
    ConfusionMatrix cm;
    cm.q_count = q_count;
    cm.counts.assign(static_cast<std::size_t>(q_count) * q_count, 0);
    for (std::size_t i = 0; i < y.size(); ++i) {
        if (y[i] < 0 || y[i] >= q_count || y_hat[i] < 0 || y_hat[i] >= q_count)
            throw std::invalid_argument("confusion matrix: label out of range");
        ++cm.counts[static_cast<std::size_t>(y[i]) * q_count + y_hat[i]];
        ++cm.total;
    }
    return cm;
}

NominalMetrics nominal_metrics(std::span<const int> y, std::span<const int> y_hat, int q_count) {
    const ConfusionMatrix cm = ConfusionMatrix::from_predictions(y, y_hat, q_count);
    const double n = static_cast<double>(cm.total);

    NominalMetrics m;
    long long correct = 0;
    for (int q = 0; q < q_count; ++q) correct += cm(q, q);
    m.ccr = correct / n;

    m.sensitivity.resize(q_count);
    m.specificity.resize(q_count);
    double gm_log = 0.0, sp_log = 0.0;
    double mn = 1.0, sp_mn = 1.0;
    int avail_s = 0, avail_sp = 0;
    bool zero_s = false, zero_sp = false;
    for (int q = 0; q < q_count; ++q) {
        long long in_class = 0, hit = cm(q, q);
        for (int j = 0; j < q_count; ++j) in_class += cm(q, j);
        if (in_class > 0) {
            const double s = static_cast<double>(hit) / in_class;
            m.sensitivity[q] = s;
            ++avail_s;
            mn = std::min(mn, s);
            if (s == 0.0) zero_s = true; else gm_log += std::log(s);
        } else {
            m.flags.push_back("sensitivity[" + std::to_string(q) + "] missing: class absent from y");
        }
        const long long out_class = cm.total - in_class;
        if (out_class > 0) {
            long long predicted_q = 0;
            for (int i = 0; i < q_count; ++i) predicted_q += cm(i, q);
            const double sp = static_cast<double>(out_class - (predicted_q - hit)) / out_class;
            m.specificity[q] = sp;
            ++avail_sp;
            sp_mn = std::min(sp_mn, sp);
            if (sp == 0.0) zero_sp = true; else sp_log += std::log(sp);
        } else {
            m.flags.push_back("specificity[" + std::to_string(q) +
                              "] missing: class covers every sample");
        }
    }
    if (avail_s > 0) {
        m.gms = zero_s ? 0.0 : std::exp(gm_log / avail_s);
        m.ms = mn;
    }
    if (avail_sp > 0) {
        m.gmsp = zero_sp ? 0.0 : std::exp(sp_log / avail_sp);
        m.msp = sp_mn;
    }
    return m;
}

OrdinalErrorMetrics ordinal_error_metrics(std::span<const int> y, std::span<const int> y_hat,
                                          int q_count) {
    check_lengths(y, y_hat);
    OrdinalErrorMetrics m;
    m.mae_per_class.resize(q_count);
    std::vector<long long> abs_sum(q_count, 0), counts(q_count, 0);
    long long total = 0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        const long long e = std::llabs(static_cast<long long>(y_hat[i]) - y[i]);
        total += e;
        abs_sum[y[i]] += e;
        ++counts[y[i]];
    }
    m.mae = static_cast<double>(total) / static_cast<double>(y.size());
    double acc = 0.0, mx = 0.0;
    int avail = 0;
    for (int q = 0; q < q_count; ++q) {
        if (counts[q] > 0) {
            const double v = static_cast<double>(abs_sum[q]) / counts[q];
            m.mae_per_class[q] = v;
            acc += v;
            mx = std::max(mx, v);
            ++avail;
        } else {
            m.flags.push_back("mae[" + std::to_string(q) + "] missing: class absent from y");
        }
    }
    if (avail > 0) {
        m.amae = acc / avail;
        m.mmae = mx;
    }
    return m;
}

std::optional<double> weighted_kappa(std::span<const int> y, std::span<const int> y_hat,
                                     int q_count) {
    const ConfusionMatrix cm = ConfusionMatrix::from_predictions(y, y_hat, q_count);
    const double n = static_cast<double>(cm.total);
    std::vector<double> row(q_count, 0.0), col(q_count, 0.0);
    for (int i = 0; i < q_count; ++i)
        for (int j = 0; j < q_count; ++j) {
            row[i] += cm(i, j) / n;
            col[j] += cm(i, j) / n;
        }
    double observed = 0.0, expected = 0.0;
    for (int i = 0; i < q_count; ++i)
        for (int j = 0; j < q_count; ++j) {
            const double w = std::abs(i - j);
            observed += w * (cm(i, j) / n);
            expected += w * row[i] * col[j];
        }
    if (expected == 0.0) return std::nullopt;
    return 1.0 - observed / expected;
}

TauCounts tau_counts_enumeration(std::span<const int> y, std::span<const int> y_hat) {
    check_lengths(y, y_hat);
    TauCounts c;
    for (std::size_t i = 0; i < y.size(); ++i)
        for (std::size_t j = i + 1; j < y.size(); ++j) {
            const int dy = (y[i] < y[j]) ? 1 : (y[i] > y[j]) ? -1 : 0;
            const int dh = (y_hat[i] < y_hat[j]) ? 1 : (y_hat[i] > y_hat[j]) ? -1 : 0;
            if (dy == 0 && dh == 0) continue;
            if (dy == 0) ++c.tied_only_first;
            else if (dh == 0) ++c.tied_only_second;
            else if (dy == dh) ++c.concordant;
            else ++c.discordant;
        }
    return c;
}

namespace {

// Merge-sort inversion count on an int sequence (strict inversions only).
long long count_inversions(std::vector<int>& v, std::vector<int>& tmp, std::size_t lo,
                           std::size_t hi) {
    if (hi - lo < 2) return 0;
    const std::size_t mid = lo + (hi - lo) / 2;
    long long inv = count_inversions(v, tmp, lo, mid) + count_inversions(v, tmp, mid, hi);
    std::size_t a = lo, b = mid, t = lo;
    while (a < mid && b < hi) {
        if (v[b] < v[a]) {
            inv += static_cast<long long>(mid - a);
            tmp[t++] = v[b++];
        } else {
            tmp[t++] = v[a++];
        }
    }
    while (a < mid) tmp[t++] = v[a++];
    while (b < hi) tmp[t++] = v[b++];
    std::copy(tmp.begin() + lo, tmp.begin() + hi, v.begin() + lo);
    return inv;
}

long long tied_pairs(const std::vector<long long>& group_sizes) {
    long long t = 0;
    for (long long g : group_sizes) t += g * (g - 1) / 2;
    return t;
}

} // namespace

TauCounts tau_counts_fast(std::span<const int> y, std::span<const int> y_hat) {
    check_lengths(y, y_hat);
    const std::size_t n = y.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (y[a] != y[b]) return y[a] < y[b];
        return y_hat[a] < y_hat[b];
    });

    std::vector<long long> y_groups, both_groups, h_groups;
    {
        std::size_t i = 0;
        while (i < n) {
            std::size_t j = i;
            while (j + 1 < n && y[order[j + 1]] == y[order[i]]) ++j;
            y_groups.push_back(static_cast<long long>(j - i + 1));
            i = j + 1;
        }
        i = 0;
        while (i < n) {
            std::size_t j = i;
            while (j + 1 < n && y[order[j + 1]] == y[order[i]] &&
                   y_hat[order[j + 1]] == y_hat[order[i]])
                ++j;
            both_groups.push_back(static_cast<long long>(j - i + 1));
            i = j + 1;
        }
        std::vector<int> h_sorted(n);
        for (std::size_t t = 0; t < n; ++t) h_sorted[t] = y_hat[t];
        std::sort(h_sorted.begin(), h_sorted.end());
        i = 0;
        while (i < n) {
            std::size_t j = i;
            while (j + 1 < n && h_sorted[j + 1] == h_sorted[i]) ++j;
            h_groups.push_back(static_cast<long long>(j - i + 1));
            i = j + 1;
        }
    }
    const long long tied_y = tied_pairs(y_groups);
    const long long tied_both = tied_pairs(both_groups);
    const long long tied_h = tied_pairs(h_groups);

    std::vector<int> seq(n), tmp(n);
    for (std::size_t t = 0; t < n; ++t) seq[t] = y_hat[order[t]];
    const long long discordant = count_inversions(seq, tmp, 0, n);

    const long long n0 = static_cast<long long>(n) * (static_cast<long long>(n) - 1) / 2;
    TauCounts c;
    c.discordant = discordant;
    c.tied_only_first = tied_y - tied_both;
    c.tied_only_second = tied_h - tied_both;
    c.concordant = n0 - discordant - tied_y - tied_h + tied_both;
    return c;
}

namespace {

std::optional<double> tau_from_counts(const TauCounts& c) {
    const double f1 =
        static_cast<double>(c.concordant + c.discordant + c.tied_only_first);
    const double f2 =
        static_cast<double>(c.concordant + c.discordant + c.tied_only_second);
    if (f1 == 0.0 || f2 == 0.0) return std::nullopt;
    return static_cast<double>(c.concordant - c.discordant) / (std::sqrt(f1) * std::sqrt(f2));
}

} // namespace

std::optional<double> kendall_tau_b(std::span<const int> y, std::span<const int> y_hat) {
    check_lengths(y, y_hat);
    if (y.size() < 2) throw std::invalid_argument("kendall_tau_b: need at least 2 samples");
    const TauCounts c =
        (y.size() <= 2000) ? tau_counts_enumeration(y, y_hat) : tau_counts_fast(y, y_hat);
    return tau_from_counts(c);
}

std::optional<double> spearman(std::span<const int> y, std::span<const int> y_hat) {
    check_lengths(y, y_hat);
    if (y.size() < 2) throw std::invalid_argument("spearman: need at least 2 samples");
    const double n = static_cast<double>(y.size());
    double my = 0.0, mh = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        my += y[i];
        mh += y_hat[i];
    }
    my /= n;
    mh /= n;
    double cov = 0.0, vy = 0.0, vh = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        const double a = y[i] - my, b = y_hat[i] - mh;
        cov += a * b;
        vy += a * a;
        vh += b * b;
    }
    if (vy == 0.0 || vh == 0.0) return std::nullopt;
    return (cov / n) / (std::sqrt(vy / n) * std::sqrt(vh / n));
}

OvrAuc roc_auc_ovr(const Matrix& scores, std::span<const int> y) {
    if (y.empty()) throw std::invalid_argument("roc_auc_ovr: empty input");
    if (scores.rows != static_cast<int>(y.size()))
        throw std::invalid_argument("roc_auc_ovr: score rows do not match labels");
    for (double v : scores.data)
        if (!std::isfinite(v)) throw std::invalid_argument("roc_auc_ovr: non-finite score");

    const int q_count = scores.cols;
    OvrAuc out;
    out.per_class.resize(q_count);
    double acc = 0.0;
    int avail = 0;
    std::vector<double> column(y.size());
    for (int q = 0; q < q_count; ++q) {
        long long pos = 0;
        for (std::size_t i = 0; i < y.size(); ++i)
            if (y[i] == q) ++pos;
        const long long neg = static_cast<long long>(y.size()) - pos;
        if (pos == 0 || neg == 0) {
            out.flags.push_back("auc[" + std::to_string(q) + "] missing: class " +
                                (pos == 0 ? "absent from y" : "covers every sample"));
            continue;
        }
        for (std::size_t i = 0; i < y.size(); ++i) column[i] = scores(static_cast<int>(i), q);
        const std::vector<double> ranks = midranks(column);
        double rank_sum_pos = 0.0;
        for (std::size_t i = 0; i < y.size(); ++i)
            if (y[i] == q) rank_sum_pos += ranks[i];
        const double auc = (rank_sum_pos - 0.5 * pos * (pos + 1.0)) /
                           (static_cast<double>(pos) * static_cast<double>(neg));
        out.per_class[q] = auc;
        acc += auc;
        ++avail;
    }
    if (avail > 0) out.mean = acc / avail;
    return out;
}

BinaryCollapse binary_collapse(std::span<const int> y, std::span<const int> y_hat) {
    check_lengths(y, y_hat);
    long long tp = 0, tn = 0, fp = 0, fn = 0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        const bool pos = y[i] > 0, pred_pos = y_hat[i] > 0;
        if (pos && pred_pos) ++tp;
        else if (!pos && !pred_pos) ++tn;
        else if (!pos && pred_pos) ++fp;
        else ++fn;
    }
    BinaryCollapse b;
    b.accuracy = static_cast<double>(tp + tn) / static_cast<double>(y.size());
    if (tp + fn > 0) b.sensitivity = static_cast<double>(tp) / (tp + fn);
    if (tn + fp > 0) b.specificity = static_cast<double>(tn) / (tn + fp);
    return b;
}

WilcoxonResult wilcoxon_signed_rank(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size())
        throw std::invalid_argument("wilcoxon_signed_rank: sample lengths differ");
    if (a.empty()) throw std::invalid_argument("wilcoxon_signed_rank: empty input");

    std::vector<double> abs_diff;
    std::vector<int> sign;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        if (d == 0.0) continue; // zero differences dropped
        abs_diff.push_back(std::fabs(d));
        sign.push_back(d > 0.0 ? 1 : -1);
    }

    WilcoxonResult res;
    res.n_effective = static_cast<int>(abs_diff.size());
    if (res.n_effective == 0) {
        res.all_zero = true;
        res.p_value = 1.0;
        return res;
    }
    if (res.n_effective < 5)
        throw std::invalid_argument(
            "wilcoxon_signed_rank: need at least 5 non-zero differences, have " +
            std::to_string(res.n_effective));

    const std::vector<double> ranks = midranks(abs_diff);
    for (std::size_t i = 0; i < ranks.size(); ++i)
        (sign[i] > 0 ? res.w_plus : res.w_minus) += ranks[i];

    const int n = res.n_effective;
    if (n <= 25) {
        // Exact: dynamic program over doubled rank sums (midranks are
        // multiples of 1/2), equivalent to enumerating all 2^n sign
        // patterns. Two-tailed p = min(1, 2 * P(W+ <= min(W+, W-))).
        res.exact = true;
        std::vector<long long> r2(ranks.size());
        long long total2 = 0;
        for (std::size_t i = 0; i < ranks.size(); ++i) {
            r2[i] = std::llround(2.0 * ranks[i]);
            total2 += r2[i];
        }
        std::vector<double> count(total2 + 1, 0.0);
        count[0] = 1.0;
        long long reach = 0;
        for (long long r : r2) {
            reach += r;
            for (long long s = reach; s >= r; --s) count[s] += count[s - r];
        }
        const long long w2 = std::llround(2.0 * std::min(res.w_plus, res.w_minus));
        double below = 0.0;
        for (long long s = 0; s <= w2; ++s) below += count[s];
        const double p = 2.0 * below / std::ldexp(1.0, n);
        res.p_value = std::min(1.0, p);
    } else {
        // Normal approximation with tie and continuity corrections.
        const double mean = n * (n + 1.0) / 4.0;
        double tie_term = 0.0;
        {
            std::vector<double> sorted(abs_diff);
            std::sort(sorted.begin(), sorted.end());
            std::size_t i = 0;
            while (i < sorted.size()) {
                std::size_t j = i;
                while (j + 1 < sorted.size() && sorted[j + 1] == sorted[i]) ++j;
                const double t = static_cast<double>(j - i + 1);
                tie_term += (t * t * t - t);
                i = j + 1;
            }
        }
        const double var = n * (n + 1.0) * (2.0 * n + 1.0) / 24.0 - tie_term / 48.0;
        const double centered = res.w_plus - mean;
        if (centered == 0.0 || var <= 0.0) {
            res.p_value = 1.0;
        } else {
            const double cc = centered > 0.0 ? -0.5 : 0.5;
            const double z = (centered + cc) / std::sqrt(var);
            res.p_value = std::min(1.0, 2.0 * normal_sf(std::fabs(z)));
        }
    }
    return res;
}

MetricsReport evaluate_predictions(std::span<const int> y, std::span<const int> y_hat,
                                   const Matrix& scores, int q_count) {
    MetricsReport r;
    r.q_count = q_count;

    const NominalMetrics nm = nominal_metrics(y, y_hat, q_count);
    r.ccr = nm.ccr;
    r.sensitivity = nm.sensitivity;
    r.gms = nm.gms;
    r.ms = nm.ms;
    r.specificity = nm.specificity;
    r.gmsp = nm.gmsp;
    r.msp = nm.msp;
    r.flags = nm.flags;

    const OrdinalErrorMetrics om = ordinal_error_metrics(y, y_hat, q_count);
    r.mae = om.mae;
    r.mae_per_class = om.mae_per_class;
    r.amae = om.amae;
    r.mmae = om.mmae;
    r.flags.insert(r.flags.end(), om.flags.begin(), om.flags.end());

    r.kappa = weighted_kappa(y, y_hat, q_count);
    if (!r.kappa) r.flags.push_back("kappa missing: zero expected disagreement");
    if (y.size() >= 2) {
        r.tau_b = kendall_tau_b(y, y_hat);
        if (!r.tau_b) r.flags.push_back("tau_b missing: constant sequence");
        r.spearman_rho = spearman(y, y_hat);
        if (!r.spearman_rho) r.flags.push_back("spearman missing: zero variance");
    }

    if (scores.rows > 0) {
        const OvrAuc auc = roc_auc_ovr(scores, y);
        r.auc_per_class = auc.per_class;
        r.auc_mean = auc.mean;
        r.flags.insert(r.flags.end(), auc.flags.begin(), auc.flags.end());
    } else {
        r.auc_per_class.assign(q_count, std::nullopt);
        r.flags.push_back("auc missing: no scores provided");
    }

    const BinaryCollapse bc = binary_collapse(y, y_hat);
    r.bin_accuracy = bc.accuracy;
    r.bin_sensitivity = bc.sensitivity;
    if (!bc.sensitivity) r.flags.push_back("bin_sensitivity missing: no positive samples");
    r.bin_specificity = bc.specificity;
    if (!bc.specificity) r.flags.push_back("bin_specificity missing: no negative samples");
    return r;
}

std::vector<std::string> metric_names() {
    return {"ccr",   "gms",  "ms",    "gmsp",        "msp",
            "mae",   "amae", "mmae",  "kappa",       "tau_b",
            "spearman", "auc", "bin_accuracy", "bin_sensitivity", "bin_specificity"};
}

std::optional<double> metric_value(const MetricsReport& r, const std::string& name) {
    if (name == "ccr") return r.ccr;
    if (name == "gms") return r.gms;
    if (name == "ms") return r.ms;
    if (name == "gmsp") return r.gmsp;
    if (name == "msp") return r.msp;
    if (name == "mae") return r.mae;
    if (name == "amae") return r.amae;
    if (name == "mmae") return r.mmae;
    if (name == "kappa") return r.kappa;
    if (name == "tau_b") return r.tau_b;
    if (name == "spearman") return r.spearman_rho;
    if (name == "auc") return r.auc_mean;
    if (name == "bin_accuracy") return r.bin_accuracy;
    if (name == "bin_sensitivity") return r.bin_sensitivity;
    if (name == "bin_specificity") return r.bin_specificity;
    throw std::invalid_argument("unknown metric '" + name + "'");
}

bool metric_higher_is_better(const std::string& name) {
    return !(name == "mae" || name == "amae" || name == "mmae");
}

} // namespace ogo
