#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace oracle {

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();

double sqdist(const ogo::LabeledDataset& ds, int i, int j) {
    double s = 0.0;
    for (int c = 0; c < ds.dim(); ++c) {
        const double d = ds.features(i, c) - ds.features(j, c);
        s += d * d;
    }
    return s;
}

std::pair<int, int> norm_pair(int a, int b) { return {std::min(a, b), std::max(a, b)}; }

} // namespace

void RefGraph::ensure(int v) {
    if (v >= static_cast<int>(present.size())) {
        present.resize(v + 1, 0);
        adj.resize(v + 1);
    }
}

void RefGraph::add_edge(int a, int b, double w) {
    ensure(std::max(a, b));
    present[a] = present[b] = 1;
    adj[a].emplace_back(b, w);
    adj[b].emplace_back(a, w);
}

RefShortest ref_shortest_paths(const RefGraph& g, int source) {
    const int n = static_cast<int>(g.present.size());
    RefShortest out;
    out.dist.assign(n, inf);
    out.pred.assign(n, -1);
    out.dist[source] = 0.0;

    // Relax every edge until nothing improves: the fixpoint of
    // dist[v] = min(dist[v], dist[u] + w), the same elementary operation the
    // library's Dijkstra performs, so agreeing values are bitwise equal.
    bool changed = true;
    while (changed) {
        changed = false;
        for (int u = 0; u < n; ++u) {
            if (out.dist[u] == inf) continue;
            for (const auto& [v, w] : g.adj[u]) {
                if (out.dist[u] + w < out.dist[v]) {
                    out.dist[v] = out.dist[u] + w;
                    changed = true;
                }
            }
        }
    }
    for (int v = 0; v < n; ++v) {
        if (v == source || out.dist[v] == inf) continue;
        double best_d = inf;
        int best_u = -1;
        for (const auto& [u, w] : g.adj[v]) {
            if (out.dist[u] + w == out.dist[v]) {
                if (out.dist[u] < best_d || (out.dist[u] == best_d && u < best_u)) {
                    best_d = out.dist[u];
                    best_u = u;
                }
            }
        }
        out.pred[v] = best_u;
    }
    return out;
}

std::vector<std::pair<int, int>> ref_knn_directed(const ogo::LabeledDataset& ds, int from_class,
                                                  int to_class, int k) {
    std::vector<std::pair<int, int>> out;
    for (int i = 0; i < ds.size(); ++i) {
        if (ds.labels[i] != from_class) continue;
        std::vector<std::pair<double, int>> cand;
        for (int j = 0; j < ds.size(); ++j) {
            if (ds.labels[j] != to_class || j == i) continue;
            cand.emplace_back(sqdist(ds, i, j), j);
        }
        std::sort(cand.begin(), cand.end());
        for (int t = 0; t < k && t < static_cast<int>(cand.size()); ++t)
            out.emplace_back(i, cand[t].second);
    }
    return out;
}

std::set<std::pair<int, int>> ref_mutual_edges(const ogo::LabeledDataset& ds, int a_class,
                                               int b_class, int k) {
    std::set<std::pair<int, int>> fwd, mutual;
    for (const auto& [i, j] : ref_knn_directed(ds, a_class, b_class, k)) fwd.insert(norm_pair(i, j));
    for (const auto& [i, j] : ref_knn_directed(ds, b_class, a_class, k))
        if (fwd.count(norm_pair(i, j))) mutual.insert(norm_pair(i, j));
    return mutual;
}

std::set<std::pair<int, int>> ref_intra_edges(const ogo::LabeledDataset& ds, int q, int k) {
    std::set<std::pair<int, int>> out;
    for (const auto& [i, j] : ref_knn_directed(ds, q, q, k)) out.insert(norm_pair(i, j));
    return out;
}

RefFrontier ref_frontier_graph(const ogo::LabeledDataset& ds, int q, int k) {
    const bool has_low = q > 0;
    const bool has_high = q + 1 < ds.q_count;
    const auto inter_low =
        has_low ? ref_mutual_edges(ds, q - 1, q, k) : std::set<std::pair<int, int>>{};
    const auto intra = ref_intra_edges(ds, q, k);
    const auto inter_high =
        has_high ? ref_mutual_edges(ds, q, q + 1, k) : std::set<std::pair<int, int>>{};

    auto endpoints = [](const std::set<std::pair<int, int>>& edges) {
        std::set<int> s;
        for (const auto& [a, b] : edges) {
            s.insert(a);
            s.insert(b);
        }
        return std::vector<int>(s.begin(), s.end());
    };

    RefFrontier out;
    out.low_endpoints = endpoints(has_low ? inter_low : intra);
    out.high_endpoints = endpoints(has_high ? inter_high : intra);

    RefGraph g;
    std::set<std::pair<int, int>> union_edges;
    for (const auto* edge_set : {&inter_low, &intra, &inter_high})
        for (const auto& [a, b] : *edge_set)
            if (union_edges.insert({a, b}).second) g.add_edge(a, b, std::sqrt(sqdist(ds, a, b)));
    if (union_edges.empty()) return out;

    for (int a : out.low_endpoints) {
        const RefShortest sp = ref_shortest_paths(g, a);
        for (int b : out.high_endpoints) {
            if (b == a) continue;
            if (sp.dist[b] == inf) {
                ++out.unreachable_pairs;
                continue;
            }
            int v = b;
            while (v != a) {
                const int u = sp.pred[v];
                if (u < 0) throw std::runtime_error("ref_frontier_graph: broken pred chain");
                out.edges.insert(norm_pair(u, v));
                v = u;
            }
        }
    }
    return out;
}

RefMetrics ref_metrics(const std::vector<int>& y, const std::vector<int>& y_hat, int q_count) {
    const double n = static_cast<double>(y.size());
    RefMetrics m{};

    double correct = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i)
        if (y[i] == y_hat[i]) correct += 1.0;
    m.ccr = correct / n;

    double gms_prod = 1.0, ms = 1.0, gmsp_prod = 1.0, msp = 1.0;
    double amae_sum = 0.0, mmae = 0.0;
    for (int q = 0; q < q_count; ++q) {
        double in_q = 0.0, hit_q = 0.0, out_q = 0.0, reject_q = 0.0, err_q = 0.0;
        for (std::size_t i = 0; i < y.size(); ++i) {
            if (y[i] == q) {
                in_q += 1.0;
                if (y_hat[i] == q) hit_q += 1.0;
                err_q += std::abs(y_hat[i] - y[i]);
            } else {
                out_q += 1.0;
                if (y_hat[i] != q) reject_q += 1.0;
            }
        }
        const double s = hit_q / in_q;
        const double sp = reject_q / out_q;
        gms_prod *= s;
        ms = std::min(ms, s);
        gmsp_prod *= sp;
        msp = std::min(msp, sp);
        const double mae_q = err_q / in_q;
        amae_sum += mae_q;
        mmae = std::max(mmae, mae_q);
    }
    m.gms = std::pow(gms_prod, 1.0 / q_count);
    m.ms = ms;
    m.gmsp = std::pow(gmsp_prod, 1.0 / q_count);
    m.msp = msp;

    double mae_sum = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) mae_sum += std::abs(y_hat[i] - y[i]);
    m.mae = mae_sum / n;
    m.amae = amae_sum / q_count;
    m.mmae = mmae;

    // kappa: w_ij = |i-j|, observed vs expected proportions.
    double observed = 0.0, expected = 0.0;
    for (int i = 0; i < q_count; ++i)
        for (int j = 0; j < q_count; ++j) {
            double p_ij = 0.0, row_i = 0.0, col_j = 0.0;
            for (std::size_t t = 0; t < y.size(); ++t) {
                if (y[t] == i && y_hat[t] == j) p_ij += 1.0;
                if (y[t] == i) row_i += 1.0;
                if (y_hat[t] == j) col_j += 1.0;
            }
            observed += std::abs(i - j) * (p_ij / n);
            expected += std::abs(i - j) * (row_i / n) * (col_j / n);
        }
    m.kappa = 1.0 - observed / expected;

    // tau-b by direct pair enumeration.
    double nc = 0.0, nd = 0.0, n1 = 0.0, n2 = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i)
        for (std::size_t j = i + 1; j < y.size(); ++j) {
            const bool yi_lt = y[i] < y[j], yi_gt = y[i] > y[j];
            const bool hi_lt = y_hat[i] < y_hat[j], hi_gt = y_hat[i] > y_hat[j];
            if ((yi_lt && hi_lt) || (yi_gt && hi_gt)) nc += 1.0;
            else if ((yi_lt && hi_gt) || (yi_gt && hi_lt)) nd += 1.0;
            else if (!yi_lt && !yi_gt && (hi_lt || hi_gt)) n1 += 1.0;
            else if ((yi_lt || yi_gt) && !hi_lt && !hi_gt) n2 += 1.0;
        }
    m.tau = (nc - nd) / std::sqrt((nc + nd + n1) * (nc + nd + n2));

    // Spearman of the paper: Pearson on the raw labels.
    double my = 0.0, mh = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        my += y[i];
        mh += y_hat[i];
    }
    my /= n;
    mh /= n;
    double cov = 0.0, vy = 0.0, vh = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        cov += (y[i] - my) * (y_hat[i] - mh);
        vy += (y[i] - my) * (y[i] - my);
        vh += (y_hat[i] - mh) * (y_hat[i] - mh);
    }
    m.rho = (cov / n) / (std::sqrt(vy / n) * std::sqrt(vh / n));
    return m;
}

double ref_wilcoxon_enumeration(const std::vector<double>& a, const std::vector<double>& b) {
    std::vector<double> abs_d;
    std::vector<int> sign;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        if (d == 0.0) continue;
        abs_d.push_back(std::fabs(d));
        sign.push_back(d > 0.0 ? 1 : -1);
    }
    const int n = static_cast<int>(abs_d.size());
    if (n == 0) return 1.0;
    if (n > 20) throw std::invalid_argument("ref_wilcoxon_enumeration: n too large");

    // Midranks without sorting: count strictly-smaller and equal values.
    std::vector<double> rank(n);
    for (int i = 0; i < n; ++i) {
        int less = 0, equal = 0;
        for (int j = 0; j < n; ++j) {
            if (abs_d[j] < abs_d[i]) ++less;
            if (abs_d[j] == abs_d[i]) ++equal;
        }
        rank[i] = less + (equal + 1) / 2.0;
    }

    double w_plus = 0.0, total = 0.0;
    for (int i = 0; i < n; ++i) {
        total += rank[i];
        if (sign[i] > 0) w_plus += rank[i];
    }
    const double w_min = std::min(w_plus, total - w_plus);

    long long count = 0;
    const long long patterns = 1LL << n;
    for (long long mask = 0; mask < patterns; ++mask) {
        double w = 0.0;
        for (int i = 0; i < n; ++i)
            if (mask & (1LL << i)) w += rank[i];
        if (w <= w_min) ++count;
    }
    const double p = 2.0 * static_cast<double>(count) / static_cast<double>(patterns);
    return std::min(1.0, p);
}

namespace {

constexpr double gl_x[16] = {
    -9.89400934991649939e-01, -9.44575023073232600e-01, -8.65631202387831755e-01,
    -7.55404408355002999e-01, -6.17876244402643771e-01, -4.58016777657227370e-01,
    -2.81603550779258915e-01, -9.50125098376374544e-02, 9.50125098376374544e-02,
    2.81603550779258915e-01,  4.58016777657227370e-01,  6.17876244402643771e-01,
    7.55404408355002999e-01,  8.65631202387831755e-01,  9.44575023073232600e-01,
    9.89400934991649939e-01};
constexpr double gl_w[16] = {
    2.71524594117540374e-02, 6.22535239386477063e-02, 9.51585116824925914e-02,
    1.24628971255534030e-01, 1.49595988816576764e-01, 1.69156519395002619e-01,
    1.82603415044923612e-01, 1.89450610455068585e-01, 1.89450610455068585e-01,
    1.82603415044923612e-01, 1.69156519395002619e-01, 1.49595988816576764e-01,
    1.24628971255534030e-01, 9.51585116824925914e-02, 6.22535239386477063e-02,
    2.71524594117540374e-02};

double gl16(const std::function<double(double)>& f, double a, double b) {
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    double s = 0.0;
    for (int i = 0; i < 16; ++i) s += gl_w[i] * f(mid + half * gl_x[i]);
    return s * half;
}

// Integrates f over [0, x] where f ~ c * t^(power-1) near 0: geometric
// panels x*2^-j plus the analytic head of the leading power term.
double integrate_left_singular(const std::function<double(double)>& f, double x, double power,
                               double head_coeff, int levels = 64) {
    double total = 0.0;
    double hi = x;
    for (int j = 0; j < levels; ++j) {
        const double lo = hi * 0.5;
        total += gl16(f, lo, hi);
        hi = lo;
    }
    // Head: integral of head_coeff * t^(power-1) over [0, hi]; the omitted
    // relative correction is O(hi).
    total += head_coeff * std::pow(hi, power) / power;
    return total;
}

// Integrates f over [lo, hi] with panels shrinking geometrically toward hi,
// for integrands whose derivatives blow up just past hi (no singularity at
// hi itself).
double integrate_right_refined(const std::function<double(double)>& f, double lo, double hi) {
    constexpr int levels = 50;
    double total = 0.0;
    double width = hi - lo;
    double left = lo;
    for (int j = 0; j < levels; ++j) {
        width *= 0.5;
        total += gl16(f, left, hi - width);
        left = hi - width;
    }
    total += gl16(f, left, hi);
    return total;
}

double log_beta_fn(double a, double b) {
    return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
}

} // namespace

double quad_reg_inc_beta(double a, double b, double x) {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    const double lb = log_beta_fn(a, b);
    auto f = [&](double t) { return std::exp((a - 1.0) * std::log(t) + (b - 1.0) * std::log1p(-t) - lb); };
    // Split at x/2: the left part handles the t^(a-1) singularity at 0, the
    // right part refines toward x where (1-t)^(b-1) may be near-singular.
    return integrate_left_singular(f, 0.5 * x, a, std::exp(-lb)) +
           integrate_right_refined(f, 0.5 * x, x);
}

double quad_reg_lower_inc_gamma(double a, double x) {
    if (x <= 0.0) return 0.0;
    const double lg = std::lgamma(a);
    auto f = [&](double t) { return std::exp((a - 1.0) * std::log(t) - t - lg); };
    return integrate_left_singular(f, x, a, std::exp(-lg));
}

double integrate_pdf(const ogo::FrontierDistribution& dist) {
    using Kind = ogo::FrontierDistribution::Kind;
    auto f = [&](double t) { return ogo::pdf(dist, t); };
    switch (dist.kind) {
    case Kind::uniform01:
        return gl16(f, 0.0, 1.0);
    case Kind::gamma: {
        // Support [0, inf); truncate where the tail is far below tolerance.
        const double cutoff = dist.b * (dist.a + 1.0) * 40.0;
        double total = integrate_left_singular(f, 1.0, dist.a,
                                               std::exp(-std::lgamma(dist.a)) / dist.b *
                                                   std::pow(1.0 / dist.b, dist.a - 1.0));
        for (double lo = 1.0; lo < cutoff; lo += 1.0) total += gl16(f, lo, lo + 1.0);
        return total;
    }
    case Kind::beta: {
        const double lb = log_beta_fn(dist.a, dist.b);
        // Left half rises from the alpha singularity, right half mirrors it.
        // The right half stops at 50 halvings: beyond that 1 - t rounds to
        // exactly 1; the analytic head covers the remainder.
        const double left = integrate_left_singular(f, 0.5, dist.a, std::exp(-lb));
        auto g = [&](double t) { return ogo::pdf(dist, 1.0 - t); };
        const double right = integrate_left_singular(g, 0.5, dist.b, std::exp(-lb), 50);
        return left + right;
    }
    }
    return 0.0;
}

double ks_distance(std::vector<double> samples, const std::function<double(double)>& cdf) {
    std::sort(samples.begin(), samples.end());
    const double n = static_cast<double>(samples.size());
    double d = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const double F = cdf(samples[i]);
        d = std::max(d, std::fabs((i + 1) / n - F));
        d = std::max(d, std::fabs(F - i / n));
    }
    return d;
}

} // namespace oracle
