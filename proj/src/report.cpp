#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "ogo/distribution.hpp"
#include "ogo/experiment.hpp"

namespace ogo {

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string fmt_opt(const std::optional<double>& v) { return v ? fmt(*v) : std::string(); }

std::string csv_quote(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

std::string join_flags(const std::vector<std::string>& flags) {
    std::string out;
    for (std::size_t i = 0; i < flags.size(); ++i) {
        if (i) out += ';';
        out += flags[i];
    }
    return out;
}

std::string runs_header(int q_count) {
    std::string h = "method,fold,repeat,eta,hidden,k,failed,error";
    for (const auto& name : metric_names()) h += "," + name;
    for (int q = 0; q < q_count; ++q) h += ",s_" + std::to_string(q);
    for (int q = 0; q < q_count; ++q) h += ",sp_" + std::to_string(q);
    for (int q = 0; q < q_count; ++q) h += ",mae_" + std::to_string(q);
    for (int q = 0; q < q_count; ++q) h += ",auc_" + std::to_string(q);
    h += ",flags\n";
    return h;
}

void append_runs(std::string& out, const MethodReport& report) {
    const std::string mname = method_name(report.method);
    for (const RunRecord& run : report.runs) {
        out += mname;
        out += ',' + std::to_string(run.fold) + ',' + std::to_string(run.repeat);
        out += ',' + fmt(run.combo.learning_rate) + ',' + std::to_string(run.combo.hidden) + ',' +
               std::to_string(run.combo.k);
        out += run.failed ? ",1," : ",0,";
        out += csv_quote(run.error);
        if (run.failed) {
            const int scalar = static_cast<int>(metric_names().size());
            for (int i = 0; i < scalar + 4 * report.q_count; ++i) out += ',';
            out += ",\n";
            continue;
        }
        const MetricsReport& m = run.metrics;
        for (const auto& name : metric_names()) out += ',' + fmt_opt(metric_value(m, name));
        for (int q = 0; q < report.q_count; ++q) out += ',' + fmt_opt(m.sensitivity[q]);
        for (int q = 0; q < report.q_count; ++q) out += ',' + fmt_opt(m.specificity[q]);
        for (int q = 0; q < report.q_count; ++q) out += ',' + fmt_opt(m.mae_per_class[q]);
        for (int q = 0; q < report.q_count; ++q) out += ',' + fmt_opt(m.auc_per_class[q]);
        out += ',' + csv_quote(join_flags(m.flags)) + '\n';
    }
}

struct Summary {
    int n = 0;
    double mean = 0.0;
    std::optional<double> stddev;
};

Summary summarize(const MethodReport& report, const std::string& metric) {
    std::vector<double> values;
    for (const RunRecord& run : report.runs) {
        if (run.failed) continue;
        if (const auto v = metric_value(run.metrics, metric)) values.push_back(*v);
    }
    Summary s;
    s.n = static_cast<int>(values.size());
    if (values.empty()) return s;
    for (double v : values) s.mean += v;
    s.mean /= values.size();
    if (values.size() >= 2) {
        double acc = 0.0;
        for (double v : values) acc += (v - s.mean) * (v - s.mean);
        s.stddev = std::sqrt(acc / (values.size() - 1));
    }
    return s;
}

// --- SVG helpers -----------------------------------------------------------

struct SvgCanvas {
    std::ostringstream body;
    int width, height;

    SvgCanvas(int w, int h) : width(w), height(h) {}

    void line(double x1, double y1, double x2, double y2, const char* color, double sw = 1.0) {
        body << "<line x1='" << x1 << "' y1='" << y1 << "' x2='" << x2 << "' y2='" << y2
             << "' stroke='" << color << "' stroke-width='" << sw << "'/>\n";
    }
    void rect(double x, double y, double w, double h, const char* fill, const char* stroke) {
        body << "<rect x='" << x << "' y='" << y << "' width='" << w << "' height='" << h
             << "' fill='" << fill << "' stroke='" << stroke << "'/>\n";
    }
    void circle(double x, double y, double r, const char* color) {
        body << "<circle cx='" << x << "' cy='" << y << "' r='" << r << "' fill='none' stroke='"
             << color << "'/>\n";
    }
    void text(double x, double y, const std::string& s, int size = 11,
              const char* anchor = "middle") {
        body << "<text x='" << x << "' y='" << y << "' font-size='" << size
             << "' font-family='sans-serif' text-anchor='" << anchor << "'>" << s << "</text>\n";
    }
    void polyline(const std::vector<std::pair<double, double>>& pts, const char* color) {
        body << "<polyline fill='none' stroke='" << color << "' stroke-width='1.5' points='";
        for (const auto& [x, y] : pts) body << x << ',' << y << ' ';
        body << "'/>\n";
    }

    void save(const std::string& path) {
        std::ofstream out(path);
        if (!out) throw std::runtime_error("svg: cannot open '" + path + "'");
        out << "<svg xmlns='http://www.w3.org/2000/svg' width='" << width << "' height='"
            << height << "'>\n<rect width='100%' height='100%' fill='white'/>\n"
            << body.str() << "</svg>\n";
        if (!out) throw std::runtime_error("svg: write failed for '" + path + "'");
    }
};

double quantile_type7(const std::vector<double>& sorted, double p) {
    if (sorted.size() == 1) return sorted[0];
    const double h = (sorted.size() - 1) * p;
    const std::size_t lo = static_cast<std::size_t>(std::floor(h));
    const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    return sorted[lo] + (h - lo) * (sorted[hi] - sorted[lo]);
}

void write_boxplot(const std::string& path, const std::string& metric,
                   const std::vector<std::pair<std::string, std::vector<double>>>& groups) {
    const int box_w = 90;
    const int width = 80 + box_w * static_cast<int>(groups.size()) + 20;
    const int height = 320;
    const double top = 30, bottom = height - 50;
    SvgCanvas svg(width, height);

    double lo = 1e300, hi = -1e300;
    for (const auto& [name, values] : groups)
        for (double v : values) {
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
    if (hi <= lo) hi = lo + 1.0;
    const double pad = 0.05 * (hi - lo);
    lo -= pad;
    hi += pad;
    auto ypos = [&](double v) { return bottom - (v - lo) / (hi - lo) * (bottom - top); };

    svg.line(60, top, 60, bottom, "black");
    for (int t = 0; t <= 4; ++t) {
        const double v = lo + t * (hi - lo) / 4;
        char label[32];
        std::snprintf(label, sizeof(label), "%.3g", v);
        svg.line(56, ypos(v), 60, ypos(v), "black");
        svg.text(52, ypos(v) + 4, label, 10, "end");
    }
    svg.text(width / 2.0, 16, metric, 13);

    int gi = 0;
    for (const auto& [name, values] : groups) {
        const double cx = 60 + box_w * (gi + 0.5);
        std::vector<double> sorted(values);
        std::sort(sorted.begin(), sorted.end());
        if (!sorted.empty()) {
            const double q1 = quantile_type7(sorted, 0.25);
            const double q2 = quantile_type7(sorted, 0.5);
            const double q3 = quantile_type7(sorted, 0.75);
            const double iqr = q3 - q1;
            double wlo = q1, whi = q3;
            for (double v : sorted) {
                if (v >= q1 - 1.5 * iqr) {
                    wlo = v;
                    break;
                }
            }
            for (auto it = sorted.rbegin(); it != sorted.rend(); ++it) {
                if (*it <= q3 + 1.5 * iqr) {
                    whi = *it;
                    break;
                }
            }
            svg.line(cx, ypos(wlo), cx, ypos(q1), "black");
            svg.line(cx, ypos(q3), cx, ypos(whi), "black");
            svg.line(cx - 12, ypos(wlo), cx + 12, ypos(wlo), "black");
            svg.line(cx - 12, ypos(whi), cx + 12, ypos(whi), "black");
            svg.rect(cx - 24, ypos(q3), 48, ypos(q1) - ypos(q3), "#cfe2f3", "black");
            svg.line(cx - 24, ypos(q2), cx + 24, ypos(q2), "black", 2.0);
            for (double v : sorted)
                if (v < q1 - 1.5 * iqr || v > q3 + 1.5 * iqr) svg.circle(cx, ypos(v), 2.5, "black");
        }
        svg.text(cx, bottom + 16, name, 10);
        ++gi;
    }
    svg.save(path);
}

void write_distribution_curves(const std::string& path) {
    const int width = 560, height = 360;
    const double left = 50, right = width - 20, top = 30, bottom = height - 40;
    const double ymax = 5.0; // densities are clipped here (beta tails diverge)
    SvgCanvas svg(width, height);
    svg.line(left, bottom, right, bottom, "black");
    svg.line(left, top, left, bottom, "black");
    for (int t = 0; t <= 5; ++t) {
        const double x = left + t * (right - left) / 5;
        char label[16];
        std::snprintf(label, sizeof(label), "%.1f", t / 5.0);
        svg.line(x, bottom, x, bottom + 4, "black");
        svg.text(x, bottom + 16, label, 10);
    }
    for (int t = 0; t <= 5; ++t) {
        const double v = t * ymax / 5;
        char label[16];
        std::snprintf(label, sizeof(label), "%.0f", v);
        svg.line(left - 4, bottom - v / ymax * (bottom - top), left,
                 bottom - v / ymax * (bottom - top), "black");
        svg.text(left - 8, bottom - v / ymax * (bottom - top) + 4, label, 10, "end");
    }
    const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd"};
    const char* names[] = {"gamma", "beta-a", "beta-b", "beta-c"};
    for (int p = 0; p < 4; ++p) {
        const FrontierDistribution dist = preset(names[p]);
        std::vector<std::pair<double, double>> pts;
        for (int i = 0; i < 512; ++i) {
            const double x = (i + 0.5) / 512.0;
            const double d = std::min(pdf(dist, x), ymax);
            pts.emplace_back(left + x * (right - left),
                             bottom - d / ymax * (bottom - top));
        }
        svg.polyline(pts, colors[p]);
        svg.text(right - 80, top + 16 + 14 * p, names[p], 11, "start");
        svg.line(right - 100, top + 12 + 14 * p, right - 85, top + 12 + 14 * p, colors[p], 2.0);
    }
    svg.text(width / 2.0, 16, "frontier distributions", 13);
    svg.save(path);
}

} // namespace

std::string runs_csv(const MethodReport& report) {
    std::string out = runs_header(report.q_count);
    append_runs(out, report);
    return out;
}

void emit_reports(const ExperimentReport& report, const std::string& outdir) {
    std::size_t total_runs = 0;
    for (const auto& m : report.methods) total_runs += m.runs.size();
    if (total_runs == 0) throw std::runtime_error("emit_reports: no runs");

    namespace fs = std::filesystem;
    fs::create_directories(outdir);
    const fs::path dir(outdir);

    {
        std::string out = runs_header(report.methods.front().q_count);
        for (const auto& m : report.methods) append_runs(out, m);
        std::ofstream f(dir / "runs.csv");
        if (!f) throw std::runtime_error("emit_reports: cannot open runs.csv in '" + outdir + "'");
        f << out;
        if (!f) throw std::runtime_error("emit_reports: write failed for runs.csv");
    }

    {
        std::ofstream f(dir / "summary.csv");
        if (!f) throw std::runtime_error("emit_reports: cannot open summary.csv");
        f << "method,metric,n,mean,std\n";
        for (const auto& m : report.methods)
            for (const auto& name : metric_names()) {
                const Summary s = summarize(m, name);
                f << method_name(m.method) << ',' << name << ',' << s.n << ','
                  << (s.n ? fmt(s.mean) : std::string()) << ',' << fmt_opt(s.stddev) << '\n';
            }
    }

    if (report.methods.size() >= 2) {
        std::ofstream f(dir / "wilcoxon.csv");
        if (!f) throw std::runtime_error("emit_reports: cannot open wilcoxon.csv");
        f << "metric,method_a,method_b,n_pairs,p_value,exact,advantage\n";
        for (std::size_t i = 0; i < report.methods.size(); ++i)
            for (std::size_t j = i + 1; j < report.methods.size(); ++j)
                for (const auto& name : metric_names()) {
                    try {
                        const ComparisonResult c = compare(report.methods[i], report.methods[j], name);
                        const char* adv = c.advantage > 0   ? method_name(report.methods[i].method)
                                          : c.advantage < 0 ? method_name(report.methods[j].method)
                                                            : "tie";
                        f << name << ',' << method_name(report.methods[i].method) << ','
                          << method_name(report.methods[j].method) << ',' << c.paired_runs << ','
                          << fmt(c.wilcoxon.p_value) << ',' << (c.wilcoxon.exact ? 1 : 0) << ','
                          << adv << '\n';
                    } catch (const std::exception&) {
                        // metric missing everywhere for one side; leave it out
                    }
                }
    }

    for (const auto& name : metric_names()) {
        std::vector<std::pair<std::string, std::vector<double>>> groups;
        bool any = false;
        for (const auto& m : report.methods) {
            std::vector<double> values;
            for (const RunRecord& run : m.runs) {
                if (run.failed) continue;
                if (const auto v = metric_value(run.metrics, name)) values.push_back(*v);
            }
            any = any || !values.empty();
            groups.emplace_back(method_name(m.method), std::move(values));
        }
        if (any) write_boxplot((dir / ("boxplot_" + name + ".svg")).string(), name, groups);
    }

    write_distribution_curves((dir / "frontier_distributions.svg").string());
}

} // namespace ogo
