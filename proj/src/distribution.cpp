#include "ogo/distribution.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>

namespace ogo {

namespace special {

double log_beta(double a, double b) {
    return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
}

namespace {

// Continued fraction for the incomplete beta function (modified Lentz).
double beta_cont_fraction(double a, double b, double x) {
    constexpr int max_iter = 300;
    constexpr double eps = 1e-16;
    constexpr double tiny = 1e-300;

    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::fabs(d) < tiny) d = tiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= max_iter; ++m) {
        const int m2 = 2 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < tiny) d = tiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < tiny) d = tiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < eps) break;
    }
    return h;
}

} // namespace

double reg_inc_beta(double a, double b, double x) {
    if (!(a > 0.0) || !(b > 0.0))
        throw std::invalid_argument("reg_inc_beta: parameters must be positive");
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    const double front =
        std::exp(a * std::log(x) + b * std::log1p(-x) - log_beta(a, b));
    // Use the symmetry I_x(a,b) = 1 - I_{1-x}(b,a) on the side where the
    // continued fraction converges fast.
    if (x < (a + 1.0) / (a + b + 2.0))
        return front * beta_cont_fraction(a, b, x) / a;
    return 1.0 - front * beta_cont_fraction(b, a, 1.0 - x) / b;
}

double reg_lower_inc_gamma(double a, double x) {
    if (!(a > 0.0)) throw std::invalid_argument("reg_lower_inc_gamma: a must be positive");
    if (x <= 0.0) return 0.0;

    const double lg = std::lgamma(a);
    if (x < a + 1.0) {
        // Series expansion.
        double ap = a;
        double sum = 1.0 / a;
        double del = sum;
        for (int i = 0; i < 500; ++i) {
            ap += 1.0;
            del *= x / ap;
            sum += del;
            if (std::fabs(del) < std::fabs(sum) * 1e-16) break;
        }
        return sum * std::exp(-x + a * std::log(x) - lg);
    }
    // Continued fraction for the upper tail (modified Lentz).
    constexpr double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= 500; ++i) {
        const double an = -static_cast<double>(i) * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < 1e-16) break;
    }
    return 1.0 - std::exp(-x + a * std::log(x) - lg) * h;
}

} // namespace special

FrontierDistribution FrontierDistribution::uniform01() {
    FrontierDistribution d;
    d.kind = Kind::uniform01;
    return d;
}

FrontierDistribution FrontierDistribution::gamma_dist(double shape, double scale) {
    if (!(shape > 0.0) || !(scale > 0.0))
        throw std::invalid_argument("gamma: shape and scale must be positive");
    FrontierDistribution d;
    d.kind = Kind::gamma;
    d.a = shape;
    d.b = scale;
    return d;
}

FrontierDistribution FrontierDistribution::beta_dist(double alpha, double beta) {
    if (!(alpha > 0.0) || !(beta > 0.0))
        throw std::invalid_argument("beta: alpha and beta must be positive");
    FrontierDistribution d;
    d.kind = Kind::beta;
    d.a = alpha;
    d.b = beta;
    return d;
}

double cdf(const FrontierDistribution& dist, double x) {
    switch (dist.kind) {
    case FrontierDistribution::Kind::uniform01:
        if (x <= 0.0) return 0.0;
        if (x >= 1.0) return 1.0;
        return x;
    case FrontierDistribution::Kind::gamma:
        if (x <= 0.0) return 0.0;
        return special::reg_lower_inc_gamma(dist.a, x / dist.b);
    case FrontierDistribution::Kind::beta:
        return special::reg_inc_beta(dist.a, dist.b, x);
    }
    return 0.0;
}

double pdf(const FrontierDistribution& dist, double x) {
    constexpr double inf = std::numeric_limits<double>::infinity();
    switch (dist.kind) {
    case FrontierDistribution::Kind::uniform01:
        return (x >= 0.0 && x <= 1.0) ? 1.0 : 0.0;
    case FrontierDistribution::Kind::gamma: {
        if (x < 0.0) return 0.0;
        if (x == 0.0) {
            if (dist.a < 1.0) return inf;
            if (dist.a == 1.0) return 1.0 / dist.b;
            return 0.0;
        }
        const double z = x / dist.b;
        return std::exp((dist.a - 1.0) * std::log(z) - z - std::lgamma(dist.a)) / dist.b;
    }
    case FrontierDistribution::Kind::beta: {
        if (x < 0.0 || x > 1.0) return 0.0;
        if (x == 0.0) {
            if (dist.a < 1.0) return inf;
            if (dist.a == 1.0) return std::exp(-special::log_beta(dist.a, dist.b));
            return 0.0;
        }
        if (x == 1.0) {
            if (dist.b < 1.0) return inf;
            if (dist.b == 1.0) return std::exp(-special::log_beta(dist.a, dist.b));
            return 0.0;
        }
        return std::exp((dist.a - 1.0) * std::log(x) + (dist.b - 1.0) * std::log1p(-x) -
                        special::log_beta(dist.a, dist.b));
    }
    }
    return 0.0;
}

namespace {

constexpr double bracket_lo_init = 1e-4;
constexpr double bracket_hi_init = 1e4;
constexpr int bracket_expansions = 3;
constexpr int bisection_iters = 200;

// Bisects f on a sign-changing bracket, expanding [lo, hi] geometrically
// (x10 each side) up to `bracket_expansions` times if needed.
double bisect_expanding(const std::function<double(double)>& f, const char* what) {
    double lo = bracket_lo_init, hi = bracket_hi_init;
    double flo = f(lo), fhi = f(hi);
    for (int e = 0; e < bracket_expansions && flo * fhi > 0.0; ++e) {
        lo /= 10.0;
        hi *= 10.0;
        flo = f(lo);
        fhi = f(hi);
    }
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if (flo * fhi > 0.0)
        throw std::runtime_error(std::string("beta_from_quantiles: no ") + what +
                                 " bracket after expansion (inconsistent constraints?)");
    for (int i = 0; i < bisection_iters; ++i) {
        const double mid = 0.5 * (lo + hi);
        const double fm = f(mid);
        if (fm == 0.0) return mid;
        if (flo * fm < 0.0) {
            hi = mid;
        } else {
            lo = mid;
            flo = fm;
        }
    }
    return 0.5 * (lo + hi);
}

} // namespace

FrontierDistribution beta_from_quantiles(QuantileConstraint c1, QuantileConstraint c2,
                                         double tol) {
    auto inside = [](double v) { return v > 0.0 && v < 1.0; };
    if (!inside(c1.location) || !inside(c1.probability) || !inside(c2.location) ||
        !inside(c2.probability))
        throw std::invalid_argument("beta_from_quantiles: constraints must lie inside (0,1)");
    if (!(c1.location < c2.location) || !(c1.probability < c2.probability))
        throw std::invalid_argument("beta_from_quantiles: need c1.q < c2.q and c1.p < c2.p");
    if (!(tol > 0.0)) throw std::invalid_argument("beta_from_quantiles: tol must be positive");

    // Inner solve: for fixed alpha, I_{q1}(alpha, beta) is increasing in
    // beta, so the first constraint pins beta uniquely.
    auto beta_for_alpha = [&](double alpha) {
        return bisect_expanding(
            [&](double b) { return special::reg_inc_beta(alpha, b, c1.location) - c1.probability; },
            "inner (beta)");
    };
    const double alpha = bisect_expanding(
        [&](double a) {
            return special::reg_inc_beta(a, beta_for_alpha(a), c2.location) - c2.probability;
        },
        "outer (alpha)");
    const double beta = beta_for_alpha(alpha);

    const FrontierDistribution result = FrontierDistribution::beta_dist(alpha, beta);
    if (std::fabs(cdf(result, c1.location) - c1.probability) > tol ||
        std::fabs(cdf(result, c2.location) - c2.probability) > tol)
        throw std::runtime_error("beta_from_quantiles: solution does not meet tolerance");
    return result;
}

namespace {

// Marsaglia-Tsang for shape >= 1; shapes below 1 are boosted with
// Gamma(a) = Gamma(a+1) * U^(1/a).
double sample_standard_gamma(double shape, Rng& rng) {
    if (shape < 1.0) {
        double u;
        do {
            u = rng.u01();
        } while (u == 0.0);
        return sample_standard_gamma(shape + 1.0, rng) * std::pow(u, 1.0 / shape);
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
        double x, v;
        do {
            x = rng.normal();
            v = 1.0 + c * x;
        } while (v <= 0.0);
        v = v * v * v;
        const double u = rng.u01();
        if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
        if (u > 0.0 && std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
    }
}

} // namespace

double sample(const FrontierDistribution& dist, Rng& rng) {
    switch (dist.kind) {
    case FrontierDistribution::Kind::uniform01:
        return rng.u01();
    case FrontierDistribution::Kind::gamma:
        return dist.b * sample_standard_gamma(dist.a, rng);
    case FrontierDistribution::Kind::beta: {
        for (;;) {
            const double x = sample_standard_gamma(dist.a, rng);
            const double y = sample_standard_gamma(dist.b, rng);
            if (x + y > 0.0) return x / (x + y);
        }
    }
    }
    return 0.0;
}

FrontierDistribution preset(std::string_view name) {
    if (name == "gamma") return FrontierDistribution::gamma_dist(2.0, 0.15);
    if (name == "beta-a") return beta_from_quantiles({0.5, 0.75}, {0.65, 0.9});
    if (name == "beta-b") return beta_from_quantiles({0.5, 0.75}, {0.75, 0.9});
    if (name == "beta-c") return beta_from_quantiles({0.5, 0.75}, {0.85, 0.9});
    throw std::invalid_argument("preset: unknown frontier distribution '" + std::string(name) +
                                "' (expected gamma, beta-a, beta-b or beta-c)");
}

} // namespace ogo
