#pragma once

#include <string_view>

#include "ogo/rng.hpp"

namespace ogo {

// Law of the interpolation weight delta used on frontier edges.
struct FrontierDistribution {
    enum class Kind { uniform01, gamma, beta };
    Kind kind = Kind::uniform01;
    double a = 0.0; // gamma shape / beta alpha
    double b = 0.0; // gamma scale / beta beta

    static FrontierDistribution uniform01();
    static FrontierDistribution gamma_dist(double shape, double scale);
    static FrontierDistribution beta_dist(double alpha, double beta);
};

// P(delta < location) = probability, both strictly inside (0, 1).
struct QuantileConstraint {
    double location;
    double probability;
};

double cdf(const FrontierDistribution& dist, double x);
double pdf(const FrontierDistribution& dist, double x);

// Fits Beta(alpha, beta) to two quantile constraints by a nested bisection:
// the inner search solves beta for a trial alpha against c1, the outer
// search drives the c2 residual to zero. Brackets start at [1e-4, 1e4] and
// expand geometrically (x10, up to 3 times) when no sign change is found.
FrontierDistribution beta_from_quantiles(QuantileConstraint c1, QuantileConstraint c2,
                                         double tol = 1e-6);

// Draws delta. Range [0,1] for uniform/beta, [0,inf) for gamma; the consumer
// is responsible for clamping gamma draws.
double sample(const FrontierDistribution& dist, Rng& rng);

// Named configurations: "gamma" is Gamma(2, 0.15); "beta-a"/"beta-b"/"beta-c"
// solve the quantile pairs {P(d<0.5)=0.75, P(d<q2)=0.9} with q2 = 0.65,
// 0.75, 0.85 respectively (solved fresh, not hard-coded).
FrontierDistribution preset(std::string_view name);

namespace special {

double log_beta(double a, double b);
// Regularized incomplete beta I_x(a, b), continued-fraction evaluation.
double reg_inc_beta(double a, double b, double x);
// Regularized lower incomplete gamma P(a, x); series for x < a+1, continued
// fraction otherwise.
double reg_lower_inc_gamma(double a, double x);

} // namespace special

} // namespace ogo
