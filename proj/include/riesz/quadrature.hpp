#pragma once

#include <functional>
#include <vector>

namespace riesz {

// Batched integrand sample: f(t) at the requested nodes plus per-node
// statistical and discretization errors (zeros when not applicable).
struct IntegrandBatch {
    std::vector<double> values;
    std::vector<double> stat_errors;
    std::vector<double> disc_errors;
};

// Evaluates f at a sorted list of distinct times in one call, so a Monte
// Carlo integrand can reuse a single path ensemble across all nodes and the
// quadrature sees one smooth realization.
using BatchEvaluator = std::function<IntegrandBatch(const std::vector<double>&)>;

struct SplitQuadratureSpec {
    double a = 0.5;        // weight exponent: integrand f(t) t^{a-1}
    double N = 1.0;        // split point between the two pieces
    double T = 10.0;       // upper truncation (tail handled by the caller)
    int lower_panels = 10; // geometrically graded toward t = 0
    double rel_tol = 1e-6;
    int max_rounds = 2;    // additional panel-doubling rounds if needed
};

struct SplitQuadratureResult {
    double lower = 0.0;   // integral over (0, N]
    double upper = 0.0;   // integral over [N, T]
    double value = 0.0;
    double error_estimate = 0.0;  // |nested fine - nested coarse|
    double stat_error = 0.0;      // weight-summed node statistical errors
    double disc_error = 0.0;      // weight-summed node discretization errors
    std::size_t evaluations = 0;
};

// Computes int_0^T f(t) t^{a-1} dt by splitting at N. For a < 1 the lower
// piece is transformed with t = u^{1/a}, which absorbs the weight exactly and
// removes the endpoint singularity; each panel carries a nested 17/33-point
// Clenshaw-Curtis pair whose difference is the error estimate.
SplitQuadratureResult split_integral(const BatchEvaluator& f,
                                     const SplitQuadratureSpec& spec);

// Upper bound for int_T^inf e^{-A t} t^{a-1} dt (A > 0, T > 0).
double exp_weight_tail_bound(double A, double a, double T);

}  // namespace riesz
