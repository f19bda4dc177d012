#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace riesz {

// Order-independent summation: fixed recursive pairwise tree over the index
// range, so the result is identical no matter how the work was partitioned.
double pairwise_sum(std::span<const double> xs);

struct MeanResult {
    double mean;
    double std_error;  // sample standard deviation / sqrt(n)
};
MeanResult mean_and_se(std::span<const double> xs);

// Least-squares line y = slope*x + intercept with the usual slope standard
// error; n must be >= 2 (se is 0 when n == 2 or residuals vanish).
struct LineFit {
    double slope;
    double intercept;
    double slope_se;
};
LineFit fit_line(std::span<const double> xs, std::span<const double> ys);

// Golden-section search for the maximum of a unimodal f on [lo, hi].
struct MaxResult {
    double argmax;
    double max;
};
MaxResult golden_section_maximize(const std::function<double(double)>& f, double lo,
                                  double hi, double x_tol);

double normal_cdf(double z);

double linear_interp(std::span<const double> xs, std::span<const double> ys, double x);

}  // namespace riesz
