#include <doctest.h>

#include <cmath>
#include <vector>

#include "oracles.hpp"
#include "riesz/quadrature.hpp"
#include "riesz/riesz.hpp"

using namespace riesz;

namespace {

// analytic integrand wrapper with no errors attached
BatchEvaluator analytic(const std::function<double(double)>& f) {
    return [f](const std::vector<double>& ts) {
        IntegrandBatch b;
        b.values.reserve(ts.size());
        for (double t : ts) b.values.push_back(f(t));
        return b;
    };
}

}  // namespace

TEST_CASE("gamma integral oracle closed form") {
    CHECK(gamma_integral_oracle(1.0, 1.0, 0.0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(gamma_integral_oracle(2.0, 2.0, 1.0) == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(gamma_integral_oracle(3.0, 1.5, 0.2) ==
          doctest::Approx(oracles::kGammaIntegral_3_15_02).epsilon(1e-12));
    CHECK_THROWS_AS(gamma_integral_oracle(-1.0, 1.0, 0.0), std::domain_error);
    CHECK_THROWS_AS(gamma_integral_oracle(1.0, 0.0, 0.0), std::domain_error);
    CHECK_THROWS_AS(gamma_integral_oracle(1.0, 1.0, -1.0), std::domain_error);
}

TEST_CASE("pipeline reproduces the gamma closed form on the full matrix") {
    for (double A : {0.5, 1.0, 5.0})
        for (double beta : {1.0, 1.5, 2.0})
            for (double gamma : {-0.5, 0.0, 1.0}) {
                SplitQuadratureSpec spec;
                spec.a = gamma + 1.0;
                spec.N = 1.0;
                spec.T = std::max(2.0, std::pow(34.0 / A, 1.0 / beta));
                const auto f = analytic(
                    [A, beta](double t) { return std::exp(-A * std::pow(t, beta)); });
                const auto res = split_integral(f, spec);
                const double exact = gamma_integral_oracle(A, beta, gamma);
                CHECK(std::fabs(res.value - exact) / exact <= 1e-6);
                CHECK(res.error_estimate >= 0.0);
            }
}

TEST_CASE("trivial integrands") {
    SplitQuadratureSpec spec;
    spec.a = 1.0;
    spec.N = 1.0;
    spec.T = 2.0;
    const auto res = split_integral(analytic([](double) { return 1.0; }), spec);
    CHECK(res.value == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(res.lower == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(res.upper == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("split point is an implementation device") {
    const auto f = analytic([](double t) { return std::exp(-t); });
    std::vector<double> values;
    for (double N : {0.5, 1.0, 2.0}) {
        SplitQuadratureSpec spec;
        spec.a = 0.5;
        spec.N = N;
        spec.T = 40.0;
        values.push_back(split_integral(f, spec).value);
    }
    for (double v : values) CHECK(v == doctest::Approx(values[0]).epsilon(1e-9));
    // and the total matches Gamma(1/2) = sqrt(pi) for exp(-t) t^{-1/2}
    CHECK(values[0] == doctest::Approx(std::sqrt(M_PI)).epsilon(1e-7));
}

TEST_CASE("tail bound dominates the true remainder") {
    for (double A : {0.5, 2.0})
        for (double a : {0.5, 1.0, 2.0, 3.0})
            for (double T : {2.0, 5.0}) {
                const double bound = exp_weight_tail_bound(A, a, T);
                const double truth = oracles::integrate(
                    [&](double t) { return std::exp(-A * t) * std::pow(t, a - 1.0); }, T,
                    T + 200.0 / A, 1e-13);
                CHECK(bound >= truth * (1.0 - 1e-9));  // equality at a = 1
                CHECK(bound <= 100.0 * truth + 1e-300);  // not absurdly loose
            }
}

TEST_CASE("statistical errors are weight-aggregated") {
    SplitQuadratureSpec spec;
    spec.a = 1.0;
    spec.N = 1.0;
    spec.T = 2.0;
    const auto f = [](const std::vector<double>& ts) {
        IntegrandBatch b;
        b.values.assign(ts.size(), 1.0);
        b.stat_errors.assign(ts.size(), 0.01);
        return b;
    };
    const auto res = split_integral(f, spec);
    // sum of |w| sigma over a unit integrand on [0, 2] is about 0.01 * 2
    CHECK(res.stat_error == doctest::Approx(0.02).epsilon(1e-6));
}
