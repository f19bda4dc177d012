#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <vector>

#include "oracles.hpp"
#include "riesz/numerics.hpp"
#include "riesz/paths.hpp"

using namespace riesz;

namespace {
PathConfig small_cfg() {
    PathConfig cfg;
    cfg.n_paths = 20000;
    cfg.dt = 1e-3;
    cfg.horizon = 1.0;
    cfg.seed = 777;
    return cfg;
}
}  // namespace

TEST_CASE("path config validation") {
    PathConfig cfg;
    cfg.dt = 0.0;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg = PathConfig{};
    cfg.dt = 2.0;
    cfg.horizon = 1.0;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg = PathConfig{};
    cfg.n_paths = 0;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);

    const Potential p = Potential::constant_coeff(2.0, 1, 1.0);
    const std::vector<double> bad{2.0};  // beyond horizon
    CHECK_THROWS_AS(sample_paths_1d(small_cfg(), 0.0, p, 0, bad), std::invalid_argument);
}

TEST_CASE("zero potential gives unit weights") {
    const Potential z = Potential::zero_test_mode(1);
    PathConfig cfg = small_cfg();
    cfg.n_paths = 500;
    const std::vector<double> ts{0.5, 1.0};
    const auto ens = sample_paths_1d(cfg, 0.3, z, 0, ts);
    for (const auto& per_time : ens)
        for (const auto& we : per_time) CHECK(we.log_weight == 0.0);
}

TEST_CASE("seed determinism and log-weight sign") {
    const Potential p = Potential::constant_coeff(2.0, 1, 1.0);
    PathConfig cfg = small_cfg();
    cfg.n_paths = 200;
    const std::vector<double> ts{0.25, 1.0};
    const auto a = sample_paths_1d(cfg, 1.0, p, 0, ts);
    const auto b = sample_paths_1d(cfg, 1.0, p, 0, ts);
    for (std::size_t k = 0; k < ts.size(); ++k)
        for (std::size_t j = 0; j < cfg.n_paths; ++j) {
            CHECK(a[k][j].endpoint == b[k][j].endpoint);
            CHECK(a[k][j].log_weight == b[k][j].log_weight);
            CHECK(a[k][j].log_weight <= 0.0);
        }
}

TEST_CASE("worker partition does not change results") {
    const Potential p = Potential::constant_coeff(2.0, 1, 1.0);
    PathConfig cfg = small_cfg();
    cfg.n_paths = 9000;
    const std::vector<double> ts{1.0};
    setenv("RIESZ_THREADS", "1", 1);
    const auto m1 = accumulate_paths_1d(cfg, 0.5, CoordinatePotential::of(p, 0), 0, ts,
                                        nullptr, 0.0);
    setenv("RIESZ_THREADS", "2", 1);
    const auto m2 = accumulate_paths_1d(cfg, 0.5, CoordinatePotential::of(p, 0), 0, ts,
                                        nullptr, 0.0);
    unsetenv("RIESZ_THREADS");
    CHECK(m1.mean_w[0] == m2.mean_w[0]);
    CHECK(m1.se_w[0] == m2.se_w[0]);
}

TEST_CASE("antithetic pairing reflects endpoints about the start") {
    const Potential p = Potential::constant_coeff(2.0, 1, 1.0);
    PathConfig cfg = small_cfg();
    cfg.n_paths = 64;
    cfg.antithetic = true;
    const double start = 0.7;
    const std::vector<double> ts{1.0};
    const auto ens = sample_paths_1d(cfg, start, p, 0, ts);
    for (std::size_t j = 0; j + 1 < cfg.n_paths; j += 2)
        CHECK(ens[0][j].endpoint + ens[0][j + 1].endpoint ==
              doctest::Approx(2.0 * start).epsilon(1e-12));
}

TEST_CASE("Brownian absolute moments match the Gaussian law") {
    const Potential z = Potential::zero_test_mode(1);
    PathConfig cfg = small_cfg();
    cfg.n_paths = 40000;
    for (const auto& [alpha, s] : std::vector<std::pair<double, double>>{
             {1.0, 1.0}, {1.5, 0.25}, {2.0, 0.5}, {1.0, 1e-3}}) {  // last: one step
        const std::vector<double> ts{s};
        const auto ens = sample_paths_1d(cfg, 0.0, z, 0, ts);
        std::vector<double> vals(cfg.n_paths);
        for (std::size_t j = 0; j < cfg.n_paths; ++j)
            vals[j] = std::pow(std::fabs(ens[0][j].endpoint), alpha);
        const auto mr = mean_and_se(vals);
        const double expect = oracles::gaussian_abs_moment(alpha, s);
        CHECK(std::fabs(mr.mean - expect) <= 3.0 * mr.std_error);
    }
    // frozen spot value for the oracle itself
    CHECK(oracles::gaussian_abs_moment(1.5, 0.25) ==
          doctest::Approx(oracles::kAbsMoment_a15_s025).epsilon(1e-12));
}

TEST_CASE("weight monotonicity in the coefficient") {
    PathConfig cfg = small_cfg();
    cfg.n_paths = 500;
    const Potential lo = Potential::constant_coeff(2.0, 1, 1.0);
    const Potential hi = Potential::constant_coeff(2.0, 1, 2.0);
    const std::vector<double> ts{0.5};
    const auto a = sample_paths_1d(cfg, 1.0, lo, 0, ts);
    const auto b = sample_paths_1d(cfg, 1.0, hi, 0, ts);
    for (std::size_t j = 0; j < cfg.n_paths; ++j) {
        CHECK(b[0][j].endpoint == a[0][j].endpoint);  // same driving noise
        CHECK(b[0][j].log_weight <= a[0][j].log_weight);
    }
}

TEST_CASE("coordinates are independent streams") {
    const Potential z = Potential::zero_test_mode(2);
    PathConfig cfg = small_cfg();
    cfg.n_paths = 40000;
    const std::vector<double> ts{1.0};
    const auto e0 = sample_paths_1d(cfg, 0.0, z, 0, ts);
    const auto e1 = sample_paths_1d(cfg, 0.0, z, 1, ts);
    std::vector<double> prod(cfg.n_paths);
    for (std::size_t j = 0; j < cfg.n_paths; ++j)
        prod[j] = e0[0][j].endpoint * e1[0][j].endpoint;
    const auto mr = mean_and_se(prod);
    CHECK(std::fabs(mr.mean) <= 3.0 * mr.std_error);
}

TEST_CASE("sup deviation probability estimates") {
    PathConfig cfg = small_cfg();
    cfg.n_paths = 30000;
    cfg.horizon = 0.5;

    // far radius: certain zero
    const auto far = sup_deviation_probability(cfg, 0.0, 100.0, 0.1);
    CHECK(far.estimate == 0.0);

    // start 0: estimate below the reflection closed-form upper bound
    const auto mid = sup_deviation_probability(cfg, 0.0, 1.0, 0.5);
    CHECK(mid.estimate <= oracles::reflection_upper(1.0, 0.5) + 3.0 * mid.std_error);
    CHECK(mid.estimate > 0.0);

    // start 4, radius 2: below the exponential bound with a wide margin
    const auto node = sup_deviation_probability(cfg, 4.0, 2.0, 0.5);
    CHECK(node.estimate + 3.0 * node.std_error <= oracles::kReflectionBound_x4_t05);
    // and consistent with the exact reflection value
    CHECK(std::fabs(node.estimate - oracles::kReflectionExact_r2_t05) <=
          3.0 * node.std_error + 2e-3);

    CHECK_THROWS_AS(sup_deviation_probability(cfg, 0.0, -1.0, 0.1), std::invalid_argument);
}
