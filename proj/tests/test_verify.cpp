#include <doctest.h>

#include <cmath>
#include <vector>

#include "oracles.hpp"
#include "riesz/verify.hpp"

using namespace riesz;

namespace {

const Potential kOsc = Potential::constant_coeff(2.0, 1, 1.0);

BackendConfig grid_backend() {
    BackendConfig cfg;
    cfg.backend = Backend::grid;
    return cfg;
}

}  // namespace

TEST_CASE("catalog lists every certificate once") {
    const auto& cat = list_certificates();
    CHECK(cat.size() == 8);
    auto has = [&](const char* name) {
        for (const auto& c : cat)
            if (c.name == name) return true;
        return false;
    };
    CHECK(has("small_time_decay"));
    CHECK(has("small_time_decay_near_origin"));
    CHECK(has("large_time_decay"));
    CHECK(has("reflection_bound"));
    CHECK(has("derivative_identity"));
    CHECK(has("power_exp_max_bound"));
    CHECK(has("dimension_sweep"));
    CHECK(has("l1_adjoint_side"));
}

TEST_CASE("power-exp maximum certificate") {
    const auto cert = certify_xexmax(default_power_exp_max_cases());
    CHECK(cert.passed);
    CHECK(cert.n_nodes == 9);
    CHECK(cert.fitted_constants.at("worst_rel_gap") <= 1e-10);
}

TEST_CASE("small-time decay fit matches the closed-form infimum") {
    const auto cert = certify_small_time_decay(kOsc, default_small_time_grid(), grid_backend());
    CHECK(cert.passed);
    const double c_fit = cert.fitted_constants.at("c_N");
    CHECK(c_fit > 0.0);
    CHECK(std::fabs(c_fit - oracles::kSmallTimeInfimum) / oracles::kSmallTimeInfimum <= 0.1);
    CHECK(cert.worst_margin >= 0.0);

    // the oracle infimum recomputed here over the same grid
    double inf = 1e300;
    const auto grid = default_small_time_grid();
    for (double t : grid.times)
        for (double x : grid.xs)
            inf = std::min(inf, -std::log(oracles::mehler_one(1.0, t, x)) / (t * x * x));
    CHECK(inf == doctest::Approx(oracles::kSmallTimeInfimum).epsilon(1e-9));
}

TEST_CASE("degenerate potential is flagged, never silently counted") {
    const Potential z = Potential::zero_test_mode(1);
    BackendConfig zb = grid_backend();
    zb.grid.x_max = 30.0;
    const auto cert = certify_small_time_decay(z, default_small_time_grid(), zb);
    CHECK(cert.vacuous);
    CHECK(cert.passed);
    CHECK(cert.note.find("degenerate") != std::string::npos);

    const auto decay = fit_large_time_decay(z, 1, zb);
    CHECK_FALSE(decay.passed);
    CHECK(decay.note.find("degenerate") != std::string::npos);
}

TEST_CASE("fitted constant shrinks when N grows") {
    DecayGrid g1 = default_small_time_grid();
    DecayGrid g2 = g1;
    g2.N = 2.0;
    for (double extra : {1.2, 1.4, 1.6, 1.8, 2.0}) g2.times.push_back(extra);
    const auto c1 = certify_small_time_decay(kOsc, g1, grid_backend());
    const auto c2 = certify_small_time_decay(kOsc, g2, grid_backend());
    CHECK(c2.fitted_constants.at("c_N") <= c1.fitted_constants.at("c_N") + 1e-12);
}

TEST_CASE("near-origin variant and constant ordering") {
    DecayGrid shared = default_small_time_grid();
    shared.xs = {0.5, 1.0, 2.0, 4.0};  // the |x| <= 4 sub-grid
    const auto near =
        certify_small_time_decay_near_origin(kOsc, default_near_origin_grid(), grid_backend());
    CHECK(near.passed);
    const auto small = certify_small_time_decay(kOsc, shared, grid_backend());
    CHECK(near.fitted_constants.at("c_N") <= small.fitted_constants.at("c_N") + 1e-12);

    // at x = 0, t = 1 the bound reduces to the pure t-power term
    CHECK(near.fitted_constants.at("c_N") <=
          -std::log(oracles::mehler_one(1.0, 1.0, 0.0)) + 1e-9);

    DecayGrid bad = default_near_origin_grid();
    bad.xs.push_back(5.0);
    CHECK_THROWS_AS(certify_small_time_decay_near_origin(kOsc, bad, grid_backend()),
                    std::invalid_argument);
}

TEST_CASE("extension of the constant from a shorter window") {
    // constant fitted on t <= t0 extends as c * t0 / N to the full window
    DecayGrid head = default_small_time_grid();
    head.times = {0.1, 0.2, 0.3, 0.4, 0.5};
    head.N = 0.5;
    const double t0 = 0.5, N = 1.0;
    const auto cert = certify_small_time_decay(kOsc, head, grid_backend());
    const double c_ext = cert.fitted_constants.at("c_N") * t0 / N;
    for (double t : {0.6, 0.8, 1.0})
        for (double x : {0.5, 1.0, 2.0, 4.0, 6.0})
            CHECK(oracles::mehler_one(1.0, t, x) <=
                  std::exp(-c_ext * t * x * x) * (1.0 + 1e-9));
}

TEST_CASE("large-time decay certificate") {
    const auto cert = fit_large_time_decay(kOsc, 1, grid_backend());
    CHECK(cert.passed);
    const double delta = cert.fitted_constants.at("delta_fit");
    CHECK(delta > 0.0);
    // one node of the fit, checked against the oracle
    CHECK(delta <= -std::log(oracles::kMehler_t2_x0) / 2.0 + 1e-9);
}

TEST_CASE("reflection bound certificate") {
    PathConfig pc;
    pc.n_paths = 20000;
    pc.dt = 1e-3;
    pc.horizon = 0.5;
    pc.seed = 99;
    const auto cert = certify_reflection_bound(pc, default_reflection_grid());
    CHECK(cert.passed);
    CHECK(cert.worst_margin >= 0.0);

    // vacuous nodes are flagged, not silently counted
    ReflectionGrid vac;
    vac.nodes = {{1.0, 8.0}};  // bound 4 e^{-1/64} > 1
    PathConfig pc2 = pc;
    pc2.n_paths = 2000;
    pc2.dt = 5e-3;
    pc2.horizon = 8.0;
    const auto vcert = certify_reflection_bound(pc2, vac);
    CHECK(vcert.vacuous);
    CHECK(vcert.passed);
    CHECK(vcert.fitted_constants.at("n_vacuous") == 1.0);
}

TEST_CASE("derivative identity certificate") {
    const auto cert =
        certify_derivative_identity(kOsc, default_derivative_grid(), GridSolverConfig{});
    CHECK(cert.passed);
    CHECK(cert.fitted_constants.at("max_rel_mismatch") <= 1e-3);
}

TEST_CASE("dimension sweep runs and is deterministic") {
    DimensionSweepSettings st;
    st.family = PotentialFamily{2.0, 1.0, 1.0, false, 0};
    st.dims = {1, 2, 4};
    st.a = 0.5;
    const auto rep1 = dimension_sweep(st, grid_backend());
    CHECK(rep1.cert.passed);
    CHECK(rep1.rows.size() == 15);
    for (const auto& row : rep1.rows) CHECK(row.value >= 0.0);
    const double sup1 = rep1.cert.fitted_constants.at("sup[d=01]");
    const double sup4 = rep1.cert.fitted_constants.at("sup[d=04]");
    CHECK(sup4 <= sup1 * 1.05);  // no growth

    const auto rep2 = dimension_sweep(st, grid_backend());
    for (std::size_t i = 0; i < rep1.rows.size(); ++i)
        CHECK(rep1.rows[i].value == rep2.rows[i].value);
}

TEST_CASE("l1 certificate telescopes at a = 1") {
    L1SideSettings st;
    st.family = PotentialFamily{2.0, 1.0, 1.0, false, 0};
    st.dims = {1, 2};
    st.a = 1.0;
    st.holder_paths.n_paths = 10000;
    st.holder_paths.dt = 1e-3;
    st.holder_paths.horizon = 1.0;
    st.holder_paths.seed = 5150;
    const auto rep = certify_L1_side(st, grid_backend());
    CHECK(rep.cert.passed);
    for (const auto& row : rep.rows)
        CHECK(std::fabs(row.value - 1.0) <= 3.0 * row.stat_err + row.quad_err);
}
