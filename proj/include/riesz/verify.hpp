#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "riesz/riesz.hpp"

namespace riesz {

// A machine-checked inequality: constants fitted by grid infimum, margins
// computed after shifting every estimate by 3 sigma plus its discretization
// estimate, so noise can only tighten the verdict, never fake a pass.
struct BoundCertificate {
    std::string name;
    std::map<std::string, double> fitted_constants;
    std::string grid_desc;
    std::size_t n_nodes = 0;
    double worst_margin = 0.0;
    bool passed = false;
    bool vacuous = false;
    std::string note;
};

struct DecayGrid {
    std::vector<double> times;  // all in (0, N]
    std::vector<double> xs;
    double N = 1.0;
    int coordinate = 0;
};
DecayGrid default_small_time_grid();
DecayGrid default_near_origin_grid();

// fits c_N with exp(-tL_i)(1)(x) <= exp(-c_N t V_i(x)) on the grid
BoundCertificate certify_small_time_decay(const Potential& p, const DecayGrid& grid,
                                          const BackendConfig& cfg);

// two-term variant exp(-c_N (t^{alpha/2+1} + t V_i(x))) for |x_i| <= 4
BoundCertificate certify_small_time_decay_near_origin(const Potential& p,
                                                      const DecayGrid& grid,
                                                      const BackendConfig& cfg);

// per-coordinate rate delta with value_1d <= exp(-delta t) on [N, 4N]; the
// d-dimensional product bound is exp(-d delta t)
BoundCertificate fit_large_time_decay(const Potential& p, int d, const BackendConfig& cfg,
                                      double N = 1.0);

struct ReflectionGrid {
    std::vector<std::pair<double, double>> nodes;  // (x, t), radius = |x|/2
};
ReflectionGrid default_reflection_grid();
BoundCertificate certify_reflection_bound(const PathConfig& pc, const ReflectionGrid& grid);

struct DerivativeGrid {
    std::vector<std::pair<double, double>> nodes;  // (x, t)
    double cap = 1e6;                              // truncation of V
    double rel_tol = 1e-3;
    int coordinate = 0;
};
DerivativeGrid default_derivative_grid();
BoundCertificate certify_derivative_identity(const Potential& p, const DerivativeGrid& grid,
                                             const GridSolverConfig& cfg);

struct PowerExpMaxCase {
    double a, c, N;
};
std::vector<PowerExpMaxCase> default_power_exp_max_cases();
// max_{v >= 0} v^a exp(-(N/2) c v) against the closed form (2a/(N c e))^a
BoundCertificate certify_xexmax(const std::vector<PowerExpMaxCase>& cases);

// --- sweeps -------------------------------------------------------------------

// coefficient family shared across dimensions: coordinate i always gets the
// same kappa_i, so growing d extends the potential instead of reshuffling it
struct PotentialFamily {
    double alpha = 2.0;
    double m = 1.0;
    double M = 1.0;
    bool seeded = false;  // kappa_i ~ uniform[m, M] from seed; else constant m
    std::uint64_t seed = 0;
    Potential make(int d) const;
};

struct SweepRow {
    int d;
    std::string sample_id;
    double value;
    double stat_err;
    double quad_err;
};

struct SweepReport {
    BoundCertificate cert;
    std::vector<SweepRow> rows;
};

struct DimensionSweepSettings {
    PotentialFamily family;
    std::vector<int> dims = {1, 2, 4, 8, 16};
    double a = 0.5;
    RieszParams rp{};
};
// sup_x R_V^a(1)(x) per dimension; fails when the fitted log-log trend in d
// is positive beyond twice its standard error
SweepReport dimension_sweep(const DimensionSweepSettings& settings,
                            const BackendConfig& cfg);

struct L1SideSettings {
    PotentialFamily family;
    std::vector<int> dims = {1, 2, 4, 8};
    double a = 0.5;  // <= 1
    RieszParams rp{};
    bool holder_check = true;
    PathConfig holder_paths{};  // Monte Carlo config for the pointwise nodes
};
// sup_x L^{-a}(V^a)(x) flat across dims; at a = 1 every value must telescope
// to 1 within combined errors; plus e^{-tL}(V^a) <= (e^{-tL}V)^a spot checks
SweepReport certify_L1_side(const L1SideSettings& settings, const BackendConfig& cfg);

// --- catalog ------------------------------------------------------------------

struct CertificateInfo {
    std::string name;
    std::string statement;     // the inequality or identity being checked
    std::string default_grid;
};
const std::vector<CertificateInfo>& list_certificates();

}  // namespace riesz
