#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "riesz/potentials.hpp"

namespace riesz {

struct PathConfig {
    std::size_t n_paths = 100000;
    double dt = 1e-3;
    double horizon = 1.0;
    std::uint64_t seed = 1;
    bool antithetic = false;

    void validate() const;
    std::size_t n_steps() const;  // ceil(horizon / dt)
};

// Endpoint of one discretized Brownian path at a query time, together with
// the trapezoidal approximation of -int_0^t V_i(X_s) ds.
struct WeightedEndpoint {
    double endpoint;
    double log_weight;  // <= 0
};

// One-coordinate view of a potential, cheap enough for inner path loops.
struct CoordinatePotential {
    double kappa = 0.0;
    double alpha = 2.0;
    double cap = std::numeric_limits<double>::infinity();

    double operator()(double x) const {
        const double v = kappa * abs_power(x, alpha);
        return v < cap ? v : cap;
    }
    static CoordinatePotential of(const Potential& p, int coordinate);
    static CoordinatePotential of(const TruncatedPotential& tp, int coordinate);
};

// Simulates n_paths one-dimensional Brownian paths started at `start` with
// increments of variance = time gap, on the grid {k dt} merged with the query
// times, and returns per query time the weighted endpoints. Antithetic mode
// pairs path 2k+1 with the reflection of path 2k about the start point.
std::vector<std::vector<WeightedEndpoint>> sample_paths_1d(
    const PathConfig& cfg, double start, const Potential& p, int coordinate,
    std::span<const double> times);
std::vector<std::vector<WeightedEndpoint>> sample_paths_1d(
    const PathConfig& cfg, double start, const TruncatedPotential& tp, int coordinate,
    std::span<const double> times);

struct DeviationEstimate {
    double estimate;
    double std_error;  // binomial
};

// Monte Carlo estimate of P(sup_{0<=s<=t} |X_s - start| >= radius). The sup is
// monitored on the dt-grid only, which can only underestimate the true running
// sup, so one-sided certificates built on it stay sound.
DeviationEstimate sup_deviation_probability(const PathConfig& cfg, double start,
                                            double radius, double t);
std::vector<DeviationEstimate> sup_deviation_probabilities(const PathConfig& cfg,
                                                           double start, double radius,
                                                           std::span<const double> times);

// --- reduction interface used by the semigroup evaluators -------------------

// Per-time accumulated statistics of w = exp(log_weight) and of w * g(X_t)
// for a caller-supplied endpoint functional g; block-wise partial sums are
// combined by a fixed pairwise tree, so results are thread-count independent.
struct PathMoments {
    std::vector<double> mean_w;
    std::vector<double> se_w;
    std::vector<double> mean_wg;  // empty when no functional was requested
    std::vector<double> se_wg;
};

using EndpointFn = double (*)(double x, const CoordinatePotential& v, double a);

PathMoments accumulate_paths_1d(const PathConfig& cfg, double start,
                                const CoordinatePotential& v, std::uint64_t coordinate,
                                std::span<const double> times, EndpointFn g, double g_a);

// d-dimensional direct simulation: all coordinates advance together and the
// weight uses the full potential. Returns moments of w and w * V(X_t)^a.
PathMoments accumulate_paths_ddim(const PathConfig& cfg, std::span<const double> start,
                                  const Potential& p, std::span<const double> times,
                                  bool with_power, double a,
                                  double datum_cap = std::numeric_limits<double>::infinity());

}  // namespace riesz
