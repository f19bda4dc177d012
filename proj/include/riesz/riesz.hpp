#pragma once

#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <span>
#include <vector>

#include "riesz/semigroup.hpp"

namespace riesz {

struct RieszParams {
    double a = 0.5;            // exponent of the transform
    double split_N = 1.0;      // integral split point
    double quad_rel_tol = 1e-6;
    double tail_cutoff = 0.0;  // 0 => split_N + 40 / (d * decay rate)
    double decay_rate = 0.0;   // per-coordinate large-time rate; 0 => fit here
    int lower_panels = 10;
    int refine_rounds = 1;

    void validate() const;
};

struct RieszValue {
    double value = 0.0;
    double quadrature_error = 0.0;   // panel estimate + discretization + tail bound
    double statistical_error = 0.0;  // Monte Carlo only
    double lower_piece = 0.0;        // contribution of (0, N]
    double upper_piece = 0.0;        // contribution of [N, T]
};

// Cross-call cache of grid tables, for sweeps that evaluate one potential
// family at many points; safe for concurrent use.
class GridTableCache {
public:
    std::shared_ptr<GridTable> get_or_build(const CoordinatePotential& v,
                                            GridTable::Datum datum, double x_max,
                                            int n_cells, double dt_base,
                                            const std::vector<double>& times);

private:
    std::mutex mu_;
    std::map<std::array<std::uint64_t, 6>, std::shared_ptr<GridTable>> tables_;
};

// R_V^a(1)(x) = V(x)^a / Gamma(a) * int_0^inf e^{-tL}(1)(x) t^{a-1} dt.
// The integral is truncated at the tail cutoff; the certified remainder bound
// is added to quadrature_error, never to the value.
RieszValue riesz_one(const Potential& p, std::span<const double> x, const RieszParams& rp,
                     const BackendConfig& cfg, GridTableCache* cache = nullptr,
                     double domain_hint = 0.0);

// L^{-a}(V^a)(x) for 0 < a <= 1, evaluated through the pointwise bound
// e^{-tL}(V^a) <= (e^{-tL} V)^a with e^{-tL}(V) assembled from one-dimensional
// factors; at a = 1 the bound is an identity.
RieszValue adjoint_functional(const Potential& p, std::span<const double> x,
                              const RieszParams& rp, const BackendConfig& cfg,
                              GridTableCache* cache = nullptr, double domain_hint = 0.0);

// Direct full-dimensional Monte Carlo of int e^{-tL}(V^a 1_{V < datum_cap})(x)
// e^{-t/reg_N} t^{a-1} dt / Gamma(a); datum_cap = reg_N = inf gives the plain
// functional. Companion estimate to adjoint_functional.
RieszValue adjoint_functional_direct_mc(
    const Potential& p, std::span<const double> x, const RieszParams& rp,
    const PathConfig& pc, double datum_cap = std::numeric_limits<double>::infinity(),
    double reg_N = std::numeric_limits<double>::infinity());

// Closed form of int_0^inf e^{-A t^beta} t^gamma dt; quadrature self-test oracle.
double gamma_integral_oracle(double A, double beta, double gamma);

}  // namespace riesz
