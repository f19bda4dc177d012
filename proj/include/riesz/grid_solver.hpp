#pragma once

#include <span>
#include <vector>

#include "riesz/paths.hpp"

namespace riesz {

// Crank-Nicolson solver for u_t = 1/2 u_xx - v(x) u on [-x_max, x_max] with
// absorbing (u = 0) ends. The first two sub-steps of a run are backward-Euler
// half-steps to damp the datum/boundary discontinuity at t = 0.
class KilledHeatSolver {
public:
    KilledHeatSolver(double x_max, int n_cells, std::vector<double> v_nodes);

    // Marches from t = 0 through the strictly increasing snapshot times,
    // landing on each exactly. Step size between consecutive snapshots is
    // min(dt_base, t_next / 100), so early snapshots are resolved finely.
    // Returns the full node values at each snapshot time.
    std::vector<std::vector<double>> evolve(std::vector<double> u0,
                                            std::span<const double> snapshots,
                                            double dt_base) const;

    const std::vector<double>& nodes() const { return xs_; }
    double h() const { return h_; }
    int n_cells() const { return n_cells_; }

    static std::vector<double> potential_nodes(const CoordinatePotential& v,
                                               double x_max, int n_cells);

private:
    void cn_step(std::vector<double>& u, double dt) const;
    void be_step(std::vector<double>& u, double dt) const;

    double x_max_;
    int n_cells_;
    double h_;
    std::vector<double> xs_;  // n_cells + 1 nodes
    std::vector<double> v_;   // potential at nodes
};

double interp_nodes(std::span<const double> xs, std::span<const double> u, double x);

}  // namespace riesz
