#include "riesz/grid_solver.hpp"

#include <cmath>
#include <stdexcept>

#include "riesz/numerics.hpp"

namespace riesz {

KilledHeatSolver::KilledHeatSolver(double x_max, int n_cells, std::vector<double> v_nodes)
    : x_max_(x_max), n_cells_(n_cells), h_(2.0 * x_max / n_cells), v_(std::move(v_nodes)) {
    if (!(x_max > 0.0)) throw std::invalid_argument("KilledHeatSolver: x_max must be > 0");
    if (n_cells < 64) throw std::invalid_argument("KilledHeatSolver: n_cells must be >= 64");
    if (v_.size() != static_cast<std::size_t>(n_cells + 1))
        throw std::invalid_argument("KilledHeatSolver: potential node count mismatch");
    xs_.resize(static_cast<std::size_t>(n_cells + 1));
    for (int j = 0; j <= n_cells; ++j) xs_[static_cast<std::size_t>(j)] = -x_max + h_ * j;
}

std::vector<double> KilledHeatSolver::potential_nodes(const CoordinatePotential& v,
                                                      double x_max, int n_cells) {
    std::vector<double> out(static_cast<std::size_t>(n_cells + 1));
    const double h = 2.0 * x_max / n_cells;
    for (int j = 0; j <= n_cells; ++j) out[static_cast<std::size_t>(j)] = v(-x_max + h * j);
    return out;
}

// Thomas solve of (1 + c*(1/h^2 + V_j)) u_j - c/(2h^2) (u_{j-1} + u_{j+1}) = b_j
// on the interior nodes; c = dt for backward Euler, dt/2 for Crank-Nicolson.
static void tridiag_solve(const std::vector<double>& v, double h, double c,
                          std::vector<double>& b /* interior rhs, solution out */) {
    const std::size_t n = b.size();
    const double off = -c / (2.0 * h * h);
    static thread_local std::vector<double> beta;
    beta.resize(n);
    beta[0] = 1.0 + c * (1.0 / (h * h) + v[1]);
    for (std::size_t i = 1; i < n; ++i) {
        const double m = off / beta[i - 1];
        beta[i] = 1.0 + c * (1.0 / (h * h) + v[i + 1]) - m * off;
        b[i] -= m * b[i - 1];
    }
    b[n - 1] /= beta[n - 1];
    for (std::size_t i = n - 1; i-- > 0;) b[i] = (b[i] - off * b[i + 1]) / beta[i];
}

void KilledHeatSolver::cn_step(std::vector<double>& u, double dt) const {
    const std::size_t n = static_cast<std::size_t>(n_cells_) - 1;  // interior count
    const double h2 = h_ * h_;
    static thread_local std::vector<double> rhs;
    rhs.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t j = i + 1;
        rhs[i] = (1.0 - 0.5 * dt * (1.0 / h2 + v_[j])) * u[j] +
                 (dt / (4.0 * h2)) * (u[j - 1] + u[j + 1]);
    }
    tridiag_solve(v_, h_, 0.5 * dt, rhs);
    for (std::size_t i = 0; i < n; ++i) u[i + 1] = rhs[i];
    u[0] = 0.0;
    u[static_cast<std::size_t>(n_cells_)] = 0.0;
}

void KilledHeatSolver::be_step(std::vector<double>& u, double dt) const {
    const std::size_t n = static_cast<std::size_t>(n_cells_) - 1;
    static thread_local std::vector<double> rhs;
    rhs.assign(u.begin() + 1, u.end() - 1);
    tridiag_solve(v_, h_, dt, rhs);
    for (std::size_t i = 0; i < n; ++i) u[i + 1] = rhs[i];
    u[0] = 0.0;
    u[static_cast<std::size_t>(n_cells_)] = 0.0;
}

std::vector<std::vector<double>> KilledHeatSolver::evolve(std::vector<double> u0,
                                                          std::span<const double> snapshots,
                                                          double dt_base) const {
    if (u0.size() != xs_.size())
        throw std::invalid_argument("KilledHeatSolver: datum node count mismatch");
    if (!(dt_base > 0.0)) throw std::invalid_argument("KilledHeatSolver: dt_base must be > 0");
    for (std::size_t i = 0; i < snapshots.size(); ++i) {
        if (!(snapshots[i] >= 0.0))
            throw std::invalid_argument("KilledHeatSolver: negative snapshot time");
        if (i > 0 && !(snapshots[i] > snapshots[i - 1]))
            throw std::invalid_argument("KilledHeatSolver: snapshots must increase");
    }

    std::vector<std::vector<double>> out;
    out.reserve(snapshots.size());
    std::vector<double> u = std::move(u0);
    u[0] = 0.0;
    u[static_cast<std::size_t>(n_cells_)] = 0.0;

    double t = 0.0;
    bool started = false;
    for (double ts : snapshots) {
        if (ts == 0.0) {
            out.push_back(u);  // datum itself
            continue;
        }
        const double gap = ts - t;
        const double target = std::min(dt_base, std::max(ts / 100.0, 1e-12));
        const std::size_t n_sub = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(gap / target)));
        const double dt = gap / static_cast<double>(n_sub);
        std::size_t k = 0;
        if (!started) {
            be_step(u, 0.5 * dt);
            be_step(u, 0.5 * dt);
            started = true;
            k = 1;
        }
        for (; k < n_sub; ++k) cn_step(u, dt);
        t = ts;
        out.push_back(u);
    }
    return out;
}

double interp_nodes(std::span<const double> xs, std::span<const double> u, double x) {
    return linear_interp(xs, u, x);
}

}  // namespace riesz
