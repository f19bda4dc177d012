#include "riesz/semigroup.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "riesz/numerics.hpp"
#include "riesz/parallel.hpp"

namespace riesz {

void GridSolverConfig::validate() const {
    if (x_max < 0.0) throw std::invalid_argument("GridSolverConfig: x_max must be >= 0");
    if (n_cells < 64) throw std::invalid_argument("GridSolverConfig: n_cells must be >= 64");
    if (dt_solver < 0.0)
        throw std::invalid_argument("GridSolverConfig: dt_solver must be >= 0");
}

double auto_x_max(double abs_x, double t, double m_lower, double alpha) {
    const double reach = 6.0 * std::sqrt(std::min(t, 4.0));
    double kill = 12.0;
    if (m_lower > 0.0) {
        // radius where exp(-t V) <= 1e-12 for the slowest coefficient
        kill = std::min(12.0, std::pow(27.63 / (std::max(t, 0.25) * m_lower), 1.0 / alpha));
    }
    const double lo = std::max(8.0, 2.2 * abs_x);
    return std::clamp(abs_x + reach + kill, lo, std::max(24.0, 2.2 * abs_x));
}

namespace {

double datum_value(const GridTable::Datum& d, const CoordinatePotential& v, double x) {
    if (d.one) return 1.0;
    const double vv = v(x);
    return vv > 0.0 ? std::pow(vv, d.a) : 0.0;
}

double effective_dt(const GridSolverConfig& cfg) {
    return cfg.dt_solver > 0.0 ? cfg.dt_solver : 1e-3;
}

double resolve_x_max(const GridSolverConfig& cfg, double abs_x, double t, double m,
                     double alpha) {
    const double xm = cfg.x_max > 0.0 ? cfg.x_max : auto_x_max(abs_x, t, m, alpha);
    if (std::fabs(abs_x) > 0.5 * xm)
        throw std::invalid_argument("grid backend: query outside safe region |x| <= x_max/2");
    return xm;
}

SemigroupValue checked_grid_value(const GridTable& table, double x, double t) {
    const double value = table.value(0, x);
    const double disc = table.disc_error(0, x);
    if (disc > 0.25 * std::max(std::fabs(value), 1e-10))
        throw std::runtime_error("grid backend: refinement did not converge");
    return {value, 0.0, disc, Backend::grid, t};
}

}  // namespace

GridTable::GridTable(const CoordinatePotential& v, Datum datum, double x_max, int n_cells,
                     double dt_base, std::vector<double> times)
    : times_(std::move(times)), x_max_(x_max) {
    if (times_.empty()) throw std::invalid_argument("GridTable: no snapshot times");

    const int nc_fine = 2 * n_cells;
    auto run = [&](int nc, double dt) {
        KilledHeatSolver solver(x_max, nc, KilledHeatSolver::potential_nodes(v, x_max, nc));
        std::vector<double> u0(solver.nodes().size());
        for (std::size_t j = 0; j < u0.size(); ++j)
            u0[j] = datum_value(datum, v, solver.nodes()[j]);
        return std::pair(solver.nodes(), solver.evolve(std::move(u0), times_, dt));
    };

    // the two resolutions are independent solves; run them in parallel
    std::pair<std::vector<double>, std::vector<std::vector<double>>> results[2];
    parallel_for_blocks(2, 1, [&](std::size_t lo, std::size_t) {
        if (lo == 0)
            results[0] = run(n_cells, dt_base);
        else
            results[1] = run(nc_fine, 0.5 * dt_base);
    });
    xs_coarse_ = std::move(results[0].first);
    coarse_ = std::move(results[0].second);
    xs_fine_ = std::move(results[1].first);
    fine_ = std::move(results[1].second);
}

double GridTable::value(std::size_t time_idx, double x) const {
    return interp_nodes(xs_fine_, fine_.at(time_idx), x);
}

double GridTable::disc_error(std::size_t time_idx, double x) const {
    return std::fabs(interp_nodes(xs_fine_, fine_.at(time_idx), x) -
                     interp_nodes(xs_coarse_, coarse_.at(time_idx), x));
}

// --- Monte Carlo ---------------------------------------------------------------

static double endpoint_power(double x, const CoordinatePotential& v, double a) {
    const double vv = v(x);
    return vv > 0.0 ? std::pow(vv, a) : 0.0;
}

std::vector<SemigroupValue> semigroup_one_1d_mc_multi(const Potential& p, int i, double x,
                                                      std::span<const double> times,
                                                      const PathConfig& cfg) {
    const auto m = accumulate_paths_1d(cfg, x, CoordinatePotential::of(p, i),
                                       static_cast<std::uint64_t>(i), times, nullptr, 0.0);
    std::vector<SemigroupValue> out(times.size());
    for (std::size_t k = 0; k < times.size(); ++k)
        out[k] = SemigroupValue{m.mean_w[k], m.se_w[k], 0.0, Backend::monte_carlo, times[k]};
    return out;
}

std::vector<SemigroupValue> semigroup_power_1d_mc_multi(const Potential& p, int i,
                                                        double x,
                                                        std::span<const double> times,
                                                        double a, const PathConfig& cfg) {
    const auto m = accumulate_paths_1d(cfg, x, CoordinatePotential::of(p, i),
                                       static_cast<std::uint64_t>(i), times,
                                       &endpoint_power, a);
    std::vector<SemigroupValue> out(times.size());
    for (std::size_t k = 0; k < times.size(); ++k)
        out[k] =
            SemigroupValue{m.mean_wg[k], m.se_wg[k], 0.0, Backend::monte_carlo, times[k]};
    return out;
}

SemigroupValue semigroup_one_1d_mc(const Potential& p, int i, double x, double t,
                                   const PathConfig& cfg) {
    if (t == 0.0) return {1.0, 0.0, 0.0, Backend::monte_carlo, 0.0};
    const double ts[1] = {t};
    return semigroup_one_1d_mc_multi(p, i, x, ts, cfg)[0];
}

SemigroupValue semigroup_one_1d_grid(const Potential& p, int i, double x, double t,
                                     const GridSolverConfig& cfg) {
    cfg.validate();
    if (t == 0.0) return {1.0, 0.0, 0.0, Backend::grid, 0.0};
    if (!(t > 0.0)) throw std::invalid_argument("semigroup: t must be >= 0");
    const auto v = CoordinatePotential::of(p, i);
    const double xm = resolve_x_max(cfg, std::fabs(x), t, p.m_lower(), p.alpha());
    GridTable table(v, GridTable::Datum{true, 1.0}, xm, cfg.n_cells, effective_dt(cfg), {t});
    return checked_grid_value(table, x, t);
}

SemigroupValue semigroup_power_1d(const Potential& p, int i, double x, double t, double a,
                                  const BackendConfig& cfg) {
    if (!(a > 0.0)) throw std::invalid_argument("semigroup_power_1d: a must be > 0");
    if (t == 0.0) {
        const double v0 = p.eval_coordinate(i, x);
        return {v0 > 0.0 ? std::pow(v0, a) : 0.0, 0.0, 0.0, cfg.backend, 0.0};
    }
    if (cfg.backend == Backend::monte_carlo) {
        const double ts[1] = {t};
        return semigroup_power_1d_mc_multi(p, i, x, ts, a, cfg.paths)[0];
    }
    cfg.grid.validate();
    const auto v = CoordinatePotential::of(p, i);
    const double xm = resolve_x_max(cfg.grid, std::fabs(x), t, p.m_lower(), p.alpha());
    GridTable table(v, GridTable::Datum{false, a}, xm, cfg.grid.n_cells,
                    effective_dt(cfg.grid), {t});
    return checked_grid_value(table, x, t);
}

SemigroupValue semigroup_one_truncated_1d(const TruncatedPotential& tp, int i, double x,
                                          double t, const BackendConfig& cfg) {
    if (t == 0.0) return {1.0, 0.0, 0.0, cfg.backend, 0.0};
    const auto v = CoordinatePotential::of(tp, i);
    if (cfg.backend == Backend::monte_carlo) {
        const double ts[1] = {t};
        const auto m = accumulate_paths_1d(cfg.paths, x, v, static_cast<std::uint64_t>(i),
                                           ts, nullptr, 0.0);
        return {m.mean_w[0], m.se_w[0], 0.0, Backend::monte_carlo, t};
    }
    cfg.grid.validate();
    const double xm =
        resolve_x_max(cfg.grid, std::fabs(x), t, tp.base.m_lower(), tp.base.alpha());
    GridTable table(v, GridTable::Datum{true, 1.0}, xm, cfg.grid.n_cells,
                    effective_dt(cfg.grid), {t});
    return checked_grid_value(table, x, t);
}

// --- d-dimensional assemblies ----------------------------------------------------

static SemigroupValue one_1d_any(const Potential& p, int i, double x, double t,
                                 const BackendConfig& cfg) {
    if (cfg.backend == Backend::monte_carlo) return semigroup_one_1d_mc(p, i, x, t, cfg.paths);
    return semigroup_one_1d_grid(p, i, x, t, cfg.grid);
}

SemigroupValue semigroup_one_ddim(const Potential& p, std::span<const double> x, double t,
                                  const BackendConfig& cfg) {
    if (static_cast<int>(x.size()) != p.dim())
        throw std::invalid_argument("semigroup_one_ddim: dimension mismatch");
    if (t == 0.0) return {1.0, 0.0, 0.0, cfg.backend, 0.0};
    double value = 1.0;
    double rel_stat_sq = 0.0;
    double rel_disc = 0.0;
    bool dead = false;
    for (int i = 0; i < p.dim(); ++i) {
        const auto s = one_1d_any(p, i, x[static_cast<std::size_t>(i)], t, cfg);
        if (s.value <= 0.0) {
            dead = true;
            break;
        }
        value *= s.value;
        rel_stat_sq += (s.std_error / s.value) * (s.std_error / s.value);
        rel_disc += s.disc_error / s.value;
    }
    if (dead) return {0.0, 0.0, 0.0, cfg.backend, t};
    return {value, value * std::sqrt(rel_stat_sq), value * rel_disc, cfg.backend, t};
}

ValueWithError assemble_v_sum(const std::vector<ValueWithError>& ones,
                              const std::vector<ValueWithError>& pows) {
    const std::size_t d = ones.size();
    double s = 0.0, stat = 0.0, disc = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
        double prod = 1.0;
        for (std::size_t j = 0; j < d; ++j)
            if (j != i) prod *= ones[j].value;
        s += pows[i].value * prod;
        stat += pows[i].stat * prod;
        disc += pows[i].disc * prod;
        for (std::size_t k = 0; k < d; ++k) {
            if (k == i) continue;
            double prod_ik = 1.0;
            for (std::size_t j = 0; j < d; ++j)
                if (j != i && j != k) prod_ik *= ones[j].value;
            const double sens = pows[i].value * prod_ik;
            stat += sens * ones[k].stat;
            disc += sens * ones[k].disc;
        }
    }
    return {s, stat, disc};
}

SemigroupValue semigroup_V_ddim(const Potential& p, std::span<const double> x, double t,
                                const BackendConfig& cfg) {
    const int d = p.dim();
    if (static_cast<int>(x.size()) != d)
        throw std::invalid_argument("semigroup_V_ddim: dimension mismatch");
    if (t == 0.0) return {p.eval_total(x), 0.0, 0.0, cfg.backend, 0.0};

    std::vector<ValueWithError> ones(static_cast<std::size_t>(d)), pows(static_cast<std::size_t>(d));
    for (int i = 0; i < d; ++i) {
        const auto u = one_1d_any(p, i, x[static_cast<std::size_t>(i)], t, cfg);
        const auto w = semigroup_power_1d(p, i, x[static_cast<std::size_t>(i)], t, 1.0, cfg);
        ones[static_cast<std::size_t>(i)] = {u.value, u.std_error, u.disc_error};
        pows[static_cast<std::size_t>(i)] = {w.value, w.std_error, w.disc_error};
    }
    const auto s = assemble_v_sum(ones, pows);
    return {s.value, s.stat, s.disc, cfg.backend, t};
}

SemigroupValue semigroup_one_ddim_direct_mc(const Potential& p, std::span<const double> x,
                                            double t, const PathConfig& cfg) {
    if (t == 0.0) return {1.0, 0.0, 0.0, Backend::monte_carlo, 0.0};
    const double ts[1] = {t};
    const auto m = accumulate_paths_ddim(cfg, x, p, ts, false, 0.0);
    return {m.mean_w[0], m.se_w[0], 0.0, Backend::monte_carlo, t};
}

SemigroupValue semigroup_power_ddim_direct_mc(const Potential& p,
                                              std::span<const double> x, double t,
                                              double a, const PathConfig& cfg,
                                              double datum_cap) {
    if (!(a > 0.0))
        throw std::invalid_argument("semigroup_power_ddim_direct_mc: a must be > 0");
    if (t == 0.0) {
        const double v0 = p.eval_total(x);
        const double g = (v0 > 0.0 && v0 < datum_cap) ? std::pow(v0, a) : 0.0;
        return {g, 0.0, 0.0, Backend::monte_carlo, 0.0};
    }
    const double ts[1] = {t};
    const auto m = accumulate_paths_ddim(cfg, x, p, ts, true, a, datum_cap);
    return {m.mean_wg[0], m.se_wg[0], 0.0, Backend::monte_carlo, t};
}

DecayFit fit_decay_rate(const Potential& p, int coordinate, const BackendConfig& cfg,
                        double N) {
    if (!(N > 0.0)) throw std::invalid_argument("fit_decay_rate: N must be > 0");
    const std::vector<double> times = {N, 1.5 * N, 2.0 * N, 2.5 * N, 3.0 * N, 4.0 * N};
    const std::vector<double> xs = {0.0, 0.5, 1.0, 2.0};

    double delta = std::numeric_limits<double>::infinity();
    if (cfg.backend == Backend::grid) {
        cfg.grid.validate();
        const auto v = CoordinatePotential::of(p, coordinate);
        const double m = p.degenerate() ? 0.0 : p.m_lower();
        const double xm = cfg.grid.x_max > 0.0
                              ? cfg.grid.x_max
                              : auto_x_max(2.0, 4.0 * N, m, p.alpha());
        GridTable table(v, GridTable::Datum{true, 1.0}, xm, cfg.grid.n_cells,
                        effective_dt(cfg.grid), times);
        for (std::size_t k = 0; k < times.size(); ++k)
            for (double x : xs) {
                const double plus = table.value(k, x) + table.disc_error(k, x);
                if (plus <= 0.0) continue;
                delta = std::min(delta, -std::log(plus) / times[k]);
            }
    } else {
        PathConfig pc = cfg.paths;
        pc.horizon = std::max(pc.horizon, 4.0 * N);
        for (double x : xs) {
            const auto vals = semigroup_one_1d_mc_multi(p, coordinate, x, times, pc);
            for (const auto& s : vals) {
                const double plus = s.value + 3.0 * s.std_error;
                if (plus <= 0.0) continue;
                delta = std::min(delta, -std::log(plus) / s.t);
            }
        }
    }
    if (!std::isfinite(delta)) delta = 0.0;
    return {delta, 1.0};
}

}  // namespace riesz
