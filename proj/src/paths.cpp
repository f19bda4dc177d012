#include "riesz/paths.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "riesz/numerics.hpp"
#include "riesz/parallel.hpp"
#include "riesz/rng.hpp"

namespace riesz {

namespace {

constexpr std::size_t kBlock = 4096;

// simulation grid = {k dt} merged with the query times, up to the last query
struct TimeGrid {
    std::vector<double> ts;             // strictly increasing, > 0
    std::vector<std::size_t> query_at;  // index into ts per query time
};

bool nearly_equal(double a, double b) {
    return std::fabs(a - b) <= 1e-12 * std::max(1.0, std::max(std::fabs(a), std::fabs(b)));
}

TimeGrid build_grid(const PathConfig& cfg, std::span<const double> times) {
    cfg.validate();
    if (times.empty()) throw std::invalid_argument("paths: no query times");
    for (std::size_t i = 0; i < times.size(); ++i) {
        if (!(times[i] > 0.0) || times[i] > cfg.horizon * (1.0 + 1e-12))
            throw std::invalid_argument("paths: query time outside (0, horizon]");
        if (i > 0 && !(times[i] > times[i - 1]))
            throw std::invalid_argument("paths: query times must be strictly increasing");
    }
    const double t_max = times.back();
    TimeGrid g;
    std::size_t k = 1, qi = 0;
    while (qi < times.size()) {
        const double tk = static_cast<double>(k) * cfg.dt;
        const double tq = times[qi];
        if (tk < tq && !nearly_equal(tk, tq) && tk < t_max) {
            g.ts.push_back(tk);
            ++k;
        } else {
            if (nearly_equal(tk, tq)) ++k;
            g.ts.push_back(tq);
            g.query_at.push_back(g.ts.size() - 1);
            ++qi;
        }
    }
    return g;
}

// walks one path over the grid; sink(query_ordinal, endpoint, log_weight)
template <class Sink>
void walk_path(const PathConfig& cfg, std::uint64_t coordinate, std::size_t path,
               double start, const CoordinatePotential& v, const TimeGrid& g,
               Sink&& sink) {
    const std::size_t stream = cfg.antithetic ? path / 2 : path;
    const double sign = (cfg.antithetic && (path & 1)) ? -1.0 : 1.0;
    CounterRng rng(cfg.seed, coordinate, stream);

    double x = start;
    double integral = 0.0;
    double v_prev = v(x);
    double t_prev = 0.0;
    std::size_t qi = 0;
    for (std::size_t i = 0; i < g.ts.size(); ++i) {
        const double gap = g.ts[i] - t_prev;
        x += sign * std::sqrt(gap) * rng.next_gaussian();
        const double v_cur = v(x);
        integral += 0.5 * (v_prev + v_cur) * gap;
        v_prev = v_cur;
        t_prev = g.ts[i];
        if (qi < g.query_at.size() && g.query_at[qi] == i) {
            sink(qi, x, -integral);
            ++qi;
        }
    }
}

// combines per-block partial sums into per-time mean and standard error
struct BlockSums {
    std::vector<std::vector<double>> s1;  // [time][block]
    std::vector<std::vector<double>> s2;

    BlockSums(std::size_t n_times, std::size_t n_blocks)
        : s1(n_times, std::vector<double>(n_blocks, 0.0)),
          s2(n_times, std::vector<double>(n_blocks, 0.0)) {}

    void finish(std::size_t n, std::vector<double>& mean, std::vector<double>& se) const {
        mean.resize(s1.size());
        se.resize(s1.size());
        const double dn = static_cast<double>(n);
        for (std::size_t t = 0; t < s1.size(); ++t) {
            const double sum = pairwise_sum(s1[t]);
            const double sumsq = pairwise_sum(s2[t]);
            mean[t] = sum / dn;
            double var = 0.0;
            if (n > 1) var = std::max(0.0, (sumsq - dn * mean[t] * mean[t]) / (dn - 1.0));
            se[t] = std::sqrt(var / dn);
        }
    }
};

}  // namespace

void PathConfig::validate() const {
    if (n_paths == 0) throw std::invalid_argument("PathConfig: n_paths must be positive");
    if (!(dt > 0.0)) throw std::invalid_argument("PathConfig: dt must be positive");
    if (!(horizon > 0.0)) throw std::invalid_argument("PathConfig: horizon must be positive");
    if (dt > horizon * (1.0 + 1e-12))
        throw std::invalid_argument("PathConfig: dt must not exceed horizon");
}

std::size_t PathConfig::n_steps() const {
    return static_cast<std::size_t>(std::ceil(horizon / dt));
}

CoordinatePotential CoordinatePotential::of(const Potential& p, int coordinate) {
    if (coordinate < 0 || coordinate >= p.dim())
        throw std::out_of_range("CoordinatePotential: coordinate index");
    return {p.coefficient(coordinate), p.alpha(),
            std::numeric_limits<double>::infinity()};
}

CoordinatePotential CoordinatePotential::of(const TruncatedPotential& tp, int coordinate) {
    CoordinatePotential v = of(tp.base, coordinate);
    v.cap = tp.cap;
    return v;
}

static std::vector<std::vector<WeightedEndpoint>> sample_impl(
    const PathConfig& cfg, double start, const CoordinatePotential& v, int coordinate,
    std::span<const double> times) {
    const TimeGrid grid = build_grid(cfg, times);
    std::vector<std::vector<WeightedEndpoint>> out(
        times.size(), std::vector<WeightedEndpoint>(cfg.n_paths));
    parallel_for_blocks(cfg.n_paths, kBlock, [&](std::size_t lo, std::size_t hi) {
        for (std::size_t j = lo; j < hi; ++j)
            walk_path(cfg, static_cast<std::uint64_t>(coordinate), j, start, v, grid,
                      [&](std::size_t qi, double x, double lw) {
                          out[qi][j] = WeightedEndpoint{x, lw};
                      });
    });
    return out;
}

std::vector<std::vector<WeightedEndpoint>> sample_paths_1d(
    const PathConfig& cfg, double start, const Potential& p, int coordinate,
    std::span<const double> times) {
    return sample_impl(cfg, start, CoordinatePotential::of(p, coordinate), coordinate,
                       times);
}

std::vector<std::vector<WeightedEndpoint>> sample_paths_1d(
    const PathConfig& cfg, double start, const TruncatedPotential& tp, int coordinate,
    std::span<const double> times) {
    return sample_impl(cfg, start, CoordinatePotential::of(tp, coordinate), coordinate,
                       times);
}

PathMoments accumulate_paths_1d(const PathConfig& cfg, double start,
                                const CoordinatePotential& v, std::uint64_t coordinate,
                                std::span<const double> times, EndpointFn g, double g_a) {
    const TimeGrid grid = build_grid(cfg, times);
    const std::size_t n_blocks = (cfg.n_paths + kBlock - 1) / kBlock;
    BlockSums w_sums(times.size(), n_blocks);
    BlockSums wg_sums(g ? times.size() : 0, n_blocks);

    parallel_for_blocks(cfg.n_paths, kBlock, [&](std::size_t lo, std::size_t hi) {
        const std::size_t b = lo / kBlock;
        for (std::size_t j = lo; j < hi; ++j)
            walk_path(cfg, coordinate, j, start, v, grid,
                      [&](std::size_t qi, double x, double lw) {
                          const double w = std::exp(lw);
                          w_sums.s1[qi][b] += w;
                          w_sums.s2[qi][b] += w * w;
                          if (g) {
                              const double wg = w * g(x, v, g_a);
                              wg_sums.s1[qi][b] += wg;
                              wg_sums.s2[qi][b] += wg * wg;
                          }
                      });
    });

    PathMoments m;
    w_sums.finish(cfg.n_paths, m.mean_w, m.se_w);
    if (g) wg_sums.finish(cfg.n_paths, m.mean_wg, m.se_wg);
    return m;
}

PathMoments accumulate_paths_ddim(const PathConfig& cfg, std::span<const double> start,
                                  const Potential& p, std::span<const double> times,
                                  bool with_power, double a, double datum_cap) {
    const int d = p.dim();
    if (static_cast<int>(start.size()) != d)
        throw std::invalid_argument("accumulate_paths_ddim: start dimension mismatch");
    const TimeGrid grid = build_grid(cfg, times);
    const std::size_t n_blocks = (cfg.n_paths + kBlock - 1) / kBlock;
    BlockSums w_sums(times.size(), n_blocks);
    BlockSums wg_sums(with_power ? times.size() : 0, n_blocks);

    std::vector<CoordinatePotential> vs;
    vs.reserve(static_cast<std::size_t>(d));
    for (int i = 0; i < d; ++i) vs.push_back(CoordinatePotential::of(p, i));

    parallel_for_blocks(cfg.n_paths, kBlock, [&](std::size_t lo, std::size_t hi) {
        const std::size_t b = lo / kBlock;
        std::vector<CounterRng> rngs;
        std::vector<double> xs(static_cast<std::size_t>(d));
        for (std::size_t j = lo; j < hi; ++j) {
            const std::size_t stream = cfg.antithetic ? j / 2 : j;
            const double sign = (cfg.antithetic && (j & 1)) ? -1.0 : 1.0;
            rngs.clear();
            for (int i = 0; i < d; ++i)
                rngs.emplace_back(cfg.seed, static_cast<std::uint64_t>(i), stream);
            for (int i = 0; i < d; ++i) xs[static_cast<std::size_t>(i)] = start[static_cast<std::size_t>(i)];

            double integral = 0.0;
            double v_prev = 0.0;
            for (int i = 0; i < d; ++i) v_prev += vs[static_cast<std::size_t>(i)](xs[static_cast<std::size_t>(i)]);
            double t_prev = 0.0;
            std::size_t qi = 0;
            for (std::size_t s = 0; s < grid.ts.size(); ++s) {
                const double gap = grid.ts[s] - t_prev;
                const double sg = std::sqrt(gap);
                double v_cur = 0.0;
                for (int i = 0; i < d; ++i) {
                    xs[static_cast<std::size_t>(i)] += sign * sg * rngs[static_cast<std::size_t>(i)].next_gaussian();
                    v_cur += vs[static_cast<std::size_t>(i)](xs[static_cast<std::size_t>(i)]);
                }
                integral += 0.5 * (v_prev + v_cur) * gap;
                v_prev = v_cur;
                t_prev = grid.ts[s];
                if (qi < grid.query_at.size() && grid.query_at[qi] == s) {
                    const double w = std::exp(-integral);
                    w_sums.s1[qi][b] += w;
                    w_sums.s2[qi][b] += w * w;
                    if (with_power) {
                        double gval = 0.0;
                        if (v_cur > 0.0 && v_cur < datum_cap) gval = std::pow(v_cur, a);
                        const double wg = w * gval;
                        wg_sums.s1[qi][b] += wg;
                        wg_sums.s2[qi][b] += wg * wg;
                    }
                    ++qi;
                }
            }
        }
    });

    PathMoments m;
    w_sums.finish(cfg.n_paths, m.mean_w, m.se_w);
    if (with_power) wg_sums.finish(cfg.n_paths, m.mean_wg, m.se_wg);
    return m;
}

std::vector<DeviationEstimate> sup_deviation_probabilities(const PathConfig& cfg,
                                                           double start, double radius,
                                                           std::span<const double> times) {
    if (!(radius > 0.0))
        throw std::invalid_argument("sup_deviation_probability: radius must be > 0");
    const TimeGrid grid = build_grid(cfg, times);
    const std::size_t n_blocks = (cfg.n_paths + kBlock - 1) / kBlock;
    // hit counts per (query time, block); statistic is reflection-invariant,
    // so antithetic pairing is ignored here
    std::vector<std::vector<double>> hits(times.size(),
                                          std::vector<double>(n_blocks, 0.0));
    parallel_for_blocks(cfg.n_paths, kBlock, [&](std::size_t lo, std::size_t hi) {
        const std::size_t b = lo / kBlock;
        for (std::size_t j = lo; j < hi; ++j) {
            CounterRng rng(cfg.seed, 0, j);
            double x = start;
            double t_prev = 0.0;
            bool exceeded = false;
            std::size_t qi = 0;
            for (std::size_t s = 0; s < grid.ts.size(); ++s) {
                const double gap = grid.ts[s] - t_prev;
                x += std::sqrt(gap) * rng.next_gaussian();
                t_prev = grid.ts[s];
                if (!exceeded && std::fabs(x - start) >= radius) exceeded = true;
                if (qi < grid.query_at.size() && grid.query_at[qi] == s) {
                    if (exceeded) hits[qi][b] += 1.0;
                    ++qi;
                }
            }
        }
    });

    std::vector<DeviationEstimate> out(times.size());
    const double n = static_cast<double>(cfg.n_paths);
    for (std::size_t t = 0; t < times.size(); ++t) {
        const double phat = pairwise_sum(hits[t]) / n;
        out[t] = DeviationEstimate{phat, std::sqrt(std::max(0.0, phat * (1.0 - phat)) / n)};
    }
    return out;
}

DeviationEstimate sup_deviation_probability(const PathConfig& cfg, double start,
                                            double radius, double t) {
    const double ts[1] = {t};
    return sup_deviation_probabilities(cfg, start, radius, ts)[0];
}

}  // namespace riesz
