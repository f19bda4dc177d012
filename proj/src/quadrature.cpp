#include "riesz/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace riesz {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Clenshaw-Curtis weights for n+1 nodes cos(k pi / n) on [-1, 1], n even.
std::vector<double> cc_weights(int n) {
    std::vector<double> w(static_cast<std::size_t>(n + 1));
    for (int k = 0; k <= n; ++k) {
        const double ck = (k == 0 || k == n) ? 0.5 : 1.0;
        double s = 0.0;
        for (int j = 1; j <= n / 2; ++j) {
            const double bj = (j < n / 2) ? 1.0 : 0.5;
            s += bj * std::cos(2.0 * j * k * kPi / n) / (4.0 * j * j - 1.0);
        }
        w[static_cast<std::size_t>(k)] = (2.0 * ck / n) * (1.0 - 2.0 * s);
    }
    return w;
}

const std::vector<double>& weights17() {
    static const std::vector<double> w = cc_weights(16);
    return w;
}
const std::vector<double>& weights33() {
    static const std::vector<double> w = cc_weights(32);
    return w;
}

// A quadrature node in t-space with its fine (33-pt) weight and, when the
// node is shared with the embedded 17-pt rule, its coarse weight.
struct Node {
    double t;
    double w_fine;
    double w_coarse;
};

// One panel [lo, hi] in the integration variable; `to_t` maps the variable to
// t-space and `jac` multiplies the weight (substitution factor or t^{a-1}).
template <class MapFn, class JacFn>
void emit_panel(double lo, double hi, MapFn&& to_t, JacFn&& jac, std::vector<Node>& out) {
    const double c = 0.5 * (lo + hi);
    const double r = 0.5 * (hi - lo);
    const auto& wf = weights33();
    const auto& wc = weights17();
    for (int k = 0; k <= 32; ++k) {
        const double u = c + r * std::cos(k * kPi / 32.0);
        const double t = to_t(u);
        const double j = jac(u);
        Node nd{t, r * wf[static_cast<std::size_t>(k)] * j, 0.0};
        if (k % 2 == 0) nd.w_coarse = r * wc[static_cast<std::size_t>(k / 2)] * j;
        out.push_back(nd);
    }
}

std::vector<double> lower_breaks(double L, int panels) {
    // geometric grading toward 0: [0, L/2^{P-1}], then doubling
    std::vector<double> br{0.0};
    for (int i = panels - 1; i >= 0; --i) br.push_back(L * std::pow(2.0, -i));
    return br;
}

std::vector<double> upper_breaks(double N, double T, int doublings) {
    std::vector<double> br{N};
    double cur = N;
    while (br.size() < static_cast<std::size_t>(doublings) + 1 && cur * 2.0 < T) {
        cur *= 2.0;
        br.push_back(cur);
    }
    if (T > br.back() * (1.0 + 1e-12)) br.push_back(T);
    return br;
}

std::vector<double> bisect_all(const std::vector<double>& br) {
    std::vector<double> out;
    out.reserve(br.size() * 2);
    for (std::size_t i = 0; i + 1 < br.size(); ++i) {
        out.push_back(br[i]);
        out.push_back(0.5 * (br[i] + br[i + 1]));
    }
    out.push_back(br.back());
    return out;
}

struct Assembly {
    std::vector<double> ts;       // sorted distinct node times
    std::vector<double> wf_low, wc_low, wf_up, wc_up;  // per distinct node
};

Assembly assemble(const std::vector<Node>& low, const std::vector<Node>& up) {
    std::map<double, std::size_t> index;
    Assembly a;
    auto add = [&](const Node& n, bool lower_piece) {
        auto [it, inserted] = index.try_emplace(n.t, a.ts.size());
        if (inserted) {
            a.ts.push_back(n.t);
            a.wf_low.push_back(0.0);
            a.wc_low.push_back(0.0);
            a.wf_up.push_back(0.0);
            a.wc_up.push_back(0.0);
        }
        const std::size_t i = it->second;
        if (lower_piece) {
            a.wf_low[i] += n.w_fine;
            a.wc_low[i] += n.w_coarse;
        } else {
            a.wf_up[i] += n.w_fine;
            a.wc_up[i] += n.w_coarse;
        }
    };
    for (const auto& n : low) add(n, true);
    for (const auto& n : up) add(n, false);
    // re-sort by time (map iteration gave sorted keys, but ts was built in
    // insertion order); rebuild through the map
    Assembly s;
    s.ts.reserve(a.ts.size());
    for (const auto& [t, i] : index) {
        s.ts.push_back(t);
        s.wf_low.push_back(a.wf_low[i]);
        s.wc_low.push_back(a.wc_low[i]);
        s.wf_up.push_back(a.wf_up[i]);
        s.wc_up.push_back(a.wc_up[i]);
    }
    return s;
}

}  // namespace

double exp_weight_tail_bound(double A, double a, double T) {
    if (!(A > 0.0) || !(T > 0.0)) throw std::invalid_argument("tail bound: need A, T > 0");
    if (a <= 1.0) return std::pow(T, a - 1.0) * std::exp(-A * T) / A;
    // t^{a-1} e^{-At} = (t^{a-1} e^{-At/2}) e^{-At/2}; the first factor is
    // maximized at t* = 2(a-1)/A
    const double t_star = 2.0 * (a - 1.0) / A;
    double sup;
    if (T >= t_star)
        sup = std::pow(T, a - 1.0) * std::exp(-0.5 * A * T);
    else
        sup = std::pow(2.0 * (a - 1.0) / (A * std::exp(1.0)), a - 1.0);
    return sup * (2.0 / A) * std::exp(-0.5 * A * T);
}

SplitQuadratureResult split_integral(const BatchEvaluator& f,
                                     const SplitQuadratureSpec& spec) {
    if (!(spec.a > 0.0)) throw std::invalid_argument("split_integral: a must be > 0");
    if (!(spec.N > 0.0)) throw std::invalid_argument("split_integral: N must be > 0");
    if (!(spec.T > spec.N)) throw std::invalid_argument("split_integral: need T > N");

    const double a = spec.a;
    int low_panels = std::max(2, spec.lower_panels);
    int up_doublings = std::max(3, static_cast<int>(std::ceil(std::log2(spec.T / spec.N))) + 1);

    std::vector<double> low_br, up_br;
    if (a < 1.0)
        low_br = lower_breaks(std::pow(spec.N, a), low_panels);
    else
        low_br = lower_breaks(spec.N, low_panels);
    up_br = upper_breaks(spec.N, spec.T, up_doublings);

    SplitQuadratureResult res;
    for (int round = 0;; ++round) {
        std::vector<Node> low_nodes, up_nodes;
        if (a < 1.0) {
            const double inv_a = 1.0 / a;
            for (std::size_t i = 0; i + 1 < low_br.size(); ++i)
                emit_panel(
                    low_br[i], low_br[i + 1],
                    [&](double u) { return u > 0.0 ? std::pow(u, inv_a) : 0.0; },
                    [&](double) { return inv_a; }, low_nodes);
        } else {
            for (std::size_t i = 0; i + 1 < low_br.size(); ++i)
                emit_panel(
                    low_br[i], low_br[i + 1], [](double t) { return t; },
                    [&](double t) { return t > 0.0 ? std::pow(t, a - 1.0) : (a == 1.0 ? 1.0 : 0.0); },
                    low_nodes);
        }
        for (std::size_t i = 0; i + 1 < up_br.size(); ++i)
            emit_panel(
                up_br[i], up_br[i + 1], [](double t) { return t; },
                [&](double t) { return std::pow(t, a - 1.0); }, up_nodes);

        const Assembly asm_ = assemble(low_nodes, up_nodes);
        const IntegrandBatch batch = f(asm_.ts);
        if (batch.values.size() != asm_.ts.size())
            throw std::runtime_error("split_integral: evaluator returned wrong count");

        double lf = 0.0, lc = 0.0, uf = 0.0, uc = 0.0, stat = 0.0, disc = 0.0;
        for (std::size_t i = 0; i < asm_.ts.size(); ++i) {
            const double v = batch.values[i];
            lf += asm_.wf_low[i] * v;
            lc += asm_.wc_low[i] * v;
            uf += asm_.wf_up[i] * v;
            uc += asm_.wc_up[i] * v;
            const double wtot = std::fabs(asm_.wf_low[i]) + std::fabs(asm_.wf_up[i]);
            if (!batch.stat_errors.empty()) stat += wtot * batch.stat_errors[i];
            if (!batch.disc_errors.empty()) disc += wtot * batch.disc_errors[i];
        }
        res.lower = lf;
        res.upper = uf;
        res.value = lf + uf;
        res.error_estimate = std::fabs(lf - lc) + std::fabs(uf - uc);
        res.stat_error = stat;
        res.disc_error = disc;
        res.evaluations += asm_.ts.size();

        const double scale = std::max(std::fabs(res.value), 1e-300);
        if (res.error_estimate <= spec.rel_tol * scale || round >= spec.max_rounds) break;
        low_br = bisect_all(low_br);
        up_br = bisect_all(up_br);
    }
    return res;
}

}  // namespace riesz
