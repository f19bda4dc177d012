#include "riesz/potentials.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "riesz/rng.hpp"

namespace riesz {

double abs_power(double x, double alpha) {
    const double a = std::fabs(x);
    if (alpha == 2.0) return a * a;
    if (alpha == 1.0) return a;
    if (a == 0.0) return 0.0;
    return std::pow(a, alpha);
}

Potential::Potential(double alpha, std::vector<double> coefficients, double m_lower,
                     double M_upper)
    : alpha_(alpha), kappa_(std::move(coefficients)), m_lower_(m_lower), M_upper_(M_upper) {
    if (!(alpha > 0.0) || !(alpha <= 2.0))
        throw std::invalid_argument("Potential: alpha must satisfy 0 < alpha <= 2");
    if (kappa_.empty()) throw std::invalid_argument("Potential: empty coefficient list");
    if (!(m_lower > 0.0)) throw std::invalid_argument("Potential: m_lower must be > 0");
    if (!(m_lower <= M_upper))
        throw std::invalid_argument("Potential: need m_lower <= M_upper");
    for (double k : kappa_)
        if (!(k >= m_lower) || !(k <= M_upper))
            throw std::invalid_argument("Potential: coefficient outside [m, M]");
}

Potential Potential::constant_coeff(double alpha, int dim, double kappa) {
    if (dim <= 0) throw std::invalid_argument("Potential: dim must be positive");
    return Potential(alpha, std::vector<double>(static_cast<std::size_t>(dim), kappa),
                     kappa, kappa);
}

Potential Potential::seeded_uniform(double alpha, int dim, double m, double M,
                                    std::uint64_t seed) {
    if (dim <= 0) throw std::invalid_argument("Potential: dim must be positive");
    std::vector<double> ks(static_cast<std::size_t>(dim));
    for (int i = 0; i < dim; ++i) {
        const std::uint64_t bits = mix64(mix64(seed + 0x9e3779b97f4a7c15ULL) ^
                                         (0xbf58476d1ce4e5b9ULL * (static_cast<std::uint64_t>(i) + 1)));
        const double u = (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;
        ks[static_cast<std::size_t>(i)] = m + (M - m) * u;
    }
    return Potential(alpha, std::move(ks), m, M);
}

Potential Potential::zero_test_mode(int dim) {
    if (dim <= 0) throw std::invalid_argument("Potential: dim must be positive");
    Potential p;
    p.alpha_ = 2.0;
    p.kappa_.assign(static_cast<std::size_t>(dim), 0.0);
    p.m_lower_ = 0.0;
    p.M_upper_ = 0.0;
    p.degenerate_ = true;
    return p;
}

double Potential::coefficient(int i) const {
    if (i < 0 || i >= dim()) throw std::out_of_range("Potential: coordinate index");
    return kappa_[static_cast<std::size_t>(i)];
}

double Potential::comparability_constant() const {
    if (degenerate_) throw std::domain_error("Potential: A undefined for V == 0");
    return std::pow(2.0, alpha_) * M_upper_ / m_lower_;
}

double Potential::eval_coordinate(int i, double xi) const {
    if (i < 0 || i >= dim()) throw std::out_of_range("Potential: coordinate index");
    return kappa_[static_cast<std::size_t>(i)] * abs_power(xi, alpha_);
}

double Potential::eval_total(std::span<const double> x) const {
    if (static_cast<int>(x.size()) != dim())
        throw std::invalid_argument("Potential: point dimension mismatch");
    double s = 0.0;
    for (int i = 0; i < dim(); ++i) s += kappa_[static_cast<std::size_t>(i)] * abs_power(x[static_cast<std::size_t>(i)], alpha_);
    return s;
}

double Potential::eval_power(std::span<const double> x, double a) const {
    if (!(a > 0.0)) throw std::invalid_argument("Potential: power must be > 0");
    const double v = eval_total(x);
    if (v == 0.0) return 0.0;  // continuous extension at V(x) = 0
    return std::pow(v, a);
}

TruncatedPotential::TruncatedPotential(Potential base_, double cap_)
    : base(std::move(base_)), cap(cap_) {
    if (!(cap >= 0.0)) throw std::invalid_argument("TruncatedPotential: cap must be >= 0");
}

double TruncatedPotential::eval_coordinate(int i, double xi) const {
    return std::min(base.eval_coordinate(i, xi), cap);
}

}  // namespace riesz
