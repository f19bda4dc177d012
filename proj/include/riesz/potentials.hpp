#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace riesz {

// Coordinate-separable power potential V(x) = sum_i kappa_i |x_i|^alpha with
// global coefficient bounds 0 < m <= kappa_i <= M and exponent 0 < alpha <= 2.
// Immutable after construction; safe to share across threads.
class Potential {
public:
    Potential(double alpha, std::vector<double> coefficients, double m_lower,
              double M_upper);

    // all coefficients equal to kappa (m = M = kappa)
    static Potential constant_coeff(double alpha, int dim, double kappa);

    // kappa_i = m + (M - m) * u_i with u_i derived from (seed, i); the
    // coefficient of coordinate i does not depend on the dimension, so
    // potentials of different dimensions from one seed share a prefix
    static Potential seeded_uniform(double alpha, int dim, double m, double M,
                                    std::uint64_t seed);

    // V == 0, bypassing the m > 0 requirement; only for exact-oracle tests
    // (e^{-tL}(1) = 1). Flagged degenerate so certificates can refuse to fit.
    static Potential zero_test_mode(int dim);

    double alpha() const { return alpha_; }
    int dim() const { return static_cast<int>(kappa_.size()); }
    double coefficient(int i) const;
    const std::vector<double>& coefficients() const { return kappa_; }
    double m_lower() const { return m_lower_; }
    double M_upper() const { return M_upper_; }
    bool degenerate() const { return degenerate_; }

    // A = 2^alpha M / m; ratio bound for V_i under halving-size perturbations
    double comparability_constant() const;

    double eval_coordinate(int i, double xi) const;        // kappa_i |xi|^alpha
    double eval_total(std::span<const double> x) const;    // sum of coordinates
    double eval_power(std::span<const double> x, double a) const;  // V(x)^a

private:
    Potential() = default;
    double alpha_ = 2.0;
    std::vector<double> kappa_;
    double m_lower_ = 1.0;
    double M_upper_ = 1.0;
    bool degenerate_ = false;
};

// min(V_i, cap), the bounded truncation used in derivative/limit checks.
struct TruncatedPotential {
    Potential base;
    double cap;

    TruncatedPotential(Potential base_, double cap_);
    double eval_coordinate(int i, double xi) const;
};

// |x|^alpha power with the cheap exponents special-cased; used in path loops.
double abs_power(double x, double alpha);

}  // namespace riesz
