#pragma once

namespace spindiff::potential {

/// Overflow-safe log cosh: |x| + log(1 + e^{-2|x|}) - log 2.
double log_cosh(double x);

/// Single-site double-well energy V(s) = s^2/(2 rho2) - log cosh(s/rho2).
/// Symmetric, V(0) = 0, two quadratic minima iff rho2 < 1.
struct DoubleWell {
    double rho2;
};

double potential_eval(const DoubleWell& dw, double sigma);

/// Largest solution of m = tanh(beta m) with beta = 1/rho2; m = 0 for
/// rho2 >= 1. Found by bisection, residual below 1e-12.
struct WellMinimizer {
    double m;
    double beta;
    bool double_well;
};

WellMinimizer well_minimizer(double rho2);

/// Smeared sign kernel: probability of the hidden spin being +1 given a
/// continuous value, (1 + tanh(sigma/rho2)) / 2.
double kernel_T_plus(double rho2, double sigma);

/// Ratio e^{-V(sigma)} / sum_{tau=+-1} e^{-(sigma-tau)^2/(2 rho2)},
/// constant in sigma by the defining identity of the potential.
double sum_identity_ratio(double rho2, double sigma);

} // namespace spindiff::potential
