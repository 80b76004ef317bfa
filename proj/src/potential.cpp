#include "spindiff/potential.hpp"

#include <cmath>
#include <stdexcept>

namespace spindiff::potential {

double log_cosh(double x) {
    double a = std::abs(x);
    return a + std::log1p(std::exp(-2.0 * a)) - M_LN2;
}

double potential_eval(const DoubleWell& dw, double sigma) {
    if (dw.rho2 <= 0.0) throw std::invalid_argument("rho2 must be positive");
    return sigma * sigma / (2.0 * dw.rho2) - log_cosh(sigma / dw.rho2);
}

WellMinimizer well_minimizer(double rho2) {
    if (rho2 <= 0.0) throw std::invalid_argument("rho2 must be positive");
    const double beta = 1.0 / rho2;
    WellMinimizer out{0.0, beta, rho2 < 1.0};
    if (!out.double_well) return out;

    // f(m) = tanh(beta m) - m is positive just right of 0 (beta > 1) and
    // negative at 1, so the nontrivial fixed point sits in (lo, 1].
    auto f = [beta](double m) { return std::tanh(beta * m) - m; };
    double lo = 1e-15, hi = 1.0;
    for (int it = 0; it < 200; ++it) {
        double mid = 0.5 * (lo + hi);
        if (f(mid) > 0.0)
            lo = mid;
        else
            hi = mid;
        if (hi - lo < 1e-15) break;
    }
    out.m = 0.5 * (lo + hi);
    return out;
}

double kernel_T_plus(double rho2, double sigma) {
    if (rho2 <= 0.0) throw std::invalid_argument("rho2 must be positive");
    return 0.5 * (1.0 + std::tanh(sigma / rho2));
}

double sum_identity_ratio(double rho2, double sigma) {
    if (rho2 <= 0.0) throw std::invalid_argument("rho2 must be positive");
    const double v = potential_eval(DoubleWell{rho2}, sigma);
    // log of sum_{tau=+-1} e^{-(sigma-tau)^2/(2 rho2)} via max shift
    const double ep = -(sigma - 1.0) * (sigma - 1.0) / (2.0 * rho2);
    const double em = -(sigma + 1.0) * (sigma + 1.0) / (2.0 * rho2);
    const double mx = std::max(ep, em);
    const double log_sum = mx + std::log(std::exp(ep - mx) + std::exp(em - mx));
    return std::exp(-v - log_sum);
}

} // namespace spindiff::potential
