#pragma once

#include <cstdint>

#include "spindiff/gaussian.hpp"
#include "spindiff/ising.hpp"
#include "spindiff/lattice.hpp"
#include "spindiff/linalg.hpp"
#include "spindiff/resolvent.hpp"

namespace spindiff::evolution {

using resolvent::ModelParams;

/// Independent single-site diffusion: either the mean-reverting kernel with
/// stationary variance rho_inf2 at time t, or plain additive noise of
/// variance s. The two pictures are linked by s = rho_inf2 (e^t - 1) and
/// the amplitude r_t = e^{-t/2}.
struct DynamicsParams {
    enum class Mode { OU, BM };
    Mode mode = Mode::BM;
    double time = 0.0;      // t in OU mode, s in BM mode
    double rho_inf2 = 1.0;  // OU only

    static DynamicsParams ou(double t, double rho_inf2);
    static DynamicsParams bm(double s);

    double bm_time() const;  // s
    double r() const;        // e^{-t/2} in OU mode, 1 in BM mode
    double kernel_variance() const;
};

double time_rescale(double t, double rho_inf2);
double time_rescale_inverse(double s, double rho_inf2);

/// Push draws (one per row) through the single-site kernel.
Mat evolve_samples(const Mat& configs, const DynamicsParams& dyn,
                   std::uint64_t seed);

/// Single-site conditional law of the evolved measure at the box center,
/// given values on the rest of the box. `variance` is the tau-independent
/// Gaussian component variance R_00 + s; the spread of the tau-dependent
/// means is reported separately.
struct ConditionalEstimate {
    double mean = 0.0;
    double variance = 0.0;
    double std_error = 0.0;
    long n_tau_samples = 0;
    double mixture_mean_variance = 0.0;
    bool exact_tau_layer = false;
};

struct CondOptions {
    long burn_in = 2000;
    int chains = 2;
    int margin = -1;
    int exact_cap = ising::kEnumerationCap;
    bool force_mc = false;
    ising::Boundary boundary = ising::Boundary::Plus;
};

/// Mixture representation: hidden spins from the quenched instance with
/// plus boundary, Gaussian mean from the interpolating configuration.
/// `eta_outside` is box-sized; its center entry is ignored.
ConditionalEstimate conditional_mu_t(const ModelParams& params,
                                     const DynamicsParams& dyn,
                                     const lattice::Box& box,
                                     const Vec& eta_outside, long n_tau,
                                     std::uint64_t seed,
                                     const CondOptions& opts = {},
                                     Exec exec = Exec::Parallel);

/// Independent oracle: importance-weight time-zero draws of the plus state
/// by the kernel densities at the observed values. Residual variance uses
/// the per-draw Gaussian centering, total variance is the raw weighted one.
struct BruteforceEstimate {
    ConditionalEstimate est;
    double ess = 0.0;
    bool reliable = false;
    double total_variance = 0.0;
    double residual_variance = 0.0;
};

BruteforceEstimate conditional_mu_t_bruteforce(
    const ModelParams& params, const DynamicsParams& dyn,
    const lattice::Box& box, const Vec& eta_outside, long n_joint,
    std::uint64_t seed, const gaussian::McOptions& opts = {},
    Exec exec = Exec::Parallel);

} // namespace spindiff::evolution
