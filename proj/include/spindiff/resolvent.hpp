#pragma once

#include <optional>
#include <vector>

#include "spindiff/lattice.hpp"
#include "spindiff/linalg.hpp"

namespace spindiff::resolvent {

/// Static model triple: nearest-neighbor coupling q, single-site variance
/// parameter rho2, external field h.
struct ModelParams {
    double q = 0.0;
    double rho2 = 1.0;
    double h = 0.0;
    void validate() const;
};

/// Reparametrization under which rho^{-4} (rho^{-2} - q Lap)^{-1} becomes
/// a0 (I - lambda adj)^{-1}; with the optional mass s the denominators pick
/// up an extra s^{-1} rho^2.
struct NaturalParams {
    double a0 = 0.0;
    double lambda = 0.0;
};

NaturalParams natural_params(const ModelParams& p, int d,
                             std::optional<double> s = std::nullopt);

/// Diagonal mass: base = rho^{-2} everywhere plus a nonnegative per-site
/// addition (typically s^{-1} on a conditioned set W).
struct MassProfile {
    double base = 1.0;
    Vec extra;

    static MassProfile plain(const ModelParams& p, int n_sites);
    static MassProfile with_sites(const ModelParams& p, int n_sites,
                                  const std::vector<int>& sites, double value);
};

struct ResolventMatrix {
    Mat R;
    enum class Method { Direct, Series } method = Method::Direct;
    int series_terms = 0;
};

/// A = (base + extra) I - q Lap_box, symmetric positive definite.
Mat precision_matrix(const lattice::Box& box, const ModelParams& p,
                     const MassProfile& mass);

/// Inverse of the precision matrix by dense Cholesky (small volumes) or
/// conjugate gradient (large); residual checked below 1e-10.
ResolventMatrix resolvent_direct(const lattice::Box& box, const ModelParams& p,
                                 const MassProfile& mass,
                                 Exec exec = Exec::Parallel);

/// Neumann-series form rho^4 a0 sum_n lambda^n adj^n, truncated when the
/// geometric tail bound rho^4 a0 (2d lambda)^{n+1}/(1 - 2d lambda) drops
/// below tol. Only valid for zero extra mass.
ResolventMatrix resolvent_series(const lattice::Box& box, const ModelParams& p,
                                 double tol, Exec exec = Exec::Parallel);

/// (base + extra I_W - q Lap)^{-1} - (base - q Lap)^{-1}, computed through
/// the second-resolvent identity -R_W (extra I_W) R.
Mat resolvent_difference(const lattice::Box& box, const ModelParams& p,
                         const MassProfile& mass_w, Exec exec = Exec::Parallel);

/// Least-squares fit of log R(center, x) against the 1-norm distance from
/// the center. rate < 0 means exponential decay.
struct DecayFit {
    double rate = 0.0;
    double r2 = 0.0;
};

DecayFit decay_fit(const Mat& r, const lattice::Box& box);

/// Box margin (in sites) covering roughly four certified correlation
/// lengths -1/log(2d lambda); used when folding exterior boundary spins.
int default_margin(const ModelParams& p, int d);

} // namespace spindiff::resolvent
