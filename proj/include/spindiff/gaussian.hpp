#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "spindiff/ising.hpp"
#include "spindiff/lattice.hpp"
#include "spindiff/linalg.hpp"
#include "spindiff/resolvent.hpp"

namespace spindiff::gaussian {

using ising::QuenchedFieldSpec;
using ising::SpinConfig;
using resolvent::ModelParams;

/// Multivariate normal with (symmetric positive definite) covariance.
struct GaussianField {
    Vec mean;
    Mat cov;
};

/// Lower Cholesky factor; throws when the matrix is not positive definite.
Mat cholesky_factor(const Mat& cov);

/// n independent draws, one per row.
Mat sample_field(const GaussianField& field, std::uint64_t seed, int n,
                 Exec exec = Exec::Parallel);

/// Minimizer of the joint quadratic form given the hidden spins:
/// (rho^{-2} + 1_W/s - q Lap)^{-1} (q h 1 + rho^{-2} tau + eta_W/s),
/// evaluated on the box itself (Dirichlet).
Vec interpolating_sigma(const lattice::Box& box, const ModelParams& params,
                        const SpinConfig& tau,
                        const std::optional<QuenchedFieldSpec>& quench =
                            std::nullopt);

struct McOptions {
    long burn_in = 2000;
    int thin = 5;
    int margin = -1;  // negative = automatic
};

/// Two-stage sampler for the plus state of the continuous model: hidden
/// spins from the resolvent Ising chain on a margin-enlarged box with plus
/// boundary, then the conditional Gaussian layer on the requested window,
/// centered at the interpolating configuration.
struct MuPlusSamples {
    Mat sigma;                        // n x |volume|
    std::vector<SpinConfig> tau;      // hidden layer, restricted to volume
    lattice::Box spin_box;            // where the hidden chain actually ran
    std::vector<SpinConfig> tau_box;  // hidden layer on the full spin box
};

MuPlusSamples sample_mu_plus(const ModelParams& params,
                             const lattice::Box& volume, int n,
                             std::uint64_t seed, const McOptions& opts = {},
                             Exec exec = Exec::Parallel);

/// Joint-Hamiltonian identity probe: log of the joint density minus
/// (Ising energy + conditional Gaussian log density) evaluated on test
/// pairs. The spread (max - min) must vanish up to roundoff; the volume
/// must sit strictly inside the ambient box so every bond is present.
double centering_identity_spread(
    const ModelParams& params, const lattice::Box& volume,
    const lattice::Box& ambient, const Vec& sigma_boundary,
    const std::vector<std::pair<SpinConfig, Vec>>& test_points);

} // namespace spindiff::gaussian
