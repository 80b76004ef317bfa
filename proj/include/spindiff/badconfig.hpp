#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "spindiff/dobrushin.hpp"
#include "spindiff/evolution.hpp"
#include "spindiff/ising.hpp"
#include "spindiff/linalg.hpp"

namespace spindiff::badconfig {

using evolution::DynamicsParams;
using resolvent::ModelParams;

/// The homogeneous conditioning -q h s (additive-noise picture) that
/// balances the quenched fields, with the two bounded annulus
/// perturbations rho2 (+-K - q h s) around it.
struct BadConfigSpec {
    double eta_balance_bm = 0.0;
    double eta_balance_ou = 0.0;  // -2 q h rho_inf2 sinh(t/2), OU picture
    double omega_plus = 0.0;
    double omega_minus = 0.0;
    double K = 0.0;
    double s = 0.0;
};

/// K defaults to 5/rho2 so the annulus fields sit deep in saturation.
BadConfigSpec make_bad_config(const ModelParams& params,
                              const DynamicsParams& dyn,
                              std::optional<double> k_field = std::nullopt);

enum class GapEstimator { TauMarginal, EtaMean };

struct GapResult {
    double gap = 0.0;
    double std_error = 0.0;
    int v0_side = 0, v1_side = 0, ambient_side = 0;
    double K = 0.0, s = 0.0;
    long sweeps = 0;
    std::uint64_t seed = 0;
    bool indeterminate = false;
    ising::GibbsEstimate est_plus, est_minus;  // per-site chain estimates
};

/// Coupled +K / -K annulus experiment at the origin. The +K instance runs
/// with plus boundary and the -K instance with minus boundary on shared
/// uniforms, so the reported gap is a nonnegative coupled difference.
GapResult gap_experiment(const ModelParams& params, int d, double s, double K,
                         int v0_side, int v1_side, int ambient_side,
                         GapEstimator estimator, long mc_budget,
                         std::uint64_t seed, Exec exec = Exec::Parallel);

enum class ScanLabel { CertifiedGibbs, GapPersists, GapVanishes, Indeterminate };

struct ScanGeometry {
    int v0_side = 3;
    int v1_side = 7;
    int ambient_side = 9;
};

struct ScanPoint {
    double t = 0.0;
    double s = 0.0;
    ScanLabel label = ScanLabel::Indeterminate;
    double uniform_contraction = 0.0;  // 2d lambda (1 + a0)
    double small_s_contraction = 0.0;  // 2d lambda_s (1 + a0_s)
    std::optional<GapResult> gap;
};

struct ScanResult {
    std::vector<ScanPoint> points;
    double largest_certified_t = std::numeric_limits<double>::quiet_NaN();
    double smallest_persistent_t = std::numeric_limits<double>::quiet_NaN();
};

/// For each time: certify via the uniform or the small-s contraction, and
/// when neither holds run the gap experiment and label the point by the
/// gap against its error bar.
ScanResult gibbs_scan(const ModelParams& params, int d,
                      const std::vector<double>& times, double rho_inf2,
                      double K, const ScanGeometry& geom, long mc_budget,
                      std::uint64_t seed, Exec exec = Exec::Parallel);

/// Operational thresholds for labeling scan points.
inline constexpr double kGapVanishThreshold = 0.05;

} // namespace spindiff::badconfig
