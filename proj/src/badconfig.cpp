#include "spindiff/badconfig.hpp"

#include <cmath>
#include <stdexcept>

namespace spindiff::badconfig {

BadConfigSpec make_bad_config(const ModelParams& params,
                              const DynamicsParams& dyn,
                              std::optional<double> k_field) {
    params.validate();
    const double s = dyn.bm_time();
    if (s <= 0.0) throw std::invalid_argument("dynamics time must be > 0");

    BadConfigSpec spec;
    spec.s = s;
    spec.K = k_field ? *k_field : 5.0 / params.rho2;
    if (spec.K <= 0.0) throw std::invalid_argument("K must be positive");
    spec.eta_balance_bm = -params.q * params.h * s;
    if (dyn.mode == DynamicsParams::Mode::OU) {
        spec.eta_balance_ou = -2.0 * params.q * params.h * dyn.rho_inf2 *
                           std::sinh(0.5 * dyn.time);
        // same configuration seen through the path rescaling: the OU value
        // is r_t times the additive-noise one
        const double check = spec.eta_balance_bm * dyn.r();
        if (std::abs(check - spec.eta_balance_ou) >
            1e-9 * (1.0 + std::abs(check)))
            throw std::logic_error("time-rescaling identity violated");
    } else {
        spec.eta_balance_ou = spec.eta_balance_bm;
    }
    spec.omega_plus = params.rho2 * (spec.K - params.q * params.h * s);
    spec.omega_minus = params.rho2 * (-spec.K - params.q * params.h * s);
    return spec;
}

GapResult gap_experiment(const ModelParams& params, int d, double s, double K,
                         int v0_side, int v1_side, int ambient_side,
                         GapEstimator estimator, long mc_budget,
                         std::uint64_t seed, Exec exec) {
    params.validate();
    if (!(v0_side <= v1_side && v1_side <= ambient_side))
        throw std::invalid_argument("need V0 <= V1 <= ambient");
    if (mc_budget < 100) throw std::invalid_argument("mc budget too small");

    const lattice::Box ambient = lattice::Box::cube(d, ambient_side);
    const lattice::Box v0 = lattice::Box::cube(d, v0_side);
    const lattice::Box v1 = lattice::Box::cube(d, v1_side);

    // both chains carry plus boundary: the annulus alone selects the phase,
    // and at K = 0 the two instances coincide exactly
    const ising::ResolventIsing hi = ising::build_annulus_ising(
        ambient, params, s, v0, v1, std::nullopt, K, +1, ising::Boundary::Plus,
        -1, exec);
    const ising::ResolventIsing lo = ising::build_annulus_ising(
        ambient, params, s, v0, v1, std::nullopt, K, -1, ising::Boundary::Plus,
        -1, exec);

    const int n = ambient.size();
    const int origin = ambient.center_index();
    const long sweeps = mc_budget;
    const long burn = mc_budget / 5;

    Vec weights;
    const Vec* projector = nullptr;
    if (estimator == GapEstimator::EtaMean) {
        weights.resize(n);
        const int oa = hi.embed[origin];
        for (int i = 0; i < n; ++i)
            weights(i) = hi.R(oa, hi.embed[i]) / params.rho2;
        projector = &weights;
    }

    const ising::CoupledResult run = ising::coupled_heatbath(
        {&hi.inst, &lo.inst}, sweeps, burn, seed, projector);
    if (run.violations[0] != 0)
        throw std::logic_error("monotone coupling violated");

    GapResult out;
    out.v0_side = v0_side;
    out.v1_side = v1_side;
    out.ambient_side = ambient_side;
    out.K = K;
    out.s = s;
    out.sweeps = sweeps;
    out.seed = seed;
    out.est_plus = run.est[0];
    out.est_minus = run.est[1];

    if (estimator == GapEstimator::TauMarginal) {
        out.gap = run.diff_mean[0](origin);
        out.std_error = run.diff_se[0](origin);
    } else {
        // the hidden-spin part of the conditional-mean difference plus the
        // deterministic source difference 2 rho2 K over the annulus, and
        // the folded exterior spins that differ between the two chains
        const int oa = hi.embed[origin];
        const std::vector<bool> in_v0 =
            lattice::membership_mask(v0, hi.ambient);
        const std::vector<bool> in_v1 =
            lattice::membership_mask(v1, hi.ambient);
        double det = 0.0;
        for (int y = 0; y < hi.ambient.size(); ++y)
            if (in_v1[y] && !in_v0[y])
                det += 2.0 * params.rho2 * K * hi.R(oa, y);
        out.gap = det + run.proj_diff_mean[0];
        out.std_error = run.proj_diff_se[0];
    }
    out.indeterminate =
        out.std_error > out.gap / 3.0 && out.gap < kGapVanishThreshold;
    return out;
}

ScanResult gibbs_scan(const ModelParams& params, int d,
                      const std::vector<double>& times, double rho_inf2,
                      double K, const ScanGeometry& geom, long mc_budget,
                      std::uint64_t seed, Exec exec) {
    params.validate();
    if (times.empty()) throw std::invalid_argument("empty time grid");

    const resolvent::NaturalParams np0 = resolvent::natural_params(params, d);
    const double uniform_contraction = 2.0 * d * np0.lambda * (1.0 + np0.a0);

    ScanResult out;
    for (size_t i = 0; i < times.size(); ++i) {
        const double t = times[i];
        ScanPoint pt;
        pt.t = t;
        pt.s = evolution::time_rescale(t, rho_inf2);
        pt.uniform_contraction = uniform_contraction;
        if (pt.s > 0.0) {
            const resolvent::NaturalParams np_s =
                resolvent::natural_params(params, d, pt.s);
            pt.small_s_contraction =
                2.0 * d * np_s.lambda * (1.0 + np_s.a0);
        }
        const bool certified = uniform_contraction < 1.0 ||
                               pt.s == 0.0 ||
                               pt.small_s_contraction < 1.0;
        if (certified) {
            pt.label = ScanLabel::CertifiedGibbs;
        } else {
            GapResult gap = gap_experiment(
                params, d, pt.s, K, geom.v0_side, geom.v1_side,
                geom.ambient_side, GapEstimator::TauMarginal, mc_budget,
                seed + static_cast<std::uint64_t>(i), exec);
            if (gap.gap > 3.0 * gap.std_error)
                pt.label = ScanLabel::GapPersists;
            else if (gap.gap + 3.0 * gap.std_error < kGapVanishThreshold)
                pt.label = ScanLabel::GapVanishes;
            else
                pt.label = ScanLabel::Indeterminate;
            pt.gap = gap;
        }
        out.points.push_back(std::move(pt));
    }

    for (const ScanPoint& pt : out.points) {
        if (pt.label == ScanLabel::CertifiedGibbs &&
            !(out.largest_certified_t >= pt.t))
            out.largest_certified_t = pt.t;
        if (pt.label == ScanLabel::GapPersists &&
            !(out.smallest_persistent_t <= pt.t))
            out.smallest_persistent_t = pt.t;
    }
    return out;
}

} // namespace spindiff::badconfig
