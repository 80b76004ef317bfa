#include "spindiff/evolution.hpp"

#include <cmath>
#include <stdexcept>

#include "spindiff/kernels.hpp"
#include "spindiff/rng.hpp"

namespace spindiff::evolution {

DynamicsParams DynamicsParams::ou(double t, double rho_inf2) {
    if (t < 0.0) throw std::invalid_argument("time must be >= 0");
    if (rho_inf2 <= 0.0) throw std::invalid_argument("rho_inf2 must be > 0");
    return {Mode::OU, t, rho_inf2};
}

DynamicsParams DynamicsParams::bm(double s) {
    if (s < 0.0) throw std::invalid_argument("time must be >= 0");
    return {Mode::BM, s, 1.0};
}

double DynamicsParams::bm_time() const {
    return mode == Mode::BM ? time : time_rescale(time, rho_inf2);
}

double DynamicsParams::r() const {
    return mode == Mode::BM ? 1.0 : std::exp(-0.5 * time);
}

double DynamicsParams::kernel_variance() const {
    return mode == Mode::BM ? time : rho_inf2 * (1.0 - std::exp(-time));
}

double time_rescale(double t, double rho_inf2) {
    if (t < 0.0) throw std::invalid_argument("time must be >= 0");
    return rho_inf2 * std::expm1(t);
}

double time_rescale_inverse(double s, double rho_inf2) {
    if (s < 0.0) throw std::invalid_argument("time must be >= 0");
    return std::log1p(s / rho_inf2);
}

Mat evolve_samples(const Mat& configs, const DynamicsParams& dyn,
                   std::uint64_t seed) {
    const double amp = dyn.r();
    const double var = dyn.kernel_variance();
    Mat out = amp * configs;
    if (var == 0.0) return out;
    const double sd = std::sqrt(var);
    Rng rng(seed);
    for (Eigen::Index i = 0; i < out.rows(); ++i)
        for (Eigen::Index j = 0; j < out.cols(); ++j)
            out(i, j) += sd * rng.gaussian();
    return out;
}

namespace {

// The quenched model behind a conditional estimate. The conditioned sites
// W = V \ 0 sit inside a margin-enlarged spin box, so the folded plus
// boundary acts a correlation-length-scale away from the window.
struct CondModel {
    ising::ResolventIsing model;  // instance on the spin box
    lattice::Box spin_box;
    double det_mean = 0.0;  // eta/qh sources plus folded exterior spins
    Vec weights;            // rho^{-2} R(0, y) over spin-box sites
    double r00 = 0.0;
};

CondModel build_cond_model(const ModelParams& params, double s,
                           const lattice::Box& box, const Vec& eta_outside,
                           int margin, ising::Boundary boundary, Exec exec) {
    const int n = box.size();
    if (eta_outside.size() != n)
        throw std::invalid_argument("eta must be box-sized (center ignored)");
    const int origin = box.center_index();

    if (margin < 0) margin = resolvent::default_margin(params, box.dim);
    lattice::Box spin_box = box;
    for (int k = 0; k < box.dim; ++k) {
        spin_box.extents[k] += 2 * margin;
        spin_box.origin[k] -= margin;
    }
    const std::vector<int> vol_in_b = lattice::embed_indices(box, spin_box);

    ising::QuenchedFieldSpec quench;
    quench.s = s;
    quench.eta.resize(n - 1);
    for (int i = 0; i < n; ++i) {
        if (i == origin) continue;
        quench.eta(static_cast<int>(quench.sites.size())) = eta_outside(i);
        quench.sites.push_back(vol_in_b[i]);
    }

    CondModel cm;
    cm.spin_box = spin_box;
    cm.model = ising::build_resolvent_ising(spin_box, params, quench, boundary,
                                            margin, exec);
    const int oa = cm.model.embed[spin_box.center_index()];
    cm.r00 = cm.model.R(oa, oa);

    const int na = cm.model.ambient.size();
    std::vector<bool> inside =
        lattice::membership_mask(spin_box, cm.model.ambient);
    double det = cm.model.R.row(oa).dot(cm.model.mu_sources);
    for (int y = 0; y < na; ++y)
        if (!inside[y])
            det += cm.model.R(oa, y) * cm.model.exterior_spin / params.rho2;
    cm.det_mean = det;

    const int nb = spin_box.size();
    cm.weights.resize(nb);
    for (int i = 0; i < nb; ++i)
        cm.weights(i) = cm.model.R(oa, cm.model.embed[i]) / params.rho2;
    return cm;
}

} // namespace

ConditionalEstimate conditional_mu_t(const ModelParams& params,
                                     const DynamicsParams& dyn,
                                     const lattice::Box& box,
                                     const Vec& eta_outside, long n_tau,
                                     std::uint64_t seed,
                                     const CondOptions& opts, Exec exec) {
    params.validate();
    const double s = dyn.bm_time();
    if (s <= 0.0)
        throw std::invalid_argument("degenerate kernel: need time > 0");

    if (dyn.mode == DynamicsParams::Mode::OU) {
        // rescale the conditioning to the additive-noise picture, then map
        // the answer back
        const double amp = dyn.r();
        ConditionalEstimate base =
            conditional_mu_t(params, DynamicsParams::bm(s), box,
                             eta_outside / amp, n_tau, seed, opts, exec);
        ConditionalEstimate out = base;
        out.mean = amp * base.mean;
        out.variance = amp * amp * base.variance;
        out.std_error = amp * base.std_error;
        out.mixture_mean_variance = amp * amp * base.mixture_mean_variance;
        return out;
    }

    const CondModel cm = build_cond_model(params, s, box, eta_outside,
                                          opts.margin, opts.boundary, exec);
    ConditionalEstimate out;
    out.variance = cm.r00 + s;

    const int n = cm.spin_box.size();
    if (!opts.force_mc && n <= opts.exact_cap) {
        kernels::StateSum sum = kernels::state_sum(
            cm.model.inst.J, cm.model.inst.g, &cm.weights, false, exec);
        out.mean = cm.det_mean + sum.proj_mean;
        out.mixture_mean_variance =
            sum.proj_second - sum.proj_mean * sum.proj_mean;
        out.std_error = 0.0;
        out.n_tau_samples = 0;
        out.exact_tau_layer = true;
        return out;
    }

    const long sweeps = opts.burn_in + n_tau;
    ising::ProjectedEstimate proj = ising::heatbath_projected(
        cm.model.inst, cm.weights, sweeps, opts.burn_in, seed, opts.chains,
        exec);
    out.mean = cm.det_mean + proj.mean;
    out.std_error = proj.std_error;
    out.mixture_mean_variance = proj.variance;
    out.n_tau_samples = n_tau * opts.chains;
    return out;
}

BruteforceEstimate conditional_mu_t_bruteforce(
    const ModelParams& params, const DynamicsParams& dyn,
    const lattice::Box& box, const Vec& eta_outside, long n_joint,
    std::uint64_t seed, const gaussian::McOptions& opts, Exec exec) {
    params.validate();
    const double s = dyn.bm_time();
    if (s <= 0.0)
        throw std::invalid_argument("degenerate kernel: need time > 0");
    if (box.size() > 12)
        throw std::invalid_argument("oracle limited to 12 sites");

    if (dyn.mode == DynamicsParams::Mode::OU) {
        const double amp = dyn.r();
        BruteforceEstimate base = conditional_mu_t_bruteforce(
            params, DynamicsParams::bm(s), box, eta_outside / amp, n_joint,
            seed, opts, exec);
        BruteforceEstimate out = base;
        out.est.mean = amp * base.est.mean;
        out.est.variance = amp * amp * base.est.variance;
        out.est.std_error = amp * base.est.std_error;
        out.est.mixture_mean_variance = amp * amp * base.est.mixture_mean_variance;
        out.total_variance = amp * amp * base.total_variance;
        out.residual_variance = amp * amp * base.residual_variance;
        return out;
    }

    const int n = box.size();
    const int origin = box.center_index();
    gaussian::MuPlusSamples draws =
        gaussian::sample_mu_plus(params, box, static_cast<int>(n_joint), seed,
                                 opts, exec);

    // log-weights from the kernel densities at the conditioning values
    Vec logw(n_joint);
    for (long k = 0; k < n_joint; ++k) {
        double lw = 0.0;
        for (int x = 0; x < n; ++x) {
            if (x == origin) continue;
            const double d = draws.sigma(k, x) - eta_outside(x);
            lw -= d * d / (2.0 * s);
        }
        logw(k) = lw;
    }
    const double shift = logw.maxCoeff();
    Vec w = (logw.array() - shift).exp();

    const double wsum = w.sum();
    const double w2sum = w.squaredNorm();
    double mean = 0.0;
    for (long k = 0; k < n_joint; ++k) mean += w(k) * draws.sigma(k, origin);
    mean /= wsum;

    double var = 0.0, se2 = 0.0;
    for (long k = 0; k < n_joint; ++k) {
        const double d = draws.sigma(k, origin) - mean;
        var += w(k) * d * d;
        se2 += w(k) * w(k) * d * d;
    }
    var /= wsum;
    se2 /= wsum * wsum;

    // residuals against the per-draw Gaussian centering, evaluated with the
    // hidden spins of the full spin box (same margin as the sampler)
    const CondModel cm =
        build_cond_model(params, s, box, eta_outside, opts.margin,
                         ising::Boundary::Plus, exec);
    if (cm.spin_box.size() != draws.spin_box.size())
        throw std::logic_error("sampler and conditional margins disagree");
    double resid2 = 0.0;
    for (long k = 0; k < n_joint; ++k) {
        double m_tau = cm.det_mean;
        for (int x = 0; x < cm.spin_box.size(); ++x)
            m_tau += cm.weights(x) * draws.tau_box[k][x];
        const double d = draws.sigma(k, origin) - m_tau;
        resid2 += w(k) * d * d;
    }
    resid2 /= wsum;

    BruteforceEstimate out;
    out.est.mean = mean;
    // component variance, same meaning as on the representation side
    out.est.variance = s + resid2;
    out.est.std_error = std::sqrt(se2);
    out.est.n_tau_samples = n_joint;
    out.ess = wsum * wsum / w2sum;
    out.reliable = out.ess >= 50.0;
    out.total_variance = s + var;
    out.residual_variance = s + resid2;
    return out;
}

} // namespace spindiff::evolution
