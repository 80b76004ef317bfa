#include "spindiff/gaussian.hpp"

#include <cmath>
#include <stdexcept>

#include "spindiff/kernels.hpp"
#include "spindiff/rng.hpp"

namespace spindiff::gaussian {

using resolvent::MassProfile;

Mat cholesky_factor(const Mat& cov) {
    Eigen::LLT<Mat> llt(cov);
    if (llt.info() != Eigen::Success)
        throw std::runtime_error("covariance is not positive definite");
    return llt.matrixL();
}

Mat sample_field(const GaussianField& field, std::uint64_t seed, int n,
                 Exec exec) {
    if (n < 1) throw std::invalid_argument("need at least one draw");
    const int dim = static_cast<int>(field.mean.size());
    if (field.cov.rows() != dim || field.cov.cols() != dim)
        throw std::invalid_argument("field shape mismatch");
    const Mat l = cholesky_factor(field.cov);

    Mat z(dim, n);
    Rng rng(seed);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < dim; ++i) z(i, j) = rng.gaussian();
    Mat x;
    kernels::batch_affine(l, field.mean, z, x, exec);
    return x.transpose();
}

Vec interpolating_sigma(const lattice::Box& box, const ModelParams& params,
                        const SpinConfig& tau,
                        const std::optional<QuenchedFieldSpec>& quench) {
    params.validate();
    const int n = box.size();
    if (static_cast<int>(tau.size()) != n)
        throw std::invalid_argument("configuration size mismatch");

    MassProfile mass = MassProfile::plain(params, n);
    Vec rhs = Vec::Constant(n, params.q * params.h);
    for (int i = 0; i < n; ++i) rhs(i) += tau[i] / params.rho2;
    if (quench) {
        if (quench->s <= 0.0) throw std::invalid_argument("s must be > 0");
        if (static_cast<int>(quench->sites.size()) != quench->eta.size())
            throw std::invalid_argument("quench sites/eta size mismatch");
        const double s_inv = 1.0 / quench->s;
        for (size_t k = 0; k < quench->sites.size(); ++k) {
            const int y = quench->sites[k];
            if (y < 0 || y >= n) throw std::out_of_range("quench site index");
            mass.extra(y) += s_inv;
            rhs(y) += s_inv * quench->eta(static_cast<int>(k));
        }
    }
    const Mat a = resolvent::precision_matrix(box, params, mass);
    Eigen::LLT<Mat> llt(a);
    if (llt.info() != Eigen::Success)
        throw std::runtime_error("precision matrix not positive definite");
    return llt.solve(rhs);
}

MuPlusSamples sample_mu_plus(const ModelParams& params,
                             const lattice::Box& volume, int n,
                             std::uint64_t seed, const McOptions& opts,
                             Exec exec) {
    if (n < 1) throw std::invalid_argument("need at least one draw");
    // hidden spins live on a box enlarged by the margin, so the plus
    // conditioning acts a correlation-length-scale away from the window
    int margin = opts.margin;
    if (margin < 0) margin = resolvent::default_margin(params, volume.dim);
    lattice::Box spin_box = volume;
    for (int k = 0; k < volume.dim; ++k) {
        spin_box.extents[k] += 2 * margin;
        spin_box.origin[k] -= margin;
    }
    const ising::ResolventIsing model = ising::build_resolvent_ising(
        spin_box, params, std::nullopt, ising::Boundary::Plus, margin, exec);
    const int nv = volume.size();
    const int nb = spin_box.size();
    const int na = model.ambient.size();
    const std::vector<int> emb_v = lattice::embed_indices(volume, model.ambient);

    // Gaussian layer on the window: mean = base + K tau_B with base from
    // the q h sources and the spins folded beyond the spin box
    std::vector<bool> in_b = lattice::membership_mask(spin_box, model.ambient);
    Vec exterior = Vec::Zero(na);
    for (int y = 0; y < na; ++y)
        if (!in_b[y]) exterior(y) = model.exterior_spin;
    const Vec base_full = model.R * (model.mu_sources + exterior / params.rho2);
    Vec base(nv);
    Mat k_mat(nv, nb);
    Mat cov(nv, nv);
    for (int i = 0; i < nv; ++i) {
        base(i) = base_full(emb_v[i]);
        for (int j = 0; j < nb; ++j)
            k_mat(i, j) = model.R(emb_v[i], model.embed[j]) / params.rho2;
        for (int j = 0; j < nv; ++j) cov(i, j) = model.R(emb_v[i], emb_v[j]);
    }
    const Mat l = cholesky_factor(cov);
    const std::vector<int> vol_in_b = lattice::embed_indices(volume, spin_box);

    // hidden-spin chain, thinned
    Rng spin_rng(seed, 0);
    Rng noise_rng(seed, 1);
    Vec tau = Vec::Constant(nb, 1.0);
    Vec u = model.inst.J * tau;
    auto sweep = [&]() {
        for (int x = 0; x < nb; ++x) {
            const double p =
                1.0 / (1.0 + std::exp(-2.0 * (u(x) + model.inst.g(x))));
            const double next = spin_rng.uniform() < p ? 1.0 : -1.0;
            if (next != tau(x)) {
                u += (next - tau(x)) * model.inst.J.col(x);
                tau(x) = next;
            }
        }
    };
    for (long t = 0; t < opts.burn_in; ++t) sweep();

    MuPlusSamples out;
    out.spin_box = spin_box;
    out.sigma.resize(n, nv);
    out.tau.reserve(n);
    out.tau_box.reserve(n);
    Vec z(nv);
    for (int k = 0; k < n; ++k) {
        for (int t = 0; t < opts.thin; ++t) sweep();
        SpinConfig snap(nv);
        for (int i = 0; i < nv; ++i)
            snap[i] = static_cast<std::int8_t>(tau(vol_in_b[i]) > 0 ? 1 : -1);
        out.tau.push_back(snap);
        SpinConfig full(nb);
        for (int i = 0; i < nb; ++i)
            full[i] = static_cast<std::int8_t>(tau(i) > 0 ? 1 : -1);
        out.tau_box.push_back(std::move(full));
        for (int i = 0; i < nv; ++i) z(i) = noise_rng.gaussian();
        out.sigma.row(k) = (base + k_mat * tau + l * z).transpose();
    }
    return out;
}

double centering_identity_spread(
    const ModelParams& params, const lattice::Box& volume,
    const lattice::Box& ambient, const Vec& sigma_boundary,
    const std::vector<std::pair<SpinConfig, Vec>>& test_points) {
    params.validate();
    if (test_points.empty()) throw std::invalid_argument("no test points");
    const int nv = volume.size();
    if (sigma_boundary.size() != ambient.size())
        throw std::invalid_argument("boundary configuration size mismatch");
    const std::vector<int> emb = lattice::embed_indices(volume, ambient);
    std::vector<bool> inside = lattice::membership_mask(volume, ambient);
    // every volume site must have its full complement of 2d bonds
    for (int i = 0; i < nv; ++i)
        if (static_cast<int>(ambient.neighbors(emb[i]).size()) !=
            2 * ambient.dim)
            throw std::invalid_argument(
                "volume must sit strictly inside the ambient box");

    const double q = params.q, h = params.h, rho2 = params.rho2;
    const Mat a = resolvent::precision_matrix(
        volume, params, MassProfile::plain(params, nv));
    Eigen::LLT<Mat> llt(a);
    const Mat r = llt.solve(Mat::Identity(nv, nv));
    const double log_det_a =
        2.0 * Mat(llt.matrixL()).diagonal().array().log().sum();

    // boundary bond sums (B sigma~)_x
    Vec bsig = Vec::Zero(nv);
    for (int i = 0; i < nv; ++i)
        for (int y : ambient.neighbors(emb[i]))
            if (!inside[y]) bsig(i) += sigma_boundary(y);

    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (const auto& [tau, sigma] : test_points) {
        if (static_cast<int>(tau.size()) != nv || sigma.size() != nv)
            throw std::invalid_argument("test point size mismatch");
        Vec t(nv);
        for (int i = 0; i < nv; ++i) t(i) = tau[i];

        // joint Hamiltonian, written with explicit bonds
        double joint = 0.0;
        for (int i = 0; i < nv; ++i) {
            for (int ya : ambient.neighbors(emb[i])) {
                if (inside[ya]) {
                    // count each interior pair once
                    const std::vector<int> cy = ambient.coord(ya);
                    const int j = volume.index(cy);
                    if (j > i)
                        joint += 0.5 * q * (sigma(i) - sigma(j)) *
                                 (sigma(i) - sigma(j));
                } else {
                    joint += 0.5 * q * (sigma(i) - sigma_boundary(ya)) *
                             (sigma(i) - sigma_boundary(ya));
                }
            }
            joint += -q * h * sigma(i) +
                     sigma(i) * sigma(i) / (2.0 * rho2) -
                     sigma(i) * t(i) / rho2;
        }

        // Ising energy with the continuous boundary folded into the field
        const Vec c = Vec::Constant(nv, q * h) + q * bsig;
        const Vec b = c + t / rho2;
        const Vec m = r * b;
        const double ising_energy =
            -0.5 / (rho2 * rho2) * t.dot(r * t) - t.dot(r * c) / rho2;

        const Vec d = sigma - m;
        const double log_gauss = -0.5 * d.dot(a * d) + 0.5 * log_det_a -
                                 0.5 * nv * std::log(2.0 * M_PI);

        const double dev = -joint - (-ising_energy + log_gauss);
        lo = std::min(lo, dev);
        hi = std::max(hi, dev);
    }
    return hi - lo;
}

} // namespace spindiff::gaussian
