#include "spindiff/dobrushin.hpp"

#include <cmath>
#include <stdexcept>

#include "spindiff/rng.hpp"

namespace spindiff::dobrushin {

using resolvent::MassProfile;

double beta_critical(int d, std::optional<double> user_beta) {
    if (user_beta) {
        if (*user_beta <= 0.0)
            throw std::invalid_argument("beta_d must be positive");
        return *user_beta;
    }
    if (d == 2) return 0.5 * std::log(1.0 + std::sqrt(2.0));
    throw std::invalid_argument(
        "beta_d is only built in for d = 2; supply a value for other d");
}

RegimeReport classify_regime(const ModelParams& params, int d,
                             std::optional<double> user_beta) {
    params.validate();
    const double beta_d = beta_critical(d, user_beta);
    RegimeReport rep;
    rep.beta_d = beta_d;
    rep.low_rhs = 1.0 / beta_d - 2.0 * d * params.rho2;
    rep.high_rhs = 2.0 * d * (1.0 - params.rho2);
    if (params.q == 0.0) {
        // decoupled sites: unique for trivial reasons
        rep.low_lhs = rep.high_lhs = std::numeric_limits<double>::infinity();
        rep.regime = Regime::HighTempUnique;
        return rep;
    }
    rep.low_lhs = rep.high_lhs = 1.0 / params.q;
    rep.conditions_exclusive = rep.low_rhs <= rep.high_rhs;
    if (rep.high_lhs > rep.high_rhs)
        rep.regime = Regime::HighTempUnique;
    else if (rep.low_lhs < rep.low_rhs)
        rep.regime = Regime::LowTempOrdered;
    else
        rep.regime = Regime::Indeterminate;
    return rep;
}

double dobrushin_constant_bound(const NaturalParams& np, int d) {
    const double r = 2.0 * d * np.lambda;
    if (r >= 1.0) throw std::invalid_argument("2d lambda must be below one");
    return np.a0 * r / (1.0 - r);
}

bool influence_contraction_holds(const NaturalParams& np, int d) {
    return 2.0 * d * np.lambda * (1.0 + np.a0) < 1.0;
}

namespace {
// (I - c adj)^{-1} on the box; requires 2d c < 1 so the Neumann series
// converges and the inverse is entrywise nonnegative.
Mat contraction_inverse(const lattice::Box& box, double c) {
    const int n = box.size();
    Mat m = Mat::Identity(n, n) - c * lattice::adjacency(box);
    return m.partialPivLu().solve(Mat::Identity(n, n));
}
} // namespace

double eta_influence_bound(const ModelParams& params, double s,
                           const lattice::Box& box, int x,
                           const Vec& delta_eta) {
    params.validate();
    if (s <= 0.0) throw std::invalid_argument("s must be positive");
    const int n = box.size();
    if (delta_eta.size() != n)
        throw std::invalid_argument("delta_eta size mismatch");
    if (x < 0 || x >= n) throw std::out_of_range("site index");
    if (delta_eta.minCoeff() < 0.0)
        throw std::invalid_argument("delta_eta must be nonnegative");
    const NaturalParams np = natural_params(params, box.dim);
    if (!influence_contraction_holds(np, box.dim))
        throw std::runtime_error("influence contraction condition fails");
    const Mat d_mat =
        contraction_inverse(box, np.lambda * (1.0 + np.a0));
    return params.rho2 * np.a0 / (2.0 * s) * d_mat.row(x).dot(delta_eta);
}

SmallSBounds small_s_bounds(const ModelParams& params, double s,
                            const lattice::Box& box,
                            const std::vector<int>& w_sites, int x,
                            int margin) {
    params.validate();
    if (s <= 0.0) throw std::invalid_argument("s must be positive");
    const int d = box.dim;
    SmallSBounds out;
    out.np_s = natural_params(params, d, s);
    out.contraction = 2.0 * d * out.np_s.lambda * (1.0 + out.np_s.a0);
    out.certified = out.contraction < 1.0;
    if (!out.certified) return out;

    // enlarge the box so the complement of W is represented
    if (margin < 0) margin = resolvent::default_margin(params, d);
    lattice::Box big = box;
    for (int k = 0; k < d; ++k) {
        big.extents[k] += 2 * margin;
        big.origin[k] -= margin;
    }
    const std::vector<int> emb = lattice::embed_indices(box, big);
    std::vector<bool> in_w(big.size(), false);
    for (int w : w_sites) {
        if (w < 0 || w >= box.size()) throw std::out_of_range("W site index");
        in_w[emb[w]] = true;
    }
    const int xa = emb[x];

    // bar b_x(W) <= rho^{-4} sum_{z in W^c} (rho^{-2} - q Lap)^{-1}_{x,z}
    const Mat r_plain =
        resolvent_direct(big, params, MassProfile::plain(params, big.size())).R;
    double tail_b = 0.0;
    for (int z = 0; z < big.size(); ++z)
        if (!in_w[z]) tail_b += r_plain(xa, z);
    out.coupling_discrepancy = tail_b / (params.rho2 * params.rho2);

    // D-weighted tail and the unit eta term, s-dependent parameters
    const Mat d_bar =
        contraction_inverse(big, out.np_s.lambda * (1.0 + out.np_s.a0));
    const NaturalParams np0 = natural_params(params, d);
    const Mat lam_inv = contraction_inverse(big, np0.lambda);
    double dtail = 0.0;
    for (int z = 0; z < big.size(); ++z) {
        if (in_w[z]) continue;
        // (D_bar * a0 (I - lambda adj)^{-1})_{xa, z}
        dtail += np0.a0 * d_bar.row(xa).dot(lam_inv.col(z));
    }
    double eta_term = 0.0;
    for (int w : w_sites) eta_term += d_bar(xa, emb[w]);
    out.influence_unit = params.rho2 * out.np_s.a0 / (2.0 * s) * eta_term;
    out.total = out.influence_unit + 2.0 * dtail;
    return out;
}

Mat empirical_dobrushin_matrix(const ising::IsingInstance& inst,
                               int sample_pairs, std::uint64_t seed,
                               int exhaustive_limit) {
    inst.validate();
    const int n = inst.volume.size();
    Mat c = Mat::Zero(n, n);
    const bool exhaustive = n <= exhaustive_limit;
    if (!exhaustive && sample_pairs <= 0)
        throw std::invalid_argument(
            "volume too large for exhaustive mode; set sample_pairs");

    Rng rng(seed);
    ising::SpinConfig tau(n, 1);
    for (int x = 0; x < n; ++x) {
        for (int y = 0; y < n; ++y) {
            if (y == x) continue;
            double worst = 0.0;
            auto probe = [&](ising::SpinConfig& cfg) {
                cfg[y] = 1;
                const double p_plus = conditional_prob_plus(inst, x, cfg);
                cfg[y] = -1;
                const double p_minus = conditional_prob_plus(inst, x, cfg);
                worst = std::max(worst, std::abs(p_plus - p_minus));
            };
            if (exhaustive) {
                // all configurations of the remaining n-2 spins
                std::vector<int> rest;
                for (int z = 0; z < n; ++z)
                    if (z != x && z != y) rest.push_back(z);
                const std::uint64_t total = std::uint64_t{1}
                                            << rest.size();
                for (std::uint64_t m = 0; m < total; ++m) {
                    for (size_t k = 0; k < rest.size(); ++k)
                        tau[rest[k]] = (m >> k) & 1 ? 1 : -1;
                    probe(tau);
                }
            } else {
                for (int k = 0; k < sample_pairs; ++k) {
                    for (int z = 0; z < n; ++z)
                        tau[z] = rng.uniform() < 0.5 ? 1 : -1;
                    probe(tau);
                }
            }
            c(x, y) = worst;
        }
    }
    return c;
}

Mat dobrushin_series_bound(const lattice::Box& box, const NaturalParams& np) {
    const int n = box.size();
    const double r = 2.0 * box.dim * np.lambda;
    if (r >= 1.0) throw std::invalid_argument("2d lambda must be below one");
    // a0 [(I - lambda adj)^{-1} - I]
    Mat inv = contraction_inverse(box, np.lambda);
    return np.a0 * (inv - Mat::Identity(n, n));
}

} // namespace spindiff::dobrushin
