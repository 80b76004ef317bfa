#include "spindiff/resolvent.hpp"

#include <cmath>
#include <map>
#include <stdexcept>

#include "spindiff/kernels.hpp"

namespace spindiff::resolvent {

namespace {
constexpr int kDenseSolveLimit = 10000;
constexpr double kResidualTol = 1e-10;

void check_residual(const Mat& a, const Mat& r) {
    const double res = (r * a - Mat::Identity(a.rows(), a.cols()))
                           .cwiseAbs()
                           .maxCoeff();
    if (!(res < kResidualTol))
        throw std::runtime_error("resolvent solve residual " +
                                 std::to_string(res) + " above tolerance");
}
} // namespace

void ModelParams::validate() const {
    if (q < 0.0) throw std::invalid_argument("coupling q must be >= 0");
    if (rho2 <= 0.0) throw std::invalid_argument("rho2 must be positive");
}

NaturalParams natural_params(const ModelParams& p, int d,
                             std::optional<double> s) {
    p.validate();
    if (d < 1) throw std::invalid_argument("dimension must be >= 1");
    double denom = 1.0 + 2.0 * d * p.q * p.rho2;
    if (s) {
        if (*s <= 0.0) throw std::invalid_argument("s must be positive");
        denom += p.rho2 / *s;
    }
    return {1.0 / (p.rho2 * denom), p.q * p.rho2 / denom};
}

MassProfile MassProfile::plain(const ModelParams& p, int n_sites) {
    p.validate();
    return {1.0 / p.rho2, Vec::Zero(n_sites)};
}

MassProfile MassProfile::with_sites(const ModelParams& p, int n_sites,
                                    const std::vector<int>& sites,
                                    double value) {
    if (value < 0.0) throw std::invalid_argument("mass addition must be >= 0");
    MassProfile mass = plain(p, n_sites);
    for (int x : sites) {
        if (x < 0 || x >= n_sites) throw std::out_of_range("mass site index");
        mass.extra(x) = value;
    }
    return mass;
}

Mat precision_matrix(const lattice::Box& box, const ModelParams& p,
                     const MassProfile& mass) {
    p.validate();
    const int n = box.size();
    if (mass.extra.size() != n)
        throw std::invalid_argument("mass profile size mismatch");
    if (mass.extra.minCoeff() < 0.0)
        throw std::invalid_argument("mass addition must be >= 0");
    Mat a = -p.q * lattice::dirichlet_laplacian(box);
    a.diagonal().array() += mass.base;
    a.diagonal() += mass.extra;
    return a;
}

ResolventMatrix resolvent_direct(const lattice::Box& box,
                                 const ModelParams& p, const MassProfile& mass,
                                 Exec exec) {
    const Mat a = precision_matrix(box, p, mass);
    const int n = static_cast<int>(a.rows());
    ResolventMatrix out;
    out.method = ResolventMatrix::Method::Direct;
    if (n <= kDenseSolveLimit) {
        Eigen::LLT<Mat> llt(a);
        if (llt.info() != Eigen::Success)
            throw std::runtime_error("Cholesky factorization failed");
        out.R = llt.solve(Mat::Identity(n, n));
    } else {
        kernels::cg_solve(a, Mat::Identity(n, n), out.R, 1e-12, 10 * n, exec);
    }
    // enforce exact symmetry lost to roundoff
    out.R = 0.5 * (out.R + out.R.transpose()).eval();
    check_residual(a, out.R);
    return out;
}

ResolventMatrix resolvent_series(const lattice::Box& box,
                                 const ModelParams& p, double tol, Exec exec) {
    p.validate();
    if (tol <= 0.0) throw std::invalid_argument("series tolerance must be > 0");
    const int d = box.dim;
    const NaturalParams np = natural_params(p, d);
    const double scale = p.rho2 * p.rho2 * np.a0;
    const double r = 2.0 * d * np.lambda; // < 1 always
    const int n = box.size();

    ResolventMatrix out;
    out.method = ResolventMatrix::Method::Series;
    out.R = scale * Mat::Identity(n, n);
    if (np.lambda == 0.0) return out;

    // smallest n_terms with scale * r^{n+1} / (1-r) < tol
    int n_terms = 0;
    double tail = scale * r / (1.0 - r);
    while (tail >= tol) {
        ++n_terms;
        tail *= r;
    }
    out.series_terms = n_terms;

    const Mat adj = lattice::adjacency(box);
    Mat power = Mat::Identity(n, n);
    Mat next;
    double coeff = scale;
    for (int k = 1; k <= n_terms; ++k) {
        kernels::matmul(adj, power, next, exec);
        power.swap(next);
        coeff *= np.lambda;
        out.R += coeff * power;
    }
    return out;
}

Mat resolvent_difference(const lattice::Box& box, const ModelParams& p,
                         const MassProfile& mass_w, Exec exec) {
    const int n = box.size();
    if (mass_w.extra.size() != n)
        throw std::invalid_argument("mass profile size mismatch");
    const Mat r_w = resolvent_direct(box, p, mass_w, exec).R;
    const Mat r0 = resolvent_direct(box, p, MassProfile::plain(p, n), exec).R;
    return -r_w * mass_w.extra.asDiagonal() * r0;
}

DecayFit decay_fit(const Mat& r, const lattice::Box& box) {
    const int n = box.size();
    if (r.rows() != n || r.cols() != n)
        throw std::invalid_argument("matrix does not match box");
    const int c = box.center_index();

    std::vector<double> xs, ys;
    std::map<int, bool> seen;
    for (int j = 0; j < n; ++j) {
        if (j == c) continue;
        const int dist = lattice::l1_distance(box, c, j);
        const double v = r(c, j);
        if (v <= 0.0) throw std::runtime_error("no off-diagonal mass");
        xs.push_back(dist);
        ys.push_back(std::log(v));
        seen[dist] = true;
    }
    if (seen.size() < 5)
        throw std::invalid_argument("need at least 5 distinct distances");

    const double m = static_cast<double>(xs.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (size_t i = 0; i < xs.size(); ++i) {
        sx += xs[i];
        sy += ys[i];
        sxx += xs[i] * xs[i];
        sxy += xs[i] * ys[i];
    }
    const double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    const double intercept = (sy - slope * sx) / m;
    double ss_res = 0, ss_tot = 0;
    const double mean_y = sy / m;
    for (size_t i = 0; i < xs.size(); ++i) {
        const double fit = intercept + slope * xs[i];
        ss_res += (ys[i] - fit) * (ys[i] - fit);
        ss_tot += (ys[i] - mean_y) * (ys[i] - mean_y);
    }
    return {slope, ss_tot > 0 ? 1.0 - ss_res / ss_tot : 1.0};
}

int default_margin(const ModelParams& p, int d) {
    p.validate();
    if (p.q == 0.0) return 0;
    const double r = 2.0 * d * natural_params(p, d).lambda;
    const double xi = -1.0 / std::log(r);
    const int margin = static_cast<int>(std::ceil(4.0 * xi));
    return std::clamp(margin, 4, 12);
}

} // namespace spindiff::resolvent
