#include "spindiff/kernels.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>

#ifdef SPINDIFF_HAVE_OPENMP
#include <omp.h>
#endif

namespace spindiff::kernels {

bool parallel_available() {
#ifdef SPINDIFF_HAVE_OPENMP
    return true;
#else
    return false;
#endif
}

int max_threads() {
#ifdef SPINDIFF_HAVE_OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

void matmul(const Mat& a, const Mat& b, Mat& c, Exec exec) {
    const int n = static_cast<int>(a.rows());
    const int k = static_cast<int>(a.cols());
    const int m = static_cast<int>(b.cols());
    if (b.rows() != k) throw std::invalid_argument("matmul shape mismatch");
    c.resize(n, m);

    auto row_product = [&](int i) {
        for (int j = 0; j < m; ++j) {
            double acc = 0.0;
            for (int l = 0; l < k; ++l) acc += a(i, l) * b(l, j);
            c(i, j) = acc;
        }
    };

    if (exec == Exec::Parallel) {
#ifdef SPINDIFF_HAVE_OPENMP
#pragma omp parallel for schedule(static)
        for (int i = 0; i < n; ++i) row_product(i);
        return;
#endif
    }
    for (int i = 0; i < n; ++i) row_product(i);
}

namespace {

// Accumulators for one contiguous Gray-code range of states.
struct Partial {
    double min_h = 0.0;
    double z = 0.0;
    Vec m;
    double p1 = 0.0;
    double p2 = 0.0;
};

// Walk states with counters in [lo, hi).  The spin bitmask of counter i is
// its Gray code i ^ (i >> 1); consecutive masks differ in bit ctz(i + 1).
template <typename Visit>
void gray_walk(const Mat& J, const Vec& g, std::uint64_t lo, std::uint64_t hi,
               Visit&& visit) {
    const int n = static_cast<int>(g.size());
    Vec tau(n);
    std::uint64_t mask = lo ^ (lo >> 1);
    for (int x = 0; x < n; ++x) tau(x) = (mask >> x) & 1 ? 1.0 : -1.0;
    double h = -0.5 * tau.dot(J * tau) - g.dot(tau);
    for (std::uint64_t i = lo; i < hi; ++i) {
        visit(mask, h, tau);
        if (i + 1 == hi) break;
        int k = std::countr_zero(i + 1);
        h += 2.0 * tau(k) * (J.row(k).dot(tau) + g(k));
        tau(k) = -tau(k);
        mask ^= (std::uint64_t{1} << k);
    }
}

} // namespace

StateSum state_sum(const Mat& J, const Vec& g, const Vec* projector,
                   bool keep_probs, Exec exec) {
    const int n = static_cast<int>(g.size());
    if (n < 1 || n > 24) throw std::invalid_argument("state_sum needs 1..24 spins");
    const std::uint64_t total = std::uint64_t{1} << n;

    int chunks = 1;
#ifdef SPINDIFF_HAVE_OPENMP
    if (exec == Exec::Parallel)
        chunks = std::min<std::uint64_t>(total, omp_get_max_threads());
#else
    (void)exec;
#endif
    std::vector<std::uint64_t> edge(chunks + 1);
    for (int c = 0; c <= chunks; ++c) edge[c] = total * c / chunks;

    // Pass 1: global energy minimum for a stable exponential shift.
    std::vector<double> local_min(chunks);
#ifdef SPINDIFF_HAVE_OPENMP
#pragma omp parallel for schedule(static, 1) if (chunks > 1)
#endif
    for (int c = 0; c < chunks; ++c) {
        double mn = std::numeric_limits<double>::infinity();
        gray_walk(J, g, edge[c], edge[c + 1],
                  [&](std::uint64_t, double h, const Vec&) { mn = std::min(mn, h); });
        local_min[c] = mn;
    }
    double h0 = local_min[0];
    for (int c = 1; c < chunks; ++c) h0 = std::min(h0, local_min[c]);

    // Pass 2: weights relative to the minimum.
    StateSum out;
    if (keep_probs) out.probs.assign(total, 0.0);
    std::vector<Partial> part(chunks);
#ifdef SPINDIFF_HAVE_OPENMP
#pragma omp parallel for schedule(static, 1) if (chunks > 1)
#endif
    for (int c = 0; c < chunks; ++c) {
        Partial p;
        p.m = Vec::Zero(n);
        gray_walk(J, g, edge[c], edge[c + 1],
                  [&](std::uint64_t mask, double h, const Vec& tau) {
                      double w = std::exp(-(h - h0));
                      p.z += w;
                      p.m += w * tau;
                      if (projector) {
                          double v = projector->dot(tau);
                          p.p1 += w * v;
                          p.p2 += w * v * v;
                      }
                      if (keep_probs) out.probs[mask] = w;
                  });
        part[c] = std::move(p);
    }

    double z = 0.0;
    Vec m = Vec::Zero(n);
    double p1 = 0.0, p2 = 0.0;
    for (int c = 0; c < chunks; ++c) {
        z += part[c].z;
        m += part[c].m;
        p1 += part[c].p1;
        p2 += part[c].p2;
    }
    out.log_z = std::log(z) - h0;
    out.magnetization = m / z;
    out.proj_mean = p1 / z;
    out.proj_second = p2 / z;
    if (keep_probs)
        for (auto& w : out.probs) w /= z;
    return out;
}

void batch_affine(const Mat& L, const Vec& mean, const Mat& z, Mat& x,
                  Exec exec) {
    const int n = static_cast<int>(L.rows());
    const int m = static_cast<int>(z.cols());
    if (z.rows() != n || mean.size() != n)
        throw std::invalid_argument("batch_affine shape mismatch");
    x.resize(n, m);

    auto column = [&](int j) {
        for (int i = 0; i < n; ++i) {
            double acc = mean(i);
            for (int l = 0; l <= i; ++l) acc += L(i, l) * z(l, j);
            x(i, j) = acc;
        }
    };

    if (exec == Exec::Parallel) {
#ifdef SPINDIFF_HAVE_OPENMP
#pragma omp parallel for schedule(static)
        for (int j = 0; j < m; ++j) column(j);
        return;
#endif
    }
    for (int j = 0; j < m; ++j) column(j);
}

int cg_solve(const Mat& a, const Mat& b, Mat& x, double tol, int max_iter,
             Exec exec) {
    const int n = static_cast<int>(a.rows());
    const int m = static_cast<int>(b.cols());
    x.resize(n, m);
    std::vector<int> iters(m, 0);
    std::vector<char> failed(m, 0);

    auto solve_column = [&](int j) {
        Vec xc = Vec::Zero(n);
        Vec r = b.col(j);
        Vec p = r;
        double rr = r.squaredNorm();
        const double stop = tol * tol * b.col(j).squaredNorm();
        int it = 0;
        while (rr > stop && it < max_iter) {
            Vec ap = a * p;
            double alpha = rr / p.dot(ap);
            xc += alpha * p;
            r -= alpha * ap;
            double rr_new = r.squaredNorm();
            p = r + (rr_new / rr) * p;
            rr = rr_new;
            ++it;
        }
        if (rr > stop) failed[j] = 1;
        x.col(j) = xc;
        iters[j] = it;
    };

    if (exec == Exec::Parallel) {
#ifdef SPINDIFF_HAVE_OPENMP
#pragma omp parallel for schedule(dynamic)
        for (int j = 0; j < m; ++j) solve_column(j);
#else
        for (int j = 0; j < m; ++j) solve_column(j);
#endif
    } else {
        for (int j = 0; j < m; ++j) solve_column(j);
    }
    for (int j = 0; j < m; ++j)
        if (failed[j]) throw std::runtime_error("cg_solve did not converge");
    int mx = 0;
    for (int v : iters) mx = std::max(mx, v);
    return mx;
}

} // namespace spindiff::kernels
