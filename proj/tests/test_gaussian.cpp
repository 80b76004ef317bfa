#include <doctest.h>

#include <cmath>

#include "spindiff/gaussian.hpp"
#include "spindiff/potential.hpp"
#include "spindiff/rng.hpp"

using namespace spindiff;
using namespace spindiff::gaussian;
using ising::Boundary;
using ising::SpinConfig;
using lattice::Box;
using resolvent::MassProfile;

TEST_SUITE_BEGIN("gaussian");

TEST_CASE("product field moments") {
    const int n = 9;
    GaussianField field{Vec::Zero(n), 0.5 * Mat::Identity(n, n)};
    Mat draws = sample_field(field, 21, 10000);
    for (int x = 0; x < n; ++x) {
        const double mean = draws.col(x).mean();
        const double var =
            (draws.col(x).array() - mean).square().sum() / (draws.rows() - 1);
        CHECK(std::abs(mean) < 0.03);
        CHECK(std::abs(var - 0.5) < 0.025);  // 5%
    }
}

TEST_CASE("field covariance matches the resolvent") {
    Box box = Box::cube(2, 3);
    resolvent::ModelParams p{0.5, 0.5, 0.0};
    Mat r = resolvent_direct(box, p, MassProfile::plain(p, 9)).R;
    GaussianField field{Vec::Zero(9), r};
    const int n = 10000;
    Mat draws = sample_field(field, 4, n);
    const int c = box.center_index();
    const int nb = box.index({0, 1});
    double cov = 0.0;
    for (int k = 0; k < n; ++k) cov += draws(k, c) * draws(k, nb);
    cov /= n;
    const double se =
        std::sqrt((r(c, c) * r(nb, nb) + r(c, nb) * r(c, nb)) / n);
    CHECK(std::abs(cov - r(c, nb)) < 4.0 * se);
}

TEST_CASE("fixed seed reproducibility") {
    GaussianField field{Vec::Zero(4), Mat::Identity(4, 4)};
    Mat a = sample_field(field, 7, 32, Exec::Parallel);
    Mat b = sample_field(field, 7, 32, Exec::Serial);
    CHECK((a - b).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("empirical covariance tightens with n") {
    Box box = Box::cube(2, 3);
    resolvent::ModelParams p{0.5, 0.5, 0.0};
    Mat r = resolvent_direct(box, p, MassProfile::plain(p, 9)).R;
    GaussianField field{Vec::Zero(9), r};
    auto frob_err = [&](int n) {
        Mat draws = sample_field(field, 11, n);
        Mat emp = draws.transpose() * draws / double(n);
        return (emp - r).norm();
    };
    CHECK(frob_err(10000) < frob_err(400));
}

TEST_CASE("interpolating configuration") {
    Box box = Box::cube(2, 3);

    SUBCASE("q=0 is the identity embedding") {
        resolvent::ModelParams p{0.0, 0.7, 0.0};
        SpinConfig tau{1, -1, 1, -1, 1, -1, 1, -1, 1};
        Vec sigma = interpolating_sigma(box, p, tau);
        for (int i = 0; i < 9; ++i)
            CHECK(sigma(i) == doctest::Approx(double(tau[i])).epsilon(1e-14));
    }
    SUBCASE("all-plus spins give the mass-weighted row sums") {
        resolvent::ModelParams p{1.0, 0.5, 0.0};
        Vec sigma = interpolating_sigma(box, p, ising::constant_config(9, 1));
        Mat r = resolvent_direct(box, p, MassProfile::plain(p, 9)).R;
        for (int i = 0; i < 9; ++i) {
            CHECK(sigma(i) ==
                  doctest::Approx(r.row(i).sum() / p.rho2).epsilon(1e-10));
            CHECK(sigma(i) > 0.0);
            CHECK(sigma(i) < 1.0);  // Dirichlet leakage keeps it below one
        }
    }
    SUBCASE("quench with huge s matches the plain map") {
        resolvent::ModelParams p{1.0, 0.5, 0.2};
        SpinConfig tau{1, 1, -1, 1, -1, -1, 1, 1, -1};
        QuenchedFieldSpec quench{{0, 4}, Vec::Constant(2, 3.0), 1e12};
        Vec a = interpolating_sigma(box, p, tau, quench);
        Vec b = interpolating_sigma(box, p, tau);
        CHECK((a - b).cwiseAbs().maxCoeff() < 1e-8);
    }
    SUBCASE("monotone in the hidden spins") {
        resolvent::ModelParams p{1.0, 0.5, 0.0};
        SpinConfig tau = ising::constant_config(9, -1);
        Vec before = interpolating_sigma(box, p, tau);
        tau[3] = 1;
        Vec after = interpolating_sigma(box, p, tau);
        CHECK((after - before).minCoeff() > 0.0);
    }
}

TEST_CASE("two-stage plus-state sampler") {
    Box box = Box::cube(2, 3);
    McOptions opts;
    opts.burn_in = 1000;
    opts.thin = 5;

    SUBCASE("high temperature stays near zero") {
        resolvent::ModelParams p{0.2, 0.5, 0.0};
        MuPlusSamples draws = sample_mu_plus(p, box, 4000, 3, opts);
        CHECK(std::abs(draws.sigma.col(box.center_index()).mean()) < 0.05);
    }
    SUBCASE("low temperature plus state is positive") {
        resolvent::ModelParams p{1.0, 0.1, 0.0};
        MuPlusSamples draws = sample_mu_plus(p, box, 2000, 3, opts);
        CHECK(draws.sigma.col(box.center_index()).mean() > 0.3);
        double m = 0.0;
        for (const auto& tau : draws.tau) m += tau[box.center_index()];
        CHECK(m / draws.tau.size() > 0.8);
    }
    SUBCASE("smeared sign of the continuous layer recovers the spins") {
        // exact reference: window of one site, enumerable 3x3 spin box
        resolvent::ModelParams p{0.8, 0.5, 0.1};
        Box window = Box::cube(2, 1);
        McOptions small = opts;
        small.margin = 1;
        const int n = 20000;
        MuPlusSamples draws = sample_mu_plus(p, window, n, 9, small);
        ising::ResolventIsing model = ising::build_resolvent_ising(
            draws.spin_box, p, std::nullopt, Boundary::Plus, 1);
        const int c = draws.spin_box.center_index();
        const double m_exact = ising::exact_gibbs(model.inst).est.magnetization(c);
        double t_mean = 0.0;
        for (int k = 0; k < n; ++k)
            t_mean += std::tanh(draws.sigma(k, 0) / p.rho2);
        t_mean /= n;
        CHECK(std::abs(t_mean - m_exact) < 0.02);
    }
    SUBCASE("hidden spins are conditionally the smeared sign of sigma") {
        // within one joint draw, E[tanh(sigma_x / rho2)] = E[tau_x]
        resolvent::ModelParams p{0.8, 0.5, 0.1};
        const int n = 20000;
        MuPlusSamples draws = sample_mu_plus(p, box, n, 9, opts);
        for (int x : {box.center_index(), 0}) {
            double t_mean = 0.0, m_mean = 0.0;
            for (int k = 0; k < n; ++k) {
                t_mean += std::tanh(draws.sigma(k, x) / p.rho2);
                m_mean += draws.tau[k][x];
            }
            CHECK(std::abs((t_mean - m_mean) / n) < 0.03);
        }
    }
}

TEST_CASE("centering identity") {
    Rng rng(5);
    auto random_points = [&](int nv, int count) {
        std::vector<std::pair<SpinConfig, Vec>> pts;
        for (int k = 0; k < count; ++k) {
            SpinConfig tau(nv);
            Vec sigma(nv);
            for (int i = 0; i < nv; ++i) {
                tau[i] = rng.uniform() < 0.5 ? 1 : -1;
                sigma(i) = 3.0 * (rng.uniform() - 0.5);
            }
            pts.emplace_back(tau, sigma);
        }
        return pts;
    };

    SUBCASE("single site, sigma grid times both spins") {
        resolvent::ModelParams p{1.0, 0.5, 0.2};
        Box vol = Box::cube(2, 1);
        Box amb = Box::cube(2, 3);
        Vec boundary = Vec::Zero(9);
        Rng brng(8);
        for (int i = 0; i < 9; ++i) boundary(i) = brng.uniform() - 0.5;
        std::vector<std::pair<SpinConfig, Vec>> pts;
        for (double s : {-2.0, -0.5, 0.0, 1.0, 2.5})
            for (int t : {-1, 1})
                pts.emplace_back(SpinConfig{static_cast<std::int8_t>(t)},
                                 Vec::Constant(1, s));
        CHECK(centering_identity_spread(p, vol, amb, boundary, pts) < 1e-10);
    }
    SUBCASE("3x3 volume, random pairs") {
        resolvent::ModelParams p{0.7, 0.5, 0.1};
        Box vol = Box::cube(2, 3);
        Box amb = Box::cube(2, 7);
        Vec boundary(49);
        for (int i = 0; i < 49; ++i) boundary(i) = 2.0 * rng.uniform() - 1.0;
        CHECK(centering_identity_spread(p, vol, amb, boundary,
                                        random_points(9, 20)) < 1e-9);
    }
    SUBCASE("q=0 single-site mixture decomposition") {
        resolvent::ModelParams p{0.0, 0.5, 0.0};
        Box vol = Box::cube(2, 1);
        Box amb = Box::cube(2, 3);
        CHECK(centering_identity_spread(p, vol, amb, Vec::Zero(9),
                                        random_points(1, 10)) < 1e-12);
    }
}

TEST_CASE("rejects non positive definite covariance") {
    Mat bad = -Mat::Identity(3, 3);
    CHECK_THROWS(cholesky_factor(bad));
}

TEST_SUITE_END();
