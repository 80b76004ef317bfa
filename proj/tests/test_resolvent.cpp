#include <doctest.h>

#include <cmath>

#include "spindiff/resolvent.hpp"
#include "spindiff/rng.hpp"

using namespace spindiff;
using namespace spindiff::resolvent;
using lattice::Box;

TEST_SUITE_BEGIN("resolvent");

TEST_CASE("natural parameters by hand: d=2, q=1, rho2=0.5") {
    NaturalParams np = natural_params({1.0, 0.5, 0.0}, 2);
    CHECK(np.a0 == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
    CHECK(np.lambda == doctest::Approx(1.0 / 6.0).epsilon(1e-15));
    CHECK(np.lambda < 1.0 / 4.0);
}

TEST_CASE("natural parameters, s limits") {
    const ModelParams p{1.0, 0.5, 0.0};
    NaturalParams np = natural_params(p, 2);
    NaturalParams np_big = natural_params(p, 2, 1e12);
    CHECK(std::abs(np_big.a0 - np.a0) < 1e-9);
    CHECK(std::abs(np_big.lambda - np.lambda) < 1e-9);
    // s -> 0: a0(s) ~ s / rho^4 and lambda(s) -> 0
    const double s = 1e-8;
    NaturalParams np_small = natural_params(p, 2, s);
    CHECK(np_small.a0 / s == doctest::Approx(1.0 / (p.rho2 * p.rho2)).epsilon(1e-6));
    CHECK(np_small.lambda < 1e-7);
    CHECK(np_small.lambda <= np.lambda);
}

TEST_CASE("decoupled sites q=0") {
    Box box = Box::cube(2, 3);
    ModelParams p{0.0, 0.5, 0.0};
    Mat r = resolvent_direct(box, p, MassProfile::plain(p, box.size())).R;
    CHECK((r - 0.5 * Mat::Identity(9, 9)).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("single site scalar inverse") {
    Box box = Box::cube(2, 1);
    ModelParams p{1.0, 1.0, 0.0};
    Mat r = resolvent_direct(box, p, MassProfile::plain(p, 1)).R;
    // rho^{-2} + 2dq = 1 + 4
    CHECK(r(0, 0) == doctest::Approx(0.2).epsilon(1e-14));
}

TEST_CASE("series equals direct solve") {
    Box box = Box::cube(2, 5);
    for (auto [q, rho2] : {std::pair{0.5, 0.5}, std::pair{1.0, 0.25}}) {
        ModelParams p{q, rho2, 0.0};
        Mat direct = resolvent_direct(box, p, MassProfile::plain(p, box.size())).R;
        ResolventMatrix series = resolvent_series(box, p, 1e-12);
        CHECK(series.series_terms > 0);
        CHECK((direct - series.R).cwiseAbs().maxCoeff() < 1e-10);
    }
}

TEST_CASE("series zeroth term only when q=0") {
    Box box = Box::cube(2, 3);
    ModelParams p{0.0, 0.7, 0.0};
    ResolventMatrix series = resolvent_series(box, p, 1e-12);
    CHECK(series.series_terms == 0);
    CHECK((series.R - 0.7 * Mat::Identity(9, 9)).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("entrywise monotonicity") {
    Box box = Box::cube(2, 5);
    ModelParams lo{0.3, 0.4, 0.0};
    ModelParams hi_r{0.3, 0.8, 0.0};
    Mat r_lo = resolvent_direct(box, lo, MassProfile::plain(lo, 25)).R;
    Mat r_r = resolvent_direct(box, hi_r, MassProfile::plain(hi_r, 25)).R;
    // larger rho2 is a smaller diagonal mass: every entry grows
    CHECK(((r_r - r_lo).minCoeff()) > -1e-14);
    CHECK(r_lo.minCoeff() > 0.0);  // strict positivity, connected and q > 0

    // in q the series coefficients rho^2 lambda^n / ... grow only while
    // q < 1/(2d rho2); there the off-diagonal entries are ordered (the
    // diagonal shrinks with q, so full entrywise ordering cannot hold)
    ModelParams q1{0.1, 0.4, 0.0};
    ModelParams q2{0.3, 0.4, 0.0};
    Mat r_q1 = resolvent_direct(box, q1, MassProfile::plain(q1, 25)).R;
    Mat r_q2 = resolvent_direct(box, q2, MassProfile::plain(q2, 25)).R;
    Mat gap = r_q2 - r_q1;
    gap.diagonal().setZero();
    CHECK(gap.minCoeff() > -1e-14);
}

TEST_CASE("added mass dominates entrywise") {
    Box box = Box::cube(2, 5);
    ModelParams p{0.8, 0.5, 0.0};
    Rng rng(3);
    std::vector<int> w;
    for (int i = 0; i < box.size(); ++i)
        if (rng.uniform() < 0.4) w.push_back(i);
    MassProfile mw = MassProfile::with_sites(p, box.size(), w, 1.0 / 0.7);
    Mat r_w = resolvent_direct(box, p, mw).R;
    Mat r0 = resolvent_direct(box, p, MassProfile::plain(p, box.size())).R;
    CHECK((r0 - r_w).minCoeff() > -1e-14);
}

TEST_CASE("resolvent difference identity") {
    Box box = Box::cube(2, 5);
    ModelParams p{0.8, 0.5, 0.0};

    SUBCASE("empty W gives zero") {
        Mat diff = resolvent_difference(box, p, MassProfile::plain(p, 25));
        CHECK(diff.cwiseAbs().maxCoeff() < 1e-14);
    }
    SUBCASE("identity equals direct subtraction") {
        MassProfile mw =
            MassProfile::with_sites(p, 25, {0, 3, 12, 17}, 1.0 / 0.5);
        Mat diff = resolvent_difference(box, p, mw);
        Mat direct = resolvent_direct(box, p, mw).R -
                     resolvent_direct(box, p, MassProfile::plain(p, 25)).R;
        CHECK((diff - direct).cwiseAbs().maxCoeff() < 1e-10);
    }
    SUBCASE("large s vanishes like C/s") {
        const double s = 1e12;
        MassProfile mw = MassProfile::with_sites(p, 25, {12}, 1.0 / s);
        Mat diff = resolvent_difference(box, p, mw);
        CHECK(diff.cwiseAbs().maxCoeff() < 1.0 / s);
    }
    SUBCASE("decay away from a single-site W") {
        Box big = Box::cube(2, 9);
        const int c = big.center_index();
        MassProfile mw = MassProfile::with_sites(p, big.size(), {c}, 2.0);
        Mat diff = resolvent_difference(big, p, mw);
        // log-linear fit of |diff(c, y)| against the distance from W
        double sx = 0, sy = 0, sxx = 0, sxy = 0, n = 0;
        for (int y = 0; y < big.size(); ++y) {
            if (y == c) continue;
            const double dist = lattice::l1_distance(big, c, y);
            const double v = std::log(std::abs(diff(c, y)));
            sx += dist;
            sy += v;
            sxx += dist * dist;
            sxy += dist * v;
            n += 1;
        }
        const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
        CHECK(slope < -0.1);
    }
}

TEST_CASE("decay fit") {
    SUBCASE("q=0 has nothing to fit") {
        Box box = Box::cube(2, 11);
        ModelParams p{0.0, 0.5, 0.0};
        Mat r = resolvent_direct(box, p, MassProfile::plain(p, box.size())).R;
        CHECK_THROWS_WITH_AS(decay_fit(r, box),
                             doctest::Contains("no off-diagonal mass"),
                             std::runtime_error);
    }
    SUBCASE("clean exponential decay at q=0.5") {
        Box box = Box::cube(2, 11);
        ModelParams p{0.5, 0.5, 0.0};
        Mat r = resolvent_direct(box, p, MassProfile::plain(p, box.size())).R;
        DecayFit fit = decay_fit(r, box);
        CHECK(fit.rate < 0.0);
        CHECK(fit.r2 > 0.95);
    }
    SUBCASE("smaller q decays faster") {
        Box box = Box::cube(2, 11);
        ModelParams pa{0.5, 0.5, 0.0};
        ModelParams pb{0.25, 0.5, 0.0};
        Mat ra = resolvent_direct(box, pa, MassProfile::plain(pa, box.size())).R;
        Mat rb = resolvent_direct(box, pb, MassProfile::plain(pb, box.size())).R;
        CHECK(std::abs(decay_fit(rb, box).rate) >
              std::abs(decay_fit(ra, box).rate));
    }
}

TEST_CASE("contraction window of the natural parameters") {
    // lambda (1 + a0) 2d < 1 iff a0 < 1/(2d lambda) - 1
    for (auto [q, rho2] : {std::pair{0.1, 0.5}, std::pair{1.0, 0.5},
                           std::pair{0.05, 0.9}, std::pair{2.0, 0.2}}) {
        NaturalParams np = natural_params({q, rho2, 0.0}, 2);
        const bool lhs = np.lambda * (1.0 + np.a0) * 4.0 < 1.0;
        const bool rhs = np.a0 < 1.0 / (4.0 * np.lambda) - 1.0;
        CHECK(lhs == rhs);
    }
}

TEST_CASE("input validation") {
    CHECK_THROWS(natural_params({-1.0, 0.5, 0.0}, 2));
    CHECK_THROWS(natural_params({1.0, 0.0, 0.0}, 2));
    CHECK_THROWS(natural_params({1.0, 0.5, 0.0}, 2, -1.0));
    Box box = Box::cube(2, 3);
    ModelParams p{1.0, 0.5, 0.0};
    CHECK_THROWS(resolvent_series(box, p, 0.0));
}

TEST_SUITE_END();
