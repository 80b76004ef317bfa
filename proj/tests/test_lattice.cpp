#include <doctest.h>

#include <Eigen/Eigenvalues>

#include "spindiff/lattice.hpp"

using namespace spindiff;
using lattice::Box;

TEST_SUITE_BEGIN("lattice");

TEST_CASE("line graph d=1") {
    Box box = Box::cube(1, 3);
    CHECK(box.size() == 3);
    CHECK(box.neighbors(1).size() == 2);
    CHECK(box.neighbors(0).size() == 1);
}

TEST_CASE("3x3 grid adjacency") {
    Box box = Box::cube(2, 3);
    CHECK(box.size() == 9);
    CHECK(box.neighbors(box.center_index()).size() == 4);
    CHECK(box.neighbors(box.index({-1, -1})).size() == 2);
}

TEST_CASE("site indexing is a bijection") {
    Box box = Box::cube(3, 3);
    for (int i = 0; i < box.size(); ++i) CHECK(box.index(box.coord(i)) == i);
}

TEST_CASE("neighbor counts between d and 2d") {
    for (int d : {1, 2, 3}) {
        Box box = Box::cube(d, 3);
        for (int i = 0; i < box.size(); ++i) {
            const int k = static_cast<int>(box.neighbors(i).size());
            CHECK(k >= d);
            CHECK(k <= 2 * d);
        }
    }
}

TEST_CASE("8x8 laplacian structure") {
    Box box = Box::cube(2, 8, false);
    Mat lap = lattice::dirichlet_laplacian(box);
    Mat adj = lattice::adjacency(box);
    for (int i = 0; i < box.size(); ++i) {
        CHECK(lap(i, i) == -4.0);
        const double row = adj.row(i).sum();
        CHECK(row >= 2.0);
        CHECK(row <= 4.0);
    }
    CHECK((adj - adj.transpose()).cwiseAbs().maxCoeff() == 0.0);
    CHECK(adj.diagonal().cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("laplacian spectrum inside [0, 4d]") {
    Box box = Box::cube(2, 5);
    Eigen::SelfAdjointEigenSolver<Mat> es(-lattice::dirichlet_laplacian(box));
    CHECK(es.eigenvalues().minCoeff() >= -1e-12);
    CHECK(es.eigenvalues().maxCoeff() <= 4.0 * box.dim + 1e-12);
}

TEST_CASE("boundary operator") {
    Box ambient = Box::cube(2, 3);

    SUBCASE("single interior site") {
        Box site = Box::cube(2, 1);
        Mat b = lattice::boundary_operator(site, ambient);
        CHECK(b.sum() == 4.0);
    }
    SUBCASE("full box has no exterior bonds") {
        Mat b = lattice::boundary_operator(ambient, ambient);
        CHECK(b.cwiseAbs().maxCoeff() == 0.0);
    }
    SUBCASE("corner 2x2 block of 4x4, counted by hand") {
        Box big = Box::cube(2, 4, false);
        Box corner = Box::cube(2, 2, false);
        // bonds leaving the block: (0,1)-(0,2), (1,1)-(1,2), (1,0)-(2,0),
        // (1,1)-(2,1)  -> 4 entries
        Mat b = lattice::boundary_operator(corner, big);
        CHECK(b.sum() == 4.0);
    }
}

TEST_CASE("bond conservation: interior sub-box") {
    Box ambient = Box::cube(2, 7);
    Box sub = Box::cube(2, 3);
    Mat adj_sub = lattice::adjacency(sub);
    Mat b = lattice::boundary_operator(sub, ambient);
    for (int i = 0; i < sub.size(); ++i)
        CHECK(adj_sub.row(i).sum() + b.row(i).sum() == 2.0 * ambient.dim);
}

TEST_CASE("rejects bad construction") {
    CHECK_THROWS_WITH_AS(Box::cube(3, 400, false), doctest::Contains("too large"),
                         std::invalid_argument);
    CHECK_THROWS(Box::cube(2, 4, true));  // no center site
    CHECK_THROWS(Box::cube(0, 3));
    Box small = Box::cube(2, 3);
    Box big = Box::cube(2, 5);
    CHECK_THROWS(lattice::embed_indices(big, small));
}

TEST_SUITE_END();
