#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "spindiff/io.hpp"

using namespace spindiff;

TEST_SUITE_BEGIN("io");

TEST_CASE("git-style blob hash") {
    // reference values from git hash-object
    CHECK(io::blob_sha1("hello") == "b6fc4c620b67d95f953a5c1c1230aaab5db5a1b0");
    CHECK(io::blob_sha1("") == "e69de29bb2d1d6434b8b29ae775ad8c2e48c5391");
}

TEST_CASE("config parsing") {
    io::Config cfg = io::Config::from_string(
        "# comment\n"
        "q = 0.5\n"
        "rho2=0.25   # trailing comment\n"
        "side = 9\n"
        "times = 0.1, 0.5, 2\n"
        "estimator = tau_marg\n");
    CHECK(cfg.number("q") == 0.5);
    CHECK(cfg.number("rho2") == 0.25);
    CHECK(cfg.integer("side") == 9);
    CHECK(cfg.text("estimator") == "tau_marg");
    CHECK(cfg.number_or("missing", 7.0) == 7.0);
    auto times = cfg.number_list("times");
    REQUIRE(times.size() == 3);
    CHECK(times[2] == 2.0);
    CHECK_THROWS(cfg.number("estimator"));
    CHECK_THROWS(cfg.text("nope"));
    CHECK_THROWS(io::Config::from_string("novalue\n"));
}

TEST_CASE("matrix csv round trip") {
    Mat m(2, 3);
    m << 1.5, -2.25, 3.0, 0.125, 1e-9, 7.0;
    const std::string path = "/tmp/spindiff_test_matrix.csv";
    io::write_matrix_csv(path, m);
    std::ifstream in(path);
    REQUIRE(in.good());
    Mat back(2, 3);
    std::string line;
    for (int i = 0; std::getline(in, line); ++i) {
        std::istringstream row(line);
        std::string cell;
        for (int j = 0; std::getline(row, cell, ','); ++j)
            back(i, j) = std::stod(cell);
    }
    CHECK((m - back).cwiseAbs().maxCoeff() == 0.0);
    std::remove(path.c_str());
}

TEST_CASE("estimate records") {
    ising::GibbsEstimate est;
    est.magnetization = Vec::Constant(2, 0.25);
    est.std_error = Vec::Constant(2, 0.01);
    est.method = "mc";
    est.seed = 42;
    const std::string path = "/tmp/spindiff_test_est.json";
    io::write_estimate_json(path, est);
    std::ifstream in(path);
    std::stringstream buf;
    buf << in.rdbuf();
    CHECK(buf.str().find("\"m\": 0.25") != std::string::npos);
    CHECK(buf.str().find("\"seed\": 42") != std::string::npos);
    std::remove(path.c_str());
}

TEST_SUITE_END();
