// Serial-versus-parallel timings for the hot kernels, with agreement
// checks against the serial reference.

#include <chrono>
#include <cstdio>
#include <functional>

#include "spindiff/gaussian.hpp"
#include "spindiff/ising.hpp"
#include "spindiff/kernels.hpp"
#include "spindiff/lattice.hpp"
#include "spindiff/resolvent.hpp"
#include "spindiff/rng.hpp"

using namespace spindiff;

namespace {

double seconds(const std::function<void()>& fn) {
    const auto t0 = std::chrono::steady_clock::now();
    fn();
    const auto t1 = std::chrono::steady_clock::now();
    return std::chrono::duration<double>(t1 - t0).count();
}

void report(const char* name, double serial, double parallel, double max_diff) {
    std::printf("%-28s serial %8.3fs   parallel %8.3fs   speedup %5.2fx   max|diff| %.2e\n",
                name, serial, parallel, serial / parallel, max_diff);
}

} // namespace

int main() {
    std::printf("threads available: %d (parallel kernels %s)\n\n",
                kernels::max_threads(),
                kernels::parallel_available() ? "on" : "off: serial fallback");

    {
        const int n = 700;
        Rng rng(1);
        Mat a(n, n), b(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                a(i, j) = rng.gaussian();
                b(i, j) = rng.gaussian();
            }
        Mat c_serial, c_par;
        const double ts = seconds([&] { kernels::matmul(a, b, c_serial, Exec::Serial); });
        const double tp = seconds([&] { kernels::matmul(a, b, c_par, Exec::Parallel); });
        report("dense matmul 700x700", ts, tp,
               (c_serial - c_par).cwiseAbs().maxCoeff());
    }

    {
        lattice::Box box = lattice::Box::cube(2, 5);
        box.extents[0] = 4;  // 20 spins
        resolvent::ModelParams p{0.8, 0.5, 0.1};
        ising::ResolventIsing model = ising::build_resolvent_ising(box, p);
        kernels::StateSum sum_serial, sum_par;
        const double ts = seconds([&] {
            sum_serial = kernels::state_sum(model.inst.J, model.inst.g,
                                            nullptr, false, Exec::Serial);
        });
        const double tp = seconds([&] {
            sum_par = kernels::state_sum(model.inst.J, model.inst.g, nullptr,
                                         false, Exec::Parallel);
        });
        report("exact state sum 2^20", ts, tp,
               (sum_serial.magnetization - sum_par.magnetization)
                   .cwiseAbs()
                   .maxCoeff());
    }

    {
        lattice::Box box = lattice::Box::cube(2, 11);
        resolvent::ModelParams p{0.8, 0.5, 0.0};
        ising::ResolventIsing model =
            ising::build_resolvent_ising(box, p, std::nullopt,
                                         ising::Boundary::Plus);
        ising::GibbsEstimate serial, par;
        const double ts = seconds([&] {
            serial = ising::heatbath_mc(model.inst, 4000, 500, 7, 8,
                                        Exec::Serial);
        });
        const double tp = seconds([&] {
            par = ising::heatbath_mc(model.inst, 4000, 500, 7, 8,
                                     Exec::Parallel);
        });
        report("heat-bath, 8 chains 11x11", ts, tp,
               (serial.magnetization - par.magnetization)
                   .cwiseAbs()
                   .maxCoeff());
    }

    {
        lattice::Box box = lattice::Box::cube(2, 15);
        resolvent::ModelParams p{0.8, 0.5, 0.0};
        Mat r = resolvent::resolvent_direct(
                    box, p, resolvent::MassProfile::plain(p, box.size()))
                    .R;
        gaussian::GaussianField field{Vec::Zero(box.size()), r};
        Mat a, b;
        const double ts =
            seconds([&] { a = gaussian::sample_field(field, 3, 20000, Exec::Serial); });
        const double tp =
            seconds([&] { b = gaussian::sample_field(field, 3, 20000, Exec::Parallel); });
        report("gaussian field, 2e4 draws", ts, tp,
               (a - b).cwiseAbs().maxCoeff());
    }

    {
        lattice::Box box = lattice::Box::cube(2, 13);
        resolvent::ModelParams p{0.8, 0.5, 0.0};
        Mat a = resolvent::precision_matrix(
            box, p, resolvent::MassProfile::plain(p, box.size()));
        Mat rhs = Mat::Identity(box.size(), box.size());
        Mat x_serial, x_par;
        const double ts = seconds([&] {
            kernels::cg_solve(a, rhs, x_serial, 1e-12, 2000, Exec::Serial);
        });
        const double tp = seconds([&] {
            kernels::cg_solve(a, rhs, x_par, 1e-12, 2000, Exec::Parallel);
        });
        report("cg inverse 169 columns", ts, tp,
               (x_serial - x_par).cwiseAbs().maxCoeff());
    }

    return 0;
}
