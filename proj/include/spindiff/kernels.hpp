#pragma once

#include <cstdint>
#include <vector>

#include "spindiff/linalg.hpp"

namespace spindiff::kernels {

/// True when the build can actually run the Parallel policy.
bool parallel_available();
int max_threads();

/// C = A * B, plain dense product.
void matmul(const Mat& a, const Mat& b, Mat& c, Exec exec);

/// Exhaustive spin sum over all 2^n configurations of an Ising energy
/// H(tau) = -1/2 tau'J tau - g'tau, accumulated in Gray-code order with
/// O(n) incremental energy updates. Stable via max-weight shift.
struct StateSum {
    double log_z = 0.0;
    Vec magnetization;           // <tau_x>
    double proj_mean = 0.0;      // <w'tau>  (zero when no projector given)
    double proj_second = 0.0;    // <(w'tau)^2>
    std::vector<double> probs;   // per bitmask, only if keep_probs
};
StateSum state_sum(const Mat& J, const Vec& g, const Vec* projector,
                   bool keep_probs, Exec exec);

/// X.col(j) = mean + L * Z.col(j) for a lower-triangular factor L;
/// columns are independent draws.
void batch_affine(const Mat& L, const Vec& mean, const Mat& z, Mat& x,
                  Exec exec);

/// Conjugate gradient solve A X = B for SPD A, column by column.
/// Returns the largest iteration count used; throws on non-convergence.
int cg_solve(const Mat& a, const Mat& b, Mat& x, double tol, int max_iter,
             Exec exec);

} // namespace spindiff::kernels
