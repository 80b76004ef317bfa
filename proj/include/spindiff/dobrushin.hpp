#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "spindiff/ising.hpp"
#include "spindiff/lattice.hpp"
#include "spindiff/linalg.hpp"
#include "spindiff/resolvent.hpp"

namespace spindiff::dobrushin {

using resolvent::ModelParams;
using resolvent::NaturalParams;

/// Exact inverse critical temperature of the nearest-neighbor Ising model
/// in d = 2; higher dimensions need a user-supplied value.
double beta_critical(int d, std::optional<double> user_beta = std::nullopt);

enum class Regime { HighTempUnique, LowTempOrdered, Indeterminate };

struct RegimeReport {
    Regime regime = Regime::Indeterminate;
    double low_lhs = 0.0, low_rhs = 0.0;    // 1/q  vs  1/beta_d - 2 d rho2
    double high_lhs = 0.0, high_rhs = 0.0;  // 1/q  vs  2 d (1 - rho2)
    double beta_d = 0.0;
    bool conditions_exclusive = true;
};

/// Phase classification of the time-zero model; independent of h. q = 0 is
/// reported as HighTempUnique (decoupled sites).
RegimeReport classify_regime(const ModelParams& params, int d,
                             std::optional<double> user_beta = std::nullopt);

/// Upper bound a0 * 2d lambda / (1 - 2d lambda) on the Dobrushin constant;
/// uniqueness is certified when it is below one.
double dobrushin_constant_bound(const NaturalParams& np, int d);

/// True when 2d lambda (1 + a0) < 1, the contraction behind the influence
/// bounds; uniform in the conditioned set and in the time.
bool influence_contraction_holds(const NaturalParams& np, int d);

/// Certified upper bound on |nu[eta](tau_x=+) - nu[eta'](tau_x=+)|:
/// rho2 a0 / (2s) * sum_z (I - lambda (1+a0) adj)^{-1}_{x,z} |eta-eta'|_z.
double eta_influence_bound(const ModelParams& params, double s,
                           const lattice::Box& box, int x,
                           const Vec& delta_eta);

/// Small-time certificate built on the auxiliary uniformly-massive model:
/// coupling discrepancy tail over the complement of W plus the eta term
/// with the s-dependent natural parameters (unit eta difference on W).
struct SmallSBounds {
    bool certified = false;
    double contraction = 0.0;            // 2d lambda_s (1 + a0_s)
    double coupling_discrepancy = 0.0;   // bar b_x(W)
    double influence_unit = 0.0;         // eta term at |eta - eta'| = 1 on W
    double total = 0.0;                  // influence_unit + 2 * tail term
    NaturalParams np_s;
};

SmallSBounds small_s_bounds(const ModelParams& params, double s,
                            const lattice::Box& box,
                            const std::vector<int>& w_sites, int x,
                            int margin = -1);

/// Empirical Dobrushin interaction matrix of an instance: worst variation
/// of the single-site conditional at x under a flip at y. Exhaustive for
/// small volumes, otherwise a sampled lower bound on the sup.
Mat empirical_dobrushin_matrix(const ising::IsingInstance& inst,
                               int sample_pairs = 0,
                               std::uint64_t seed = 1,
                               int exhaustive_limit = 10);

/// Theoretical bound a0 sum_{n>=1} lambda^n adj^n on the box.
Mat dobrushin_series_bound(const lattice::Box& box, const NaturalParams& np);

} // namespace spindiff::dobrushin
