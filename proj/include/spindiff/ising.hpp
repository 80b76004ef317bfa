#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "spindiff/lattice.hpp"
#include "spindiff/linalg.hpp"
#include "spindiff/resolvent.hpp"

namespace spindiff::ising {

using resolvent::ModelParams;

/// +-1 spins over a lattice box.
using SpinConfig = std::vector<std::int8_t>;

enum class Boundary { Free, Plus, Minus };

/// Conditioned sites W with their observed values eta and the diffusion
/// time s; enters the model as an extra mass 1/s and field source eta/s.
struct QuenchedFieldSpec {
    std::vector<int> sites;
    Vec eta;
    double s = 1.0;
};

/// Discrete-spin model H(tau) = -1/2 tau'J tau - g'tau with ferromagnetic
/// couplings. Boundary spins, when any, are already folded into g.
struct IsingInstance {
    lattice::Box volume;
    Mat J;
    Vec g;
    Boundary boundary = Boundary::Free;

    void validate() const;
};

/// An instance together with the ambient-box resolvent it was built from,
/// kept around for the continuous-layer reconstructions.
struct ResolventIsing {
    IsingInstance inst;
    lattice::Box ambient;
    std::vector<int> embed;  // volume index -> ambient index
    Mat R;                   // ambient resolvent
    Vec mu_sources;          // sigma-equation sources (q h + eta/s terms)
    double exterior_spin = 0.0;
};

/// Resolvent-interaction Ising instance on `volume`: couplings
/// rho^{-4} R(x,y), fields rho^{-2} sum_y R(x,y) (q h + 1_W eta_y / s).
/// Plus/minus boundaries use a resolvent on a box enlarged by `margin`
/// (negative = automatic) and fold the exterior spins into g.
ResolventIsing build_resolvent_ising(
    const lattice::Box& volume, const ModelParams& params,
    const std::optional<QuenchedFieldSpec>& quench = std::nullopt,
    Boundary boundary = Boundary::Free, int margin = -1,
    Exec exec = Exec::Parallel);

/// Annulus-field instance on `volume`: couplings from the mass profile
/// 1/s on V minus the origin, field sources sign*K on V1\V0 and -q h
/// outside V1 (inside V0 none). sign
/// is +1 or -1 and selects which of the two bounded perturbations acts.
ResolventIsing build_annulus_ising(
    const lattice::Box& volume, const ModelParams& params, double s,
    const lattice::Box& v0, const lattice::Box& v1,
    const std::optional<std::vector<int>>& v_sites, double k_field, int sign,
    Boundary boundary = Boundary::Free, int margin = -1,
    Exec exec = Exec::Parallel);

double energy(const IsingInstance& inst, const SpinConfig& tau);

/// P(tau_x = +1 | rest) = 1 / (1 + exp(-2 (sum_y J_xy tau_y + g_x))).
double conditional_prob_plus(const IsingInstance& inst, int x,
                             const SpinConfig& tau);

struct GibbsEstimate {
    Vec magnetization;
    Vec std_error;
    std::string method;  // "exact" | "mc"
    long sweeps = 0;
    long burn_in = 0;
    std::uint64_t seed = 0;
    int chains = 0;
};

/// Default cap on exhaustive enumeration (2^20 states).
inline constexpr int kEnumerationCap = 20;

struct ExactGibbs {
    GibbsEstimate est;
    double log_z = 0.0;
    std::vector<double> probs;  // per spin bitmask, only when requested
};

ExactGibbs exact_gibbs(const IsingInstance& inst, bool keep_distribution = false,
                       int cap = kEnumerationCap, Exec exec = Exec::Parallel);

/// Heat-bath chains with deterministic per-chain streams; `sweeps` is the
/// total count of which the first `burn_in` are discarded. Errors are
/// batch-means standard errors pooled over chains.
GibbsEstimate heatbath_mc(const IsingInstance& inst, long sweeps, long burn_in,
                          std::uint64_t seed, int chains = 2,
                          Exec exec = Exec::Parallel);

/// Heat-bath estimate of a linear observable w'tau with batch-means error
/// and sample variance; used for resolvent-weighted spin projections.
struct ProjectedEstimate {
    double mean = 0.0;
    double std_error = 0.0;
    double variance = 0.0;
    long sweeps = 0;
    int chains = 0;
};

ProjectedEstimate heatbath_projected(const IsingInstance& inst,
                                     const Vec& weights, long sweeps,
                                     long burn_in, std::uint64_t seed,
                                     int chains = 2, Exec exec = Exec::Parallel);

/// One shared-uniform heat-bath trajectory per instance. Instances must be
/// ordered dominating-first (equal J, nonincreasing g, nonincreasing
/// boundary), which the monotone update turns into a pointwise ordering of
/// the trajectories; violations of that ordering are counted per adjacent
/// pair and must come out zero.
struct CoupledResult {
    std::vector<GibbsEstimate> est;
    std::vector<long> violations;      // adjacent pairs, ordered as given
    std::vector<Vec> diff_mean;        // sitewise m_i - m_{i+1}
    std::vector<Vec> diff_se;
    std::vector<double> proj_diff_mean;  // w'(tau_i - tau_{i+1}), if w given
    std::vector<double> proj_diff_se;
};

CoupledResult coupled_heatbath(const std::vector<const IsingInstance*>& chain,
                               long sweeps, long burn_in, std::uint64_t seed,
                               const Vec* projector = nullptr);

/// Two-instance convenience wrapper, hi dominating lo.
CoupledResult monotone_coupled_mc(const IsingInstance& hi,
                                  const IsingInstance& lo, long sweeps,
                                  long burn_in, std::uint64_t seed);

/// H_quenched(tau) - H_plain(tau); bounded in tau, and reweighting the
/// plain Gibbs weights by exp(-difference) reproduces the quenched ones.
double difference_hamiltonian(const IsingInstance& quenched,
                              const IsingInstance& plain,
                              const SpinConfig& tau);

SpinConfig constant_config(int n, int value);

} // namespace spindiff::ising
