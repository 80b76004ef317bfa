#include "spindiff/ising.hpp"

#include <cmath>
#include <stdexcept>

#include "spindiff/kernels.hpp"
#include "spindiff/rng.hpp"

#ifdef SPINDIFF_HAVE_OPENMP
#include <omp.h>
#endif

namespace spindiff::ising {

using resolvent::MassProfile;

namespace {

lattice::Box expand(const lattice::Box& box, int margin) {
    lattice::Box out = box;
    for (int k = 0; k < box.dim; ++k) {
        out.extents[k] += 2 * margin;
        out.origin[k] -= margin;
    }
    return out;
}

double exterior_value(Boundary b) {
    switch (b) {
        case Boundary::Plus: return 1.0;
        case Boundary::Minus: return -1.0;
        default: return 0.0;
    }
}

void check_quench(const lattice::Box& volume, const QuenchedFieldSpec& q) {
    if (q.s <= 0.0) throw std::invalid_argument("quench time s must be > 0");
    if (static_cast<int>(q.sites.size()) != q.eta.size())
        throw std::invalid_argument("quench sites/eta size mismatch");
    for (int x : q.sites)
        if (x < 0 || x >= volume.size())
            throw std::out_of_range("quench site outside volume");
}

// Shared tail of the two builders: couplings, boundary fold-in, fields.
ResolventIsing assemble(const lattice::Box& volume, const ModelParams& params,
                        const lattice::Box& ambient, const Mat& r,
                        const Vec& g_sources, const Vec& mu_sources,
                        Boundary boundary) {
    const double rho2 = params.rho2;
    const double rho4_inv = 1.0 / (rho2 * rho2);
    const int n = volume.size();
    const int na = ambient.size();

    ResolventIsing out;
    out.ambient = ambient;
    out.embed = lattice::embed_indices(volume, ambient);
    out.R = r;
    out.mu_sources = mu_sources;
    out.exterior_spin = exterior_value(boundary);

    IsingInstance inst;
    inst.volume = volume;
    inst.boundary = boundary;
    inst.J = Mat::Zero(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (i != j) inst.J(i, j) = rho4_inv * r(out.embed[i], out.embed[j]);

    std::vector<bool> inside = lattice::membership_mask(volume, ambient);
    const Vec field = r * g_sources;
    inst.g = Vec::Zero(n);
    for (int i = 0; i < n; ++i) {
        inst.g(i) = field(out.embed[i]);
        if (out.exterior_spin != 0.0) {
            double fold = 0.0;
            for (int y = 0; y < na; ++y)
                if (!inside[y]) fold += r(out.embed[i], y);
            inst.g(i) += out.exterior_spin * rho4_inv * fold;
        }
    }
    inst.validate();
    out.inst = std::move(inst);
    return out;
}

} // namespace

void IsingInstance::validate() const {
    const int n = volume.size();
    if (J.rows() != n || J.cols() != n || g.size() != n)
        throw std::invalid_argument("instance shape mismatch");
    if ((J - J.transpose()).cwiseAbs().maxCoeff() > 1e-9)
        throw std::invalid_argument("couplings must be symmetric");
    if (J.diagonal().cwiseAbs().maxCoeff() > 0.0)
        throw std::invalid_argument("couplings must have zero diagonal");
    if (J.minCoeff() < -1e-12)
        throw std::invalid_argument("couplings must be nonnegative");
}

ResolventIsing build_resolvent_ising(const lattice::Box& volume,
                                     const ModelParams& params,
                                     const std::optional<QuenchedFieldSpec>& quench,
                                     Boundary boundary, int margin, Exec exec) {
    params.validate();
    if (quench) check_quench(volume, *quench);
    if (margin < 0) margin = resolvent::default_margin(params, volume.dim);
    const lattice::Box ambient =
        boundary == Boundary::Free ? volume : expand(volume, margin);
    const std::vector<int> emb = lattice::embed_indices(volume, ambient);
    const int na = ambient.size();

    MassProfile mass = MassProfile::plain(params, na);
    Vec mu_sources = Vec::Constant(na, params.q * params.h);
    if (quench) {
        const double s_inv = 1.0 / quench->s;
        for (size_t k = 0; k < quench->sites.size(); ++k) {
            const int y = emb[quench->sites[k]];
            mass.extra(y) += s_inv;
            mu_sources(y) += s_inv * quench->eta(static_cast<int>(k));
        }
    }
    const Mat r = resolvent_direct(ambient, params, mass, exec).R;
    const Vec g_sources = mu_sources / params.rho2;
    return assemble(volume, params, ambient, r, g_sources, mu_sources, boundary);
}

ResolventIsing build_annulus_ising(const lattice::Box& volume,
                                   const ModelParams& params, double s,
                                   const lattice::Box& v0,
                                   const lattice::Box& v1,
                                   const std::optional<std::vector<int>>& v_sites,
                                   double k_field, int sign, Boundary boundary,
                                   int margin, Exec exec) {
    params.validate();
    if (s <= 0.0) throw std::invalid_argument("time s must be > 0");
    if (sign != 1 && sign != -1) throw std::invalid_argument("sign must be +-1");
    // nesting checks; throw early with a clear message
    lattice::embed_indices(v0, v1);
    lattice::embed_indices(v1, volume);

    if (margin < 0) margin = resolvent::default_margin(params, volume.dim);
    const lattice::Box ambient =
        boundary == Boundary::Free ? volume : expand(volume, margin);
    const std::vector<int> emb = lattice::embed_indices(volume, ambient);
    const int na = ambient.size();

    // mass 1/s on V minus the origin
    std::vector<int> v_idx;
    if (v_sites) {
        v_idx = *v_sites;
        for (int x : v_idx)
            if (x < 0 || x >= volume.size())
                throw std::out_of_range("V site outside volume");
    } else {
        v_idx.resize(volume.size());
        for (int i = 0; i < volume.size(); ++i) v_idx[i] = i;
    }
    const int origin = volume.center_index();
    MassProfile mass = MassProfile::plain(params, na);
    for (int x : v_idx)
        if (x != origin) mass.extra(emb[x]) += 1.0 / s;

    const Mat r = resolvent_direct(ambient, params, mass, exec).R;

    // field sources: sign*K on the annulus V1\V0, -q h outside V1, none in V0
    const std::vector<bool> in_v0 = lattice::membership_mask(v0, ambient);
    const std::vector<bool> in_v1 = lattice::membership_mask(v1, ambient);
    Vec g_sources = Vec::Zero(na);
    for (int y = 0; y < na; ++y) {
        if (in_v0[y]) continue;
        if (in_v1[y])
            g_sources(y) = sign * k_field;
        else
            g_sources(y) = -params.q * params.h;
    }
    // sigma-equation sources consistent with these fields
    const Vec mu_sources = params.rho2 * g_sources;
    return assemble(volume, params, ambient, r, g_sources, mu_sources, boundary);
}

double energy(const IsingInstance& inst, const SpinConfig& tau) {
    const int n = inst.volume.size();
    if (static_cast<int>(tau.size()) != n)
        throw std::invalid_argument("configuration size mismatch");
    Vec t(n);
    for (int i = 0; i < n; ++i) t(i) = tau[i];
    return -0.5 * t.dot(inst.J * t) - inst.g.dot(t);
}

double conditional_prob_plus(const IsingInstance& inst, int x,
                             const SpinConfig& tau) {
    const int n = inst.volume.size();
    double u = inst.g(x);
    for (int y = 0; y < n; ++y) u += inst.J(x, y) * tau[y];
    return 1.0 / (1.0 + std::exp(-2.0 * u));
}

ExactGibbs exact_gibbs(const IsingInstance& inst, bool keep_distribution,
                       int cap, Exec exec) {
    inst.validate();
    const int n = inst.volume.size();
    if (n > cap) throw std::invalid_argument("volume too large to enumerate");
    kernels::StateSum sum =
        kernels::state_sum(inst.J, inst.g, nullptr, keep_distribution, exec);
    ExactGibbs out;
    out.log_z = sum.log_z;
    out.probs = std::move(sum.probs);
    out.est.magnetization = std::move(sum.magnetization);
    out.est.std_error = Vec::Zero(n);
    out.est.method = "exact";
    return out;
}

namespace {

// One heat-bath trajectory with a cached local field u = J tau.
struct Chain {
    const IsingInstance* inst;
    Vec tau;
    Vec u;

    void init(double start) {
        const int n = inst->volume.size();
        tau = Vec::Constant(n, start);
        u = inst->J * tau;
    }

    // returns true if the spin changed
    bool update(int x, double uniform) {
        const double p =
            1.0 / (1.0 + std::exp(-2.0 * (u(x) + inst->g(x))));
        const double next = uniform < p ? 1.0 : -1.0;
        if (next != tau(x)) {
            u += (next - tau(x)) * inst->J.col(x);
            tau(x) = next;
            return true;
        }
        return false;
    }
};

struct BatchAccum {
    int n_batches = 0;
    long meas = 0;
    std::vector<Vec> sums;    // per batch, per site
    std::vector<long> counts;

    void init(int n_sites, long measurements) {
        meas = measurements;
        n_batches = static_cast<int>(std::min<long>(32, measurements));
        sums.assign(n_batches, Vec::Zero(n_sites));
        counts.assign(n_batches, 0);
    }

    void add(long t, const Vec& v) {
        const int b = static_cast<int>((t * n_batches) / meas);
        sums[b] += v;
        ++counts[b];
    }
};

// Pool batch means (possibly from several chains) into mean and SE.
void reduce_batches(const std::vector<BatchAccum>& accs, Vec& mean, Vec& se) {
    const int n = static_cast<int>(accs[0].sums[0].size());
    std::vector<Vec> means;
    for (const auto& a : accs)
        for (int b = 0; b < a.n_batches; ++b)
            if (a.counts[b] > 0) means.push_back(a.sums[b] / double(a.counts[b]));
    const int m = static_cast<int>(means.size());
    mean = Vec::Zero(n);
    for (const auto& v : means) mean += v;
    mean /= double(m);
    Vec var = Vec::Zero(n);
    for (const auto& v : means) var += (v - mean).cwiseAbs2();
    if (m > 1) var /= double(m - 1);
    se = (var / double(m)).cwiseSqrt();
}

} // namespace

GibbsEstimate heatbath_mc(const IsingInstance& inst, long sweeps, long burn_in,
                          std::uint64_t seed, int chains, Exec exec) {
    inst.validate();
    if (burn_in < 0 || sweeps <= burn_in)
        throw std::invalid_argument("need sweeps > burn_in >= 0");
    if (chains < 1) throw std::invalid_argument("need at least one chain");
    const int n = inst.volume.size();
    const long meas = sweeps - burn_in;
    const double start = inst.boundary == Boundary::Minus ? -1.0 : 1.0;

    std::vector<BatchAccum> accs(chains);
    auto run_chain = [&](int c) {
        Rng rng(seed, static_cast<std::uint64_t>(c));
        Chain chain{&inst, {}, {}};
        chain.init(start);
        accs[c].init(n, meas);
        for (long t = 0; t < sweeps; ++t) {
            for (int x = 0; x < n; ++x) chain.update(x, rng.uniform());
            if (t >= burn_in) accs[c].add(t - burn_in, chain.tau);
        }
    };

    if (exec == Exec::Parallel) {
#ifdef SPINDIFF_HAVE_OPENMP
#pragma omp parallel for schedule(dynamic)
        for (int c = 0; c < chains; ++c) run_chain(c);
#else
        for (int c = 0; c < chains; ++c) run_chain(c);
#endif
    } else {
        for (int c = 0; c < chains; ++c) run_chain(c);
    }

    GibbsEstimate est;
    reduce_batches(accs, est.magnetization, est.std_error);
    est.method = "mc";
    est.sweeps = sweeps;
    est.burn_in = burn_in;
    est.seed = seed;
    est.chains = chains;
    return est;
}

ProjectedEstimate heatbath_projected(const IsingInstance& inst,
                                     const Vec& weights, long sweeps,
                                     long burn_in, std::uint64_t seed,
                                     int chains, Exec exec) {
    inst.validate();
    const int n = inst.volume.size();
    if (weights.size() != n) throw std::invalid_argument("weights size mismatch");
    if (burn_in < 0 || sweeps <= burn_in)
        throw std::invalid_argument("need sweeps > burn_in >= 0");
    const long meas = sweeps - burn_in;
    const double start = inst.boundary == Boundary::Minus ? -1.0 : 1.0;

    struct ProjAccum {
        BatchAccum batches;
        double sum = 0.0, sum2 = 0.0;
    };
    std::vector<ProjAccum> accs(chains);
    auto run_chain = [&](int c) {
        Rng rng(seed, static_cast<std::uint64_t>(c));
        Chain chain{&inst, {}, {}};
        chain.init(start);
        accs[c].batches.init(1, meas);
        for (long t = 0; t < sweeps; ++t) {
            for (int x = 0; x < n; ++x) chain.update(x, rng.uniform());
            if (t >= burn_in) {
                const double v = weights.dot(chain.tau);
                Vec one(1);
                one(0) = v;
                accs[c].batches.add(t - burn_in, one);
                accs[c].sum += v;
                accs[c].sum2 += v * v;
            }
        }
    };

    if (exec == Exec::Parallel) {
#ifdef SPINDIFF_HAVE_OPENMP
#pragma omp parallel for schedule(dynamic)
        for (int c = 0; c < chains; ++c) run_chain(c);
#else
        for (int c = 0; c < chains; ++c) run_chain(c);
#endif
    } else {
        for (int c = 0; c < chains; ++c) run_chain(c);
    }

    std::vector<BatchAccum> batch_only;
    double sum = 0.0, sum2 = 0.0;
    for (auto& a : accs) {
        batch_only.push_back(a.batches);
        sum += a.sum;
        sum2 += a.sum2;
    }
    Vec mean, se;
    reduce_batches(batch_only, mean, se);
    const double total = static_cast<double>(meas) * chains;
    ProjectedEstimate out;
    out.mean = mean(0);
    out.std_error = se(0);
    out.variance = sum2 / total - (sum / total) * (sum / total);
    out.sweeps = sweeps;
    out.chains = chains;
    return out;
}

CoupledResult coupled_heatbath(const std::vector<const IsingInstance*>& chain_spec,
                               long sweeps, long burn_in, std::uint64_t seed,
                               const Vec* projector) {
    const int k = static_cast<int>(chain_spec.size());
    if (k < 2) throw std::invalid_argument("need at least two instances");
    if (burn_in < 0 || sweeps <= burn_in)
        throw std::invalid_argument("need sweeps > burn_in >= 0");
    const int n = chain_spec[0]->volume.size();
    for (int i = 0; i < k; ++i) {
        chain_spec[i]->validate();
        if (chain_spec[i]->volume.size() != n)
            throw std::invalid_argument("instances live on different volumes");
    }
    // structural domination along the chain: equal couplings, ordered fields
    for (int i = 0; i + 1 < k; ++i) {
        const IsingInstance& a = *chain_spec[i];
        const IsingInstance& b = *chain_spec[i + 1];
        if ((a.J - b.J).cwiseAbs().maxCoeff() > 1e-12)
            throw std::invalid_argument("coupled instances need equal couplings");
        if ((a.g - b.g).minCoeff() < -1e-12)
            throw std::invalid_argument("fields are not ordered for domination");
    }

    Rng rng(seed);
    std::vector<Chain> chains(k);
    for (int i = 0; i < k; ++i) {
        chains[i] = Chain{chain_spec[i], {}, {}};
        // ordered starts: bottom chain all minus, the rest all plus
        chains[i].init(i == k - 1 ? -1.0 : 1.0);
    }

    if (projector && projector->size() != n)
        throw std::invalid_argument("projector size mismatch");

    const long meas = sweeps - burn_in;
    std::vector<BatchAccum> accs(k);
    std::vector<BatchAccum> diff_accs(k - 1);
    std::vector<BatchAccum> proj_accs(projector ? k - 1 : 0);
    for (int i = 0; i < k; ++i) accs[i].init(n, meas);
    for (int i = 0; i + 1 < k; ++i) diff_accs[i].init(n, meas);
    for (auto& a : proj_accs) a.init(1, meas);
    std::vector<long> violations(k - 1, 0);

    for (long t = 0; t < sweeps; ++t) {
        for (int x = 0; x < n; ++x) {
            const double u = rng.uniform();
            for (int i = 0; i < k; ++i) chains[i].update(x, u);
        }
        for (int i = 0; i + 1 < k; ++i)
            for (int x = 0; x < n; ++x)
                if (chains[i].tau(x) < chains[i + 1].tau(x)) ++violations[i];
        if (t >= burn_in) {
            for (int i = 0; i < k; ++i) accs[i].add(t - burn_in, chains[i].tau);
            for (int i = 0; i + 1 < k; ++i) {
                const Vec diff = chains[i].tau - chains[i + 1].tau;
                diff_accs[i].add(t - burn_in, diff);
                if (projector) {
                    Vec one(1);
                    one(0) = projector->dot(diff);
                    proj_accs[i].add(t - burn_in, one);
                }
            }
        }
    }

    CoupledResult out;
    out.est.resize(k);
    for (int i = 0; i < k; ++i) {
        reduce_batches({accs[i]}, out.est[i].magnetization, out.est[i].std_error);
        out.est[i].method = "mc";
        out.est[i].sweeps = sweeps;
        out.est[i].burn_in = burn_in;
        out.est[i].seed = seed;
        out.est[i].chains = 1;
    }
    out.violations = violations;
    out.diff_mean.resize(k - 1);
    out.diff_se.resize(k - 1);
    for (int i = 0; i + 1 < k; ++i)
        reduce_batches({diff_accs[i]}, out.diff_mean[i], out.diff_se[i]);
    if (projector) {
        out.proj_diff_mean.resize(k - 1);
        out.proj_diff_se.resize(k - 1);
        for (int i = 0; i + 1 < k; ++i) {
            Vec mean, se;
            reduce_batches({proj_accs[i]}, mean, se);
            out.proj_diff_mean[i] = mean(0);
            out.proj_diff_se[i] = se(0);
        }
    }
    return out;
}

CoupledResult monotone_coupled_mc(const IsingInstance& hi,
                                  const IsingInstance& lo, long sweeps,
                                  long burn_in, std::uint64_t seed) {
    return coupled_heatbath({&hi, &lo}, sweeps, burn_in, seed);
}

double difference_hamiltonian(const IsingInstance& quenched,
                              const IsingInstance& plain,
                              const SpinConfig& tau) {
    if (quenched.volume.size() != plain.volume.size())
        throw std::invalid_argument("instances live on different volumes");
    return energy(quenched, tau) - energy(plain, tau);
}

SpinConfig constant_config(int n, int value) {
    if (value != 1 && value != -1)
        throw std::invalid_argument("spin value must be +-1");
    return SpinConfig(n, static_cast<std::int8_t>(value));
}

} // namespace spindiff::ising
