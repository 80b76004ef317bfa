// Command-line front end: regime classification, Gibbs certificates,
// resolvent dumps, plus-state sampling, diffusion, annulus gap experiments
// and full time scans.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "spindiff/badconfig.hpp"
#include "spindiff/dobrushin.hpp"
#include "spindiff/evolution.hpp"
#include "spindiff/gaussian.hpp"
#include "spindiff/io.hpp"
#include "spindiff/ising.hpp"
#include "spindiff/resolvent.hpp"

using namespace spindiff;
using nlohmann::json;

namespace {

struct CommonParams {
    int d = 2;
    double q = 1.0;
    double rho2 = 0.5;
    double h = 0.0;
};

void add_model_options(CLI::App* cmd, CommonParams& p) {
    cmd->add_option("--d", p.d, "lattice dimension")->check(CLI::Range(1, 4));
    cmd->add_option("--q", p.q, "nearest-neighbor coupling");
    cmd->add_option("--rho2", p.rho2, "single-site variance parameter");
    cmd->add_option("--field", p.h, "external field h");
}

json params_json(const CommonParams& p) {
    return {{"d", p.d}, {"q", p.q}, {"rho2", p.rho2}, {"h", p.h}};
}

void write_manifest(const std::string& path, const json& manifest) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << manifest.dump(2) << '\n';
    std::cout << "manifest: " << path << '\n';
}

const char* regime_name(dobrushin::Regime r) {
    switch (r) {
        case dobrushin::Regime::HighTempUnique: return "HighTempUnique";
        case dobrushin::Regime::LowTempOrdered: return "LowTempOrdered";
        default: return "Indeterminate";
    }
}

const char* label_name(badconfig::ScanLabel l) {
    switch (l) {
        case badconfig::ScanLabel::CertifiedGibbs: return "CertifiedGibbs";
        case badconfig::ScanLabel::GapPersists: return "GapPersists";
        case badconfig::ScanLabel::GapVanishes: return "GapVanishes";
        default: return "Indeterminate";
    }
}

std::vector<double> parse_list(const std::string& text) {
    std::vector<double> out;
    std::istringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) out.push_back(std::stod(item));
    return out;
}

int run_regime(const std::string& qs, const std::string& rs, int d,
               std::optional<double> beta_d, const std::string& out) {
    std::ofstream csv;
    if (!out.empty()) {
        csv.open(out);
        csv << "d,q,rho2,regime,c_bound,a0,lambda\n";
    }
    for (double q : parse_list(qs)) {
        for (double rho2 : parse_list(rs)) {
            resolvent::ModelParams p{q, rho2, 0.0};
            dobrushin::RegimeReport rep = dobrushin::classify_regime(p, d, beta_d);
            resolvent::NaturalParams np = resolvent::natural_params(p, d);
            const double bound =
                2.0 * d * np.lambda < 1.0
                    ? dobrushin::dobrushin_constant_bound(np, d)
                    : std::numeric_limits<double>::infinity();
            std::cout << "d=" << d << " q=" << q << " rho2=" << rho2 << "  "
                      << regime_name(rep.regime)
                      << "  (1/q=" << rep.high_lhs
                      << ", low_rhs=" << rep.low_rhs
                      << ", high_rhs=" << rep.high_rhs
                      << ", dobrushin_bound=" << bound << ")\n";
            if (csv.is_open())
                csv << d << ',' << q << ',' << rho2 << ','
                    << regime_name(rep.regime) << ',' << bound << ',' << np.a0
                    << ',' << np.lambda << '\n';
        }
    }
    return 0;
}

int run_certify(const CommonParams& cp, double s, int side,
                const std::string& out_prefix) {
    resolvent::ModelParams p{cp.q, cp.rho2, cp.h};
    const resolvent::NaturalParams np = resolvent::natural_params(p, cp.d);
    const resolvent::NaturalParams np_s = resolvent::natural_params(p, cp.d, s);
    const double uniform = 2.0 * cp.d * np.lambda * (1.0 + np.a0);
    const double small_s = 2.0 * cp.d * np_s.lambda * (1.0 + np_s.a0);
    std::cout << "natural parameters: a0=" << np.a0 << " lambda=" << np.lambda
              << "  (s-dependent: a0=" << np_s.a0 << " lambda=" << np_s.lambda
              << ")\n";
    std::cout << "uniform contraction 2d lambda (1+a0) = " << uniform
              << (uniform < 1.0 ? "  [certified]\n" : "  [not certified]\n");
    std::cout << "small-s contraction                  = " << small_s
              << (small_s < 1.0 ? "  [certified]\n" : "  [not certified]\n");

    if (!out_prefix.empty()) {
        json records = json::array();
        for (std::optional<double> sv :
             std::vector<std::optional<double>>{std::nullopt, s}) {
            resolvent::NaturalParams v = resolvent::natural_params(p, cp.d, sv);
            records.push_back({{"d", cp.d},
                               {"q", cp.q},
                               {"rho2", cp.rho2},
                               {"s", sv ? json(*sv) : json(nullptr)},
                               {"a0", v.a0},
                               {"lambda", v.lambda}});
        }
        std::ofstream jf(out_prefix + "_natural_params.json");
        jf << records.dump(2) << '\n';

        // influence bound per unit perturbation, keyed by (x, z)
        if (uniform < 1.0) {
            lattice::Box box = lattice::Box::cube(cp.d, side);
            const int c = box.center_index();
            std::ofstream icsv(out_prefix + "_influence.csv");
            icsv << "x,z,bound\n";
            for (int z = 0; z < box.size(); ++z) {
                Vec delta = Vec::Zero(box.size());
                delta(z) = 1.0;
                icsv << c << ',' << z << ','
                     << dobrushin::eta_influence_bound(p, s, box, c, delta)
                     << '\n';
            }
            std::cout << "influence table: " << out_prefix
                      << "_influence.csv\n";
        }
    }
    return uniform < 1.0 || small_s < 1.0 ? 0 : 2;
}

int run_resolvent(const CommonParams& cp, int side, double series_tol,
                  const std::string& out_prefix) {
    resolvent::ModelParams p{cp.q, cp.rho2, cp.h};
    lattice::Box box = lattice::Box::cube(cp.d, side);
    resolvent::ResolventMatrix direct = resolvent::resolvent_direct(
        box, p, resolvent::MassProfile::plain(p, box.size()));
    std::cout << "resolvent on " << side << "^" << cp.d << " ("
              << box.size() << " sites)\n";
    if (cp.q > 0.0) {
        resolvent::DecayFit fit = resolvent::decay_fit(direct.R, box);
        std::cout << "decay rate " << fit.rate << " (r2 = " << fit.r2 << ")\n";
        resolvent::ResolventMatrix series =
            resolvent::resolvent_series(box, p, series_tol);
        std::cout << "series terms " << series.series_terms
                  << ", max |direct - series| = "
                  << (direct.R - series.R).cwiseAbs().maxCoeff() << '\n';
    }
    if (!out_prefix.empty()) {
        io::write_matrix_csv(out_prefix + "_resolvent.csv", direct.R);
        resolvent::NaturalParams np = resolvent::natural_params(p, cp.d);
        json manifest = {{"command", "resolvent"},
                         {"params", params_json(cp)},
                         {"side", side},
                         {"a0", np.a0},
                         {"lambda", np.lambda},
                         {"outputs", {out_prefix + "_resolvent.csv"}}};
        write_manifest(out_prefix + "_manifest.json", manifest);
    }
    return 0;
}

int run_sample(const CommonParams& cp, int side, int n, std::uint64_t seed,
               int margin, double t, double s, double rho_inf2,
               const std::string& out_prefix) {
    resolvent::ModelParams p{cp.q, cp.rho2, cp.h};
    lattice::Box box = lattice::Box::cube(cp.d, side);
    gaussian::McOptions opts;
    opts.margin = margin;
    gaussian::MuPlusSamples draws = gaussian::sample_mu_plus(p, box, n, seed, opts);

    const bool evolve = t > 0.0 || s > 0.0;
    Mat eta;
    evolution::DynamicsParams dyn = evolution::DynamicsParams::bm(0.0);
    if (evolve) {
        dyn = s > 0.0 ? evolution::DynamicsParams::bm(s)
                      : evolution::DynamicsParams::ou(t, rho_inf2);
        eta = evolution::evolve_samples(draws.sigma, dyn, seed + 1);
    }

    std::cout << "drew " << n << " configurations on " << side << "^" << cp.d
              << " (spin box " << draws.spin_box.extents[0] << ")\n";
    if (!out_prefix.empty()) {
        std::ofstream sig(out_prefix + "_sigma.csv");
        sig << "draw,site,value\n";
        sig << std::setprecision(17);
        for (int k = 0; k < n; ++k)
            for (int x = 0; x < box.size(); ++x)
                sig << k << ',' << x << ',' << draws.sigma(k, x) << '\n';
        json manifest = {{"command", "sample"},
                         {"params", params_json(cp)},
                         {"side", side},
                         {"n", n},
                         {"seed", seed},
                         {"outputs", {out_prefix + "_sigma.csv"}}};
        if (evolve) {
            std::ofstream ev(out_prefix + "_eta.csv");
            ev << "draw,site,value\n";
            ev << std::setprecision(17);
            for (int k = 0; k < n; ++k)
                for (int x = 0; x < box.size(); ++x)
                    ev << k << ',' << x << ',' << eta(k, x) << '\n';
            manifest["dynamics"] = {{"mode", s > 0.0 ? "bm" : "ou"},
                                    {"t", t},
                                    {"s", dyn.bm_time()},
                                    {"rho_inf2", rho_inf2}};
            manifest["outputs"].push_back(out_prefix + "_eta.csv");
        }
        write_manifest(out_prefix + "_manifest.json", manifest);
    }
    return 0;
}

// batch mode: one conditional estimate per grid time from a config file
int run_evolve_batch(const std::string& config_path,
                     const std::string& out_prefix) {
    io::Config cfg = io::Config::from_file(config_path);
    const int d = static_cast<int>(cfg.integer_or("d", 2));
    resolvent::ModelParams p{cfg.number("q"), cfg.number("rho2"),
                             cfg.number_or("h", 0.0)};
    const int side = static_cast<int>(cfg.integer_or("side", 3));
    const double rho_inf2 = cfg.number_or("rho_inf2", 1.0);
    const double eta_value = cfg.number_or("eta", 0.0);
    const long n_tau = cfg.integer_or("n_tau", 20000);
    const std::uint64_t seed =
        static_cast<std::uint64_t>(cfg.integer_or("seed", 1));

    lattice::Box box = lattice::Box::cube(d, side);
    Vec eta = Vec::Constant(box.size(), eta_value);
    const std::string eta_blob = "constant:" + std::to_string(eta_value);

    json records = json::array();
    std::uint64_t k = 0;
    for (double t : cfg.number_list("times")) {
        evolution::DynamicsParams dyn = evolution::DynamicsParams::ou(t, rho_inf2);
        evolution::ConditionalEstimate est =
            evolution::conditional_mu_t(p, dyn, box, eta, n_tau, seed + k++);
        std::cout << "t=" << t << "  mean=" << est.mean
                  << " var=" << est.variance << " se=" << est.std_error << '\n';
        records.push_back({{"t_or_s", dyn.bm_time()},
                           {"V_size", box.size()},
                           {"eta_spec_hash", io::blob_sha1(eta_blob)},
                           {"mean", est.mean},
                           {"var", est.variance},
                           {"se", est.std_error},
                           {"n", est.n_tau_samples}});
    }
    if (!out_prefix.empty()) {
        std::ofstream jf(out_prefix + "_estimates.json");
        jf << records.dump(2) << '\n';
        json manifest = {{"command", "evolve"},
                         {"config_sha1", io::blob_sha1(cfg.raw())},
                         {"seed", seed},
                         {"outputs", {out_prefix + "_estimates.json"}}};
        write_manifest(out_prefix + "_manifest.json", manifest);
    }
    return 0;
}

int run_evolve(const CommonParams& cp, int side, double t, double s,
               double rho_inf2, double eta_value, const std::string& eta_file,
               long n_tau, std::uint64_t seed, const std::string& out_prefix) {
    resolvent::ModelParams p{cp.q, cp.rho2, cp.h};
    lattice::Box box = lattice::Box::cube(cp.d, side);
    evolution::DynamicsParams dyn =
        s > 0.0 ? evolution::DynamicsParams::bm(s)
                : evolution::DynamicsParams::ou(t, rho_inf2);

    Vec eta = Vec::Constant(box.size(), eta_value);
    std::string eta_blob = "constant:" + std::to_string(eta_value);
    if (!eta_file.empty()) {
        std::ifstream in(eta_file);
        if (!in) throw std::runtime_error("cannot open " + eta_file);
        std::stringstream buf;
        buf << in.rdbuf();
        eta_blob = buf.str();
        std::istringstream lines(eta_blob);
        std::string line;
        int i = 0;
        while (std::getline(lines, line) && i < box.size()) {
            if (line.empty() || line[0] == '#') continue;
            eta(i++) = std::stod(line);
        }
        if (i != box.size())
            throw std::runtime_error("eta file must list one value per site");
    }

    evolution::ConditionalEstimate est =
        evolution::conditional_mu_t(p, dyn, box, eta, n_tau, seed);
    std::cout << "conditional law at the center: mean=" << est.mean
              << " var=" << est.variance << " se=" << est.std_error
              << (est.exact_tau_layer ? " (exact hidden layer)\n" : "\n");

    if (!out_prefix.empty()) {
        json record = {{"t_or_s", dyn.bm_time()},
                       {"V_size", box.size()},
                       {"eta_spec_hash", io::blob_sha1(eta_blob)},
                       {"mean", est.mean},
                       {"var", est.variance},
                       {"se", est.std_error},
                       {"n", est.n_tau_samples}};
        std::ofstream jf(out_prefix + "_estimate.json");
        jf << record.dump(2) << '\n';
        std::cout << "estimate record: " << out_prefix << "_estimate.json\n";
    }
    return 0;
}

int run_gap(const CommonParams& cp, double s, double k_field, int v0, int v1,
            int ambient, const std::string& estimator, long sweeps,
            std::uint64_t seed, const std::string& out_prefix) {
    resolvent::ModelParams p{cp.q, cp.rho2, cp.h};
    badconfig::GapEstimator est = estimator == "eta_mean"
                                      ? badconfig::GapEstimator::EtaMean
                                      : badconfig::GapEstimator::TauMarginal;
    badconfig::GapResult gap =
        badconfig::gap_experiment(p, cp.d, s, k_field, v0, v1, ambient, est,
                                  sweeps, seed);
    std::cout << "gap = " << gap.gap << " +- " << gap.std_error
              << (gap.indeterminate ? "  [indeterminate]\n" : "\n");
    if (!out_prefix.empty()) {
        std::ofstream csv(out_prefix + "_gap.csv");
        csv << "v0,v1,ambient,K,s,gap,se,sweeps,seed\n";
        csv << gap.v0_side << ',' << gap.v1_side << ',' << gap.ambient_side
            << ',' << gap.K << ',' << gap.s << ',' << gap.gap << ','
            << gap.std_error << ',' << gap.sweeps << ',' << gap.seed << '\n';
        io::write_estimate_json(out_prefix + "_plus_estimate.json",
                                gap.est_plus);
        io::write_estimate_json(out_prefix + "_minus_estimate.json",
                                gap.est_minus);
        // instance dump for the +K chain
        lattice::Box amb_box = lattice::Box::cube(cp.d, ambient);
        ising::ResolventIsing hi = ising::build_annulus_ising(
            amb_box, p, s, lattice::Box::cube(cp.d, v0),
            lattice::Box::cube(cp.d, v1), std::nullopt, k_field, +1,
            ising::Boundary::Plus);
        io::write_matrix_csv(out_prefix + "_couplings.csv", hi.inst.J);
        io::write_vector_csv(out_prefix + "_fields.csv", hi.inst.g,
                             "site,g");
        json manifest = {{"command", "gap"},
                         {"params", params_json(cp)},
                         {"geometry", {{"v0", v0}, {"v1", v1}, {"ambient", ambient}}},
                         {"s", s},
                         {"K", k_field},
                         {"estimator", estimator},
                         {"sweeps", sweeps},
                         {"seed", seed},
                         {"outputs",
                          {out_prefix + "_gap.csv",
                           out_prefix + "_plus_estimate.json",
                           out_prefix + "_minus_estimate.json",
                           out_prefix + "_couplings.csv",
                           out_prefix + "_fields.csv"}}};
        write_manifest(out_prefix + "_manifest.json", manifest);
    }
    return 0;
}

int run_scan(const std::string& config_path, const std::string& out_prefix) {
    io::Config cfg = io::Config::from_file(config_path);
    CommonParams cp;
    cp.d = static_cast<int>(cfg.integer_or("d", 2));
    cp.q = cfg.number("q");
    cp.rho2 = cfg.number("rho2");
    cp.h = cfg.number_or("h", 0.0);
    resolvent::ModelParams p{cp.q, cp.rho2, cp.h};
    const double rho_inf2 = cfg.number_or("rho_inf2", 1.0);
    const double k_field = cfg.number_or("K", 5.0 / cp.rho2);
    badconfig::ScanGeometry geom;
    geom.v0_side = static_cast<int>(cfg.integer_or("v0_side", 3));
    geom.v1_side = static_cast<int>(cfg.integer_or("v1_side", 7));
    geom.ambient_side = static_cast<int>(cfg.integer_or("ambient_side", 9));
    const long sweeps = cfg.integer_or("sweeps", 30000);
    const std::uint64_t seed =
        static_cast<std::uint64_t>(cfg.integer_or("seed", 1));
    std::vector<double> times = cfg.number_list("times");

    badconfig::ScanResult scan = badconfig::gibbs_scan(
        p, cp.d, times, rho_inf2, k_field, geom, sweeps, seed);

    for (const auto& pt : scan.points) {
        std::cout << "t=" << pt.t << " s=" << pt.s << "  "
                  << label_name(pt.label);
        if (pt.gap)
            std::cout << "  gap=" << pt.gap->gap << "+-" << pt.gap->std_error;
        std::cout << '\n';
    }
    std::cout << "largest certified t: " << scan.largest_certified_t
              << "\nsmallest gap-persisting t: " << scan.smallest_persistent_t
              << '\n';

    if (!out_prefix.empty()) {
        std::ofstream csv(out_prefix + "_scan.csv");
        csv << "t,s,label,uniform_contraction,small_s_contraction,gap,gap_se\n";
        for (const auto& pt : scan.points) {
            csv << pt.t << ',' << pt.s << ',' << label_name(pt.label) << ','
                << pt.uniform_contraction << ',' << pt.small_s_contraction;
            if (pt.gap)
                csv << ',' << pt.gap->gap << ',' << pt.gap->std_error;
            else
                csv << ",,";
            csv << '\n';
        }
        json manifest = {
            {"command", "scan"},
            {"params", params_json(cp)},
            {"rho_inf2", rho_inf2},
            {"K", k_field},
            {"geometry",
             {{"v0", geom.v0_side}, {"v1", geom.v1_side},
              {"ambient", geom.ambient_side}}},
            {"sweeps", sweeps},
            {"seed", seed},
            {"config_sha1", io::blob_sha1(cfg.raw())},
            {"outputs", {out_prefix + "_scan.csv"}}};
        write_manifest(out_prefix + "_manifest.json", manifest);
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"lattice double-well diffusion toolbox"};
    app.require_subcommand(1);

    CommonParams cp;

    // regime
    auto* regime = app.add_subcommand(
        "regime", "classify the time-zero phase from (d, q, rho2)");
    std::string qs = "1.0", rs = "0.5", out;
    int d = 2;
    double beta_d_val = 0.0;
    regime->add_option("--d", d, "lattice dimension");
    regime->add_option("--q", qs, "coupling value or comma list");
    regime->add_option("--rho2", rs, "variance value or comma list");
    auto* beta_opt =
        regime->add_option("--beta-d", beta_d_val,
                           "critical nn inverse temperature (d != 2)");
    regime->add_option("--out", out, "CSV output path");

    // certify
    auto* certify = app.add_subcommand(
        "certify", "Dobrushin contraction certificates at time s");
    CommonParams cert_p;
    add_model_options(certify, cert_p);
    double cert_s = 1.0;
    int cert_side = 9;
    std::string cert_out;
    certify->add_option("--s", cert_s, "diffusion time (additive picture)");
    certify->add_option("--side", cert_side, "box side for influence table");
    certify->add_option("--out", cert_out, "output prefix");

    // resolvent
    auto* resolvent_cmd =
        app.add_subcommand("resolvent", "dense resolvent dump and decay fit");
    CommonParams res_p;
    add_model_options(resolvent_cmd, res_p);
    int res_side = 9;
    double res_tol = 1e-12;
    std::string res_out;
    resolvent_cmd->add_option("--side", res_side, "box side");
    resolvent_cmd->add_option("--series-tol", res_tol, "series tail bound");
    resolvent_cmd->add_option("--out", res_out, "output prefix");

    // sample
    auto* sample = app.add_subcommand(
        "sample", "draw from the plus state, optionally diffused");
    CommonParams s_p;
    add_model_options(sample, s_p);
    int s_side = 5, s_n = 100, s_margin = -1;
    std::uint64_t s_seed = 1;
    double s_t = 0.0, s_s = 0.0, s_rho_inf2 = 1.0;
    std::string s_out;
    sample->add_option("--side", s_side, "box side");
    sample->add_option("--n", s_n, "number of draws");
    sample->add_option("--seed", s_seed, "rng seed");
    sample->add_option("--margin", s_margin, "spin-box margin (-1 auto)");
    sample->add_option("--t", s_t, "mean-reverting time");
    sample->add_option("--s", s_s, "additive-noise time");
    sample->add_option("--rho-inf2", s_rho_inf2, "stationary variance");
    sample->add_option("--out", s_out, "output prefix");

    // evolve
    auto* evolve = app.add_subcommand(
        "evolve", "conditional law of the evolved measure at the center");
    CommonParams e_p;
    add_model_options(evolve, e_p);
    int e_side = 3;
    double e_t = 0.0, e_s = 1.0, e_rho_inf2 = 1.0, e_eta = 0.0;
    long e_ntau = 20000;
    std::uint64_t e_seed = 1;
    std::string e_eta_file, e_out;
    evolve->add_option("--side", e_side, "conditioning box side");
    evolve->add_option("--t", e_t, "mean-reverting time");
    evolve->add_option("--s", e_s, "additive-noise time");
    evolve->add_option("--rho-inf2", e_rho_inf2, "stationary variance");
    evolve->add_option("--eta", e_eta, "constant conditioning value");
    evolve->add_option("--eta-file", e_eta_file,
                       "one conditioning value per line");
    evolve->add_option("--n-tau", e_ntau, "hidden-chain measurement sweeps");
    evolve->add_option("--seed", e_seed, "rng seed");
    std::string e_config;
    evolve->add_option("--config", e_config,
                       "batch config file (grid of times)");
    evolve->add_option("--out", e_out, "output prefix");

    // gap
    auto* gap = app.add_subcommand(
        "gap", "coupled +-K annulus experiment at the origin");
    CommonParams g_p;
    add_model_options(gap, g_p);
    double g_s = 1000.0, g_k = 10.0;
    int g_v0 = 3, g_v1 = 7, g_ambient = 9;
    long g_sweeps = 30000;
    std::uint64_t g_seed = 1;
    std::string g_estimator = "tau_marg", g_out;
    gap->add_option("--s", g_s, "additive-noise time");
    gap->add_option("--K", g_k, "annulus field strength");
    gap->add_option("--v0", g_v0, "untouched core side");
    gap->add_option("--v1", g_v1, "outer annulus side");
    gap->add_option("--ambient", g_ambient, "simulation box side");
    gap->add_option("--estimator", g_estimator, "tau_marg | eta_mean");
    gap->add_option("--sweeps", g_sweeps, "MC budget");
    gap->add_option("--seed", g_seed, "rng seed");
    gap->add_option("--out", g_out, "output prefix");

    // scan
    auto* scan = app.add_subcommand(
        "scan", "certificate-or-gap labels over a time grid (config file)");
    std::string scan_config, scan_out;
    scan->add_option("--config", scan_config, "key = value config file")
        ->required();
    scan->add_option("--out", scan_out, "output prefix");

    CLI11_PARSE(app, argc, argv);

    try {
        if (regime->parsed())
            return run_regime(qs, rs, d,
                              *beta_opt ? std::optional<double>(beta_d_val)
                                        : std::nullopt,
                              out);
        if (certify->parsed())
            return run_certify(cert_p, cert_s, cert_side, cert_out);
        if (resolvent_cmd->parsed())
            return run_resolvent(res_p, res_side, res_tol, res_out);
        if (sample->parsed())
            return run_sample(s_p, s_side, s_n, s_seed, s_margin, s_t, s_s,
                              s_rho_inf2, s_out);
        if (evolve->parsed()) {
            if (!e_config.empty()) return run_evolve_batch(e_config, e_out);
            return run_evolve(e_p, e_side, e_t, e_s, e_rho_inf2, e_eta,
                              e_eta_file, e_ntau, e_seed, e_out);
        }
        if (gap->parsed())
            return run_gap(g_p, g_s, g_k, g_v0, g_v1, g_ambient, g_estimator,
                           g_sweeps, g_seed, g_out);
        if (scan->parsed()) return run_scan(scan_config, scan_out);
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << '\n';
        return 1;
    }
    return 0;
}
