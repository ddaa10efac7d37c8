// Command-line front end. Subcommands: run, sweep, hom, lower-bound, tomo.
// Every command is deterministic given (flags, config file, seed); the
// effective configuration is echoed into each artifact. Probabilities are
// printed with six decimal places; amplitudes as exact [re, im] pairs.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "qpar/gedik.hpp"
#include "qpar/json_io.hpp"
#include "qpar/optics.hpp"
#include "qpar/qudit.hpp"
#include "qpar/random.hpp"
#include "qpar/tomography.hpp"
#include "qpar/twophoton.hpp"

namespace {

using nlohmann::json;
using namespace qpar;

double round6(double x) { return std::round(x * 1e6) / 1e6; }

std::string fmt6(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.6f", x);
    return buf;
}

struct GlobalOpts {
    std::uint64_t seed = 1;
    std::string config_path;
    std::string out_path;
    std::string format;

    CLI::Option* seed_opt = nullptr;
    CLI::Option* format_opt = nullptr;
    json config = json::object();

    void register_on(CLI::App* cmd) {
        seed_opt = cmd->add_option("--seed", seed, "RNG seed (default 1)");
        cmd->add_option("--config", config_path, "JSON config file; flags override its values");
        cmd->add_option("--out", out_path, "output path (default: stdout)");
        format_opt = cmd->add_option("--format", format, "output format: json or csv")
                         ->check(CLI::IsMember({"json", "csv"}));
    }

    void load_config() {
        if (!config_path.empty()) {
            config = load_json_file(config_path);
            if (!config.is_object())
                throw std::runtime_error("config file must hold a JSON object");
        }
        if (seed_opt->count() == 0 && config.contains("seed"))
            seed = config["seed"].get<std::uint64_t>();
        if (format_opt->count() == 0 && config.contains("format"))
            format = config["format"].get<std::string>();
    }

    std::string resolve_format(const std::string& natural, bool csv_allowed) {
        if (format.empty()) return natural;
        if (format == "csv" && !csv_allowed)
            throw std::invalid_argument("this command emits structured data; use --format json");
        return format;
    }

    void emit(const std::string& content) const {
        if (out_path.empty()) {
            std::cout << content;
            return;
        }
        std::ofstream out(out_path);
        if (!out) throw std::runtime_error("cannot open '" + out_path + "' for writing");
        out << content;
        if (!out) throw std::runtime_error("write to '" + out_path + "' failed");
    }
};

// Fill `value` from the config file when the flag was not passed.
template <typename T>
void merge(const CLI::Option* opt, const json& cfg, const char* key, T& value) {
    if (opt != nullptr && opt->count() > 0) return;
    if (cfg.contains(key)) value = cfg[key].get<T>();
}

struct NoiseOpts {
    std::string noise_file;
    bool calibrated = false;
    double beta = 1.0;
    double mz_dephasing = 1.0;
    double readout_flip = 0.0;

    CLI::Option* file_opt = nullptr;
    CLI::Option* cal_opt = nullptr;
    CLI::Option* beta_opt = nullptr;
    CLI::Option* mz_opt = nullptr;
    CLI::Option* flip_opt = nullptr;

    void register_on(CLI::App* cmd) {
        file_opt = cmd->add_option("--noise-file", noise_file,
                                   "JSON file {beta, mz_dephasing, readout_flip}");
        cal_opt = cmd->add_flag("--calibrated", calibrated,
                                "use the measured calibration (beta^2=0.92459, mz=0.99691)");
        beta_opt = cmd->add_option("--beta", beta, "wavepacket overlap in [0,1]");
        mz_opt = cmd->add_option("--mz-dephasing", mz_dephasing, "interferometer coherence in [0,1]");
        flip_opt = cmd->add_option("--readout-flip", readout_flip,
                                   "per-photon misclassification probability");
    }

    // Precedence, lowest to highest: ideal defaults, --calibrated preset,
    // noise file, config-file keys, individual flags.
    NoiseParams resolve(const json& cfg) const {
        NoiseParams n;
        bool use_cal = calibrated;
        if (cal_opt->count() == 0 && cfg.contains("calibrated")) use_cal = cfg["calibrated"].get<bool>();
        if (use_cal) n = NoiseParams::calibrated();
        std::string file = noise_file;
        merge(file_opt, cfg, "noise_file", file);
        if (!file.empty()) n = noise_from_json(load_json_file(file));
        if (cfg.contains("beta") && beta_opt->count() == 0) n.beta = cfg["beta"].get<double>();
        if (cfg.contains("mz_dephasing") && mz_opt->count() == 0)
            n.mz_dephasing = cfg["mz_dephasing"].get<double>();
        if (cfg.contains("readout_flip") && flip_opt->count() == 0)
            n.readout_flip = cfg["readout_flip"].get<double>();
        if (beta_opt->count() > 0) n.beta = beta;
        if (mz_opt->count() > 0) n.mz_dephasing = mz_dephasing;
        if (flip_opt->count() > 0) n.readout_flip = readout_flip;
        n.validate();
        return n;
    }
};

bool noise_is_ideal(const NoiseParams& n) {
    return n.beta == 1.0 && n.mz_dephasing == 1.0 && n.readout_flip == 0.0;
}

json distribution_to_json(const Eigen::VectorXd& probs) {
    json out = json::array();
    for (Eigen::Index i = 0; i < probs.size(); ++i) out.push_back(round6(probs[i]));
    return out;
}

json spec_to_json(const PermutationSpec& spec) {
    return json{{"d", spec.dim}, {"m", spec.m}, {"sign", std::string(1, sign_char(spec.sign))}};
}

json config_echo(const GlobalOpts& g, const std::string& command, json extra) {
    extra["command"] = command;
    extra["seed"] = g.seed;
    extra["out"] = g.out_path.empty() ? "-" : g.out_path;
    return extra;
}

// ---- run ----------------------------------------------------------------

struct RunArgs {
    GlobalOpts g;
    NoiseOpts noise;
    int d = 4;
    int m = 0;
    std::string sign = "+";
    std::int64_t shots = 0;
    CLI::Option* d_opt = nullptr;
    CLI::Option* m_opt = nullptr;
    CLI::Option* sign_opt = nullptr;
    CLI::Option* shots_opt = nullptr;
};

void cmd_run(RunArgs& a) {
    a.g.load_config();
    const json& cfg = a.g.config;
    merge(a.d_opt, cfg, "d", a.d);
    merge(a.m_opt, cfg, "m", a.m);
    merge(a.sign_opt, cfg, "sign", a.sign);
    merge(a.shots_opt, cfg, "shots", a.shots);
    const NoiseParams noise = a.noise.resolve(cfg);
    a.g.resolve_format("json", false);

    const PermutationSpec spec(a.m, sign_from_string(a.sign), a.d);
    json out;
    out["spec"] = spec_to_json(spec);
    out["config"] = config_echo(a.g, "run",
                                json{{"d", a.d},
                                     {"m", a.m},
                                     {"sign", a.sign},
                                     {"shots", a.shots},
                                     {"noise", noise_to_json(noise)}});

    if (a.shots == 0 && noise_is_ideal(noise)) {
        const IdealRunResult res = run_ideal(spec);
        out["mode"] = "ideal";
        out["final_state"] = vector_to_json(res.final_state.amps);
        out["distribution"] = distribution_to_json(measure_distribution(res.final_state).probs);
        out["parity"] = parity_name(res.outcome.parity);
        out["outcome_index"] = res.outcome.outcome_index;
        out["success_prob"] = round6(res.outcome.success_prob);
        out["queries_used"] = res.queries_used;
    } else if (a.shots == 0) {
        const UnitaryOp gate = logical_gate_for_settings(permutation_circuit_settings(spec));
        Eigen::Vector2cd j1 = prepared_photon1_jones();
        Eigen::Vector2cd j2 = prepared_photon2_jones();
        Eigen::Vector4cd psi;
        for (int i = 0; i < 2; ++i)
            for (int k = 0; k < 2; ++k) psi[2 * i + k] = j1[i] * j2[k];
        const DensityMatrix rho = apply_gate_channel(gate.mat, DensityMatrix::pure(psi), noise);
        const Eigen::Vector4d p = outcome_distribution(rho, noise);
        const MeasurementDistribution dist(4, p);
        const ParityOutcome outcome = decide_parity(dist);
        out["mode"] = "model-exact";
        out["distribution"] = distribution_to_json(dist.probs);
        out["outcome_labels"] = json(CoincidenceRecord::labels());
        out["parity"] = parity_name(outcome.parity);
        out["outcome_index"] = outcome.outcome_index;
        out["success_prob"] = round6(success_probability(spec, noise));
        out["queries_used"] = 1;
    } else {
        const NoisyRunResult res = run_noisy(spec, noise, a.shots, a.g.seed);
        out["mode"] = "sampled";
        out["distribution"] = distribution_to_json(res.dist.probs);
        out["outcome_labels"] = json(CoincidenceRecord::labels());
        out["counts"] = coincidence_to_json(res.record);
        out["parity"] = parity_name(res.outcome.parity);
        out["outcome_index"] = res.outcome.outcome_index;
        out["success_prob"] = round6(res.outcome.success_prob);
        out["model_success_prob"] = round6(success_probability(spec, noise));
        out["queries_used"] = 1;
    }
    a.g.emit(out.dump(2) + "\n");
}

// ---- sweep --------------------------------------------------------------

struct SweepArgs {
    GlobalOpts g;
    NoiseOpts noise;
    std::int64_t shots = 100000;
    CLI::Option* shots_opt = nullptr;
};

void cmd_sweep(SweepArgs& a) {
    a.g.load_config();
    merge(a.shots_opt, a.g.config, "shots", a.shots);
    const NoiseParams noise = a.noise.resolve(a.g.config);
    const std::string format = a.g.resolve_format("csv", true);
    if (a.shots < 1) throw std::invalid_argument("sweep: shots must be >= 1");

    struct Row {
        PermutationSpec spec;
        Eigen::Vector4d ideal;
        Eigen::Vector4d empirical;
        double success_mass;
        double model_success;
        bool majority_correct;
    };
    std::vector<Row> rows;
    double avg_mass = 0.0, avg_model = 0.0, majority_rate = 0.0;
    int spec_index = 0;
    for (Sign s : {Sign::Plus, Sign::Minus})
        for (int m = 0; m < 4; ++m) {
            const PermutationSpec spec(m, s, 4);
            const IdealRunResult ideal = run_ideal(spec);
            const NoisyRunResult noisy =
                run_noisy(spec, noise, a.shots, split_seed(a.g.seed, static_cast<std::uint64_t>(spec_index)));
            Row row{spec, ideal.final_state.amps.cwiseAbs2().real(), noisy.dist.probs,
                    noisy.dist.probs[correct_outcome_index(spec)], success_probability(spec, noise),
                    noisy.outcome.outcome_index == correct_outcome_index(spec)};
            avg_mass += row.success_mass / 8.0;
            avg_model += row.model_success / 8.0;
            majority_rate += row.majority_correct ? 1.0 / 8.0 : 0.0;
            rows.push_back(std::move(row));
            ++spec_index;
        }

    const json cfg_echo = config_echo(
        a.g, "sweep", json{{"shots", a.shots}, {"noise", noise_to_json(noise)}, {"d", 4}});

    if (format == "csv") {
        std::string csv;
        csv += "# command=sweep\n";
        csv += "# seed=" + std::to_string(a.g.seed) + "\n";
        csv += "# shots=" + std::to_string(a.shots) + "\n";
        csv += "# beta=" + fmt6(noise.beta) + "\n";
        csv += "# mz_dephasing=" + fmt6(noise.mz_dephasing) + "\n";
        csv += "# readout_flip=" + fmt6(noise.readout_flip) + "\n";
        csv += "m,sign,outcome,ideal,empirical\n";
        for (const Row& row : rows)
            for (int k = 0; k < 4; ++k) {
                csv += std::to_string(row.spec.m);
                csv += ',';
                csv += sign_char(row.spec.sign);
                csv += ',';
                csv += CoincidenceRecord::labels()[static_cast<std::size_t>(k)];
                csv += ',' + fmt6(row.ideal[k]) + ',' + fmt6(row.empirical[k]) + '\n';
            }
        csv += "# average_success_mass_empirical=" + fmt6(avg_mass) + "\n";
        csv += "# average_success_mass_model=" + fmt6(avg_model) + "\n";
        csv += "# majority_rule_success_rate=" + fmt6(majority_rate) + "\n";
        csv += "# reference_average_success=" + fmt6(kAverageSuccessRef) + "\n";
        csv += "# reference_tolerance=" + fmt6(kAverageSuccessTolRef) + "\n";
        a.g.emit(csv);
        return;
    }

    json per_spec = json::array();
    for (const Row& row : rows) {
        json counts;
        for (int k = 0; k < 4; ++k)
            counts[CoincidenceRecord::labels()[static_cast<std::size_t>(k)]] = round6(row.empirical[k]);
        per_spec.push_back(json{{"m", row.spec.m},
                                {"sign", std::string(1, sign_char(row.spec.sign))},
                                {"empirical", std::move(counts)},
                                {"success_mass", round6(row.success_mass)},
                                {"model_success", round6(row.model_success)},
                                {"majority_correct", row.majority_correct}});
    }
    json out{{"per_spec", std::move(per_spec)},
             {"average_success_mass_empirical", round6(avg_mass)},
             {"average_success_mass_model", round6(avg_model)},
             {"majority_rule_success_rate", round6(majority_rate)},
             {"reference_average_success", kAverageSuccessRef},
             {"reference_tolerance", kAverageSuccessTolRef},
             {"config", cfg_echo}};
    a.g.emit(out.dump(2) + "\n");
}

// ---- hom ----------------------------------------------------------------

struct HomArgs {
    GlobalOpts g;
    double beta0 = 1.0;
    double tau_c = 1.0;
    double tau_min = -3.0;
    double tau_max = 3.0;
    int points = 121;
    CLI::Option* beta0_opt = nullptr;
    CLI::Option* tau_c_opt = nullptr;
    CLI::Option* tau_min_opt = nullptr;
    CLI::Option* tau_max_opt = nullptr;
    CLI::Option* points_opt = nullptr;
};

void cmd_hom(HomArgs& a) {
    a.g.load_config();
    const json& cfg = a.g.config;
    merge(a.beta0_opt, cfg, "beta0", a.beta0);
    merge(a.tau_c_opt, cfg, "tau_c", a.tau_c);
    merge(a.tau_min_opt, cfg, "tau_min", a.tau_min);
    merge(a.tau_max_opt, cfg, "tau_max", a.tau_max);
    merge(a.points_opt, cfg, "points", a.points);
    const std::string format = a.g.resolve_format("csv", true);
    if (a.points < 2) throw std::invalid_argument("hom: need at least 2 grid points");
    if (a.tau_max <= a.tau_min) throw std::invalid_argument("hom: tau_max must exceed tau_min");

    std::vector<double> delays(static_cast<std::size_t>(a.points));
    for (int i = 0; i < a.points; ++i)
        delays[static_cast<std::size_t>(i)] =
            a.tau_min + (a.tau_max - a.tau_min) * i / (a.points - 1);
    const std::vector<HomPoint> scan = hom_dip_scan(delays, a.tau_c, a.beta0);
    const double p_zero = hom_dip_scan({0.0}, a.tau_c, a.beta0)[0].coincidence;
    const double p_far = hom_dip_scan({1e9 * a.tau_c}, a.tau_c, a.beta0)[0].coincidence;
    const double visibility = (p_far - p_zero) / p_far;

    if (format == "csv") {
        std::string csv;
        csv += "# command=hom\n";
        csv += "# beta0=" + fmt6(a.beta0) + "\n";
        csv += "# tau_c=" + fmt6(a.tau_c) + "\n";
        csv += "# visibility=" + fmt6(visibility) + "\n";
        csv += "# reference_visibility=" + fmt6(kHomVisibilityRef) + "\n";
        csv += "delay,coincidence\n";
        for (const HomPoint& p : scan) csv += fmt6(p.delay) + ',' + fmt6(p.coincidence) + '\n';
        a.g.emit(csv);
        return;
    }

    json pts = json::array();
    for (const HomPoint& p : scan)
        pts.push_back(json{{"delay", p.delay}, {"coincidence", round6(p.coincidence)}});
    json out{{"points", std::move(pts)},
             {"visibility", round6(visibility)},
             {"reference_visibility", kHomVisibilityRef},
             {"reference_tolerance", kHomVisibilityTolRef},
             {"config", config_echo(a.g, "hom",
                                    json{{"beta0", a.beta0},
                                         {"tau_c", a.tau_c},
                                         {"tau_min", a.tau_min},
                                         {"tau_max", a.tau_max},
                                         {"points", a.points}})}};
    a.g.emit(out.dump(2) + "\n");
}

// ---- lower-bound ----------------------------------------------------------

struct LowerBoundArgs {
    GlobalOpts g;
    int d = 4;
    CLI::Option* d_opt = nullptr;
};

void cmd_lower_bound(LowerBoundArgs& a) {
    a.g.load_config();
    merge(a.d_opt, a.g.config, "d", a.d);
    a.g.resolve_format("json", false);
    json out = certificate_to_json(classical_one_query_lower_bound(a.d));
    out["config"] = config_echo(a.g, "lower-bound", json{{"d", a.d}});
    a.g.emit(out.dump(2) + "\n");
}

// ---- tomo -----------------------------------------------------------------

struct TomoArgs {
    GlobalOpts g;
    NoiseOpts noise;
    std::string counts_path;
    bool simulate = false;
    std::int64_t shots_per_setting = 10000;
    int settings_size = 36;
    CLI::Option* counts_opt = nullptr;
    CLI::Option* shots_opt = nullptr;
    CLI::Option* settings_opt = nullptr;
};

void cmd_tomo(TomoArgs& a) {
    a.g.load_config();
    const json& cfg = a.g.config;
    merge(a.counts_opt, cfg, "counts", a.counts_path);
    merge(a.shots_opt, cfg, "shots_per_setting", a.shots_per_setting);
    merge(a.settings_opt, cfg, "settings", a.settings_size);
    const NoiseParams noise = a.noise.resolve(cfg);
    a.g.resolve_format("json", false);

    CountsTable table;
    json source;
    if (!a.counts_path.empty()) {
        table = counts_table_from_json(load_json_file(a.counts_path));
        source = json{{"counts_file", a.counts_path}};
    } else if (a.simulate) {
        if (a.settings_size != 36 && a.settings_size != 16)
            throw std::invalid_argument("tomo: --settings must be 36 or 16");
        const std::vector<TomoSetting> settings =
            a.settings_size == 36 ? overcomplete_settings() : minimal_settings();
        const DensityMatrix rho = cnot_bell_test(noise);
        if (a.shots_per_setting == 0)
            table = exact_counts(rho, settings, 1.0);
        else
            table = simulate_counts(rho, settings, a.shots_per_setting, a.g.seed);
        source = json{{"simulated", true},
                      {"settings", a.settings_size},
                      {"shots_per_setting", a.shots_per_setting},
                      {"noise", noise_to_json(noise)}};
    } else {
        throw std::invalid_argument("tomo: pass --counts FILE or --simulate");
    }

    const MleResult res = mle_reconstruct(table);
    const double fid = fidelity(res.rho, bell_hv_plus());
    json out{{"rho", matrix_to_json(res.rho.mat)},
             {"iterations", res.iterations},
             {"converged", res.converged},
             {"final_loglik", res.final_loglik},
             {"fidelity_vs_bell", round6(fid)},
             {"reference_fidelity", kBellFidelityRef},
             {"reference_tolerance", kBellFidelityTolRef},
             {"source", std::move(source)},
             {"config", config_echo(a.g, "tomo", json{{"settings", a.settings_size}})}};
    a.g.emit(out.dump(2) + "\n");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Single-qudit parity-finding simulator and four-level photonic hardware model"};
    app.require_subcommand(1);

    RunArgs run_args;
    CLI::App* run_cmd = app.add_subcommand(
        "run", "one algorithm run: ideal for any d, exact-model or sampled for d=4");
    run_args.g.register_on(run_cmd);
    run_args.noise.register_on(run_cmd);
    run_args.d_opt = run_cmd->add_option("--d", run_args.d, "qudit dimension (>= 3)");
    run_args.m_opt = run_cmd->add_option("--m", run_args.m, "permutation offset in [0, d)");
    run_args.sign_opt = run_cmd->add_option("--sign", run_args.sign, "permutation sign: + or -");
    run_args.shots_opt =
        run_cmd->add_option("--shots", run_args.shots, "coincidences to sample (0 = no sampling)");
    run_cmd->callback([&] { cmd_run(run_args); });

    SweepArgs sweep_args;
    CLI::App* sweep_cmd =
        app.add_subcommand("sweep", "all eight d=4 permutations with the noise model");
    sweep_args.g.register_on(sweep_cmd);
    sweep_args.noise.register_on(sweep_cmd);
    sweep_args.shots_opt =
        sweep_cmd->add_option("--shots", sweep_args.shots, "coincidences per permutation");
    sweep_cmd->callback([&] { cmd_sweep(sweep_args); });

    HomArgs hom_args;
    CLI::App* hom_cmd = app.add_subcommand("hom", "two-photon dip scan over a delay grid");
    hom_args.g.register_on(hom_cmd);
    hom_args.beta0_opt = hom_cmd->add_option("--beta0", hom_args.beta0, "zero-delay overlap");
    hom_args.tau_c_opt = hom_cmd->add_option("--tau-c", hom_args.tau_c, "coherence time (> 0)");
    hom_args.tau_min_opt = hom_cmd->add_option("--tau-min", hom_args.tau_min, "first delay");
    hom_args.tau_max_opt = hom_cmd->add_option("--tau-max", hom_args.tau_max, "last delay");
    hom_args.points_opt = hom_cmd->add_option("--points", hom_args.points, "grid size (>= 2)");
    hom_cmd->callback([&] { cmd_hom(hom_args); });

    LowerBoundArgs lb_args;
    CLI::App* lb_cmd = app.add_subcommand(
        "lower-bound", "exhaustive one-query classical strategy certificate, d in [3, 8]");
    lb_args.g.register_on(lb_cmd);
    lb_args.d_opt = lb_cmd->add_option("--d", lb_args.d, "dimension to certify");
    lb_cmd->callback([&] { cmd_lower_bound(lb_args); });

    TomoArgs tomo_args;
    CLI::App* tomo_cmd =
        app.add_subcommand("tomo", "state reconstruction from counts (file or simulated)");
    tomo_args.g.register_on(tomo_cmd);
    tomo_args.noise.register_on(tomo_cmd);
    tomo_args.counts_opt =
        tomo_cmd->add_option("--counts", tomo_args.counts_path, "counts table JSON file");
    tomo_cmd->add_flag("--simulate", tomo_args.simulate,
                       "generate counts from the noisy entangling-gate model");
    tomo_args.shots_opt = tomo_cmd->add_option("--shots-per-setting", tomo_args.shots_per_setting,
                                               "samples per setting (0 = exact probabilities)");
    tomo_args.settings_opt =
        tomo_cmd->add_option("--settings", tomo_args.settings_size, "settings count: 36 or 16");
    tomo_cmd->callback([&] { cmd_tomo(tomo_args); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
