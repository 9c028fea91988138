#include <cstddef>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "rupshock/demo.hpp"
#include "rupshock/inference.hpp"
#include "rupshock/io.hpp"
#include "rupshock/monte_carlo.hpp"
#include "rupshock/rup.hpp"
#include "rupshock/shocks.hpp"

namespace {

// Exit codes: 0 success, 1 validation failure, 2 input error.
constexpr int exit_ok = 0;
constexpr int exit_validation_failed = 1;
constexpr int exit_input_error = 2;

void write_output(const std::string& out_path, const std::string& text) {
    if (out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(out_path, std::ios::binary);
    if (!out) rupshock::raise(rupshock::errc::parse_error, "cannot write '" + out_path + "'");
    out << text;
}

void write_json(const std::string& out_path, const rupshock::json& j) {
    write_output(out_path, j.dump(2) + "\n");
}

const rupshock::RupConfig& need_rup(const rupshock::AppConfig& cfg) {
    if (!cfg.rup)
        rupshock::raise(rupshock::errc::bad_config, "config is missing grid/priors/s");
    return *cfg.rup;
}

std::string color_letters(const std::vector<rupshock::ColorIndex>& trace) {
    std::string s;
    s.reserve(trace.size());
    for (auto c : trace) s += (c == rupshock::color::safe ? 's' : c == rupshock::color::risky ? 'r' : 'd');
    return s;
}

rupshock::json shock_run_json(const rupshock::ShockOutcome& o, bool trajectories) {
    rupshock::json run{{"tau", o.failure_index},
                       {"failure_time", o.failure_time},
                       {"damage_at_failure", o.damage_at_failure}};
    if (trajectories) {
        rupshock::json traj = rupshock::json::array();
        for (const auto& e : o.trajectory)
            traj.push_back({{"n", e.index},
                            {"magnitude", e.magnitude},
                            {"gap", e.gap},
                            {"elapsed", e.elapsed},
                            {"damage_before", e.damage_before},
                            {"threshold", e.threshold}});
        run["trajectory"] = std::move(traj);
    }
    return run;
}

int run_simulate(const std::string& config_path, const std::string& model, std::uint64_t seed,
                 std::size_t replicates, bool trajectories, const std::string& out_path) {
    using namespace rupshock;
    const AppConfig cfg = load_config(config_path);
    json out{{"command", "simulate"}, {"model", model}, {"seed", seed},
             {"replicates", replicates}};
    json runs = json::array();
    if (model == "rup") {
        const RupConfig& rup = need_rup(cfg);
        out["systems"] = cfg.systems;
        for (std::size_t i = 0; i < replicates; ++i) {
            RngStream rng(seed, i);
            SystemsRun r = run_systems(rup, cfg.systems, rng, /*keep_path=*/true);
            json values = json::array();
            for (std::size_t xi : r.record.states) values.push_back(rup.grid().value(xi));
            runs.push_back({{"record", r.record.states},
                            {"failure_states", std::move(values)},
                            {"path", std::vector<std::size_t>(r.state.path().begin(),
                                                              r.state.path().end())}});
        }
    } else if (model == "classical" || model == "generalized") {
        if (!cfg.shock) raise(errc::bad_config, "config is missing the shock section");
        const ShockModelConfig& sm = *cfg.shock;
        ShockSimOptions opt{sm.max_shocks, trajectories};
        if (model == "generalized" && !sm.schedule)
            raise(errc::bad_config, "generalized model needs shock.schedule");
        for (std::size_t i = 0; i < replicates; ++i) {
            RngStream rng(seed, i);
            const ShockOutcome o =
                model == "classical"
                    ? simulate_classical(sm.stream, sm.failure_level, rng, opt)
                    : simulate_generalized(sm.stream, *sm.schedule, rng, opt);
            runs.push_back(shock_run_json(o, trajectories));
        }
    } else if (model == "ubgesm") {
        if (!cfg.ubgesm) raise(errc::bad_config, "config is missing the ubgesm section");
        for (std::size_t i = 0; i < replicates; ++i) {
            RngStream rng(seed, i);
            const UbgesmRun r = ubgesm_chain(*cfg.ubgesm, rng, cfg.ubgesm_max_steps);
            runs.push_back({{"lifetime", r.failure_step}, {"trace", color_letters(r.trace)}});
        }
    } else {
        raise(errc::bad_config, "unknown model '" + model + "'");
    }
    out["runs"] = std::move(runs);
    write_json(out_path, out);
    return exit_ok;
}

int run_infer(const std::string& config_path, const std::string& data_path,
              const std::string& out_path) {
    using namespace rupshock;
    const AppConfig app = load_config(config_path);
    const RupConfig& rup = need_rup(app);
    const Dataset data = read_dataset_csv_file(data_path, rup.grid());
    const SufficientCounts counts = sufficient_counts(data.record, rup.grid());
    const PredictiveDistribution dist = predictive_distribution(rup, counts);
    std::vector<double> survival(rup.states());
    for (std::size_t r = 0; r < rup.states(); ++r)
        survival[r] = predictive_survival(rup, counts, r);
    json out = to_json(dist);
    out["command"] = "infer";
    out["survival"] = survival;
    out["systems_observed"] = counts.systems;
    out["survived_past"] = counts.survived_past;
    out["failed_at"] = counts.failed_at;
    write_json(out_path, out);
    return exit_ok;
}

int run_posterior(const std::string& config_path, const std::string& data_path,
                  std::size_t samples, std::uint64_t seed, const std::string& out_path) {
    using namespace rupshock;
    const AppConfig app = load_config(config_path);
    const RupConfig& rup = need_rup(app);
    const Dataset data = read_dataset_csv_file(data_path, rup.grid());
    const BetaStacySpec post = beta_stacy_posterior(beta_stacy_prior(rup), data.record);
    json out = to_json(post);
    out["command"] = "posterior";
    out["mean_cdf"] = mean_cdf(post);
    std::vector<double> hazard(post.states());
    for (std::size_t j = 0; j < post.states(); ++j) hazard[j] = post.hazard_mean(j);
    out["hazard_mean"] = hazard;
    if (samples > 0) {
        json drawn = json::array();
        for (std::size_t i = 0; i < samples; ++i) {
            RngStream rng(seed, i);
            drawn.push_back(sample_cdf(post, rng));
        }
        out["samples"] = std::move(drawn);
    }
    write_json(out_path, out);
    return exit_ok;
}

int run_validate(const std::string& config_path, const std::string& data_path,
                 std::size_t replicates, std::uint64_t seed, double z_bound,
                 const std::string& out_path) {
    using namespace rupshock;
    const AppConfig app = load_config(config_path);
    const RupConfig& rup = need_rup(app);
    const Dataset data = read_dataset_csv_file(data_path, rup.grid());
    const McReport rep =
        estimate_predictive(rup, data.record, replicates, RngStream(seed, 0), z_bound);
    json out = to_json(rep);
    out["command"] = "validate";
    write_json(out_path, out);
    return rep.pass ? exit_ok : exit_validation_failed;
}

int run_demo(std::size_t bars, std::uint64_t seed, double s, const std::string& out_path) {
    using namespace rupshock;
    RngStream rng(seed, 0);
    const RupConfig cfg = bar_loading_default_config(s);
    const BarLoadingResult result = run_bar_loading_demo(cfg, bars, rng);
    write_output(out_path, format_bar_loading_report(result));
    return exit_ok;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Shock-model simulation and predictive inference on reinforced urn chains"};
    app.require_subcommand(1);

    std::string config_path, data_path, out_path, model;
    std::uint64_t seed = 0;
    std::size_t replicates = 1;
    std::size_t samples = 0;
    std::size_t bars = 5;
    double z_bound = 3.0;
    double demo_s = 1.0;
    bool trajectories = false;

    auto* simulate = app.add_subcommand("simulate", "Simulate chain runs or shock streams");
    simulate->add_option("--config", config_path, "JSON run configuration")->required();
    simulate->add_option("--model", model, "classical|generalized|rup|ubgesm")->required();
    simulate->add_option("--seed", seed, "random seed (replicate i uses stream i)");
    simulate->add_option("--replicates", replicates, "independent runs");
    simulate->add_flag("--trajectories", trajectories, "include per-shock trajectories");
    simulate->add_option("--out", out_path, "output file (default stdout)");

    auto* infer = app.add_subcommand("infer", "Predictive distribution of the next failure");
    infer->add_option("--config", config_path)->required();
    infer->add_option("--data", data_path, "CSV of observed failures")->required();
    infer->add_option("--out", out_path);

    auto* posterior = app.add_subcommand("posterior", "Posterior hazard shapes and CDFs");
    posterior->add_option("--config", config_path)->required();
    posterior->add_option("--data", data_path)->required();
    posterior->add_option("--samples", samples, "number of sampled CDFs to emit");
    posterior->add_option("--seed", seed);
    posterior->add_option("--out", out_path);

    auto* validate = app.add_subcommand("validate", "Monte Carlo check of the predictive law");
    validate->add_option("--config", config_path)->required();
    validate->add_option("--data", data_path)->required();
    validate->add_option("--replicates", replicates)->default_val(std::size_t{100000});
    validate->add_option("--seed", seed);
    validate->add_option("--z-bound", z_bound, "pass when max |z| stays below this");
    validate->add_option("--out", out_path);

    auto* demo = app.add_subcommand("demo", "Shipped demo scenarios");
    demo->require_subcommand(1);
    auto* bar_loading = demo->add_subcommand("bar-loading", "Metal bars under increasing load");
    bar_loading->add_option("--bars", bars, "bars to test");
    bar_loading->add_option("--seed", seed);
    bar_loading->add_option("--s", demo_s, "reinforcement magnitude");
    bar_loading->add_option("--out", out_path);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return exit_input_error;
    }

    try {
        if (simulate->parsed())
            return run_simulate(config_path, model, seed, replicates, trajectories, out_path);
        if (infer->parsed()) return run_infer(config_path, data_path, out_path);
        if (posterior->parsed())
            return run_posterior(config_path, data_path, samples, seed, out_path);
        if (validate->parsed())
            return run_validate(config_path, data_path, replicates, seed, z_bound, out_path);
        if (bar_loading->parsed()) return run_demo(bars, seed, demo_s, out_path);
    } catch (const rupshock::error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_input_error;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_input_error;
    }
    return exit_input_error;
}
