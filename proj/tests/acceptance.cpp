// Acceptance suite: runs every release criterion at its stated tolerance and
// prints one [PASS]/[FAIL] line per criterion. Exit status is the number of
// failed criteria. argv[1] must point at the CLI binary (used by the
// determinism criterion).

#include <boost/math/special_functions/beta.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "rupshock/demo.hpp"
#include "rupshock/inference.hpp"
#include "rupshock/io.hpp"
#include "rupshock/monte_carlo.hpp"
#include "rupshock/rng.hpp"
#include "rupshock/rup.hpp"
#include "rupshock/shocks.hpp"
#include "rupshock/stats.hpp"

using namespace rupshock;
namespace fs = std::filesystem;

namespace {

int g_failures = 0;

struct Check {
    bool ok = true;
    std::string detail;

    void require(bool cond, const std::string& what) {
        if (!cond && ok) {
            ok = false;
            detail = what;
        }
    }
};

template <typename Fn>
void criterion(int id, const std::string& name, double time_limit_s, Fn&& body) {
    Check c;
    const auto t0 = std::chrono::steady_clock::now();
    try {
        body(c);
    } catch (const std::exception& e) {
        c.require(false, std::string("unexpected exception: ") + e.what());
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (time_limit_s > 0.0)
        c.require(secs < time_limit_s,
                  "runtime " + std::to_string(secs) + " s exceeded " +
                      std::to_string(time_limit_s) + " s");
    std::ostringstream line;
    line << (c.ok ? "[PASS]" : "[FAIL]") << " criterion " << id << ": " << name;
    if (!c.ok) line << " -- " << c.detail;
    line.setf(std::ios::fixed);
    line.precision(2);
    line << " (" << secs << " s)";
    std::cout << line.str() << "\n";
    if (!c.ok) ++g_failures;
}

RupConfig symmetric_config(std::size_t states, double s = 1.0) {
    return RupConfig::uniform_priors(StateGrid::indexed(states), 1.0, 1.0, s);
}

struct RandomCase {
    RupConfig config;
    FailureRecord record;
};

RandomCase random_case(RngStream& rng) {
    const std::size_t states = 1 + static_cast<std::size_t>(rng.next_double() * 16.0);
    std::vector<double> values(states);
    double v = rng.uniform(-5.0, 5.0);
    for (auto& x : values) {
        x = v;
        v += rng.uniform(0.1, 3.0);
    }
    std::vector<UrnComposition> priors;
    priors.reserve(states);
    for (std::size_t i = 0; i < states; ++i)
        priors.push_back(
            UrnComposition::two_color(rng.uniform(0.05, 10.0), rng.uniform(0.05, 10.0)));
    RupConfig cfg(StateGrid(std::move(values)), std::move(priors), rng.uniform(0.1, 5.0));
    FailureRecord record;
    const std::size_t m = static_cast<std::size_t>(rng.next_double() * 21.0);
    for (std::size_t p = 0; p < m; ++p)
        record.states.push_back(static_cast<std::size_t>(rng.next_double() * states));
    return {std::move(cfg), std::move(record)};
}

// --- criterion bodies --------------------------------------------------------

void normalization(Check& c) {
    RngStream rng(1001, 0);
    double worst = 0.0;
    for (int k = 0; k < 1000; ++k) {
        const RandomCase rc = random_case(rng);
        const PredictiveDistribution d = predictive_distribution(rc.config, rc.record);
        double total = d.tail;
        for (double p : d.pmf) total += p;
        worst = std::max(worst, std::abs(total - 1.0));
    }
    c.require(worst < 1e-12, "max |sum - 1| = " + std::to_string(worst));
}

void predictive_oracle(Check& c) {
    const RupConfig cfg = symmetric_config(2);
    const FailureRecord record{{1}};
    const McReport rep = estimate_predictive(cfg, record, 100000, RngStream(1002, 0));
    c.require(std::abs(rep.analytic[0] - 1.0 / 3.0) < 1e-12, "analytic v_0 != 1/3");
    c.require(std::abs(rep.analytic[1] - 4.0 / 9.0) < 1e-12, "analytic v_1 != 4/9");
    c.require(std::abs(rep.analytic[2] - 2.0 / 9.0) < 1e-12, "analytic tail != 2/9");
    c.require(rep.pass, "max |z| = " + std::to_string(rep.max_abs_z));
}

void first_system_law(Check& c) {
    RupConfig cfg(StateGrid::indexed(6),
                  {UrnComposition::two_color(1, 1), UrnComposition::two_color(3, 1),
                   UrnComposition::two_color(2, 2), UrnComposition::two_color(5, 1),
                   UrnComposition::two_color(1, 3), UrnComposition::two_color(4, 2)},
                  1.0);
    const FailureRecord empty;

    // Symbolic reduction: the m = 0 predictive must equal an independent
    // evaluation of the first-system law to 1e-15.
    for (std::size_t r = 0; r < cfg.states(); ++r) {
        const auto& urn_r = cfg.prior(r);
        double expected = urn_r.black() / (urn_r.white() + urn_r.black());
        for (std::size_t j = 0; j < r; ++j) {
            const auto& urn_j = cfg.prior(j);
            expected *= urn_j.white() / (urn_j.white() + urn_j.black());
        }
        c.require(std::abs(predictive_pmf(cfg, empty, r) - expected) <= 1e-15,
                  "reduction mismatch at state " + std::to_string(r));
    }

    // And the simulated first-block law must match within 3 standard errors.
    const std::size_t states = cfg.states();
    const int n = 100000;
    std::vector<std::uint64_t> counts(states + 1, 0);
    for (int i = 0; i < n; ++i) {
        RngStream rng(1003, static_cast<std::uint64_t>(i));
        RupState state(cfg, false);
        const BlockRun run = run_block(state, rng);
        ++counts[run.escaped ? states : run.block.endpoint()];
    }
    const PredictiveDistribution d = predictive_distribution(cfg, empty);
    for (std::size_t r = 0; r <= states; ++r) {
        const double expected = r < states ? d.pmf[r] : d.tail;
        const double p_hat = double(counts[r]) / n;
        const double se = std::sqrt(p_hat * (1.0 - p_hat) / n);
        c.require(std::abs(p_hat - expected) < 3.0 * se,
                  "simulation off at outcome " + std::to_string(r));
    }
}

void exchangeability(Check& c) {
    RupConfig cfg(StateGrid::indexed(4),
                  {UrnComposition::two_color(1, 1), UrnComposition::two_color(2, 1),
                   UrnComposition::two_color(1, 2), UrnComposition::two_color(3, 1)},
                  1.0);

    // Analytic: chaining the predictive in either order gives the same joint.
    double worst = 0.0;
    for (std::size_t a = 0; a < 4; ++a) {
        for (std::size_t b = 0; b < 4; ++b) {
            const double p_ab = predictive_pmf(cfg, FailureRecord{}, a) *
                                predictive_pmf(cfg, FailureRecord{{a}}, b);
            const double p_ba = predictive_pmf(cfg, FailureRecord{}, b) *
                                predictive_pmf(cfg, FailureRecord{{b}}, a);
            worst = std::max(worst, std::abs(p_ab - p_ba));
        }
    }
    c.require(worst < 1e-12, "analytic joint asymmetry " + std::to_string(worst));

    // Empirical: joint frequencies of consecutive completed blocks.
    const int n = 100000;
    std::uint64_t joint[4][4] = {};
    for (int i = 0; i < n; ++i) {
        RngStream rng(1004, static_cast<std::uint64_t>(i));
        RupState state(cfg, false);
        const BlockRun first = run_block(state, rng);
        if (first.escaped) continue;
        const BlockRun second = run_block(state, rng);
        if (second.escaped) continue;
        ++joint[first.block.endpoint()][second.block.endpoint()];
    }
    for (std::size_t a = 0; a < 4; ++a) {
        for (std::size_t b = a + 1; b < 4; ++b) {
            const double total = double(joint[a][b] + joint[b][a]);
            if (total == 0.0) continue;
            const double z = (double(joint[a][b]) - double(joint[b][a])) / std::sqrt(total);
            c.require(std::abs(z) < 3.0, "pair (" + std::to_string(a) + "," + std::to_string(b) +
                                             ") |z| = " + std::to_string(std::abs(z)));
        }
    }
}

void conjugacy(Check& c) {
    RupConfig cfg(StateGrid::indexed(4),
                  {UrnComposition::two_color(2, 1), UrnComposition::two_color(1, 1),
                   UrnComposition::two_color(3, 2), UrnComposition::two_color(1, 3)},
                  2.0);
    const FailureRecord record{{1, 3, 1, 0}};
    const SufficientCounts counts = sufficient_counts(record, cfg.grid());
    const BetaStacySpec post = beta_stacy_posterior(beta_stacy_prior(cfg), record);

    // Shapes equal (b + s d)/s and (w + s f)/s, exactly.
    for (std::size_t j = 0; j < cfg.states(); ++j) {
        const double a_ref =
            (cfg.prior(j).black() + cfg.s() * double(counts.failed_at[j])) / cfg.s();
        const double b_ref =
            (cfg.prior(j).white() + cfg.s() * double(counts.survived_past[j])) / cfg.s();
        c.require(post.failure_shape(j) == a_ref, "failure shape mismatch at " + std::to_string(j));
        c.require(post.survival_shape(j) == b_ref,
                  "survival shape mismatch at " + std::to_string(j));
    }

    // Sequential two-batch update equals the one-shot update, exactly.
    const FailureRecord first{{1, 3}};
    const FailureRecord second{{1, 0}};
    const BetaStacySpec sequential =
        beta_stacy_posterior(beta_stacy_posterior(beta_stacy_prior(cfg), first), second);
    c.require(sequential == post, "two-batch update differs from one-shot");

    // Posterior mean CDF equals the predictive CDF, state by state.
    const std::vector<double> cdf = mean_cdf(post);
    for (std::size_t r = 0; r < cfg.states(); ++r)
        c.require(std::abs(cdf[r] - (1.0 - predictive_survival(cfg, counts, r))) < 1e-12,
                  "posterior-predictive identity off at " + std::to_string(r));
}

void beta_stacy_sampling(Check& c) {
    const RupConfig cfg(StateGrid::indexed(4),
                        {UrnComposition::two_color(2, 1), UrnComposition::two_color(1, 1),
                         UrnComposition::two_color(1, 2), UrnComposition::two_color(2, 2)},
                        0.5);
    const BetaStacySpec post =
        beta_stacy_posterior(beta_stacy_prior(cfg), FailureRecord{{1, 2, 1, 3, 0}});
    const std::vector<double> expected = mean_cdf(post);

    const int n = 100000;
    const std::size_t states = post.states();
    std::vector<double> sum(states, 0.0), sumsq(states, 0.0);
    std::uint64_t violations = 0;
    for (int i = 0; i < n; ++i) {
        RngStream rng(1006, static_cast<std::uint64_t>(i));
        const std::vector<double> cdf = sample_cdf(post, rng);
        double prev = 0.0;
        for (std::size_t j = 0; j < states; ++j) {
            if (cdf[j] < prev || cdf[j] > 1.0) ++violations;
            prev = cdf[j];
            sum[j] += cdf[j];
            sumsq[j] += cdf[j] * cdf[j];
        }
    }
    c.require(violations == 0, std::to_string(violations) + " monotonicity violations");
    for (std::size_t j = 0; j < states; ++j) {
        const double mean = sum[j] / n;
        const double sd = std::sqrt((sumsq[j] / n - mean * mean) / n);
        c.require(std::abs(mean - expected[j]) < 3.0 * sd,
                  "sampled mean off at state " + std::to_string(j));
    }
}

void polya_limit_law(Check& c) {
    const int replicates = 10000;
    const int horizon = 10000;
    std::vector<double> z(replicates);
    parallel_for_n(replicates, [&](std::size_t i) {
        RngStream rng(1007, static_cast<std::uint64_t>(i));
        UrnComposition urn = UrnComposition::two_color(3, 1);
        for (int t = 0; t < horizon; ++t) urn = polya_draw(urn, 1.0, rng).second;
        z[i] = urn.black() / urn.total();
    });
    const double d = ks_distance(z, [](double x) { return boost::math::ibeta(1.0, 3.0, x); });
    c.require(d < 0.02, "KS distance " + std::to_string(d));
}

void ubgesm_equivalence(Check& c) {
    const UbgesmSpec spec(UrnComposition({8, 1, 1}), 2.0, 1.0);
    const ReinforcementMatrix m = spec.matrix();
    const int n = 100000;
    const std::size_t cap = 10000;
    const std::size_t bins = 21;  // lifetimes 1..20 plus everything longer

    std::vector<std::uint64_t> chain_life(n, 0), urn_life(n, 0);
    parallel_for_n(n, [&](std::size_t i) {
        RngStream a(1008, static_cast<std::uint64_t>(i));
        try {
            chain_life[i] = ubgesm_chain(spec, a, cap).failure_step;
        } catch (const error&) {
            chain_life[i] = cap + 1;
        }
        RngStream b(1009, static_cast<std::uint64_t>(i));
        try {
            urn_life[i] = ubgesm_single_urn(spec.initial, m, b, cap);
        } catch (const error&) {
            urn_life[i] = cap + 1;
        }
    });
    std::vector<std::uint64_t> x(bins, 0), y(bins, 0);
    for (int i = 0; i < n; ++i) {
        ++x[chain_life[i] <= 20 ? chain_life[i] - 1 : 20];
        ++y[urn_life[i] <= 20 ? urn_life[i] - 1 : 20];
    }

    // Two-sample chi-squared against the pooled distribution (equal sizes).
    double stat = 0.0;
    std::size_t used = 0;
    for (std::size_t b = 0; b < bins; ++b) {
        const double total = double(x[b] + y[b]);
        if (total == 0.0) continue;
        ++used;
        const double expected = total / 2.0;
        stat += (double(x[b]) - expected) * (double(x[b]) - expected) / expected;
        stat += (double(y[b]) - expected) * (double(y[b]) - expected) / expected;
    }
    const double dof = double(used - 1);
    const double p_value = boost::math::gamma_q(dof / 2.0, stat / 2.0);
    c.require(p_value > 0.01,
              "chi2 p = " + std::to_string(p_value) + " (stat " + std::to_string(stat) + ")");
}

void generalized_dominance(Check& c) {
    const ShockStream stream{ValueLaw::exponential(1.0), ValueLaw::exponential(1.0)};
    const double level = 2.0;
    const ThresholdSchedule schedule(level, 1.0, {2.0, 1.6, 1.3, 1.1, 1.0});
    const int n = 10000;
    int violations = 0;
    for (int i = 0; i < n; ++i) {
        RngStream a(1010, static_cast<std::uint64_t>(i));
        RngStream b(1010, static_cast<std::uint64_t>(i));
        const std::size_t clas = simulate_classical(stream, level, a).failure_index;
        const std::size_t gen = simulate_generalized(stream, schedule, b).failure_index;
        if (gen > clas) ++violations;
    }
    c.require(violations == 0, std::to_string(violations) + " dominance violations");
}

// --- CLI determinism ----------------------------------------------------------

std::string g_cli;
fs::path g_dir;

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

int run_cli(const std::string& args) {
    const std::string cmd = "\"" + g_cli + "\" " + args + " >/dev/null 2>&1";
    const int rc = std::system(cmd.c_str());
    return rc < 0 ? rc : WEXITSTATUS(rc);
}

void cli_determinism(Check& c) {
    c.require(!g_cli.empty(), "no CLI path given (argv[1])");
    if (g_cli.empty()) return;

    std::error_code ec;
    fs::remove_all(g_dir, ec);
    fs::create_directories(g_dir);
    const std::string cfg = (g_dir / "config.json").string();
    const std::string data = (g_dir / "data.csv").string();
    {
        std::ofstream out(cfg);
        out << R"({
            "grid": [0, 1, 2, 3],
            "priors": {"white": 1, "black": 1},
            "s": 1.0,
            "systems": 2,
            "shock": {
                "failure_level": 2.0,
                "magnitude": {"kind": "exponential", "rate": 1.0},
                "interarrival": {"kind": "exponential", "rate": 1.0},
                "schedule": {"damage_boundary": 1.0, "alpha": [2.0, 1.5, 1.2, 1.0]}
            },
            "ubgesm": {"initial": [8, 1, 1], "s": 2.0, "p": 1.0, "max_steps": 1000000}
        })";
    }
    {
        std::ofstream out(data);
        out << "system_id,failure_state_index\nsys1,1\nsys2,3\nsys3,1\n";
    }

    const std::vector<std::pair<std::string, std::string>> commands = {
        {"sim_rup", "simulate --config " + cfg + " --model rup --seed 7 --replicates 3"},
        {"sim_classical",
         "simulate --config " + cfg + " --model classical --seed 7 --replicates 5 --trajectories"},
        {"sim_generalized",
         "simulate --config " + cfg + " --model generalized --seed 7 --replicates 5"},
        {"sim_ubgesm", "simulate --config " + cfg + " --model ubgesm --seed 7 --replicates 5"},
        {"infer", "infer --config " + cfg + " --data " + data},
        {"posterior", "posterior --config " + cfg + " --data " + data + " --samples 3 --seed 7"},
        {"validate",
         "validate --config " + cfg + " --data " + data + " --replicates 5000 --seed 7"},
        {"demo", "demo bar-loading --bars 4 --seed 7"},
    };
    for (const auto& [name, args] : commands) {
        const fs::path out_a = g_dir / (name + "_a.out");
        const fs::path out_b = g_dir / (name + "_b.out");
        const int rc_a = run_cli(args + " --out " + out_a.string());
        const int rc_b = run_cli(args + " --out " + out_b.string());
        c.require(rc_a == 0, name + " exited " + std::to_string(rc_a));
        c.require(rc_b == 0, name + " rerun exited " + std::to_string(rc_b));
        const std::string bytes_a = slurp(out_a);
        c.require(!bytes_a.empty(), name + " produced no output");
        c.require(bytes_a == slurp(out_b), name + " output differs across reruns");
    }

    // Exit-code contract: validation failure is 1, input errors are 2.
    c.require(run_cli("validate --config " + cfg + " --data " + data +
                      " --replicates 5000 --seed 7 --z-bound 1e-9 --out " +
                      (g_dir / "zfail.out").string()) == 1,
              "forced validation failure should exit 1");
    c.require(run_cli("infer --config " + cfg + " --data " + (g_dir / "missing.csv").string() +
                      " --out " + (g_dir / "missing.out").string()) == 2,
              "missing data file should exit 2");
    {
        std::ofstream out(g_dir / "broken.json");
        out << "{\"grid\": [0, 1], \"s\": }";
    }
    c.require(run_cli("infer --config " + (g_dir / "broken.json").string() + " --data " + data +
                      " --out " + (g_dir / "broken.out").string()) == 2,
              "malformed config should exit 2");
}

}  // namespace

int main(int argc, char** argv) {
    if (argc > 1) g_cli = argv[1];
    g_dir = fs::temp_directory_path() / "rupshock-acceptance";

    criterion(1, "predictive normalization over 1000 random configurations", 10.0, normalization);
    criterion(2, "conditional predictive oracle (1/3, 4/9, 2/9) at 1e5 replicates", 30.0,
              predictive_oracle);
    criterion(3, "first-system law: exact reduction and 1e5-replicate simulation", 0.0,
              first_system_law);
    criterion(4, "exchangeability of the first two failure states", 0.0, exchangeability);
    criterion(5, "conjugate posterior closure and posterior-predictive identity", 0.0, conjugacy);
    criterion(6, "sampled random CDFs: monotone, bounded, correct mean", 0.0, beta_stacy_sampling);
    criterion(7, "Polya limit law: KS distance to Beta(1,3) below 0.02", 120.0, polya_limit_law);
    criterion(8, "urn-chain vs single-urn lifetime equivalence (chi-squared, 0.01)", 0.0,
              ubgesm_equivalence);
    criterion(9, "generalized failure dominates classical pathwise on shared shocks", 0.0,
              generalized_dominance);
    criterion(10, "CLI reruns with a fixed seed are byte-identical", 0.0, cli_determinism);

    if (g_failures == 0)
        std::cout << "all criteria passed\n";
    else
        std::cout << g_failures << " criteria failed\n";
    return g_failures;
}
