#pragma once

#include <cstddef>
#include <cstdio>
#include <string>
#include <utility>
#include <vector>

#include "rupshock/inference.hpp"
#include "rupshock/rng.hpp"
#include "rupshock/rup.hpp"

namespace rupshock {

// Bar-loading scenario: identical metal bars tested at increasing loads until
// each one ruptures. Every load level carries an urn; surviving a load is a
// white draw, cracking is a black draw, and each bar's test sequence is one
// 0-block of the chain.
struct BarLoadingResult {
    FailureRecord record;
    std::vector<double> failure_loads;
    PredictiveDistribution next_bar;
    BetaStacySpec posterior;
    // Predictive distribution for the next bar recomputed under alternative
    // reinforcement magnitudes: small s leans on the prior, large s on the
    // observed bars.
    std::vector<std::pair<double, PredictiveDistribution>> s_sensitivity;
};

// Eight load levels; prior hazard rises with the load and the top level is
// certain rupture (no white balls there), so every bar fails on the grid.
inline RupConfig bar_loading_default_config(double s = 1.0) {
    StateGrid grid({10, 20, 30, 40, 50, 60, 70, 80});
    std::vector<UrnComposition> priors;
    priors.reserve(grid.size());
    for (std::size_t i = 0; i + 1 < grid.size(); ++i)
        priors.push_back(UrnComposition::two_color(6.0, 1.0 + static_cast<double>(i)));
    priors.push_back(UrnComposition::two_color(0.0, 8.0));
    return RupConfig(std::move(grid), std::move(priors), s);
}

inline BarLoadingResult run_bar_loading_demo(const RupConfig& cfg, std::size_t bars,
                                             RngStream& rng) {
    SystemsRun run = run_systems(cfg, bars, rng, /*keep_path=*/false);
    BarLoadingResult out{std::move(run.record),
                         {},
                         predictive_distribution(cfg, FailureRecord{}),
                         beta_stacy_prior(cfg),
                         {}};
    out.failure_loads.reserve(bars);
    for (std::size_t xi : out.record.states) out.failure_loads.push_back(cfg.grid().value(xi));
    out.next_bar = predictive_distribution(cfg, out.record);
    out.posterior = beta_stacy_posterior(beta_stacy_prior(cfg), out.record);
    for (double factor : {0.25, 1.0, 4.0})
        out.s_sensitivity.emplace_back(cfg.s() * factor,
                                       predictive_distribution(cfg.with_s(cfg.s() * factor),
                                                               out.record));
    return out;
}

namespace detail {

inline std::string fixed12(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

}  // namespace detail

inline std::string format_bar_loading_report(const BarLoadingResult& r) {
    std::string out;
    out += "bar-loading demo\n";
    out += "================\n";
    out += "observed ruptures:\n";
    for (std::size_t i = 0; i < r.failure_loads.size(); ++i)
        out += "  bar " + std::to_string(i + 1) + " failed at load " +
               detail::fixed12(r.failure_loads[i]) + "\n";
    out += "\npredictive distribution for the next bar:\n";
    for (std::size_t j = 0; j < r.next_bar.pmf.size(); ++j)
        out += "  P(fail at " + detail::fixed12(r.next_bar.grid.value(j)) +
               ") = " + detail::fixed12(r.next_bar.pmf[j]) + "\n";
    out += "  P(beyond grid) = " + detail::fixed12(r.next_bar.tail) + "\n";
    out += "  mean failure load on grid = " + detail::fixed12(r.next_bar.mean_on_grid) + "\n";
    out += "\nposterior hazard shapes (failure, survival) per load:\n";
    for (std::size_t j = 0; j < r.posterior.states(); ++j)
        out += "  " + detail::fixed12(r.posterior.grid().value(j)) + ": (" +
               detail::fixed12(r.posterior.failure_shape(j)) + ", " +
               detail::fixed12(r.posterior.survival_shape(j)) + "), hazard mean " +
               detail::fixed12(r.posterior.hazard_mean(j)) + "\n";
    out += "\nreinforcement calibration (same record, varying s):\n";
    for (const auto& [s, dist] : r.s_sensitivity) {
        out += "  s = " + detail::fixed12(s) + ": pmf = [";
        for (std::size_t j = 0; j < dist.pmf.size(); ++j) {
            if (j) out += ", ";
            out += detail::fixed12(dist.pmf[j]);
        }
        out += "], tail = " + detail::fixed12(dist.tail) + "\n";
    }
    return out;
}

}  // namespace rupshock
