#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "rupshock/errors.hpp"
#include "rupshock/inference.hpp"
#include "rupshock/rng.hpp"
#include "rupshock/rup.hpp"
#include "rupshock/stats.hpp"

namespace rupshock {

// Run fn(i) for every i in [0, n) across a small worker pool. Each call must
// only touch state owned by its own index; results are combined by the caller
// in index order, so the worker count never changes the outcome.
template <typename Fn>
void parallel_for_n(std::size_t n, Fn&& fn, unsigned threads = 0) {
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    if (threads <= 1 || n < 2 * threads) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) {
        const std::size_t lo = n * t / threads;
        const std::size_t hi = n * (t + 1) / threads;
        pool.emplace_back([lo, hi, &fn] {
            for (std::size_t i = lo; i < hi; ++i) fn(i);
        });
    }
    for (auto& th : pool) th.join();
}

// Deterministic conditioning on an observed record: apply its sufficient
// counts to the priors, giving the exact urn compositions any process path
// realizing that record would leave behind. By exchangeability this is
// equivalent to rejection on the prefix.
inline std::vector<UrnComposition> replay_posterior_urns(const RupConfig& cfg,
                                                         const FailureRecord& record) {
    const SufficientCounts counts = sufficient_counts(record, cfg.grid());
    std::vector<UrnComposition> urns;
    urns.reserve(cfg.states());
    for (std::size_t j = 0; j < cfg.states(); ++j)
        urns.push_back(UrnComposition::two_color(detail::post_white(cfg, counts, j),
                                                 detail::post_black(cfg, counts, j)));
    return urns;
}

inline RupConfig replayed_config(const RupConfig& cfg, const FailureRecord& record) {
    return cfg.with_priors(replay_posterior_urns(cfg, record));
}

// Monte Carlo check of the predictive law: replay the record onto the priors,
// simulate the next system's 0-block `replicates` times, and compare the
// outcome frequencies (each grid state, plus the beyond-the-grid tail)
// against the analytic predictive distribution.
//
// Replicate i draws from RngStream(rng.seed(), rng.stream() + i); the
// tally is an integer reduction, so the report is bit-stable across worker
// counts and reruns.
inline McReport estimate_predictive(const RupConfig& cfg, const FailureRecord& record,
                                    std::size_t replicates, const RngStream& rng,
                                    double z_bound = 3.0, unsigned threads = 0) {
    if (replicates < 1000) raise(errc::bad_config, "estimate_predictive needs >= 1000 replicates");
    const auto conditioned = std::make_shared<const RupConfig>(replayed_config(cfg, record));
    const std::size_t states = conditioned->states();

    std::vector<std::uint64_t> outcomes(replicates, 0);
    parallel_for_n(
        replicates,
        [&](std::size_t i) {
            RngStream local(rng.seed(), rng.stream() + i);
            RupState state(conditioned, /*keep_path=*/false);
            const BlockRun run = run_block(state, local);
            outcomes[i] = run.escaped ? states : run.block.endpoint();
        },
        threads);

    std::vector<std::uint64_t> counts(states + 1, 0);
    for (std::uint64_t o : outcomes) ++counts[o];

    const PredictiveDistribution analytic = predictive_distribution(cfg, record);
    std::vector<double> reference = analytic.pmf;
    reference.push_back(analytic.tail);
    std::vector<std::string> labels;
    labels.reserve(states + 1);
    for (std::size_t j = 0; j < states; ++j) labels.push_back("state " + std::to_string(j));
    labels.push_back("tail");
    return make_mc_report(std::move(labels), counts, replicates, std::move(reference), z_bound,
                          rng.seed(), rng.stream());
}

}  // namespace rupshock
