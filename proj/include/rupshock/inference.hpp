#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "rupshock/errors.hpp"
#include "rupshock/grid.hpp"
#include "rupshock/rng.hpp"
#include "rupshock/rup.hpp"

namespace rupshock {

// Everything the observed record contributes to prediction: per state v_l,
// f_l systems survived past it and d_l failed exactly at it. The record
// enters every formula below only through these counts, so observation order
// never matters.
struct SufficientCounts {
    std::vector<std::size_t> survived_past;  // f_l
    std::vector<std::size_t> failed_at;      // d_l
    std::size_t systems = 0;                 // m
};

inline SufficientCounts sufficient_counts(const FailureRecord& record, const StateGrid& grid) {
    SufficientCounts out;
    out.survived_past.assign(grid.size(), 0);
    out.failed_at.assign(grid.size(), 0);
    out.systems = record.size();
    for (std::size_t xi : record.states) {
        if (xi >= grid.size())
            raise(errc::unknown_state, "observation index " + std::to_string(xi) + " off the grid");
        ++out.failed_at[xi];
        for (std::size_t l = 0; l < xi; ++l) ++out.survived_past[l];
    }
    return out;
}

namespace detail {

// Posterior ball counts at state j, given the observed record: the black side
// gained s balls per failure at v_j, the white side s balls per survival past
// v_j. These two numbers are the whole predictive machinery.
inline double post_black(const RupConfig& cfg, const SufficientCounts& c, std::size_t j) {
    return cfg.prior(j).black() + cfg.s() * static_cast<double>(c.failed_at[j]);
}

inline double post_white(const RupConfig& cfg, const SufficientCounts& c, std::size_t j) {
    return cfg.prior(j).white() + cfg.s() * static_cast<double>(c.survived_past[j]);
}

inline double hazard(const RupConfig& cfg, const SufficientCounts& c, std::size_t j) {
    const double b = post_black(cfg, c, j);
    return b / (post_white(cfg, c, j) + b);
}

inline double survive_factor(const RupConfig& cfg, const SufficientCounts& c, std::size_t j) {
    const double w = post_white(cfg, c, j);
    return w / (w + post_black(cfg, c, j));
}

// Products of many factors move to log space on long grids, where a plain
// running product could underflow.
inline constexpr std::size_t log_space_threshold = 64;

}  // namespace detail

// P(next system fails at v_r | record): the posterior hazard at v_r times the
// posterior survival factors of every earlier state. With an empty record
// this reduces exactly to the first-system law.
inline double predictive_pmf(const RupConfig& cfg, const SufficientCounts& counts,
                             std::size_t r) {
    if (r >= cfg.states())
        raise(errc::unknown_state, "state index " + std::to_string(r) + " off the grid");
    const double head = detail::hazard(cfg, counts, r);
    if (cfg.states() <= detail::log_space_threshold) {
        double prod = head;
        for (std::size_t j = 0; j < r; ++j) prod *= detail::survive_factor(cfg, counts, j);
        return prod;
    }
    double log_prod = std::log(head);
    for (std::size_t j = 0; j < r; ++j)
        log_prod += std::log(detail::survive_factor(cfg, counts, j));
    return std::exp(log_prod);
}

inline double predictive_pmf(const RupConfig& cfg, const FailureRecord& record, std::size_t r) {
    return predictive_pmf(cfg, sufficient_counts(record, cfg.grid()), r);
}

// P(next system survives past v_r | record).
inline double predictive_survival(const RupConfig& cfg, const SufficientCounts& counts,
                                  std::size_t r) {
    if (r >= cfg.states())
        raise(errc::unknown_state, "state index " + std::to_string(r) + " off the grid");
    if (cfg.states() <= detail::log_space_threshold) {
        double prod = 1.0;
        for (std::size_t j = 0; j <= r; ++j) prod *= detail::survive_factor(cfg, counts, j);
        return prod;
    }
    double log_prod = 0.0;
    for (std::size_t j = 0; j <= r; ++j)
        log_prod += std::log(detail::survive_factor(cfg, counts, j));
    return std::exp(log_prod);
}

inline double predictive_survival(const RupConfig& cfg, const FailureRecord& record,
                                  std::size_t r) {
    return predictive_survival(cfg, sufficient_counts(record, cfg.grid()), r);
}

// PMF of the next failure state over the whole grid, with the mass beyond v_R
// spelled out. pmf and tail sum to 1; the grid-restricted mean deliberately
// leaves the tail mass unassigned rather than imputing a value for it.
struct PredictiveDistribution {
    StateGrid grid;
    std::vector<double> pmf;
    double tail = 0.0;
    double mean_on_grid = 0.0;
};

inline PredictiveDistribution predictive_distribution(const RupConfig& cfg,
                                                      const SufficientCounts& counts) {
    PredictiveDistribution out;
    out.grid = cfg.grid();
    out.pmf.reserve(cfg.states());
    double survival = 1.0;
    double mean = 0.0;
    for (std::size_t j = 0; j < cfg.states(); ++j) {
        const double h = detail::hazard(cfg, counts, j);
        const double p = h * survival;
        out.pmf.push_back(p);
        mean += cfg.grid().value(j) * p;
        survival *= 1.0 - h;
    }
    out.tail = survival;
    out.mean_on_grid = mean;
    return out;
}

inline PredictiveDistribution predictive_distribution(const RupConfig& cfg,
                                                      const FailureRecord& record) {
    return predictive_distribution(cfg, sufficient_counts(record, cfg.grid()));
}

struct GridMean {
    double mean_on_grid;  // sum of v_r * pmf(r); excludes the tail by construction
    double tail;          // probability mass beyond v_R, reported, never imputed
};

inline GridMean predictive_mean(const RupConfig& cfg, const FailureRecord& record) {
    const PredictiveDistribution d = predictive_distribution(cfg, record);
    return {d.mean_on_grid, d.tail};
}

// Per-state Beta shape pairs of the random distribution function F the
// failure states are drawn from: a_j is the failure (hazard) shape, b_j the
// survival shape, so the hazard mean a_j/(a_j+b_j) matches the one-step
// failure probability of the urn at v_j.
class BetaStacySpec {
public:
    BetaStacySpec(StateGrid grid, std::vector<double> failure_shape,
                  std::vector<double> survival_shape)
        : grid_(std::move(grid)),
          failure_shape_(std::move(failure_shape)),
          survival_shape_(std::move(survival_shape)) {
        if (failure_shape_.size() != grid_.size() || survival_shape_.size() != grid_.size())
            raise(errc::bad_config, "need one shape pair per grid state");
        for (std::size_t j = 0; j < grid_.size(); ++j) {
            const double a = failure_shape_[j];
            const double b = survival_shape_[j];
            if (!(a >= 0.0) || !(b >= 0.0) || !(a + b > 0.0))
                raise(errc::bad_config, "shapes must be nonnegative with a + b > 0");
        }
    }

    const StateGrid& grid() const noexcept { return grid_; }
    std::size_t states() const noexcept { return grid_.size(); }
    std::span<const double> failure_shapes() const noexcept { return failure_shape_; }
    std::span<const double> survival_shapes() const noexcept { return survival_shape_; }
    double failure_shape(std::size_t j) const { return failure_shape_.at(j); }
    double survival_shape(std::size_t j) const { return survival_shape_.at(j); }

    double hazard_mean(std::size_t j) const {
        return failure_shape_.at(j) / (failure_shape_[j] + survival_shape_[j]);
    }

    bool operator==(const BetaStacySpec&) const = default;

private:
    StateGrid grid_;
    std::vector<double> failure_shape_;
    std::vector<double> survival_shape_;
};

inline BetaStacySpec beta_stacy_prior(const RupConfig& cfg) {
    std::vector<double> a(cfg.states());
    std::vector<double> b(cfg.states());
    for (std::size_t j = 0; j < cfg.states(); ++j) {
        a[j] = cfg.prior(j).black() / cfg.s();
        b[j] = cfg.prior(j).white() / cfg.s();
    }
    return {cfg.grid(), std::move(a), std::move(b)};
}

// Conjugate update. In shape units the posterior is exactly
// (a_j + d_j, b_j + f_j): the reinforcement magnitude cancels out of the
// count-to-shape conversion, so the update is pure integer arithmetic.
inline BetaStacySpec beta_stacy_posterior(const BetaStacySpec& spec,
                                          const FailureRecord& record) {
    const SufficientCounts counts = sufficient_counts(record, spec.grid());
    std::vector<double> a(spec.failure_shapes().begin(), spec.failure_shapes().end());
    std::vector<double> b(spec.survival_shapes().begin(), spec.survival_shapes().end());
    for (std::size_t j = 0; j < spec.states(); ++j) {
        a[j] += static_cast<double>(counts.failed_at[j]);
        b[j] += static_cast<double>(counts.survived_past[j]);
    }
    return {spec.grid(), std::move(a), std::move(b)};
}

// One realization of the random CDF: independent hazards Y_j ~ Beta(a_j, b_j)
// composed as F(v_k) = 1 - prod_{j<=k} (1 - Y_j). Zero shapes degenerate to
// point masses (a_j = 0: no failure mass at v_j; b_j = 0: certain failure).
// Nondecreasing and within [0, 1] by construction.
inline std::vector<double> sample_cdf(const BetaStacySpec& spec, RngStream& rng) {
    std::vector<double> cdf(spec.states());
    double survival = 1.0;
    for (std::size_t j = 0; j < spec.states(); ++j) {
        const double y = rng.beta(spec.failure_shape(j), spec.survival_shape(j));
        survival *= 1.0 - y;
        cdf[j] = 1.0 - survival;
    }
    return cdf;
}

// E[F(v_k)] = 1 - prod_{j<=k} b_j/(a_j+b_j), by independence of the hazards.
// For a posterior spec this equals the predictive CDF of the next system,
// state by state.
inline std::vector<double> mean_cdf(const BetaStacySpec& spec) {
    std::vector<double> cdf(spec.states());
    double survival = 1.0;
    for (std::size_t j = 0; j < spec.states(); ++j) {
        survival *= spec.survival_shape(j) / (spec.failure_shape(j) + spec.survival_shape(j));
        cdf[j] = 1.0 - survival;
    }
    return cdf;
}

}  // namespace rupshock
