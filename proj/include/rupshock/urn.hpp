#pragma once

#include <cstddef>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "rupshock/errors.hpp"
#include "rupshock/rng.hpp"

namespace rupshock {

using ColorIndex = std::size_t;

// Fixed color conventions. The two-color scheme drives the per-state Polya
// urns of the failure-state chain; the three-color scheme drives the
// safe/risky/default urns of the generalized shock model.
namespace color {
inline constexpr ColorIndex white = 0;  // survive / advance
inline constexpr ColorIndex black = 1;  // fatal shock
inline constexpr ColorIndex safe = 0;
inline constexpr ColorIndex risky = 1;
inline constexpr ColorIndex fail = 2;
}  // namespace color

// Ball counts per color for one urn. Counts are nonnegative reals, not
// integers, so priors of arbitrary strength (w = 0.5, say) are expressible;
// every formula downstream is plain count arithmetic.
//
// Compositions are immutable by contract: draws return new values, so a
// composition can be shared read-only across threads.
class UrnComposition {
public:
    UrnComposition() = default;

    explicit UrnComposition(std::vector<double> counts) : counts_(std::move(counts)) {
        for (double c : counts_)
            if (!(c >= 0.0)) raise(errc::bad_config, "ball counts must be nonnegative");
    }

    static UrnComposition two_color(double white, double black) {
        return UrnComposition({white, black});
    }

    std::size_t colors() const noexcept { return counts_.size(); }

    double count(ColorIndex c) const {
        if (c >= counts_.size()) raise(errc::bad_config, "color outside the urn's color set");
        return counts_[c];
    }

    double total() const noexcept {
        return std::accumulate(counts_.begin(), counts_.end(), 0.0);
    }

    std::span<const double> counts() const noexcept { return counts_; }

    // Two-color accessors.
    double white() const { return count(color::white); }
    double black() const { return count(color::black); }

    UrnComposition with_added(ColorIndex c, double extra) const {
        UrnComposition out = *this;
        out.counts_.at(c) += extra;
        return out;
    }

    bool operator==(const UrnComposition&) const = default;

private:
    std::vector<double> counts_;
};

// Square replacement rule, indexed (sampled color -> color added back).
// The sampled ball leaves the urn and row(sampled) goes in: the null matrix is
// sampling without replacement, the identity is sampling with replacement, a
// diagonal of 1+s is the Polya rule.
class ReinforcementMatrix {
public:
    ReinforcementMatrix(std::size_t dim, std::vector<double> row_major)
        : dim_(dim), entries_(std::move(row_major)) {
        if (entries_.size() != dim_ * dim_)
            raise(errc::bad_config, "reinforcement matrix must be square");
        for (double e : entries_)
            if (!(e >= 0.0)) raise(errc::bad_config, "reinforcement entries must be nonnegative");
    }

    static ReinforcementMatrix identity(std::size_t dim) {
        std::vector<double> e(dim * dim, 0.0);
        for (std::size_t i = 0; i < dim; ++i) e[i * dim + i] = 1.0;
        return {dim, std::move(e)};
    }

    static ReinforcementMatrix polya(std::size_t dim, double s) {
        if (!(s > 0.0)) raise(errc::bad_config, "polya reinforcement s must be > 0");
        std::vector<double> e(dim * dim, 0.0);
        for (std::size_t i = 0; i < dim; ++i) e[i * dim + i] = 1.0 + s;
        return {dim, std::move(e)};
    }

    // The balanced triangular rule of the urn-based generalized shock model:
    // safe draws add s safe balls, risky draws add r = s - p risky balls plus
    // p default balls, default draws add s default balls. Every row sums to
    // 1 + s, so the total grows by exactly s per draw.
    static ReinforcementMatrix ubgesm(double s, double p) {
        if (!(s > 0.0)) raise(errc::bad_config, "ubgesm s must be > 0");
        if (!(p >= 0.0)) raise(errc::bad_config, "ubgesm p must be >= 0");
        const double r = s - p;
        if (!(r >= 0.0)) raise(errc::bad_config, "ubgesm requires r = s - p >= 0");
        return {3,
                {1.0 + s, 0.0, 0.0,
                 0.0, 1.0 + r, p,
                 0.0, 0.0, 1.0 + s}};
    }

    std::size_t dim() const noexcept { return dim_; }

    double entry(ColorIndex sampled, ColorIndex added) const {
        return entries_.at(sampled * dim_ + added);
    }

    std::span<const double> row(ColorIndex sampled) const {
        if (sampled >= dim_) raise(errc::bad_config, "row index outside matrix");
        return {entries_.data() + sampled * dim_, dim_};
    }

    double row_sum(ColorIndex sampled) const {
        auto r = row(sampled);
        return std::accumulate(r.begin(), r.end(), 0.0);
    }

    bool is_balanced(double tol = 1e-12) const {
        const double first = row_sum(0);
        for (std::size_t i = 1; i < dim_; ++i)
            if (std::abs(row_sum(i) - first) > tol) return false;
        return true;
    }

private:
    std::size_t dim_;
    std::vector<double> entries_;
};

// P(draw color c) = count(c) / total. The probabilities over the color set
// sum to 1 for any nonempty urn.
inline double draw_probability(const UrnComposition& urn, ColorIndex c) {
    const double total = urn.total();
    if (!(total > 0.0)) raise(errc::empty_urn, "draw_probability on an urn with zero total");
    return urn.count(c) / total;
}

// One Polya draw: sample a color proportionally to its count, then return the
// ball with s extra balls of the same color. Total grows by exactly s.
inline std::pair<ColorIndex, UrnComposition> polya_draw(const UrnComposition& urn, double s,
                                                        RngStream& rng) {
    if (!(s > 0.0)) raise(errc::bad_config, "polya reinforcement s must be > 0");
    const double total = urn.total();
    if (!(total > 0.0)) raise(errc::empty_urn, "polya_draw on an urn with zero total");
    const ColorIndex drawn = sample_index(urn.counts(), total, rng);
    return {drawn, urn.with_added(drawn, s)};
}

// One draw under a general replacement rule: sample a color, remove that
// ball, add back row(sampled). A row that would push any count below zero is
// rejected (cannot happen when the diagonal is >= 1).
inline std::pair<ColorIndex, UrnComposition> matrix_draw(const UrnComposition& urn,
                                                         const ReinforcementMatrix& m,
                                                         RngStream& rng) {
    if (urn.colors() != m.dim())
        raise(errc::bad_config, "matrix dimension does not match the urn's color set");
    const double total = urn.total();
    if (!(total > 0.0)) raise(errc::empty_urn, "matrix_draw on an urn with zero total");
    const ColorIndex drawn = sample_index(urn.counts(), total, rng);
    std::vector<double> next(urn.counts().begin(), urn.counts().end());
    next[drawn] -= 1.0;
    const auto row = m.row(drawn);
    for (std::size_t c = 0; c < next.size(); ++c) next[c] += row[c];
    for (double c : next)
        if (c < 0.0)
            raise(errc::invalid_matrix, "replacement row drives a count below zero");
    return {drawn, UrnComposition(std::move(next))};
}

struct BetaParams {
    double alpha;  // shape governing the black fraction
    double beta;   // shape governing the white fraction
};

// Shape pair of the Beta law that the black-ball fraction converges to.
// The mean alpha / (alpha + beta) = b0 / (w0 + b0) equals the martingale's
// starting value, which fixes the parameter order.
inline BetaParams limit_distribution_parameters(const UrnComposition& urn, double s) {
    if (!(s > 0.0)) raise(errc::bad_config, "reinforcement s must be > 0");
    if (urn.colors() != 2) raise(errc::bad_config, "limit law is defined for two-color urns");
    if (!(urn.total() > 0.0)) raise(errc::empty_urn, "limit law of an urn with zero total");
    return {urn.black() / s, urn.white() / s};
}

}  // namespace rupshock
