#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "rupshock/errors.hpp"
#include "rupshock/grid.hpp"
#include "rupshock/rng.hpp"
#include "rupshock/urn.hpp"

namespace rupshock {

// The law of the failure-state chain: one two-color Polya urn per grid state
// and a single reinforcement magnitude s shared by all of them.
class RupConfig {
public:
    RupConfig(StateGrid grid, std::vector<UrnComposition> priors, double s)
        : grid_(std::move(grid)), priors_(std::move(priors)), s_(s) {
        if (grid_.empty()) raise(errc::bad_config, "process grid must have at least one state");
        if (priors_.size() != grid_.size())
            raise(errc::bad_config, "need exactly one prior urn per grid state");
        if (!(s_ > 0.0)) raise(errc::bad_config, "reinforcement s must be > 0");
        for (const auto& urn : priors_) {
            if (urn.colors() != 2) raise(errc::bad_config, "state urns are two-color");
            if (!(urn.total() > 0.0)) raise(errc::bad_config, "every prior urn needs total > 0");
        }
    }

    // Same (white, black) prior at every state.
    static RupConfig uniform_priors(StateGrid grid, double white, double black, double s) {
        std::vector<UrnComposition> priors(grid.size(), UrnComposition::two_color(white, black));
        return RupConfig(std::move(grid), std::move(priors), s);
    }

    const StateGrid& grid() const noexcept { return grid_; }
    const std::vector<UrnComposition>& priors() const noexcept { return priors_; }
    const UrnComposition& prior(std::size_t i) const { return priors_.at(i); }
    double s() const noexcept { return s_; }
    std::size_t states() const noexcept { return grid_.size(); }
    std::size_t max_index() const { return grid_.max_index(); }

    RupConfig with_s(double s) const { return RupConfig(grid_, priors_, s); }
    RupConfig with_priors(std::vector<UrnComposition> priors) const {
        return RupConfig(grid_, std::move(priors), s_);
    }

private:
    StateGrid grid_;
    std::vector<UrnComposition> priors_;
    double s_;
};

enum class StepKind {
    advanced,   // white drawn, moved one state up
    reset,      // black drawn, back to v_0 (a 0-block just closed)
    exhausted,  // white drawn at v_R: no higher state exists
};

struct StepOutcome {
    std::size_t state;  // index sampled at
    ColorIndex drawn;
    StepKind kind;
};

// A maximal excursion between consecutive visits to v_0. Its last coordinate
// is one system's failure state.
struct ZeroBlock {
    std::vector<std::size_t> states;  // consecutive indices 0, 1, ..., endpoint
    std::size_t stop_index = 0;       // path index at which the reset occurs

    std::size_t endpoint() const { return states.back(); }  // xi
};

// Observed failure states xi_1, ..., xi_m, as grid indices.
struct FailureRecord {
    std::vector<std::size_t> states;

    std::size_t size() const noexcept { return states.size(); }
    bool empty() const noexcept { return states.empty(); }
    bool operator==(const FailureRecord&) const = default;
};

// One realization of the chain. Single-owner mutable while it runs;
// independent replicates each own their state and stream.
//
// Bookkeeping invariant, exact at all times: urn(i).total() equals
// prior(i).total() + s * visits(i), because the urn is reinforced on every
// draw, including the one that falls off the grid.
class RupState {
public:
    explicit RupState(RupConfig config, bool keep_path = true)
        : RupState(std::make_shared<const RupConfig>(std::move(config)), keep_path) {}

    explicit RupState(std::shared_ptr<const RupConfig> config, bool keep_path = true)
        : config_(std::move(config)),
          urns_(config_->priors()),
          visits_(config_->states(), 0),
          keep_path_(keep_path) {
        if (keep_path_) path_.push_back(0);
    }

    const RupConfig& config() const noexcept { return *config_; }
    const UrnComposition& urn(std::size_t i) const { return urns_.at(i); }
    std::size_t position() const noexcept { return position_; }
    std::uint64_t draws_made() const noexcept { return draws_; }
    std::span<const std::uint64_t> visit_counts() const noexcept { return visits_; }

    // Full visited-state path (X_0 = v_0 first); empty in memory-bounded mode.
    std::span<const std::size_t> path() const noexcept { return path_; }
    bool keeps_path() const noexcept { return keep_path_; }

    // Sample the urn at the current position, Polya-reinforce it with the
    // drawn color, and move: up one state on white, back to v_0 on black.
    // White at the top state reinforces but cannot move; the caller sees
    // StepKind::exhausted.
    StepOutcome step(RngStream& rng) {
        const std::size_t here = position_;
        auto [drawn, next_urn] = polya_draw(urns_[here], config_->s(), rng);
        urns_[here] = std::move(next_urn);
        ++visits_[here];
        ++draws_;
        StepKind kind;
        if (drawn == color::black) {
            kind = StepKind::reset;
            position_ = 0;
            if (keep_path_) path_.push_back(0);
        } else if (here == config_->max_index()) {
            kind = StepKind::exhausted;
        } else {
            kind = StepKind::advanced;
            position_ = here + 1;
            if (keep_path_) path_.push_back(position_);
        }
        return {here, drawn, kind};
    }

private:
    std::shared_ptr<const RupConfig> config_;
    std::vector<UrnComposition> urns_;
    std::size_t position_ = 0;
    std::vector<std::size_t> path_;
    std::vector<std::uint64_t> visits_;
    std::uint64_t draws_ = 0;
    bool keep_path_;
};

struct BlockRun {
    // True when white was drawn at v_R: the system's failure lies beyond the
    // grid (the tail event the predictive law prices separately). The block
    // then holds the full 0..R walk and no endpoint is defined.
    bool escaped = false;
    ZeroBlock block;
};

// Run one system: step from v_0 until a black ball closes the 0-block. All
// reinforcements accumulated along the way stay in `state` - that carry-over
// is the information the next system starts from.
inline BlockRun run_block(RupState& state, RngStream& rng) {
    if (state.position() != 0) raise(errc::bad_config, "run_block must start at v_0");
    BlockRun out;
    out.block.states.push_back(0);
    for (;;) {
        const StepOutcome o = state.step(rng);
        if (o.kind == StepKind::reset) {
            // Every draw so far contributed one path entry, so the reset sits
            // at path index draws_made (valid in memory-bounded mode too).
            out.block.stop_index = static_cast<std::size_t>(state.draws_made());
            return out;
        }
        if (o.kind == StepKind::exhausted) {
            out.escaped = true;
            return out;
        }
        out.block.states.push_back(state.position());
    }
}

struct SystemsRun {
    FailureRecord record;
    RupState state;
};

// Run k systems on one evolving state; the xi sequence it returns is
// exchangeable. A block that escapes the grid cannot yield a failure state,
// so it surfaces as the grid-exhausted error.
inline SystemsRun run_systems(const RupConfig& config, std::size_t systems, RngStream& rng,
                              bool keep_path = true) {
    if (systems < 1) raise(errc::bad_config, "need at least one system");
    SystemsRun out{FailureRecord{}, RupState(config, keep_path)};
    out.record.states.reserve(systems);
    for (std::size_t k = 0; k < systems; ++k) {
        BlockRun b = run_block(out.state, rng);
        if (b.escaped)
            raise(errc::grid_exhausted,
                  "system " + std::to_string(k + 1) + " survived past the top grid state");
        out.record.states.push_back(b.block.endpoint());
    }
    return out;
}

struct BlockDecomposition {
    std::vector<ZeroBlock> blocks;
    std::vector<std::size_t> remainder;  // trailing incomplete excursion (possibly just the last 0)

    FailureRecord record() const {
        FailureRecord r;
        r.states.reserve(blocks.size());
        for (const auto& b : blocks) r.states.push_back(b.endpoint());
        return r;
    }
};

// Partition a path of state indices into maximal 0-blocks. Transitions must
// be advance-by-one or reset-to-0 (nothing else is realizable), and the path
// must start at 0. Concatenating blocks and remainder reproduces the input.
inline BlockDecomposition zero_blocks(std::span<const std::size_t> path) {
    BlockDecomposition out;
    if (path.empty()) return out;
    if (path.front() != 0) raise(errc::malformed_path, "path must start at v_0");
    ZeroBlock current;
    current.states.push_back(0);
    for (std::size_t i = 1; i < path.size(); ++i) {
        const std::size_t s = path[i];
        if (s == 0) {
            current.stop_index = i;
            out.blocks.push_back(std::move(current));
            current = ZeroBlock{};
            current.states.push_back(0);
        } else if (s == path[i - 1] + 1) {
            current.states.push_back(s);
        } else {
            raise(errc::malformed_path,
                  "transition " + std::to_string(path[i - 1]) + " -> " + std::to_string(s) +
                      " is not advance-by-one or reset");
        }
    }
    out.remainder = std::move(current.states);
    return out;
}

enum class ProductVerdict {
    vanished_at_horizon,     // partial product <= tol
    bounded_away_from_zero,  // still above tol at the horizon
};

struct RecurrenceReport {
    std::size_t horizon = 0;
    double tol = 0.0;

    // The literature's criterion as printed: prod_{i=1..horizon} of the black
    // fractions b/(w+b).
    double log_black_product = 0.0;
    ProductVerdict black_verdict = ProductVerdict::bounded_away_from_zero;
    double black_decay_rate = 0.0;  // mean per-state log factor over the trailing half

    // The operative guard: prod_{i=0..horizon-1} of the white fractions
    // w/(w+b), the probability that a first pass escapes to infinity.
    double log_white_product = 0.0;
    ProductVerdict white_verdict = ProductVerdict::bounded_away_from_zero;
    double white_decay_rate = 0.0;

    bool criteria_disagree = false;
    bool recurrent = false;  // white product vanished: returns to v_0 keep happening

    double black_product() const { return std::exp(log_black_product); }
    double white_product() const { return std::exp(log_white_product); }
};

// Evaluate both recurrence products over the prior compositions, in log space
// (partial products to large horizons underflow doubles long before the
// verdict is settled). `priors(i)` must yield the two-color composition of
// state v_i for i = 0..horizon.
template <typename PriorFn>
RecurrenceReport check_recurrence(PriorFn&& priors, std::size_t horizon, double tol) {
    if (horizon < 1) raise(errc::bad_config, "recurrence horizon must be >= 1");
    if (!(tol > 0.0)) raise(errc::bad_config, "recurrence tol must be > 0");
    RecurrenceReport rep;
    rep.horizon = horizon;
    rep.tol = tol;

    const std::size_t half = horizon / 2;
    double log_black = 0.0, log_white = 0.0;
    double log_black_half = 0.0, log_white_half = 0.0;
    for (std::size_t n = 1; n <= horizon; ++n) {
        // Black factor at v_n (the printed product starts at i = 1), white
        // factor at v_{n-1} (a first pass must survive v_0 too).
        const UrnComposition black_urn = priors(n);
        const UrnComposition white_urn = priors(n - 1);
        const double bt = black_urn.total();
        const double wt = white_urn.total();
        if (!(bt > 0.0) || !(wt > 0.0))
            raise(errc::empty_urn, "recurrence check needs urns with positive totals");
        log_black += std::log(black_urn.black() / bt);
        log_white += std::log(white_urn.white() / wt);
        if (n == half) {
            log_black_half = log_black;
            log_white_half = log_white;
        }
    }
    rep.log_black_product = log_black;
    rep.log_white_product = log_white;
    const double log_tol = std::log(tol);
    rep.black_verdict = log_black <= log_tol ? ProductVerdict::vanished_at_horizon
                                             : ProductVerdict::bounded_away_from_zero;
    rep.white_verdict = log_white <= log_tol ? ProductVerdict::vanished_at_horizon
                                             : ProductVerdict::bounded_away_from_zero;
    if (half >= 1 && horizon > half) {
        const double span = static_cast<double>(horizon - half);
        rep.black_decay_rate = (log_black - log_black_half) / span;
        rep.white_decay_rate = (log_white - log_white_half) / span;
    }
    rep.criteria_disagree = rep.black_verdict != rep.white_verdict;
    rep.recurrent = rep.white_verdict == ProductVerdict::vanished_at_horizon;
    return rep;
}

inline RecurrenceReport check_recurrence(std::span<const UrnComposition> priors,
                                         std::size_t horizon, double tol) {
    if (horizon + 1 > priors.size())
        raise(errc::bad_config, "horizon needs prior compositions up to index horizon");
    return check_recurrence([&](std::size_t i) { return priors[i]; }, horizon, tol);
}

}  // namespace rupshock
