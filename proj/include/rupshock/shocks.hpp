#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "rupshock/errors.hpp"
#include "rupshock/grid.hpp"
#include "rupshock/rng.hpp"
#include "rupshock/rup.hpp"
#include "rupshock/urn.hpp"

namespace rupshock {

// Sampling law for shock magnitudes or interarrival gaps. The deterministic
// kind replays a fixed list of values, cycling when exhausted; it consumes no
// randomness, so pairing it with a stochastic law keeps streams aligned
// between simulators.
class ValueLaw {
public:
    enum class Kind { sequence, uniform, exponential };

    static ValueLaw sequence(std::vector<double> values) {
        if (values.empty()) raise(errc::bad_config, "sequence law needs at least one value");
        for (double v : values)
            if (!(v >= 0.0)) raise(errc::bad_config, "shock values must be nonnegative");
        ValueLaw law;
        law.kind_ = Kind::sequence;
        law.values_ = std::move(values);
        return law;
    }

    static ValueLaw uniform(double lo, double hi) {
        if (!(0.0 <= lo && lo < hi)) raise(errc::bad_config, "uniform law needs 0 <= lo < hi");
        ValueLaw law;
        law.kind_ = Kind::uniform;
        law.lo_ = lo;
        law.hi_ = hi;
        return law;
    }

    static ValueLaw exponential(double rate) {
        if (!(rate > 0.0)) raise(errc::bad_config, "exponential law needs rate > 0");
        ValueLaw law;
        law.kind_ = Kind::exponential;
        law.rate_ = rate;
        return law;
    }

    Kind kind() const noexcept { return kind_; }
    std::span<const double> values() const noexcept { return values_; }
    double lo() const noexcept { return lo_; }
    double hi() const noexcept { return hi_; }
    double rate() const noexcept { return rate_; }

    // n is the 1-based shock number (only the sequence kind looks at it).
    double sample(std::size_t n, RngStream& rng) const {
        switch (kind_) {
            case Kind::sequence: return values_[(n - 1) % values_.size()];
            case Kind::uniform: return rng.uniform(lo_, hi_);
            case Kind::exponential: return rng.exponential(rate_);
        }
        raise(errc::bad_config, "unreachable value law kind");
    }

private:
    ValueLaw() = default;
    Kind kind_ = Kind::sequence;
    std::vector<double> values_;
    double lo_ = 0.0, hi_ = 0.0, rate_ = 0.0;
};

// I.i.d. shock pairs (Z_i, U_i): magnitude of the i-th shock and the time
// elapsed since the previous one.
struct ShockStream {
    ValueLaw magnitude;
    ValueLaw interarrival;
};

// The weakening rule of the generalized model: shocks at or above the damage
// boundary lower the fatal threshold step by step through the alpha sequence,
// alpha(0) = t down toward the boundary. Damage counts beyond the end of the
// sequence keep the final value in force.
class ThresholdSchedule {
public:
    ThresholdSchedule(double failure_level, double damage_boundary, std::vector<double> alpha)
        : failure_level_(failure_level),
          damage_boundary_(damage_boundary),
          alpha_(std::move(alpha)) {
        if (!(damage_boundary_ < failure_level_))
            raise(errc::bad_config, "damage boundary must lie below the failure level");
        if (alpha_.empty()) raise(errc::bad_config, "alpha sequence must not be empty");
        if (alpha_.front() != failure_level_)
            raise(errc::bad_config, "alpha(0) must equal the failure level");
        for (std::size_t k = 0; k < alpha_.size(); ++k) {
            if (k > 0 && alpha_[k] > alpha_[k - 1])
                raise(errc::bad_config, "alpha sequence must be nonincreasing");
            if (alpha_[k] < damage_boundary_ || alpha_[k] > failure_level_)
                raise(errc::bad_config, "alpha values must lie in [damage boundary, failure level]");
        }
    }

    double failure_level() const noexcept { return failure_level_; }
    double damage_boundary() const noexcept { return damage_boundary_; }
    std::span<const double> alpha() const noexcept { return alpha_; }

    double threshold(std::size_t damage) const noexcept {
        return damage < alpha_.size() ? alpha_[damage] : alpha_.back();
    }

private:
    double failure_level_;
    double damage_boundary_;
    std::vector<double> alpha_;
};

struct ShockEvent {
    std::size_t index;          // n, 1-based
    double magnitude;           // Z_n
    double gap;                 // U_n
    double elapsed;             // T_n
    std::size_t damage_before;  // L(n-1)
    double threshold;           // level in force when the shock landed
};

struct ShockOutcome {
    std::size_t failure_index = 0;      // tau
    double failure_time = 0.0;          // T_tau
    std::size_t damage_at_failure = 0;  // L(tau - 1); always 0 in the classical model
    std::vector<ShockEvent> trajectory;
};

struct ShockSimOptions {
    std::size_t max_shocks = 1'000'000;
    bool record_trajectory = false;
};

namespace detail {

// Both models share the skeleton: draw (Z_n, U_n) in a fixed order so a
// shared (seed, stream) yields identical shock sequences across models, then
// apply the model's stopping rule. Classical stops at Z_n strictly above the
// fixed level; generalized stops at Z_n >= the threshold in force and counts
// damage from shocks at or above the boundary (the inequalities differ on
// purpose - they are preserved from the models' definitions).
inline ShockOutcome run_shocks(const ShockStream& stream, double fixed_level,
                               const ThresholdSchedule* schedule, RngStream& rng,
                               const ShockSimOptions& opt) {
    if (opt.max_shocks < 1) raise(errc::bad_config, "max_shocks must be >= 1");
    double elapsed = 0.0;
    std::size_t damage = 0;  // L(n-1) while handling shock n
    ShockOutcome out;
    for (std::size_t n = 1; n <= opt.max_shocks; ++n) {
        const double z = stream.magnitude.sample(n, rng);
        const double u = stream.interarrival.sample(n, rng);
        elapsed += u;
        const double level = schedule ? schedule->threshold(damage) : fixed_level;
        if (opt.record_trajectory)
            out.trajectory.push_back({n, z, u, elapsed, damage, level});
        const bool fatal = schedule ? z >= level : z > level;
        if (fatal) {
            out.failure_index = n;
            out.failure_time = elapsed;
            out.damage_at_failure = damage;
            return out;
        }
        if (schedule && z >= schedule->damage_boundary()) ++damage;
    }
    raise(errc::no_failure_within_cap,
          "no failure within " + std::to_string(opt.max_shocks) + " shocks");
}

}  // namespace detail

// Classical model: the system fails at the first shock strictly above the
// fixed resistance level t.
inline ShockOutcome simulate_classical(const ShockStream& stream, double failure_level,
                                       RngStream& rng, const ShockSimOptions& opt = {}) {
    return detail::run_shocks(stream, failure_level, nullptr, rng, opt);
}

// Generalized model with the moving threshold.
inline ShockOutcome simulate_generalized(const ShockStream& stream,
                                         const ThresholdSchedule& schedule, RngStream& rng,
                                         const ShockSimOptions& opt = {}) {
    return detail::run_shocks(stream, schedule.failure_level(), &schedule, rng, opt);
}

// Map observed failure loads/times onto the grid: each value goes to the
// largest state not exceeding it. Values outside [v_0, v_R] are errors -
// clamping would silently fabricate observations.
inline FailureRecord discretize(std::span<const double> failures, const StateGrid& grid) {
    FailureRecord out;
    out.states.reserve(failures.size());
    for (double f : failures) out.states.push_back(grid.floor_index(f));
    return out;
}

// The urn-based generalized extreme shock model as a chain of urns on states
// 0, 1, 2, ...: safe and risky draws advance, a default draw ends the system.
// Each state's composition is built from its predecessor's post-draw
// composition, C(v) = C(v-1) - e_{v-1} + e_{v-1} M.
struct UbgesmSpec {
    UrnComposition initial;  // three colors: (safe, risky, default)
    double s = 1.0;
    double p = 0.0;

    UbgesmSpec(UrnComposition initial_, double s_, double p_)
        : initial(std::move(initial_)), s(s_), p(p_) {
        if (initial.colors() != 3) raise(errc::bad_config, "ubgesm urns have three colors");
        if (!(initial.total() > 0.0)) raise(errc::bad_config, "initial composition must be nonempty");
        (void)ReinforcementMatrix::ubgesm(s, p);  // validates s, p, r
    }

    ReinforcementMatrix matrix() const { return ReinforcementMatrix::ubgesm(s, p); }
};

struct UbgesmRun {
    std::size_t failure_step = 0;    // 1-based draw count at default
    std::vector<ColorIndex> trace;   // drawn colors, final default draw included
};

inline UbgesmRun ubgesm_chain(const UbgesmSpec& spec, RngStream& rng,
                              std::size_t max_steps = 1'000'000) {
    if (max_steps < 1) raise(errc::bad_config, "max_steps must be >= 1");
    const ReinforcementMatrix m = spec.matrix();
    std::vector<double> c(spec.initial.counts().begin(), spec.initial.counts().end());
    double total = spec.initial.total();
    UbgesmRun out;
    for (std::size_t step = 1; step <= max_steps; ++step) {
        const ColorIndex drawn = sample_index(c, total, rng);
        out.trace.push_back(drawn);
        if (drawn == color::fail) {
            out.failure_step = step;
            return out;
        }
        // Compose the next state's urn from this one's post-draw counts.
        const auto row = m.row(drawn);
        c[drawn] -= 1.0;
        for (std::size_t i = 0; i < c.size(); ++i) c[i] += row[i];
        total += m.row_sum(drawn) - 1.0;
    }
    raise(errc::no_failure_within_cap,
          "no default within " + std::to_string(max_steps) + " chain steps");
}

// Reference oracle for the chain: one evolving urn, matrix-drawn until a
// default ball comes out. Equivalent in law to ubgesm_chain.
inline std::size_t ubgesm_single_urn(const UrnComposition& initial, const ReinforcementMatrix& m,
                                     RngStream& rng, std::size_t max_steps = 1'000'000) {
    if (max_steps < 1) raise(errc::bad_config, "max_steps must be >= 1");
    UrnComposition urn = initial;
    for (std::size_t step = 1; step <= max_steps; ++step) {
        auto [drawn, next] = matrix_draw(urn, m, rng);
        if (drawn == color::fail) return step;
        urn = std::move(next);
    }
    raise(errc::no_failure_within_cap,
          "no default within " + std::to_string(max_steps) + " draws");
}

}  // namespace rupshock
