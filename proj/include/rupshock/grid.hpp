#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "rupshock/errors.hpp"

namespace rupshock {

// Strictly increasing failure states v_0 < v_1 < ... < v_R (time instants,
// load levels, ...). May be empty at the type level; anything that carries a
// process law requires at least one state.
class StateGrid {
public:
    StateGrid() = default;

    explicit StateGrid(std::vector<double> values) : values_(std::move(values)) {
        for (std::size_t i = 1; i < values_.size(); ++i)
            if (!(values_[i - 1] < values_[i]))
                raise(errc::bad_config, "grid states must be strictly increasing");
    }

    // The v_i = i convention.
    static StateGrid indexed(std::size_t n) {
        std::vector<double> v(n);
        for (std::size_t i = 0; i < n; ++i) v[i] = static_cast<double>(i);
        return StateGrid(std::move(v));
    }

    bool empty() const noexcept { return values_.empty(); }
    std::size_t size() const noexcept { return values_.size(); }

    std::size_t max_index() const {
        if (values_.empty()) raise(errc::bad_config, "empty grid has no max index");
        return values_.size() - 1;
    }

    double value(std::size_t i) const {
        if (i >= values_.size())
            raise(errc::unknown_state, "state index " + std::to_string(i) + " outside the grid");
        return values_[i];
    }

    std::span<const double> values() const noexcept { return values_; }

    // Largest index with value(i) <= x.
    std::size_t floor_index(double x) const {
        if (values_.empty()) raise(errc::bad_config, "floor_index on an empty grid");
        if (std::isnan(x)) raise(errc::bad_config, "floor_index of NaN");
        if (x < values_.front())
            raise(errc::below_grid, "value " + std::to_string(x) + " below the smallest state");
        if (x > values_.back())
            raise(errc::off_grid, "value " + std::to_string(x) + " above the largest state");
        auto it = std::upper_bound(values_.begin(), values_.end(), x);
        return static_cast<std::size_t>(it - values_.begin()) - 1;
    }

    bool operator==(const StateGrid&) const = default;

private:
    std::vector<double> values_;
};

}  // namespace rupshock
