#pragma once

// Umbrella header: the whole library.

#include "rupshock/demo.hpp"
#include "rupshock/errors.hpp"
#include "rupshock/grid.hpp"
#include "rupshock/inference.hpp"
#include "rupshock/io.hpp"
#include "rupshock/monte_carlo.hpp"
#include "rupshock/rng.hpp"
#include "rupshock/rup.hpp"
#include "rupshock/shocks.hpp"
#include "rupshock/stats.hpp"
#include "rupshock/urn.hpp"
