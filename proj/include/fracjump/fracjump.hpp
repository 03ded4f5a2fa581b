#pragma once

// Umbrella header: simulation and verification toolkit for variable-order
// time-fractional SDEs driven by pure-jump Lévy noise.

#include "fracjump/analysis.hpp"
#include "fracjump/coefficients.hpp"
#include "fracjump/config.hpp"
#include "fracjump/fractional_kernel.hpp"
#include "fracjump/fractional_order.hpp"
#include "fracjump/general_kernel.hpp"
#include "fracjump/grid.hpp"
#include "fracjump/levy_measure.hpp"
#include "fracjump/noise.hpp"
#include "fracjump/parallel.hpp"
#include "fracjump/presets.hpp"
#include "fracjump/problem.hpp"
#include "fracjump/rng.hpp"
#include "fracjump/runner.hpp"
#include "fracjump/solver.hpp"
#include "fracjump/special_functions.hpp"
#include "fracjump/stats.hpp"
#include "fracjump/version.hpp"
