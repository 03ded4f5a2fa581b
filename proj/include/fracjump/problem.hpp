#pragma once

#include "fracjump/coefficients.hpp"
#include "fracjump/fractional_kernel.hpp"
#include "fracjump/noise.hpp"
#include "fracjump/solver.hpp"

#include <cstdint>
#include <variant>

namespace fracjump {

/// Initial value: a constant, a symmetric two-point draw, or a uniform draw.
struct TwoPointInitial {
    double a = -1.0;
    double b = 1.0;
};
struct UniformInitial {
    double lo = 0.0;
    double hi = 1.0;
};
using InitialValue = std::variant<double, TwoPointInitial, UniformInitial>;

/// Full problem instance handed to the Monte Carlo drivers: kernel, coupled
/// coefficient set, driving measure, initial value, and the numerics knobs.
struct Problem {
    FractionalKernel kernel;
    CoefficientSet coefficients;
    LevyMeasure measure;
    InitialValue initial = 1.0;
    double horizon = 1.0;
    std::size_t steps = 128;
    SolveOptions solve;

    double draw_initial(RandomStream& stream) const {
        if (const auto* c = std::get_if<double>(&initial)) return *c;
        if (const auto* tp = std::get_if<TwoPointInitial>(&initial))
            return stream.uniform01() < 0.5 ? tp->a : tp->b;
        const auto& u = std::get<UniformInitial>(initial);
        return stream.uniform(u.lo, u.hi);
    }
};

/// One interlaced path for path index k: realization, grid (uniform nodes
/// plus this path's large-jump times) and the solve, all keyed by
/// (master_seed, k).
inline Path solve_path(const Problem& prob, std::uint64_t master_seed, std::uint64_t path_index) {
    const std::uint64_t path_seed = derive_seed(master_seed, path_index);
    const auto realization = sample_realization(prob.measure, prob.horizon, path_seed);
    const auto grid = Grid::build(prob.horizon, prob.steps, realization.large_jump_times());
    RandomStream init_stream(derive_seed(path_seed, 0x0151u));
    const double u0 = prob.draw_initial(init_stream);
    return interlaced_solve(prob.kernel, prob.coefficients, realization, u0, grid, prob.solve);
}

} // namespace fracjump
