#pragma once

#include "fracjump/fractional_order.hpp"
#include "fracjump/grid.hpp"
#include "fracjump/special_functions.hpp"

#include <cmath>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <shared_mutex>
#include <span>
#include <stdexcept>
#include <vector>

namespace fracjump {

/// Weakly singular memory kernel lambda / (Gamma(1 - alpha(t)) (t - s)^alpha(t)),
/// the integral-form counterpart of the variable-order derivative term.
struct FractionalKernel {
    double lambda = 0.0;
    FractionalOrder order;

    double operator()(double t, double s) const {
        if (!(s >= 0.0) || !(s < t))
            throw std::domain_error("FractionalKernel: require 0 <= s < t");
        if (lambda == 0.0) return 0.0;
        const double a = order(t);
        return lambda / (gamma(1.0 - a) * std::pow(t - s, a));
    }

    std::uint64_t fingerprint() const {
        std::uint64_t b;
        __builtin_memcpy(&b, &lambda, sizeof(b));
        return order.fingerprint() ^ (b * 0x9E3779B97F4A7C15ULL);
    }
};

/// Smallest grid-estimated C with |kappa(t, s)| <= C (t - s)^{-alpha*(T)}
/// over 0 <= s < t <= T. Tight (and grid-independent) for constant order.
inline double singular_bound_constant(const FractionalKernel& k, double T,
                                      std::size_t grid_points = 1200) {
    if (!(T > 0.0)) throw std::invalid_argument("singular_bound_constant: T must be > 0");
    if (k.lambda == 0.0) return 0.0;
    const double a_star = k.order.max_order(T);
    double c = 0.0;
    for (std::size_t i = 1; i <= grid_points; ++i) {
        const double t = T * static_cast<double>(i) / static_cast<double>(grid_points);
        const double a = k.order(t);
        const double pref = std::abs(k.lambda) / gamma(1.0 - a);
        // |kappa(t,s)| (t-s)^{a*} = pref * (t-s)^{a* - a(t)}: monotone in t - s,
        // so only the extreme separations matter for each t.
        const double d_small = t / static_cast<double>(grid_points);
        for (double d : {d_small, t}) {
            c = std::max(c, pref * std::pow(d, a_star - a));
        }
    }
    return c;
}

/// One row of product-integration weights: w_{i,j} = integral of kappa(t_i, s)
/// over the cell [t_j, t_{j+1}], in closed form. Finite for every cell despite
/// the integrable singularity at s -> t_i.
inline void compute_weight_row(const FractionalKernel& k, const Grid& g, std::size_t i,
                               std::vector<double>& out) {
    if (i < 1 || i >= g.size())
        throw std::invalid_argument("compute_weight_row: need 1 <= i < node count");
    out.resize(i);
    const double ti = g.nodes[i];
    if (k.lambda == 0.0) {
        std::fill(out.begin(), out.end(), 0.0);
        return;
    }
    const double a = k.order(ti);
    const double q = 1.0 - a; // in (0, 1]
    const double pref = k.lambda / (gamma(q) * q); // Gamma(1 - a) = Gamma(q)
    if (a == 0.0) {
        for (std::size_t j = 0; j < i; ++j) out[j] = k.lambda * g.step(j);
        return;
    }
    double right = std::pow(ti - g.nodes[0], q);
    for (std::size_t j = 0; j < i; ++j) {
        const double left = (j + 1 == i) ? 0.0 : std::pow(ti - g.nodes[j + 1], q);
        out[j] = pref * (right - left);
        right = left;
    }
}

/// Public per-row accessor matching the module surface.
inline std::vector<double> kernel_weights(const FractionalKernel& k, const Grid& g, std::size_t i) {
    std::vector<double> row;
    compute_weight_row(k, g, i, row);
    return row;
}

/// Row-wise provider of product-integration weights. Picks a representation
/// by problem shape: an O(N) difference vector for constant order on uniform
/// grids, a dense triangular table for small general grids, and on-the-fly
/// row computation beyond that.
class WeightRows {
public:
    WeightRows(const FractionalKernel& k, const Grid& g) : kernel_(k), grid_(g) {
        constexpr std::size_t kDenseNodeCap = 2300; // ~20 MB triangular table
        if (g.uniform && k.order.form() == FractionalOrder::Form::Constant) {
            mode_ = Mode::ConstantUniform;
            const double a = k.order(0.0);
            const double q = 1.0 - a;
            const double dt = g.horizon / static_cast<double>(g.steps_requested);
            scale_ = (k.lambda == 0.0) ? 0.0 : k.lambda * std::pow(dt, q) / (gamma(q) * q);
            diffs_.resize(g.size());
            double right = 0.0;
            for (std::size_t m = 1; m < g.size(); ++m) {
                const double next = std::pow(static_cast<double>(m), q);
                diffs_[m] = next - right;
                right = next;
            }
        } else if (g.size() <= kDenseNodeCap) {
            mode_ = Mode::Dense;
            const std::size_t n = g.size();
            offsets_.resize(n, 0);
            std::size_t total = 0;
            for (std::size_t i = 1; i < n; ++i) {
                offsets_[i] = total;
                total += i;
            }
            dense_.resize(total);
            std::vector<double> row;
            for (std::size_t i = 1; i < n; ++i) {
                compute_weight_row(k, g, i, row);
                std::copy(row.begin(), row.end(), dense_.begin() + static_cast<std::ptrdiff_t>(offsets_[i]));
            }
        } else {
            mode_ = Mode::OnTheFly;
        }
    }

    /// Weights w_{i, 0..i-1}; `scratch` backs the returned span in the modes
    /// without a precomputed row.
    std::span<const double> row(std::size_t i, std::vector<double>& scratch) const {
        switch (mode_) {
            case Mode::Dense:
                return {dense_.data() + offsets_[i], i};
            case Mode::ConstantUniform: {
                scratch.resize(i);
                for (std::size_t j = 0; j < i; ++j) scratch[j] = scale_ * diffs_[i - j];
                return scratch;
            }
            case Mode::OnTheFly:
                compute_weight_row(kernel_, grid_, i, scratch);
                return scratch;
        }
        return {};
    }

private:
    enum class Mode { ConstantUniform, Dense, OnTheFly };
    FractionalKernel kernel_;
    Grid grid_; // owned: cached instances outlive the caller's grid
    Mode mode_ = Mode::OnTheFly;
    double scale_ = 0.0;
    std::vector<double> diffs_;
    std::vector<double> dense_;
    std::vector<std::size_t> offsets_;
};

/// Process-wide cache of WeightRows for uniform grids (the Monte Carlo hot
/// path shares one table across paths). Concurrent readers are safe; the
/// cache is cleared wholesale when it grows past a small bound.
inline std::shared_ptr<const WeightRows> shared_weight_rows(const FractionalKernel& k,
                                                            const Grid& g) {
    if (!g.uniform) return std::make_shared<const WeightRows>(k, g);

    struct Key {
        std::uint64_t kernel_fp;
        double T;
        std::size_t N;
        auto operator<=>(const Key&) const = default;
    };
    static std::map<Key, std::shared_ptr<const WeightRows>> cache;
    static std::shared_mutex mutex;

    const Key key{k.fingerprint(), g.horizon, g.steps_requested};
    {
        std::shared_lock lock(mutex);
        if (const auto it = cache.find(key); it != cache.end()) return it->second;
    }
    std::unique_lock lock(mutex);
    if (const auto it = cache.find(key); it != cache.end()) return it->second;
    if (cache.size() > 32) cache.clear();
    auto rows = std::make_shared<const WeightRows>(k, g);
    cache.emplace(key, rows);
    return rows;
}

} // namespace fracjump
