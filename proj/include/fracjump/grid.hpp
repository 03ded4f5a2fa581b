#pragma once

#include <algorithm>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace fracjump {

/// Time grid on [0, T]: uniform nodes i*T/N augmented with every large-jump
/// time of the driving realization, so jump relations hold at exact nodes.
struct Grid {
    double horizon = 0.0;
    std::size_t steps_requested = 0;
    std::vector<double> nodes;           // strictly increasing, nodes[0] = 0, nodes.back() = T
    std::vector<std::size_t> jump_nodes; // indices of nodes carrying a large jump, ascending
    bool uniform = true;                 // true when no node was inserted

    static Grid build(double T, std::size_t N, std::span<const double> jump_times = {}) {
        if (!(T > 0.0)) throw std::invalid_argument("Grid: T must be > 0");
        if (N < 1) throw std::invalid_argument("Grid: N must be >= 1");
        Grid g;
        g.horizon = T;
        g.steps_requested = N;
        g.nodes.reserve(N + 1 + jump_times.size());
        for (std::size_t i = 0; i <= N; ++i)
            g.nodes.push_back(T * static_cast<double>(i) / static_cast<double>(N));
        std::vector<double> jumps(jump_times.begin(), jump_times.end());
        std::sort(jumps.begin(), jumps.end());
        for (double tj : jumps) {
            if (!(tj > 0.0) || tj > T)
                throw std::invalid_argument("Grid: jump time outside (0, T]");
            const auto it = std::lower_bound(g.nodes.begin(), g.nodes.end(), tj);
            if (it == g.nodes.end() || *it != tj) {
                g.nodes.insert(it, tj);
                g.uniform = false;
            }
        }
        for (double tj : jumps) {
            const auto it = std::lower_bound(g.nodes.begin(), g.nodes.end(), tj);
            g.jump_nodes.push_back(static_cast<std::size_t>(it - g.nodes.begin()));
        }
        return g;
    }

    std::size_t size() const { return nodes.size(); }
    double step(std::size_t j) const { return nodes[j + 1] - nodes[j]; }

    /// Largest node index with nodes[idx] < t (the left-limit node).
    std::size_t node_before(double t) const {
        const auto it = std::lower_bound(nodes.begin(), nodes.end(), t);
        const std::size_t idx = static_cast<std::size_t>(it - nodes.begin());
        return idx == 0 ? 0 : idx - 1;
    }
};

} // namespace fracjump
