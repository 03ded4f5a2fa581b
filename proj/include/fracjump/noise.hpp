#pragma once

#include "fracjump/levy_measure.hpp"
#include "fracjump/rng.hpp"

#include <algorithm>
#include <cstdint>
#include <ostream>
#include <vector>

namespace fracjump {

enum class JumpClass { Small, Large };

/// One jump of the driving noise: arrival time, mark vector, and whether it
/// belongs to the compensated small-jump part or the finite-activity large part.
struct JumpEvent {
    double time = 0.0;
    std::vector<double> mark;
    JumpClass klass = JumpClass::Small;
    double mark_norm = 0.0;
};

/// Frozen realization of the Poisson random measure on (0, T]: a strictly
/// time-ordered event list, reproducible from (measure, T, seed) alone.
struct NoiseRealization {
    std::vector<JumpEvent> events;
    std::uint64_t seed = 0;
    double horizon = 0.0;
    LevyMeasure measure;

    std::vector<double> large_jump_times() const {
        std::vector<double> out;
        for (const auto& e : events)
            if (e.klass == JumpClass::Large) out.push_back(e.time);
        return out;
    }

    std::size_t count(JumpClass k) const {
        std::size_t n = 0;
        for (const auto& e : events) n += (e.klass == k);
        return n;
    }

    /// Keeps only the compensated small-jump part (the no-large-jump model).
    NoiseRealization restricted_to_small() const {
        NoiseRealization r{{}, seed, horizon, measure};
        for (const auto& e : events)
            if (e.klass == JumpClass::Small) r.events.push_back(e);
        return r;
    }

    /// Debug export: header plus one row per event: time, mark components, class.
    void write_csv(std::ostream& os) const {
        const int d = measure.mark_dim;
        os << "time";
        for (int c = 0; c < d; ++c) os << ",mark" << c;
        os << ",class\n";
        os.precision(17);
        for (const auto& e : events) {
            os << e.time;
            for (int c = 0; c < d; ++c) os << ',' << e.mark[c];
            os << ',' << (e.klass == JumpClass::Small ? "small" : "large") << '\n';
        }
    }
};

namespace detail {

inline std::vector<double> sample_small_mark(const LevyMeasure& m, RandomStream& stream) {
    if (const auto* at = std::get_if<AtomsSmall>(&m.small)) {
        std::vector<double> masses;
        std::vector<std::size_t> index;
        for (std::size_t i = 0; i < at->atoms.size(); ++i) {
            if (norm(at->atoms[i].z) >= m.epsilon) {
                masses.push_back(at->atoms[i].mass);
                index.push_back(i);
            }
        }
        return at->atoms[index[stream.categorical(masses)]].z;
    }
    double r = 0.0;
    if (const auto* s = std::get_if<StableLikeSmall>(&m.small)) {
        // inverse CDF of the restriction to [eps, 1)
        const double e_pow = std::pow(m.epsilon, -s->beta);
        const double u = stream.uniform01();
        r = std::pow(e_pow - u * (e_pow - 1.0), -1.0 / s->beta);
    } else {
        const auto& a = std::get<AnnulusUniformSmall>(m.small);
        r = stream.uniform(std::max(m.epsilon, a.r_lo), a.r_hi);
    }
    auto z = stream.unit_direction(m.mark_dim);
    for (auto& c : z) c *= r;
    return z;
}

inline std::vector<double> sample_large_mark(const LevyMeasure& m, RandomStream& stream) {
    if (const auto* at = std::get_if<AtomsLarge>(&m.large)) {
        std::vector<double> masses;
        for (const auto& atom : at->atoms) masses.push_back(atom.mass);
        return at->atoms[stream.categorical(masses)].z;
    }
    double r = 0.0;
    if (const auto* p = std::get_if<ParetoLarge>(&m.large)) {
        r = std::pow(1.0 - stream.uniform01(), -1.0 / p->tail_index);
    } else {
        const auto& s = std::get<ShellLarge>(m.large);
        r = stream.uniform(s.r_lo, s.r_hi);
    }
    auto z = stream.unit_direction(m.mark_dim);
    for (auto& c : z) c *= r;
    return z;
}

} // namespace detail

/// Draws one realization by the interlacing recipe: the retained small jumps
/// form a compound Poisson stream with intensity lambda_eps, the large jumps
/// an independent one with intensity Lambda; the two are merged in time.
/// Coincident times (possible only through floating-point collision) are
/// resolved by resampling the later event's time.
inline NoiseRealization sample_realization(const LevyMeasure& measure, double T,
                                           std::uint64_t seed) {
    measure.validate();
    if (!(T > 0.0)) throw std::invalid_argument("sample_realization: T must be > 0");
    NoiseRealization real{{}, seed, T, measure};

    const double lam_small = small_mass(measure);
    const double lam_large = large_mass(measure);

    // independent substreams so the small-jump pattern is unchanged when the
    // large part is switched on or off
    RandomStream small_stream(derive_seed(seed, 1));
    RandomStream large_stream(derive_seed(seed, 2));

    auto emit = [&](double rate, JumpClass klass, RandomStream& stream) {
        if (rate <= 0.0) return;
        double t = 0.0;
        while (true) {
            t += stream.exponential(rate);
            if (t > T) break;
            JumpEvent e;
            e.time = t;
            e.klass = klass;
            e.mark = (klass == JumpClass::Small) ? detail::sample_small_mark(measure, stream)
                                                 : detail::sample_large_mark(measure, stream);
            e.mark_norm = detail::norm(e.mark);
            real.events.push_back(std::move(e));
        }
    };
    emit(lam_small, JumpClass::Small, small_stream);
    emit(lam_large, JumpClass::Large, large_stream);

    auto by_time = [](const JumpEvent& a, const JumpEvent& b) { return a.time < b.time; };
    std::sort(real.events.begin(), real.events.end(), by_time);
    RandomStream tiebreak(derive_seed(seed, 3));
    for (int guard = 0; guard < 100; ++guard) {
        bool collided = false;
        for (std::size_t i = 1; i < real.events.size(); ++i) {
            if (real.events[i].time == real.events[i - 1].time) {
                real.events[i].time = T * (1.0 - tiebreak.uniform01()); // in (0, T]
                collided = true;
            }
        }
        if (!collided) break;
        std::sort(real.events.begin(), real.events.end(), by_time);
    }
    return real;
}

} // namespace fracjump
