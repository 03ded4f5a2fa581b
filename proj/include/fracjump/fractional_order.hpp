#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace fracjump {

/// Result of sampling-based validation of a fractional order function.
struct OrderValidation {
    bool ok = true;
    std::string message;
    double min_value = 0.0;
    double max_value = 0.0;
    /// Smallest C with |alpha(t2) - alpha(t1)| <= C |t2 - t1|^gamma over the sample.
    double holder_constant = 0.0;
};

/// Time-dependent fractional order alpha(t) on [0, t_max], taking values
/// in [0, 1). Supports the closed forms the studies use plus a tabulated
/// piecewise-linear form. `holder_exponent` is the declared regularity
/// gamma; set `regularity_claimed` to false for orders allowed to touch 0
/// (e.g. the memoryless alpha == 0 reduction).
class FractionalOrder {
public:
    enum class Form { Constant, Affine, Sinusoidal, Table };

    static FractionalOrder constant(double value, double t_max, double holder_exponent = 1.0) {
        FractionalOrder o(Form::Constant, t_max, holder_exponent);
        o.p0_ = value;
        return o;
    }

    /// alpha(t) = intercept + slope * t
    static FractionalOrder affine(double intercept, double slope, double t_max,
                                  double holder_exponent = 1.0) {
        FractionalOrder o(Form::Affine, t_max, holder_exponent);
        o.p0_ = intercept;
        o.p1_ = slope;
        return o;
    }

    /// alpha(t) = offset + amplitude * sin(omega * t)
    static FractionalOrder sinusoidal(double offset, double amplitude, double omega, double t_max,
                                      double holder_exponent = 1.0) {
        FractionalOrder o(Form::Sinusoidal, t_max, holder_exponent);
        o.p0_ = offset;
        o.p1_ = amplitude;
        o.p2_ = omega;
        return o;
    }

    /// Piecewise-linear interpolation through (ts, values); ts must be
    /// strictly increasing and start at 0.
    static FractionalOrder table(std::vector<double> ts, std::vector<double> values,
                                 double holder_exponent = 1.0) {
        if (ts.size() < 2 || ts.size() != values.size())
            throw std::invalid_argument("FractionalOrder::table: need matching lists, >= 2 knots");
        if (ts.front() != 0.0) throw std::invalid_argument("FractionalOrder::table: first knot must be t = 0");
        for (std::size_t i = 1; i < ts.size(); ++i)
            if (!(ts[i] > ts[i - 1]))
                throw std::invalid_argument("FractionalOrder::table: knots must be strictly increasing");
        FractionalOrder o(Form::Table, ts.back(), holder_exponent);
        o.knot_t_ = std::move(ts);
        o.knot_v_ = std::move(values);
        return o;
    }

    double operator()(double t) const {
        switch (form_) {
            case Form::Constant: return p0_;
            case Form::Affine: return p0_ + p1_ * t;
            case Form::Sinusoidal: return p0_ + p1_ * std::sin(p2_ * t);
            case Form::Table: {
                if (t <= knot_t_.front()) return knot_v_.front();
                if (t >= knot_t_.back()) return knot_v_.back();
                const auto it = std::upper_bound(knot_t_.begin(), knot_t_.end(), t);
                const std::size_t j = static_cast<std::size_t>(it - knot_t_.begin());
                const double w = (t - knot_t_[j - 1]) / (knot_t_[j] - knot_t_[j - 1]);
                return knot_v_[j - 1] + w * (knot_v_[j] - knot_v_[j - 1]);
            }
        }
        return p0_;
    }

    /// Maximal order alpha*(t) = sup over [0, t]. Closed form for the
    /// monotone-friendly forms, dense grid search for the sinusoidal one.
    double max_order(double t) const {
        if (!(t >= 0.0) || t > t_max_ * (1.0 + 1e-12))
            throw std::domain_error("FractionalOrder::max_order: t outside [0, t_max]");
        switch (form_) {
            case Form::Constant: return p0_;
            case Form::Affine: return p1_ >= 0.0 ? p0_ + p1_ * t : p0_;
            case Form::Table: {
                double m = knot_v_.front();
                for (std::size_t j = 1; j < knot_t_.size() && knot_t_[j] <= t; ++j)
                    m = std::max(m, knot_v_[j]);
                return std::max(m, (*this)(t));
            }
            case Form::Sinusoidal: {
                constexpr std::size_t kGridPoints = 1'000'000;
                double m = p0_;
                for (std::size_t i = 0; i <= kGridPoints; ++i) {
                    const double s = t * static_cast<double>(i) / static_cast<double>(kGridPoints);
                    m = std::max(m, (*this)(s));
                }
                return m;
            }
        }
        return p0_;
    }

    /// Samples the order on a dense grid: checks the [0, 1) range (strict
    /// (0, 1) when regularity is claimed) and records the observed Hölder
    /// constant for the declared exponent.
    OrderValidation validate(std::size_t samples = 4096) const {
        OrderValidation r;
        r.min_value = 1.0;
        r.max_value = 0.0;
        double prev_t = 0.0;
        double prev_v = (*this)(0.0);
        for (std::size_t i = 0; i <= samples; ++i) {
            const double t = t_max_ * static_cast<double>(i) / static_cast<double>(samples);
            const double v = (*this)(t);
            r.min_value = std::min(r.min_value, v);
            r.max_value = std::max(r.max_value, v);
            if (i > 0) {
                const double dt = t - prev_t;
                if (dt > 0.0) {
                    const double c = std::abs(v - prev_v) / std::pow(dt, holder_exponent_);
                    r.holder_constant = std::max(r.holder_constant, c);
                }
            }
            prev_t = t;
            prev_v = v;
        }
        if (r.max_value >= 1.0) {
            r.ok = false;
            r.message = "order exits [0, 1): max sampled value " + std::to_string(r.max_value);
        } else if (r.min_value < 0.0 || (regularity_claimed && r.min_value <= 0.0)) {
            r.ok = false;
            r.message = regularity_claimed
                            ? "claimed regularity requires order in (0, 1); min sampled value " +
                                  std::to_string(r.min_value)
                            : "order exits [0, 1): min sampled value " + std::to_string(r.min_value);
        }
        return r;
    }

    Form form() const { return form_; }
    double t_max() const { return t_max_; }
    double holder_exponent() const { return holder_exponent_; }

    std::uint64_t fingerprint() const {
        std::uint64_t h = 1469598103934665603ULL;
        auto mix = [&h](double d) {
            std::uint64_t b;
            static_assert(sizeof(b) == sizeof(d));
            __builtin_memcpy(&b, &d, sizeof(b));
            h = (h ^ b) * 1099511628211ULL;
        };
        mix(static_cast<double>(static_cast<int>(form_)));
        mix(p0_);
        mix(p1_);
        mix(p2_);
        mix(t_max_);
        for (double v : knot_t_) mix(v);
        for (double v : knot_v_) mix(v);
        return h;
    }

    bool regularity_claimed = true;

    // form parameters, exposed for config round-tripping
    double param0() const { return p0_; }
    double param1() const { return p1_; }
    double param2() const { return p2_; }
    const std::vector<double>& knot_times() const { return knot_t_; }
    const std::vector<double>& knot_values() const { return knot_v_; }

private:
    FractionalOrder(Form f, double t_max, double holder_exponent)
        : form_(f), t_max_(t_max), holder_exponent_(holder_exponent) {
        if (!(t_max > 0.0)) throw std::invalid_argument("FractionalOrder: t_max must be > 0");
        if (!(holder_exponent > 0.0))
            throw std::invalid_argument("FractionalOrder: holder exponent must be > 0");
    }

    Form form_;
    double t_max_;
    double holder_exponent_;
    double p0_ = 0.0, p1_ = 0.0, p2_ = 0.0;
    std::vector<double> knot_t_, knot_v_;
};

} // namespace fracjump
