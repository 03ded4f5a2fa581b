#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>

namespace fracjump {

/// Neumaier-compensated accumulator; reductions over Monte Carlo results use
/// it in fixed index order so sums are independent of scheduling.
class CompensatedSum {
public:
    void add(double x) {
        const double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x)) {
            comp_ += (sum_ - t) + x;
        } else {
            comp_ += (x - t) + sum_;
        }
        sum_ = t;
    }
    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

struct MeanVariance {
    double mean = 0.0;
    double variance = 0.0; // unbiased (n - 1)
    double std_err = 0.0;  // of the mean
    std::size_t n = 0;
};

inline MeanVariance mean_variance(std::span<const double> xs) {
    MeanVariance out;
    out.n = xs.size();
    if (xs.empty()) return out;
    CompensatedSum s;
    for (double x : xs) s.add(x);
    out.mean = s.value() / static_cast<double>(xs.size());
    if (xs.size() < 2) return out;
    CompensatedSum sq;
    for (double x : xs) sq.add((x - out.mean) * (x - out.mean));
    out.variance = sq.value() / static_cast<double>(xs.size() - 1);
    out.std_err = std::sqrt(out.variance / static_cast<double>(xs.size()));
    return out;
}

struct OlsFit {
    double slope = 0.0;
    double intercept = 0.0;
    double slope_se = 0.0; // from residual variance
};

inline OlsFit ols_fit(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 3)
        throw std::invalid_argument("ols_fit: need >= 3 matching points");
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
    }
    const double mx = sx / n, my = sy / n;
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (sxx == 0.0) throw std::invalid_argument("ols_fit: degenerate abscissae");
    OlsFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    double ss_res = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double r = y[i] - (fit.intercept + fit.slope * x[i]);
        ss_res += r * r;
    }
    fit.slope_se = std::sqrt(ss_res / (n - 2.0) / sxx);
    return fit;
}

} // namespace fracjump
