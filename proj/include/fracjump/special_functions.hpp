#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>

namespace fracjump {

/// Truncation control for series evaluations (Mittag-Leffler and friends).
struct SeriesControl {
    double abs_tol = 1e-14;
    std::size_t max_terms = 20000;

    void validate() const {
        if (!(abs_tol > 0.0)) throw std::invalid_argument("SeriesControl: abs_tol must be > 0");
        if (max_terms < 1) throw std::invalid_argument("SeriesControl: max_terms must be >= 1");
    }
};

/// Thrown when a series has not converged within its term budget.
class SeriesNonConvergence : public std::runtime_error {
public:
    SeriesNonConvergence(const std::string& what, std::size_t terms_used)
        : std::runtime_error(what), terms_used(terms_used) {}
    std::size_t terms_used;
};

namespace detail {

// Lanczos approximation, g = 6.024680040776729583740234375, 13-term
// rational (Godfrey/Pugh coefficients tuned for double precision).
inline double lanczos_sum(double z) {
    static constexpr double num[13] = {
        23531376880.410759688572007674451636754734846804940,
        42919803642.649098768957899047001988850926355848959,
        35711959237.355668049440185451547166705960488635843,
        17921034426.037209699919755754458931112671403265390,
        6039542586.3520280050642916443072979210699388420708,
        1439720407.3117216736632230727949123939715485786772,
        248874557.86205415651146038641322942321632125127801,
        31426415.585400194380614231628318205362874684987640,
        2876370.6289353724412254090516208496135991145378768,
        186056.26539522349504029498971604569928220784236328,
        8071.6720023658162106380029022722506138218516325024,
        210.82427775157934587250973392071336271166969580291,
        2.5066282746310002701649081771338373386264310793408,
    };
    static constexpr double den[13] = {
        0, 39916800, 120543840, 150917976, 105258076, 45995730,
        13339535, 2637558, 357423, 32670, 1925, 66, 1,
    };
    double p = num[12];
    double q = den[12];
    for (int i = 11; i >= 0; --i) {
        p = p * z + num[i];
        q = q * z + den[i];
    }
    return p / q;
}

constexpr double lanczos_g = 6.024680040776729583740234375;

} // namespace detail

/// Gamma function on the positive half line. Relative error is at the
/// few-ulp level for arguments up to ~50, which is all the kernel and
/// envelope machinery ever asks for.
inline double gamma(double x) {
    if (!(x > 0.0)) throw std::domain_error("gamma: argument must be > 0");
    if (x < 0.5) {
        // recurrence, keeps the Lanczos sum in its sweet spot
        return gamma(x + 1.0) / x;
    }
    const double zgh = x + detail::lanczos_g - 0.5;
    return detail::lanczos_sum(x) * std::pow(zgh, x - 0.5) * std::exp(-zgh);
}

/// log(Gamma(x)) for x > 0; overflow-safe companion used by the
/// theoretical bound evaluators where Gamma itself would overflow.
inline double log_gamma(double x) {
    if (!(x > 0.0)) throw std::domain_error("log_gamma: argument must be > 0");
    if (x < 0.5) return log_gamma(x + 1.0) - std::log(x);
    const double zgh = x + detail::lanczos_g - 0.5;
    return std::log(detail::lanczos_sum(x)) + (x - 0.5) * std::log(zgh) - zgh;
}

/// Beta function B(x, y) = Gamma(x) Gamma(y) / Gamma(x + y), x, y > 0.
inline double beta(double x, double y) {
    if (!(x > 0.0) || !(y > 0.0)) throw std::domain_error("beta: arguments must be > 0");
    if (x + y < 100.0) return gamma(x) * gamma(y) / gamma(x + y);
    return std::exp(log_gamma(x) + log_gamma(y) - log_gamma(x + y));
}

/// Two-parameter Mittag-Leffler function E_{p,q}(z) = sum_k z^k / Gamma(pk + q),
/// by direct series summation. Domain is restricted to z >= 0, p in (0, 1],
/// q >= 1: the arguments the Gronwall envelopes produce. The series is
/// truncated once the next term drops below ctrl.abs_tol; if that does not
/// happen within ctrl.max_terms the call refuses the argument instead of
/// switching to an asymptotic regime.
inline double mittag_leffler(double p, double q, double z, const SeriesControl& ctrl = {}) {
    ctrl.validate();
    if (!(p > 0.0) || p > 1.0) throw std::domain_error("mittag_leffler: p must be in (0, 1]");
    if (!(q >= 1.0)) throw std::domain_error("mittag_leffler: q must be >= 1");
    if (!(z >= 0.0)) throw std::domain_error("mittag_leffler: z must be >= 0");
    if (z == 0.0) return 1.0 / gamma(q);

    const double log_z = std::log(z);
    double sum = 1.0 / gamma(q); // k = 0
    double comp = 0.0;           // Neumaier compensation
    for (std::size_t k = 1; k < ctrl.max_terms; ++k) {
        const double term = std::exp(static_cast<double>(k) * log_z - log_gamma(p * static_cast<double>(k) + q));
        if (!std::isfinite(term)) {
            throw SeriesNonConvergence("mittag_leffler: series term overflows double range "
                                       "(argument outside the supported regime)",
                                       k);
        }
        if (term < ctrl.abs_tol) return sum + comp;
        const double t = sum + term;
        comp += (std::abs(sum) >= term) ? (sum - t) + term : (term - t) + sum;
        sum = t;
    }
    throw SeriesNonConvergence("mittag_leffler: series did not converge within max_terms "
                               "(enlarge max_terms or reduce z)",
                               ctrl.max_terms);
}

/// Gronwall comparison envelope phi0 * E_{beta,1}(C6 * Gamma(beta) * (t-a)^beta)
/// for the singular-kernel Gronwall inequality. beta = 1 is admitted and
/// reduces to the classical exponential envelope.
inline double gronwall_envelope(double phi0_at_t, double c6, double beta_exp, double t_minus_a,
                                const SeriesControl& ctrl = {}) {
    if (!(phi0_at_t >= 0.0)) throw std::domain_error("gronwall_envelope: phi0 must be >= 0");
    if (!(c6 >= 0.0)) throw std::domain_error("gronwall_envelope: C6 must be >= 0");
    if (!(beta_exp > 0.0) || beta_exp > 1.0) throw std::domain_error("gronwall_envelope: beta must be in (0, 1]");
    if (!(t_minus_a >= 0.0)) throw std::domain_error("gronwall_envelope: t - a must be >= 0");
    const double arg = c6 * gamma(beta_exp) * std::pow(t_minus_a, beta_exp);
    return phi0_at_t * mittag_leffler(beta_exp, 1.0, arg, ctrl);
}

} // namespace fracjump
