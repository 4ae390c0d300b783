#pragma once

#include <cmath>

#include "epps/errors.hpp"

namespace epps {

/// Closed-form constants of the fine-to-coarse model's calendar-time
/// covariance, all derived from (mu, beta, Gamma12, Gamma13).
struct TheoryParams {
    double mu = 0.0;
    double beta = 0.0;
    double gamma12 = 0.0;
    double gamma13 = 0.0;

    double lambda = 0.0; // stationary event rate per process
    double r = 0.0;
    double c1 = 0.0;
    double c2 = 0.0;
    double q1 = 0.0;
    double q2 = 0.0;
    double q3 = 0.0; // = q2
    double q4 = 0.0; // = q1
    double g1 = 0.0;
    double g2 = 0.0;

    // The published variance expression carries Q1 where the dt -> 0 limit
    // only works with C1 (the rate must tend to lambda). Default is the C1
    // form; the flag reinstates the printed Q1 term.
    bool use_printed_q1 = false;
};

inline TheoryParams theory_params(double mu, double beta, double gamma12, double gamma13) {
    if (!(gamma12 >= 0.0) || !(gamma13 >= 0.0) || gamma12 + gamma13 >= 1.0)
        throw DomainError("theory_params: need gamma12, gamma13 >= 0 and gamma12 + gamma13 < 1");
    if (!(mu >= 0.0) || !(beta > 0.0)) throw DomainError("theory_params: need mu >= 0, beta > 0");

    TheoryParams p;
    p.mu = mu;
    p.beta = beta;
    p.gamma12 = gamma12;
    p.gamma13 = gamma13;
    const double sum = gamma12 + gamma13;
    const double diff = gamma12 - gamma13;
    p.lambda = mu / (1.0 - sum);
    p.r = beta * mu / (sum - 1.0);
    p.c1 = (2.0 + sum) * sum / (1.0 + sum);
    p.c2 = (2.0 + diff) * diff / (1.0 + diff);
    const double denom = ((gamma12 + 1.0) * (gamma12 + 1.0) - gamma13 * gamma13) * (1.0 - sum);
    p.q1 = -mu * (gamma12 * gamma12 + gamma12 - gamma13 * gamma13) / denom;
    p.q4 = p.q1;
    p.q2 = -mu * gamma13 / denom;
    p.q3 = p.q2;
    p.g1 = beta * (1.0 + sum);
    p.g2 = beta * (1.0 + diff);
    return p;
}

namespace detail {

// (1 - e^{-x}) / x, stable near zero.
inline double em(double x) {
    if (x == 0.0) return 1.0;
    return -std::expm1(-x) / x;
}

} // namespace detail

/// C^{11}_dt / dt.
inline double theory_variance_rate(const TheoryParams& p, double dt) {
    if (!(dt > 0.0)) throw DomainError("theory_variance_rate: dt must be > 0");
    const double term1 = p.r * p.c1 / (2.0 * p.g1);
    const double term2 = p.r * p.c2 / (2.0 * p.g2);
    double rate = p.lambda + term1 * (1.0 - detail::em(p.g1 * dt)) +
                  term2 * (1.0 - detail::em(p.g2 * dt));
    if (p.use_printed_q1) {
        // Verbatim published form: Q1 e^{-dt G1} in place of C1 e^{-dt G1}.
        rate += p.r * (p.q1 - p.c1) * std::exp(-p.g1 * dt) / (2.0 * p.g1 * p.g1 * dt);
    }
    return rate;
}

/// C^{12}_dt / dt.
inline double theory_covariance_rate(const TheoryParams& p, double dt) {
    if (!(dt > 0.0)) throw DomainError("theory_covariance_rate: dt must be > 0");
    const double term1 = p.r * p.c1 / (2.0 * p.g1);
    const double term2 = p.r * p.c2 / (2.0 * p.g2);
    return -term1 * (1.0 - detail::em(p.g1 * dt)) + term2 * (1.0 - detail::em(p.g2 * dt));
}

/// Calendar-time correlation at sampling interval dt. C^{11} = C^{22} by the
/// model's symmetry, so the ratio is the correlation.
inline double theory_rho(const TheoryParams& p, double dt) {
    return theory_covariance_rate(p, dt) / theory_variance_rate(p, dt);
}

/// Large-interval correlation asymptote.
inline double theory_rho_limit(double gamma12, double gamma13) {
    if (!(gamma12 >= 0.0) || !(gamma13 >= 0.0) || gamma12 + gamma13 >= 1.0)
        throw DomainError("theory_rho_limit: need gamma12 + gamma13 < 1");
    return 2.0 * gamma13 * (1.0 + gamma12) /
           (1.0 + gamma13 * gamma13 + 2.0 * gamma12 + gamma12 * gamma12);
}

} // namespace epps
