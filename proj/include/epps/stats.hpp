#pragma once

#include <algorithm>
#include <boost/math/distributions/students_t.hpp>
#include <cmath>
#include <vector>

#include "epps/errors.hpp"

namespace epps {

inline double mean_of(const std::vector<double>& values) {
    double sum = 0.0;
    for (double v : values) sum += v;
    return sum / static_cast<double>(values.size());
}

inline double sample_sd(const std::vector<double>& values) {
    const double m = mean_of(values);
    double ss = 0.0;
    for (double v : values) ss += (v - m) * (v - m);
    return std::sqrt(ss / static_cast<double>(values.size() - 1));
}

inline double t_quantile_975(double degrees_of_freedom) {
    boost::math::students_t dist(degrees_of_freedom);
    return boost::math::quantile(dist, 0.975);
}

enum class RibbonMode {
    dispersion,     // mean +- t * sd: a band containing ~95% of the estimates
    standard_error, // mean +- t * sd / sqrt(n): a CI for the mean
};

struct Ribbon {
    double mean = 0.0;
    double lo = 0.0;
    double hi = 0.0;
    int count = 0;
};

inline Ribbon ribbon(const std::vector<double>& values,
                     RibbonMode mode = RibbonMode::dispersion) {
    if (values.size() < 2) throw TooFewValues("ribbon: need >= 2 values");
    Ribbon r;
    r.count = static_cast<int>(values.size());
    r.mean = mean_of(values);
    double width = t_quantile_975(static_cast<double>(values.size() - 1)) * sample_sd(values);
    if (mode == RibbonMode::standard_error) width /= std::sqrt(static_cast<double>(values.size()));
    r.lo = r.mean - width;
    r.hi = r.mean + width;
    return r;
}

struct OlsFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
};

inline OlsFit ols_fit(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2) throw TooFewValues("ols_fit: need >= 2 points");
    const double n = static_cast<double>(x.size());
    const double mx = mean_of(x);
    const double my = mean_of(y);
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    (void)n;
    OlsFit fit;
    fit.slope = sxx > 0.0 ? sxy / sxx : 0.0;
    fit.intercept = my - fit.slope * mx;
    if (syy > 0.0) {
        fit.r_squared = (sxy * sxy) / (sxx * syy);
    } else {
        fit.r_squared = 1.0; // constant response, perfectly fit by slope 0
    }
    return fit;
}

/// Kolmogorov--Smirnov statistic of samples against Exponential(rate).
inline double ks_statistic_exponential(std::vector<double> samples, double rate) {
    if (samples.empty()) throw TooFewValues("ks_statistic: empty sample");
    std::sort(samples.begin(), samples.end());
    const double n = static_cast<double>(samples.size());
    double d = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const double cdf = -std::expm1(-rate * samples[i]);
        d = std::max(d, std::abs(cdf - static_cast<double>(i) / n));
        d = std::max(d, std::abs(static_cast<double>(i + 1) / n - cdf));
    }
    return d;
}

} // namespace epps
