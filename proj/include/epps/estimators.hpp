#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <vector>

#include "epps/clocks.hpp"
#include "epps/errors.hpp"

namespace epps {

enum class EstimatorKind { MM, RV, HY };

inline const char* estimator_name(EstimatorKind kind) {
    switch (kind) {
        case EstimatorKind::MM: return "MM";
        case EstimatorKind::RV: return "RV";
        case EstimatorKind::HY: return "HY";
    }
    return "?";
}

inline const char* clock_name(ClockKind kind) {
    switch (kind) {
        case ClockKind::calendar: return "calendar";
        case ClockKind::event: return "event";
        case ClockKind::volume: return "volume";
    }
    return "?";
}

/// Integrated 2x2 covariance with its correlation.
struct CovarianceEstimate {
    double sigma11 = 0.0;
    double sigma12 = 0.0;
    double sigma22 = 0.0;
    double rho = 0.0;
    EstimatorKind estimator = EstimatorKind::RV;
    double scale = 0.0; // time-scale parameter (dt in clock units, or N for MM)
    bool rho_clamped = false;
    bool aliasing_warning = false;
};

namespace detail {

inline double correlation(double s11, double s12, double s22, bool& clamped) {
    clamped = false;
    if (!(s11 > 0.0) || !(s22 > 0.0)) return 0.0;
    double rho = s12 / std::sqrt(s11 * s22);
    if (rho > 1.0) {
        rho = 1.0;
        clamped = true;
    } else if (rho < -1.0) {
        rho = -1.0;
        clamped = true;
    }
    return rho;
}

inline std::vector<double> returns_of(const std::vector<double>& prices) {
    std::vector<double> r(prices.size() > 0 ? prices.size() - 1 : 0);
    for (std::size_t h = 0; h + 1 < prices.size(); ++h) r[h] = prices[h + 1] - prices[h];
    return r;
}

} // namespace detail

/// Frequency count for a sampling interval dt over span T: N = floor((T/dt - 1)/2).
inline long long n_from_interval(double T, double dt) {
    if (!(dt > 0.0) || !(dt <= T)) throw DomainError("n_from_interval: need 0 < dt <= T");
    return static_cast<long long>(std::floor(0.5 * (T / dt - 1.0)));
}

/// Realised covariance: sum of cross products of aligned returns on a
/// synchronous homogeneous grid.
inline CovarianceEstimate rv_covariance(const SampledGrid& grid) {
    if (!grid.synchronous || !grid.homogeneous)
        throw GridNotSynchronous("rv_covariance: grid must be synchronous and homogeneous");
    if (grid.prices[0].size() < 2 || grid.prices[1].size() < 2)
        throw TooFewObservations("rv_covariance: need >= 2 observations");

    CovarianceEstimate est;
    est.estimator = EstimatorKind::RV;
    est.scale = grid.interval;
    const std::vector<double>& x = grid.prices[0];
    const std::vector<double>& y = grid.prices[1];
    for (std::size_t h = 0; h + 1 < x.size(); ++h) {
        const double dx = x[h + 1] - x[h];
        const double dy = y[h + 1] - y[h];
        est.sigma11 += dx * dx;
        est.sigma12 += dx * dy;
        est.sigma22 += dy * dy;
    }
    est.rho = detail::correlation(est.sigma11, est.sigma12, est.sigma22, est.rho_clamped);
    return est;
}

/// Keep every k-th observation (indices 0, k, 2k, ...) of both assets.
inline SampledGrid downsample(const SampledGrid& grid, long long k) {
    if (k < 1) throw DomainError("downsample: k must be >= 1");
    if (k == 1) return grid;
    SampledGrid out = grid;
    out.interval = grid.interval * static_cast<double>(k);
    for (int s = 0; s < 2; ++s) {
        out.times[s].clear();
        out.prices[s].clear();
        for (std::size_t h = 0; h < grid.times[s].size(); h += static_cast<std::size_t>(k)) {
            out.times[s].push_back(grid.times[s][h]);
            out.prices[s].push_back(grid.prices[s][h]);
        }
    }
    return out;
}

/// Hayashi--Yoshida: return products over overlapping half-open intervals,
/// swept with two pointers in O(n_i + n_j). Diagonals are each asset's own
/// realised variance.
inline CovarianceEstimate hy_covariance(const SampledGrid& grid) {
    const std::vector<double>& tx = grid.times[0];
    const std::vector<double>& ty = grid.times[1];
    const std::vector<double>& px = grid.prices[0];
    const std::vector<double>& py = grid.prices[1];
    if (px.size() < 2 || py.size() < 2)
        throw TooFewObservations("hy_covariance: need >= 2 observations per asset");

    CovarianceEstimate est;
    est.estimator = EstimatorKind::HY;
    for (std::size_t h = 0; h + 1 < px.size(); ++h) {
        const double d = px[h + 1] - px[h];
        est.sigma11 += d * d;
    }
    for (std::size_t h = 0; h + 1 < py.size(); ++h) {
        const double d = py[h + 1] - py[h];
        est.sigma22 += d * d;
    }

    // Intervals (tx[h], tx[h+1]] and (ty[l], ty[l+1]] overlap iff
    // tx[h] < ty[l+1] and ty[l] < tx[h+1].
    std::size_t l = 0;
    for (std::size_t h = 0; h + 1 < tx.size(); ++h) {
        while (l + 1 < ty.size() && ty[l + 1] <= tx[h]) ++l;
        const double dx = px[h + 1] - px[h];
        for (std::size_t m = l; m + 1 < ty.size() && ty[m] < tx[h + 1]; ++m) {
            if (tx[h] < ty[m + 1]) est.sigma12 += dx * (py[m + 1] - py[m]);
        }
    }
    est.rho = detail::correlation(est.sigma11, est.sigma12, est.sigma22, est.rho_clamped);
    return est;
}

/// Per-asset Fourier coefficients of the price increments over s = 0..N_max,
/// on observation times rescaled from [first, last] of the union of both
/// assets to [0, 2pi]. Prefix sums over s make the estimate at any N <= N_max
/// an O(1) lookup, so one coefficient pass serves a whole interval sweep.
class MmSweep {
public:
    MmSweep(const SampledGrid& grid, long long n_max) : n_max_(n_max) {
        if (n_max < 1) throw DomainError("MmSweep: N must be >= 1");
        if (grid.prices[0].size() < 2 || grid.prices[1].size() < 2)
            throw TooFewObservations("MmSweep: need >= 2 observations per asset");

        const double t_min = std::min(grid.times[0].front(), grid.times[1].front());
        const double t_max = std::max(grid.times[0].back(), grid.times[1].back());
        if (!(t_max > t_min)) throw TooFewObservations("MmSweep: degenerate time span");
        span_ = t_max - t_min;
        const double scale = 2.0 * M_PI / span_;

        min_gap_ = std::numeric_limits<double>::infinity();
        std::array<std::vector<std::complex<double>>, 2> coeff;
        for (int s = 0; s < 2; ++s) {
            coeff[s].assign(static_cast<std::size_t>(n_max) + 1, {0.0, 0.0});
            const std::vector<double>& t = grid.times[s];
            const std::vector<double>& p = grid.prices[s];
            for (std::size_t h = 0; h + 1 < t.size(); ++h) {
                min_gap_ = std::min(min_gap_, t[h + 1] - t[h]);
                const double delta = p[h + 1] - p[h];
                if (delta == 0.0) continue;
                const double tau = (t[h] - t_min) * scale;
                const std::complex<double> w(std::cos(tau), -std::sin(tau));
                std::complex<double> z(1.0, 0.0);
                for (long long k = 0; k <= n_max; ++k) {
                    coeff[s][static_cast<std::size_t>(k)] += delta * z;
                    z *= w;
                }
            }
        }

        // Conjugate symmetry folds s in [-N, N] onto s in [0, N]:
        // sum_{|s|<=N} c_i(s) conj(c_j(s)) = P(0) + 2 sum_{s=1}^N Re P(s).
        prefix11_.resize(coeff[0].size());
        prefix12_.resize(coeff[0].size());
        prefix22_.resize(coeff[0].size());
        double a11 = 0.0, a12 = 0.0, a22 = 0.0;
        for (std::size_t k = 0; k < coeff[0].size(); ++k) {
            const double weight = k == 0 ? 1.0 : 2.0;
            a11 += weight * std::norm(coeff[0][k]);
            a12 += weight * (coeff[0][k] * std::conj(coeff[1][k])).real();
            a22 += weight * std::norm(coeff[1][k]);
            prefix11_[k] = a11;
            prefix12_[k] = a12;
            prefix22_[k] = a22;
        }
    }

    long long max_frequency() const { return n_max_; }
    double span() const { return span_; }

    CovarianceEstimate estimate(long long n) const {
        if (n < 1 || n > n_max_) throw DomainError("MmSweep: N out of range");
        CovarianceEstimate est;
        est.estimator = EstimatorKind::MM;
        est.scale = static_cast<double>(n);
        const double norm = 1.0 / static_cast<double>(2 * n + 1);
        const std::size_t k = static_cast<std::size_t>(n);
        est.sigma11 = prefix11_[k] * norm;
        est.sigma12 = prefix12_[k] * norm;
        est.sigma22 = prefix22_[k] * norm;
        // Anti-aliasing guard: the implied sampling interval must not fall
        // below the smallest inter-observation gap.
        est.aliasing_warning = span_ / static_cast<double>(2 * n + 1) < min_gap_;
        est.rho = detail::correlation(est.sigma11, est.sigma12, est.sigma22, est.rho_clamped);
        return est;
    }

private:
    long long n_max_;
    double span_ = 0.0;
    double min_gap_ = 0.0;
    std::vector<double> prefix11_, prefix12_, prefix22_;
};

/// Malliavin--Mancino Fourier estimator with Dirichlet weights at frequency N.
inline CovarianceEstimate mm_covariance(const SampledGrid& grid, long long n) {
    return MmSweep(grid, n).estimate(n);
}

} // namespace epps
