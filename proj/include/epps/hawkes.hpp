#pragma once

#include <Eigen/Eigenvalues>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "epps/errors.hpp"
#include "epps/rng.hpp"

namespace epps {

using Matrix = std::vector<std::vector<double>>;

/// Ordered event times of one counting process N_m(t).
struct EventStream {
    std::size_t process_index = 0;
    std::vector<double> times;
};

/// Largest eigenvalue magnitude of a square nonnegative matrix.
inline double spectral_radius(const Matrix& gamma) {
    const std::size_t m = gamma.size();
    if (m == 0) throw DomainError("spectral_radius: empty matrix");
    Eigen::MatrixXd a(m, m);
    for (std::size_t i = 0; i < m; ++i) {
        if (gamma[i].size() != m) throw DomainError("spectral_radius: matrix not square");
        for (std::size_t j = 0; j < m; ++j) {
            if (!(gamma[i][j] >= 0.0)) throw DomainError("spectral_radius: negative entry");
            a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = gamma[i][j];
        }
    }
    return a.eigenvalues().cwiseAbs().maxCoeff();
}

/// M-variate mutually exciting Hawkes process with exponential kernels
/// phi^{mn}(t) = alpha[m][n] * exp(-beta[m][n] * t).
struct HawkesSpec {
    std::vector<double> mu;
    Matrix alpha;
    Matrix beta;
    double horizon = 0.0;

    std::size_t dimension() const { return mu.size(); }

    Matrix branching() const {
        const std::size_t m = dimension();
        Matrix gamma(m, std::vector<double>(m, 0.0));
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j < m; ++j)
                if (alpha[i][j] > 0.0) gamma[i][j] = alpha[i][j] / beta[i][j];
        return gamma;
    }

    void validate() const {
        const std::size_t m = dimension();
        if (m == 0) throw DomainError("HawkesSpec: M must be >= 1");
        if (alpha.size() != m || beta.size() != m)
            throw DomainError("HawkesSpec: alpha/beta dimension mismatch");
        for (std::size_t i = 0; i < m; ++i) {
            if (alpha[i].size() != m || beta[i].size() != m)
                throw DomainError("HawkesSpec: alpha/beta dimension mismatch");
            if (!(mu[i] >= 0.0)) throw DomainError("HawkesSpec: mu must be >= 0");
            for (std::size_t j = 0; j < m; ++j) {
                if (!(alpha[i][j] >= 0.0)) throw DomainError("HawkesSpec: alpha must be >= 0");
                if (alpha[i][j] > 0.0 && !(beta[i][j] > 0.0))
                    throw DomainError("HawkesSpec: beta must be > 0 where alpha > 0");
            }
        }
        if (!(horizon >= 0.0)) throw DomainError("HawkesSpec: horizon must be >= 0");
        const double radius = spectral_radius(branching());
        if (radius >= 1.0)
            throw StabilityViolation("branching matrix spectral radius " + std::to_string(radius) +
                                     " >= 1");
    }
};

/// The 4-process fine-to-coarse spec: reversal kernel on the within-asset
/// links, cross kernel on the between-asset links, anti-diagonal zeros.
inline HawkesSpec build_fine_to_coarse_spec(double mu, double alpha_r, double alpha_c, double beta,
                                            double horizon) {
    if (!(mu >= 0.0) || !(alpha_r >= 0.0) || !(alpha_c >= 0.0))
        throw DomainError("build_fine_to_coarse_spec: parameters must be nonnegative");
    if (!(beta > 0.0)) throw DomainError("build_fine_to_coarse_spec: beta must be > 0");
    if (!(horizon > 0.0)) throw DomainError("build_fine_to_coarse_spec: horizon must be > 0");
    const double r = alpha_r;
    const double c = alpha_c;
    HawkesSpec spec;
    spec.mu = {mu, mu, mu, mu};
    spec.alpha = {{0.0, r, c, 0.0}, {r, 0.0, 0.0, c}, {c, 0.0, 0.0, r}, {0.0, c, r, 0.0}};
    spec.beta = Matrix(4, std::vector<double>(4, beta));
    spec.horizon = horizon;
    spec.validate();
    return spec;
}

/// Conditional intensity by brute-force summation over the full history.
/// The simulator keeps recursive state instead; this is its reference.
inline double intensity_at(const HawkesSpec& spec, const std::vector<EventStream>& history,
                           std::size_t m, double t) {
    if (m >= spec.dimension()) throw DomainError("intensity_at: process index out of range");
    double lambda = spec.mu[m];
    for (const EventStream& stream : history) {
        const std::size_t n = stream.process_index;
        for (double s : stream.times) {
            if (s > t) throw DomainError("intensity_at: history extends past query time");
            lambda += spec.alpha[m][n] * std::exp(-spec.beta[m][n] * (t - s));
        }
    }
    return lambda;
}

/// Per-(m,n) exponential excitation state, decayed lazily. One accepted event
/// costs O(M^2) instead of a pass over the history.
class IntensityState {
public:
    explicit IntensityState(const HawkesSpec& spec)
        : spec_(&spec),
          time_(0.0),
          excitation_(spec.dimension(), std::vector<double>(spec.dimension(), 0.0)) {}

    double time() const { return time_; }

    void advance(double t) {
        if (t < time_) throw DomainError("IntensityState: cannot advance backwards");
        const double dt = t - time_;
        if (dt == 0.0) return;
        const std::size_t m = spec_->dimension();
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j < m; ++j)
                if (excitation_[i][j] != 0.0)
                    excitation_[i][j] *= std::exp(-spec_->beta[i][j] * dt);
        time_ = t;
    }

    void add_event(std::size_t n) {
        const std::size_t m = spec_->dimension();
        for (std::size_t i = 0; i < m; ++i) excitation_[i][n] += spec_->alpha[i][n];
    }

    double intensity(std::size_t m) const {
        double lambda = spec_->mu[m];
        for (double e : excitation_[m]) lambda += e;
        return lambda;
    }

    double total_intensity() const {
        double sum = 0.0;
        for (std::size_t i = 0; i < spec_->dimension(); ++i) sum += intensity(i);
        return sum;
    }

private:
    const HawkesSpec* spec_;
    double time_;
    Matrix excitation_;
};

/// Ogata thinning. Exponential kernels are non-increasing, so the intensity
/// immediately after the last accepted or rejected candidate bounds the
/// intensity until the next event.
inline std::vector<EventStream> simulate(const HawkesSpec& spec, std::uint64_t seed) {
    spec.validate();
    const std::size_t m = spec.dimension();
    std::vector<EventStream> streams(m);
    for (std::size_t i = 0; i < m; ++i) streams[i].process_index = i;

    std::mt19937_64 rng = make_rng(seed);
    IntensityState state(spec);
    double t = 0.0;
    for (;;) {
        const double bound = state.total_intensity();
        if (bound <= 0.0) break;
        t += exponential_draw(rng, bound);
        if (t > spec.horizon) break;
        state.advance(t);
        const double u = uniform01(rng) * bound;
        double cumulative = 0.0;
        std::size_t accepted = m;
        for (std::size_t i = 0; i < m; ++i) {
            cumulative += state.intensity(i);
            if (u <= cumulative) {
                accepted = i;
                break;
            }
        }
        if (accepted < m) {
            streams[accepted].times.push_back(t);
            state.add_event(accepted);
        }
    }
    return streams;
}

} // namespace epps
