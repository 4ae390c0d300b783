#pragma once

#include <atomic>
#include <cstdint>
#include <mutex>
#include <numeric>
#include <optional>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "epps/clocks.hpp"
#include "epps/errors.hpp"
#include "epps/estimators.hpp"
#include "epps/hawkes.hpp"
#include "epps/market.hpp"
#include "epps/stats.hpp"
#include "epps/theory.hpp"

namespace epps {

struct ExperimentConfig {
    int replications = 100;
    double horizon = 72000.0;
    std::vector<long long> intervals; // empty -> 1..100
    std::vector<ClockKind> clocks = {ClockKind::calendar, ClockKind::event, ClockKind::volume};
    std::vector<EstimatorKind> estimators = {EstimatorKind::MM, EstimatorKind::RV,
                                             EstimatorKind::HY};
    VolumeDistSpec volume_dist = VolumeDistSpec::power_law(20.0, 1.7);
    std::uint64_t master_seed = 42;

    // Hawkes parameters, reference experiment defaults.
    double mu = 0.015;
    double alpha_r = 0.023;
    double alpha_c = 0.05;
    double beta = 0.11;
    std::pair<double, double> x0 = {0.0, 0.0};

    RibbonMode ribbon_mode = RibbonMode::dispersion;
    unsigned threads = 0; // 0 -> hardware concurrency

    std::vector<long long> interval_list() const {
        if (!intervals.empty()) return intervals;
        std::vector<long long> out(100);
        std::iota(out.begin(), out.end(), 1);
        return out;
    }

    void validate() const {
        if (replications < 2) throw ConfigError("config: replications must be >= 2");
        long long prev = 0;
        for (long long k : interval_list()) {
            if (k <= prev) throw ConfigError("config: intervals must be positive and increasing");
            prev = k;
        }
        if (clocks.empty() || estimators.empty())
            throw ConfigError("config: need at least one clock and one estimator");
        volume_dist.validate();
        build_fine_to_coarse_spec(mu, alpha_r, alpha_c, beta, horizon); // stability check
    }
};

struct EppsPoint {
    long long interval = 0;
    double mean_rho = 0.0;
    double ribbon_lo = 0.0;
    double ribbon_hi = 0.0;
    int replications = 0;
};

struct EppsCurve {
    ClockKind clock = ClockKind::calendar;
    EstimatorKind estimator = EstimatorKind::RV;
    std::vector<EppsPoint> points;
};

/// rho per (clock, estimator, interval) for one replication, indexed in
/// config order: values[clock_idx][estimator_idx][interval_idx].
struct ReplicationValues {
    std::vector<std::vector<std::vector<double>>> values;
};

struct SweepResult {
    ExperimentConfig config;
    std::vector<EppsCurve> curves;
    std::vector<ReplicationValues> replications;

    const EppsCurve& curve(ClockKind clock, EstimatorKind estimator) const {
        for (const EppsCurve& c : curves)
            if (c.clock == clock && c.estimator == estimator) return c;
        throw DomainError("SweepResult: no such curve");
    }
};

/// Correlations for one transaction-series pair under every requested clock,
/// estimator, and interval. RV samples a previous-tick grid and downsamples;
/// MM reuses one coefficient pass per clock across all intervals; HY is a
/// single per-clock baseline. With x0 set, leading grid gaps use the known
/// starting level (simulation mode); otherwise the first price is
/// back-filled (empirical mode).
inline ReplicationValues estimate_pair(const TransactionSeries& ts1, const TransactionSeries& ts2,
                                       const std::vector<long long>& intervals,
                                       const std::vector<ClockKind>& clocks,
                                       const std::vector<EstimatorKind>& estimators,
                                       double horizon,
                                       std::optional<std::pair<double, double>> x0) {
    ReplicationValues out;
    out.values.resize(clocks.size());
    for (std::size_t ci = 0; ci < clocks.size(); ++ci) {
        out.values[ci].assign(estimators.size(), std::vector<double>(intervals.size(), 0.0));
        const ClockKind clock = clocks[ci];

        if (clock == ClockKind::volume) {
            for (std::size_t k = 0; k < intervals.size(); ++k) {
                const long long n =
                    interval_to_sample_count(static_cast<double>(intervals[k]), horizon);
                const SampledGrid grid = volume_clock(ts1, ts2, n);
                for (std::size_t ei = 0; ei < estimators.size(); ++ei) {
                    switch (estimators[ei]) {
                        case EstimatorKind::RV:
                            out.values[ci][ei][k] = rv_covariance(grid).rho;
                            break;
                        case EstimatorKind::MM: {
                            // Nyquist frequency of the n-sample bucketed grid.
                            const long long n_freq = std::max<long long>(
                                1, n_from_interval(
                                       grid.times[0].back() - grid.times[0].front(), 1.0));
                            out.values[ci][ei][k] = mm_covariance(grid, n_freq).rho;
                            break;
                        }
                        case EstimatorKind::HY:
                            out.values[ci][ei][k] = hy_covariance(grid).rho;
                            break;
                    }
                }
            }
            continue;
        }

        // Calendar and event time share one layout: a raw asynchronous grid
        // for MM/HY and a unit previous-tick grid downsampled for RV.
        SampledGrid raw;
        double span = 0.0;
        if (clock == ClockKind::calendar) {
            raw = raw_calendar(ts1, ts2);
            span = horizon;
        } else {
            raw = shared_event_clock(ts1, ts2);
            span = std::max(raw.times[0].back(), raw.times[1].back());
        }

        for (std::size_t ei = 0; ei < estimators.size(); ++ei) {
            switch (estimators[ei]) {
                case EstimatorKind::RV: {
                    const SampledGrid base =
                        clock == ClockKind::calendar
                            ? calendar_grid_previous_tick(ts1, ts2, 1.0, horizon, x0)
                            : event_grid_previous_tick(raw, 1, x0);
                    for (std::size_t k = 0; k < intervals.size(); ++k)
                        out.values[ci][ei][k] = rv_covariance(downsample(base, intervals[k])).rho;
                    break;
                }
                case EstimatorKind::MM: {
                    const MmSweep sweep(
                        raw, n_from_interval(span, static_cast<double>(intervals.front())));
                    for (std::size_t k = 0; k < intervals.size(); ++k)
                        out.values[ci][ei][k] =
                            sweep.estimate(n_from_interval(span, static_cast<double>(intervals[k])))
                                .rho;
                    break;
                }
                case EstimatorKind::HY: {
                    const double rho = hy_covariance(raw).rho;
                    for (std::size_t k = 0; k < intervals.size(); ++k)
                        out.values[ci][ei][k] = rho;
                    break;
                }
            }
        }
    }
    return out;
}

/// Full pipeline for one replication: simulate, attach volumes, estimate.
inline ReplicationValues run_replication(const ExperimentConfig& cfg, int replication) {
    const std::uint64_t seed =
        derive_seed(cfg.master_seed, static_cast<std::uint64_t>(replication));
    const HawkesSpec spec =
        build_fine_to_coarse_spec(cfg.mu, cfg.alpha_r, cfg.alpha_c, cfg.beta, cfg.horizon);
    const std::vector<EventStream> streams = simulate(spec, seed);
    const auto [path1, path2] = build_price_paths(streams, cfg.x0);
    const TransactionSeries ts1 = to_transactions(path1, cfg.volume_dist, derive_seed(seed, 1));
    const TransactionSeries ts2 = to_transactions(path2, cfg.volume_dist, derive_seed(seed, 2));
    return estimate_pair(ts1, ts2, cfg.interval_list(), cfg.clocks, cfg.estimators, cfg.horizon,
                         cfg.x0);
}

namespace detail {

inline std::vector<EppsCurve> aggregate_curves(const std::vector<ReplicationValues>& reps,
                                               const std::vector<long long>& intervals,
                                               const std::vector<ClockKind>& clocks,
                                               const std::vector<EstimatorKind>& estimators,
                                               RibbonMode mode) {
    std::vector<EppsCurve> curves;
    for (std::size_t ci = 0; ci < clocks.size(); ++ci) {
        for (std::size_t ei = 0; ei < estimators.size(); ++ei) {
            EppsCurve curve;
            curve.clock = clocks[ci];
            curve.estimator = estimators[ei];
            for (std::size_t k = 0; k < intervals.size(); ++k) {
                std::vector<double> values;
                values.reserve(reps.size());
                for (const ReplicationValues& rep : reps) values.push_back(rep.values[ci][ei][k]);
                if (values.size() >= 2) {
                    const Ribbon r = ribbon(values, mode);
                    curve.points.push_back({intervals[k], r.mean, r.lo, r.hi, r.count});
                } else {
                    curve.points.push_back({intervals[k], values[0], values[0], values[0], 1});
                }
            }
            curves.push_back(std::move(curve));
        }
    }
    return curves;
}

} // namespace detail

/// Monte Carlo Epps-curve sweep. Replications run in parallel on independent
/// RNG streams; aggregation order is fixed by replication index, so the
/// result is identical for any worker count.
inline SweepResult run_epps_sweep(const ExperimentConfig& cfg) {
    cfg.validate();
    const std::vector<long long> intervals = cfg.interval_list();

    SweepResult result;
    result.config = cfg;
    result.replications.resize(static_cast<std::size_t>(cfg.replications));

    unsigned workers = cfg.threads > 0 ? cfg.threads : std::thread::hardware_concurrency();
    if (workers == 0) workers = 1;
    workers = std::min<unsigned>(workers, static_cast<unsigned>(cfg.replications));

    std::atomic<int> next{0};
    std::atomic<bool> failed{false};
    std::string failure;
    std::mutex failure_mutex;
    auto worker = [&]() {
        for (;;) {
            const int rep = next.fetch_add(1);
            if (rep >= cfg.replications || failed.load()) break;
            try {
                result.replications[static_cast<std::size_t>(rep)] = run_replication(cfg, rep);
            } catch (const std::exception& e) {
                std::lock_guard<std::mutex> lock(failure_mutex);
                failed.store(true);
                if (failure.empty())
                    failure = "replication " + std::to_string(rep) + ": " + e.what();
            }
        }
    };
    if (workers <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
        for (std::thread& t : pool) t.join();
    }
    if (failed.load()) throw std::runtime_error("epps sweep aborted: " + failure);

    result.curves = detail::aggregate_curves(result.replications, intervals, cfg.clocks,
                                             cfg.estimators, cfg.ribbon_mode);
    return result;
}

/// OLS fit of mean rho against interval over intervals >= min_interval.
inline OlsFit linearity_diagnostic(const EppsCurve& curve, long long min_interval = 10) {
    std::vector<double> x, y;
    for (const EppsPoint& p : curve.points) {
        if (p.interval >= min_interval) {
            x.push_back(static_cast<double>(p.interval));
            y.push_back(p.mean_rho);
        }
    }
    if (x.size() < 10) throw TooFewValues("linearity_diagnostic: need >= 10 intervals");
    return ols_fit(x, y);
}

/// The decoupled-kernel control: zero cross-excitation, true correlation 0.
inline SweepResult uncorrelated_scenario(ExperimentConfig cfg) {
    cfg.alpha_c = 0.0;
    return run_epps_sweep(cfg);
}

} // namespace epps
