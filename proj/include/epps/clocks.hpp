#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "epps/errors.hpp"
#include "epps/market.hpp"

namespace epps {

enum class ClockKind { calendar, event, volume };

/// Observations of both assets under a chosen clock, ready for an estimator.
struct SampledGrid {
    std::array<std::vector<double>, 2> times;
    std::array<std::vector<double>, 2> prices;
    bool synchronous = false;
    bool homogeneous = false;
    ClockKind clock = ClockKind::calendar;
    double interval = 0.0;
    // Set when grid points before an asset's first trade were back-filled
    // with its first observed price (rather than a supplied x0).
    std::array<bool, 2> leading_backfill = {false, false};
};

struct VolumeBucketing {
    long long n = 0;      // target sample count
    long long bucket = 0; // V = floor(V_tot / n), shares per bucket
    long long total = 0;  // V_tot
};

namespace detail {

// Previous-tick value at grid time g: price of the last observation <= g.
// Before the first observation: x0 if supplied, else the first price.
inline void previous_tick_fill(const std::vector<double>& times, const std::vector<double>& prices,
                               const std::vector<double>& grid, std::optional<double> x0,
                               std::vector<double>& out, bool& backfilled) {
    out.clear();
    out.reserve(grid.size());
    backfilled = false;
    std::size_t k = 0;
    for (double g : grid) {
        while (k < times.size() && times[k] <= g) ++k;
        if (k == 0) {
            if (x0) {
                out.push_back(*x0);
            } else {
                out.push_back(prices.front());
                backfilled = true;
            }
        } else {
            out.push_back(prices[k - 1]);
        }
    }
}

} // namespace detail

/// Number of samples that a calendar sampling interval dt yields over [0, T];
/// this is the volume-clock target count for the equivalent interval.
inline long long interval_to_sample_count(double dt, double T) {
    if (!(dt > 0.0)) throw DomainError("interval_to_sample_count: dt must be > 0");
    return static_cast<long long>(std::floor(T / dt));
}

/// Synchronous homogeneous calendar grid {0, dt, 2dt, ... <= T} with
/// previous-tick interpolation per asset.
inline SampledGrid calendar_grid_previous_tick(const TransactionSeries& a,
                                               const TransactionSeries& b, double dt, double T,
                                               std::optional<std::pair<double, double>> x0 = {}) {
    if (!(dt > 0.0) || !(T >= dt)) throw DomainError("calendar grid: need 0 < dt <= T");
    if (a.size() == 0 || b.size() == 0) throw EmptySeries("calendar grid: empty series");

    std::vector<double> grid;
    const long long n = static_cast<long long>(std::floor(T / dt));
    grid.reserve(static_cast<std::size_t>(n) + 1);
    for (long long k = 0; k <= n; ++k) grid.push_back(static_cast<double>(k) * dt);

    SampledGrid out;
    out.synchronous = true;
    out.homogeneous = true;
    out.clock = ClockKind::calendar;
    out.interval = dt;
    out.times[0] = grid;
    out.times[1] = grid;
    detail::previous_tick_fill(a.times, a.prices, grid,
                               x0 ? std::optional<double>(x0->first) : std::nullopt, out.prices[0],
                               out.leading_backfill[0]);
    detail::previous_tick_fill(b.times, b.prices, grid,
                               x0 ? std::optional<double>(x0->second) : std::nullopt, out.prices[1],
                               out.leading_backfill[1]);
    return out;
}

/// Pass-through of the raw asynchronous event times and prices.
inline SampledGrid raw_calendar(const TransactionSeries& a, const TransactionSeries& b) {
    if (a.size() == 0 || b.size() == 0) throw EmptySeries("raw_calendar: empty series");
    SampledGrid out;
    out.synchronous = false;
    out.homogeneous = false;
    out.clock = ClockKind::calendar;
    out.times[0] = a.times;
    out.prices[0] = a.prices;
    out.times[1] = b.times;
    out.prices[1] = b.prices;
    return out;
}

/// Merge both assets onto one event clock: an event in either asset advances
/// the clock by one unit. Cross-asset simultaneous timestamps (empirical
/// seconds data) share a single clock index.
inline SampledGrid shared_event_clock(const TransactionSeries& a, const TransactionSeries& b) {
    if (a.size() == 0 && b.size() == 0) throw EmptySeries("shared_event_clock: empty series");
    SampledGrid out;
    out.synchronous = false;
    out.homogeneous = true; // unit grid
    out.clock = ClockKind::event;
    out.interval = 1.0;
    std::size_t i = 0, j = 0;
    long long clock = 0;
    while (i < a.size() || j < b.size()) {
        ++clock;
        const bool take_a = i < a.size() && (j >= b.size() || a.times[i] <= b.times[j]);
        const bool take_b = j < b.size() && (i >= a.size() || b.times[j] <= a.times[i]);
        if (take_a) {
            out.times[0].push_back(static_cast<double>(clock));
            out.prices[0].push_back(a.prices[i]);
            ++i;
        }
        if (take_b) {
            out.times[1].push_back(static_cast<double>(clock));
            out.prices[1].push_back(b.prices[j]);
            ++j;
        }
    }
    return out;
}

/// Sample the shared unit event clock every dk units with previous-tick fill.
inline SampledGrid event_grid_previous_tick(const SampledGrid& event_grid, long long dk,
                                            std::optional<std::pair<double, double>> x0 = {}) {
    if (event_grid.clock != ClockKind::event)
        throw DomainError("event_grid_previous_tick: input must be a shared event clock grid");
    if (dk < 1) throw DomainError("event_grid_previous_tick: dk must be >= 1");

    double span = 0.0;
    for (const auto& t : event_grid.times)
        if (!t.empty()) span = std::max(span, t.back());

    std::vector<double> grid;
    for (long long k = 0; static_cast<double>(k) * static_cast<double>(dk) <= span; ++k)
        grid.push_back(static_cast<double>(k * dk));

    SampledGrid out;
    out.synchronous = true;
    out.homogeneous = true;
    out.clock = ClockKind::event;
    out.interval = static_cast<double>(dk);
    out.times[0] = grid;
    out.times[1] = grid;
    for (int s = 0; s < 2; ++s) {
        std::optional<double> start;
        if (x0) start = s == 0 ? x0->first : x0->second;
        detail::previous_tick_fill(event_grid.times[s], event_grid.prices[s], grid, start,
                                   out.prices[s], out.leading_backfill[s]);
    }
    return out;
}

inline VolumeBucketing volume_bucketing(const TransactionSeries& series, long long n) {
    if (n < 1) throw DomainError("volume_clock: n must be >= 1");
    VolumeBucketing b;
    b.n = n;
    b.total = series.total_volume();
    if (b.total < n)
        throw InsufficientVolume("volume_clock: total volume " + std::to_string(b.total) +
                                 " < target sample count " + std::to_string(n));
    b.bucket = b.total / n;
    return b;
}

/// Volume clock: expand each price by its volume, average consecutive runs of
/// V = floor(V_tot/n) expanded entries, emit exactly n buckets and discard the
/// remainder. Implemented as streaming weighted averaging; no expansion.
inline SampledGrid volume_clock(const TransactionSeries& a, const TransactionSeries& b,
                                long long n) {
    SampledGrid out;
    out.synchronous = true;
    out.homogeneous = true;
    out.clock = ClockKind::volume;
    out.interval = 1.0;

    for (int s = 0; s < 2; ++s) {
        const TransactionSeries& series = s == 0 ? a : b;
        const VolumeBucketing bucketing = volume_bucketing(series, n);
        const long long V = bucketing.bucket;

        std::vector<double>& times = out.times[s];
        std::vector<double>& prices = out.prices[s];
        times.reserve(static_cast<std::size_t>(n));
        prices.reserve(static_cast<std::size_t>(n));

        double sum = 0.0;
        long long filled = 0;
        long long emitted = 0;
        for (std::size_t h = 0; h < series.size() && emitted < n; ++h) {
            long long remaining = series.volumes[h];
            const double p = series.prices[h];
            while (remaining > 0 && emitted < n) {
                const long long take = std::min(remaining, V - filled);
                sum += p * static_cast<double>(take);
                filled += take;
                remaining -= take;
                if (filled == V) {
                    ++emitted;
                    times.push_back(static_cast<double>(emitted));
                    prices.push_back(sum / static_cast<double>(V));
                    sum = 0.0;
                    filled = 0;
                }
            }
        }
        // V = floor(V_tot/n) guarantees n full buckets before volume runs out.
        if (emitted != n) throw InsufficientVolume("volume_clock: internal bucket shortfall");
    }
    return out;
}

} // namespace epps
