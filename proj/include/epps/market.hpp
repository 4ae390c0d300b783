#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <utility>
#include <vector>

#include "epps/errors.hpp"
#include "epps/hawkes.hpp"
#include "epps/rng.hpp"

namespace epps {

/// Piecewise-constant log-price path X_t, stored at its jump times.
struct PricePath {
    std::vector<double> times;
    std::vector<double> log_prices;
    double x0 = 0.0;
};

/// The (t, p, v) tuple series for one asset. Prices are log-price levels;
/// the estimators never see raw prices.
struct TransactionSeries {
    std::vector<double> times;
    std::vector<double> prices;
    std::vector<long long> volumes;

    std::size_t size() const { return times.size(); }
    long long total_volume() const {
        long long v = 0;
        for (long long x : volumes) v += x;
        return v;
    }
};

enum class VolumeKind { power_law, uniform, normal, beta };

struct VolumeDistSpec {
    VolumeKind kind = VolumeKind::power_law;
    // power_law
    double x_m = 20.0;
    double tail_alpha = 1.7;
    // uniform
    double lo = 1.0;
    double hi = 100.0;
    // normal
    double mean = 50.0;
    double sd = 5.0;
    // beta
    double a = 2.0;
    double b = 2.0;
    double scale = 100.0;

    static VolumeDistSpec power_law(double x_m, double tail_alpha) {
        VolumeDistSpec s;
        s.kind = VolumeKind::power_law;
        s.x_m = x_m;
        s.tail_alpha = tail_alpha;
        return s;
    }
    static VolumeDistSpec uniform(double lo, double hi) {
        VolumeDistSpec s;
        s.kind = VolumeKind::uniform;
        s.lo = lo;
        s.hi = hi;
        return s;
    }
    static VolumeDistSpec normal(double mean, double sd) {
        VolumeDistSpec s;
        s.kind = VolumeKind::normal;
        s.mean = mean;
        s.sd = sd;
        return s;
    }
    static VolumeDistSpec beta(double a, double b, double scale) {
        VolumeDistSpec s;
        s.kind = VolumeKind::beta;
        s.a = a;
        s.b = b;
        s.scale = scale;
        return s;
    }

    void validate() const {
        switch (kind) {
            case VolumeKind::power_law:
                if (!(x_m > 0.0)) throw BadParameters("power_law: x_m must be > 0");
                if (!(tail_alpha > 0.0)) throw BadParameters("power_law: alpha must be > 0");
                break;
            case VolumeKind::uniform:
                if (!(lo > 0.0) || !(hi >= lo)) throw BadParameters("uniform: need 0 < lo <= hi");
                break;
            case VolumeKind::normal:
                if (!(mean > 0.0) || !(sd > 0.0)) throw BadParameters("normal: need mean, sd > 0");
                break;
            case VolumeKind::beta:
                if (!(a > 0.0) || !(b > 0.0) || !(scale > 0.0))
                    throw BadParameters("beta: need a, b, scale > 0");
                break;
        }
    }
};

/// Bivariate log-price paths from the 4-process simulation: asset 1 jumps +1
/// at each N1 event and -1 at each N2 event, asset 2 likewise from N3/N4.
inline std::pair<PricePath, PricePath> build_price_paths(const std::vector<EventStream>& streams,
                                                         std::pair<double, double> x0) {
    if (streams.size() != 4) throw DomainError("build_price_paths: expected 4 event streams");

    auto build = [](const std::vector<double>& up, const std::vector<double>& down,
                    double start) {
        PricePath path;
        path.x0 = start;
        path.times.reserve(up.size() + down.size());
        path.log_prices.reserve(up.size() + down.size());
        double level = start;
        std::size_t i = 0, j = 0;
        while (i < up.size() || j < down.size()) {
            double t;
            int jump = 0;
            // Simultaneous up/down ticks collapse into one (net) point.
            if (i < up.size() && j < down.size() && up[i] == down[j]) {
                t = up[i];
                ++i;
                ++j;
            } else if (j >= down.size() || (i < up.size() && up[i] < down[j])) {
                t = up[i];
                jump = 1;
                ++i;
            } else {
                t = down[j];
                jump = -1;
                ++j;
            }
            level += jump;
            path.times.push_back(t);
            path.log_prices.push_back(level);
        }
        return path;
    };

    return {build(streams[0].times, streams[1].times, x0.first),
            build(streams[2].times, streams[3].times, x0.second)};
}

/// IID volume draws, rounded to integer and floored at 1. Normal draws are
/// resampled until positive.
inline std::vector<long long> sample_volumes(const VolumeDistSpec& dist, std::size_t count,
                                             std::uint64_t seed) {
    dist.validate();
    std::vector<long long> out;
    out.reserve(count);
    std::mt19937_64 rng = make_rng(seed);
    for (std::size_t i = 0; i < count; ++i) {
        double x = 0.0;
        switch (dist.kind) {
            case VolumeKind::power_law:
                x = pareto_draw(rng, dist.x_m, dist.tail_alpha);
                break;
            case VolumeKind::uniform:
                x = dist.lo + uniform01(rng) * (dist.hi - dist.lo);
                break;
            case VolumeKind::normal:
                do {
                    x = normal_draw(rng, dist.mean, dist.sd);
                } while (x <= 0.0);
                break;
            case VolumeKind::beta:
                x = dist.scale * beta_draw(rng, dist.a, dist.b);
                break;
        }
        out.push_back(std::max<long long>(1, std::llround(x)));
    }
    return out;
}

/// One transaction per price event. Volumes are drawn independently of the
/// path, so identical seeds give identical volumes whatever the prices.
inline TransactionSeries to_transactions(const PricePath& path, const VolumeDistSpec& dist,
                                         std::uint64_t seed) {
    TransactionSeries series;
    series.times = path.times;
    series.prices = path.log_prices;
    series.volumes = sample_volumes(dist, path.times.size(), seed);
    return series;
}

} // namespace epps
