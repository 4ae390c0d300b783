#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "epps/clocks.hpp"
#include "epps/errors.hpp"
#include "epps/estimators.hpp"
#include "epps/experiments.hpp"
#include "epps/hawkes.hpp"
#include "epps/market.hpp"

namespace epps {

// >= 9 significant digits everywhere times or prices are serialized.
inline std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

/// Write via temp file + rename so a failed run never leaves a truncated file.
inline void atomic_write(const std::string& path, const std::string& contents) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw ConfigError("cannot open " + tmp + " for writing");
        out << contents;
        if (!out) throw ConfigError("write failed for " + tmp);
    }
    std::filesystem::rename(tmp, path);
}

inline std::string event_streams_csv(const std::vector<EventStream>& streams) {
    std::string out = "process_index,time_seconds\n";
    for (const EventStream& stream : streams)
        for (double t : stream.times)
            out += std::to_string(stream.process_index) + "," + format_double(t) + "\n";
    return out;
}

inline std::string transactions_csv(const TransactionSeries& a, const TransactionSeries& b) {
    std::string out = "asset,time_seconds,price,volume\n";
    for (int s = 0; s < 2; ++s) {
        const TransactionSeries& ts = s == 0 ? a : b;
        for (std::size_t h = 0; h < ts.size(); ++h)
            out += std::to_string(s + 1) + "," + format_double(ts.times[h]) + "," +
                   format_double(ts.prices[h]) + "," + std::to_string(ts.volumes[h]) + "\n";
    }
    return out;
}

inline std::string grid_csv(const SampledGrid& grid) {
    std::string out = "asset,clock,interval,index_or_time,log_price\n";
    for (int s = 0; s < 2; ++s)
        for (std::size_t h = 0; h < grid.times[s].size(); ++h)
            out += std::to_string(s + 1) + "," + clock_name(grid.clock) + "," +
                   format_double(grid.interval) + "," + format_double(grid.times[s][h]) + "," +
                   format_double(grid.prices[s][h]) + "\n";
    return out;
}

inline std::string estimate_csv_row(const CovarianceEstimate& est, ClockKind clock,
                                    double interval) {
    std::string flags;
    if (est.rho_clamped) flags += "clamped";
    if (est.aliasing_warning) flags += flags.empty() ? "aliasing" : "|aliasing";
    return std::string(estimator_name(est.estimator)) + "," + clock_name(clock) + "," +
           format_double(interval) + "," + format_double(est.sigma11) + "," +
           format_double(est.sigma12) + "," + format_double(est.sigma22) + "," +
           format_double(est.rho) + "," + flags;
}

inline std::string curve_csv(const EppsCurve& curve) {
    std::string out = "clock,estimator,interval,mean_rho,ribbon_lo,ribbon_hi,n_reps\n";
    for (const EppsPoint& p : curve.points)
        out += std::string(clock_name(curve.clock)) + "," + estimator_name(curve.estimator) + "," +
               std::to_string(p.interval) + "," + format_double(p.mean_rho) + "," +
               format_double(p.ribbon_lo) + "," + format_double(p.ribbon_hi) + "," +
               std::to_string(p.replications) + "\n";
    return out;
}

} // namespace epps
