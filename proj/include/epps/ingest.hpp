#pragma once

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "epps/errors.hpp"
#include "epps/experiments.hpp"
#include "epps/market.hpp"

namespace epps {

/// One trade row of the empirical feed, timestamps at seconds resolution.
struct TradeRecord {
    std::string date;
    long long second_of_day = 0;
    std::string symbol;
    double price = 0.0;
    long long volume = 0;
};

/// Continuous trading session, local exchange clock.
struct SessionSpec {
    long long start_second = 9 * 3600;          // 09:00
    long long end_second = 16 * 3600 + 50 * 60; // 16:50, T = 28,200 s
    double length() const { return static_cast<double>(end_second - start_second); }

    static SessionSpec jse() { return SessionSpec{}; }
};

/// Column mapping for the input CSV. Defaults to the header
/// date,time,symbol,price,volume.
struct CsvSchema {
    std::string date = "date";
    std::string time = "time";
    std::string symbol = "symbol";
    std::string price = "price";
    std::string volume = "volume";
};

struct LoadResult {
    std::vector<TradeRecord> records; // sorted by (date, symbol, time)
    std::size_t dropped_out_of_session = 0;
};

namespace detail {

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    std::stringstream ss(line);
    while (std::getline(ss, field, ',')) out.push_back(field);
    if (!line.empty() && line.back() == ',') out.push_back("");
    return out;
}

inline long long parse_clock_time(const std::string& text, std::size_t line) {
    int h = 0, m = 0, s = 0;
    char c1 = 0, c2 = 0;
    std::istringstream ss(text);
    if (!(ss >> h >> c1 >> m >> c2 >> s) || c1 != ':' || c2 != ':' || h < 0 || h > 23 || m < 0 ||
        m > 59 || s < 0 || s > 59)
        throw ParseError("bad time '" + text + "'", line);
    return h * 3600LL + m * 60LL + s;
}

inline double parse_strict_double(const std::string& text, const char* what, std::size_t line) {
    std::size_t pos = 0;
    double v = 0.0;
    try {
        v = std::stod(text, &pos);
    } catch (const std::exception&) {
        throw ParseError(std::string("bad ") + what + " '" + text + "'", line);
    }
    if (pos != text.size()) throw ParseError(std::string("bad ") + what + " '" + text + "'", line);
    return v;
}

} // namespace detail

/// Load and validate trade rows, dropping records outside the session.
inline LoadResult load_trades(const std::string& path, const CsvSchema& schema = {},
                              const SessionSpec& session = SessionSpec::jse()) {
    std::ifstream in(path);
    if (!in) throw ConfigError("load_trades: cannot open " + path);

    std::string line;
    if (!std::getline(in, line)) return {};
    if (!line.empty() && line.back() == '\r') line.pop_back();

    const std::vector<std::string> header = detail::split_csv_line(line);
    std::map<std::string, std::size_t> columns;
    for (std::size_t i = 0; i < header.size(); ++i) columns[header[i]] = i;
    auto column = [&](const std::string& name) {
        auto it = columns.find(name);
        if (it == columns.end()) throw ParseError("missing column '" + name + "'", 1);
        return it->second;
    };
    const std::size_t c_date = column(schema.date);
    const std::size_t c_time = column(schema.time);
    const std::size_t c_sym = column(schema.symbol);
    const std::size_t c_price = column(schema.price);
    const std::size_t c_vol = column(schema.volume);
    const std::size_t needed = std::max({c_date, c_time, c_sym, c_price, c_vol});

    LoadResult result;
    std::size_t line_number = 1;
    while (std::getline(in, line)) {
        ++line_number;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const std::vector<std::string> fields = detail::split_csv_line(line);
        if (fields.size() <= needed) throw ParseError("too few columns", line_number);

        TradeRecord rec;
        rec.date = fields[c_date];
        rec.second_of_day = detail::parse_clock_time(fields[c_time], line_number);
        rec.symbol = fields[c_sym];
        rec.price = detail::parse_strict_double(fields[c_price], "price", line_number);
        rec.volume =
            std::llround(detail::parse_strict_double(fields[c_vol], "volume", line_number));
        if (!(rec.price > 0.0)) throw ParseError("price must be > 0", line_number);
        if (rec.volume <= 0) throw ParseError("volume must be > 0", line_number);
        if (rec.second_of_day < session.start_second || rec.second_of_day > session.end_second) {
            ++result.dropped_out_of_session;
            continue;
        }
        result.records.push_back(std::move(rec));
    }
    std::stable_sort(result.records.begin(), result.records.end(),
                     [](const TradeRecord& a, const TradeRecord& b) {
                         if (a.date != b.date) return a.date < b.date;
                         if (a.symbol != b.symbol) return a.symbol < b.symbol;
                         return a.second_of_day < b.second_of_day;
                     });
    return result;
}

/// Merge same-timestamp trades of one symbol on one day with a volume
/// weighted average price. Times come out in seconds since session start,
/// strictly increasing. Prices stay raw here; log conversion happens once,
/// just before estimation.
inline TransactionSeries vwap_aggregate(const std::vector<TradeRecord>& records,
                                        const SessionSpec& session = SessionSpec::jse()) {
    TransactionSeries out;
    std::size_t i = 0;
    while (i < records.size()) {
        std::size_t j = i;
        double pv = 0.0;
        long long v = 0;
        while (j < records.size() && records[j].second_of_day == records[i].second_of_day) {
            pv += records[j].price * static_cast<double>(records[j].volume);
            v += records[j].volume;
            ++j;
        }
        out.times.push_back(static_cast<double>(records[i].second_of_day - session.start_second));
        out.prices.push_back(pv / static_cast<double>(v));
        out.volumes.push_back(v);
        i = j;
    }
    return out;
}

/// One trading day of a pair, after VWAP aggregation.
struct DayPair {
    TransactionSeries first;
    TransactionSeries second;
};

/// Per-day correlations aggregated across days: each day is estimated in
/// isolation so no return ever spans a day boundary; the curve is the
/// cross-day mean with a ribbon over days.
inline SweepResult per_day_epps(const std::vector<DayPair>& days,
                                const std::vector<long long>& intervals,
                                const std::vector<ClockKind>& clocks,
                                const std::vector<EstimatorKind>& estimators,
                                double session_length, bool log_prices = true,
                                RibbonMode mode = RibbonMode::dispersion) {
    if (days.empty()) throw TooFewValues("per_day_epps: need >= 1 day");

    SweepResult result;
    result.config.horizon = session_length;
    result.config.intervals = intervals;
    result.config.clocks = clocks;
    result.config.estimators = estimators;
    result.config.replications = static_cast<int>(days.size());
    result.config.ribbon_mode = mode;

    for (const DayPair& day : days) {
        DayPair d = day;
        if (log_prices) {
            for (TransactionSeries* ts : {&d.first, &d.second})
                for (double& p : ts->prices) p = std::log(p);
        }
        result.replications.push_back(estimate_pair(d.first, d.second, intervals, clocks,
                                                    estimators, session_length, std::nullopt));
    }
    result.curves =
        detail::aggregate_curves(result.replications, intervals, clocks, estimators, mode);
    return result;
}

} // namespace epps
