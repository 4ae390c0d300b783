// Command-line surface for the event-driven Epps-effect pipeline:
//   simulate  one Hawkes replication -> transaction/event CSVs
//   epps      Monte Carlo Epps-curve sweep -> one CSV per (clock, estimator)
//   theory    closed-form calendar-time Epps curve -> CSV
//   ingest    empirical trade CSVs -> per-day averaged Epps curves
//
// Exit codes: 0 success, 1 runtime failure, 2 configuration error.

#include <CLI11.hpp>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <json.hpp>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "epps/ingest.hpp"
#include "epps/io.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kVersion = "0.1.0";

epps::ClockKind parse_clock(const std::string& name) {
    if (name == "calendar") return epps::ClockKind::calendar;
    if (name == "event") return epps::ClockKind::event;
    if (name == "volume") return epps::ClockKind::volume;
    throw epps::ConfigError("unknown clock '" + name + "'");
}

epps::EstimatorKind parse_estimator(const std::string& name) {
    if (name == "MM" || name == "mm") return epps::EstimatorKind::MM;
    if (name == "RV" || name == "rv") return epps::EstimatorKind::RV;
    if (name == "HY" || name == "hy") return epps::EstimatorKind::HY;
    throw epps::ConfigError("unknown estimator '" + name + "'");
}

epps::VolumeDistSpec parse_volume(const json& j) {
    const std::string kind = j.value("kind", "power_law");
    if (kind == "power_law")
        return epps::VolumeDistSpec::power_law(j.value("x_m", 20.0), j.value("alpha", 1.7));
    if (kind == "uniform")
        return epps::VolumeDistSpec::uniform(j.value("lo", 1.0), j.value("hi", 100.0));
    if (kind == "normal")
        return epps::VolumeDistSpec::normal(j.value("mean", 50.0), j.value("sd", 5.0));
    if (kind == "beta")
        return epps::VolumeDistSpec::beta(j.value("a", 2.0), j.value("b", 2.0),
                                          j.value("scale", 100.0));
    throw epps::ConfigError("unknown volume distribution '" + kind + "'");
}

json volume_to_json(const epps::VolumeDistSpec& v) {
    switch (v.kind) {
        case epps::VolumeKind::power_law:
            return {{"kind", "power_law"}, {"x_m", v.x_m}, {"alpha", v.tail_alpha}};
        case epps::VolumeKind::uniform:
            return {{"kind", "uniform"}, {"lo", v.lo}, {"hi", v.hi}};
        case epps::VolumeKind::normal:
            return {{"kind", "normal"}, {"mean", v.mean}, {"sd", v.sd}};
        case epps::VolumeKind::beta:
            return {{"kind", "beta"}, {"a", v.a}, {"b", v.b}, {"scale", v.scale}};
    }
    return {};
}

json load_config_file(const std::string& path) {
    if (path.empty()) return json::object();
    std::ifstream in(path);
    if (!in) throw epps::ConfigError("cannot open config file " + path);
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw epps::ConfigError("config parse error: " + std::string(e.what()));
    }
}

epps::ExperimentConfig experiment_config_from(const json& j) {
    epps::ExperimentConfig cfg;
    try {
        cfg.replications = j.value("replications", cfg.replications);
        cfg.horizon = j.value("horizon", cfg.horizon);
        if (j.contains("intervals")) {
            if (j["intervals"].is_array()) {
                cfg.intervals = j["intervals"].get<std::vector<long long>>();
            } else {
                const long long lo = j["intervals"].value("min", 1);
                const long long hi = j["intervals"].value("max", 100);
                for (long long k = lo; k <= hi; ++k) cfg.intervals.push_back(k);
            }
        }
        if (j.contains("clocks")) {
            cfg.clocks.clear();
            for (const auto& c : j["clocks"]) cfg.clocks.push_back(parse_clock(c));
        }
        if (j.contains("estimators")) {
            cfg.estimators.clear();
            for (const auto& e : j["estimators"]) cfg.estimators.push_back(parse_estimator(e));
        }
        if (j.contains("volume")) cfg.volume_dist = parse_volume(j["volume"]);
        cfg.master_seed = j.value("seed", cfg.master_seed);
        if (j.contains("hawkes")) {
            const json& h = j["hawkes"];
            cfg.mu = h.value("mu", cfg.mu);
            cfg.alpha_r = h.value("alpha_r", cfg.alpha_r);
            cfg.alpha_c = h.value("alpha_c", cfg.alpha_c);
            cfg.beta = h.value("beta", cfg.beta);
        }
        if (j.contains("x0")) cfg.x0 = {j["x0"][0].get<double>(), j["x0"][1].get<double>()};
        const std::string ribbon = j.value("ribbon", "dispersion");
        if (ribbon == "dispersion") {
            cfg.ribbon_mode = epps::RibbonMode::dispersion;
        } else if (ribbon == "standard_error") {
            cfg.ribbon_mode = epps::RibbonMode::standard_error;
        } else {
            throw epps::ConfigError("unknown ribbon mode '" + ribbon + "'");
        }
        cfg.threads = j.value("threads", cfg.threads);
    } catch (const json::exception& e) {
        throw epps::ConfigError("config error: " + std::string(e.what()));
    }
    return cfg;
}

json experiment_config_to_json(const epps::ExperimentConfig& cfg) {
    json j;
    j["replications"] = cfg.replications;
    j["horizon"] = cfg.horizon;
    j["intervals"] = cfg.interval_list();
    j["clocks"] = json::array();
    for (auto c : cfg.clocks) j["clocks"].push_back(epps::clock_name(c));
    j["estimators"] = json::array();
    for (auto e : cfg.estimators) j["estimators"].push_back(epps::estimator_name(e));
    j["volume"] = volume_to_json(cfg.volume_dist);
    j["seed"] = cfg.master_seed;
    j["hawkes"] = {{"mu", cfg.mu},
                   {"alpha_r", cfg.alpha_r},
                   {"alpha_c", cfg.alpha_c},
                   {"beta", cfg.beta}};
    j["x0"] = {cfg.x0.first, cfg.x0.second};
    j["ribbon"] =
        cfg.ribbon_mode == epps::RibbonMode::dispersion ? "dispersion" : "standard_error";
    j["threads"] = cfg.threads;
    return j;
}

std::string iso_timestamp() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
    return buf;
}

void write_manifest(const fs::path& out_dir, const std::string& command, const json& config,
                    const std::vector<std::string>& outputs) {
    json manifest;
    manifest["command"] = command;
    manifest["version"] = kVersion;
    manifest["timestamp"] = iso_timestamp();
    manifest["config"] = config;
    manifest["outputs"] = outputs;
    epps::atomic_write((out_dir / "manifest.json").string(), manifest.dump(2) + "\n");
}

struct CommonFlags {
    std::string config_path;
    std::string out_dir = ".";
    std::optional<std::uint64_t> seed;
    std::optional<unsigned> threads;
    std::vector<std::string> clocks;
    std::vector<std::string> estimators;
};

void add_common_flags(CLI::App* cmd, CommonFlags& flags, bool with_selectors = true) {
    cmd->add_option("--config", flags.config_path, "JSON config file");
    cmd->add_option("--out-dir", flags.out_dir, "output directory");
    cmd->add_option("--seed", flags.seed, "master seed (overrides config)");
    cmd->add_option("--threads", flags.threads, "worker thread cap (overrides config)");
    if (with_selectors) {
        cmd->add_option("--clock", flags.clocks, "restrict to clocks (calendar/event/volume)");
        cmd->add_option("--estimator", flags.estimators, "restrict to estimators (MM/RV/HY)");
    }
}

epps::ExperimentConfig resolve_config(const CommonFlags& flags) {
    epps::ExperimentConfig cfg = experiment_config_from(load_config_file(flags.config_path));
    if (flags.seed) cfg.master_seed = *flags.seed;
    if (flags.threads) cfg.threads = *flags.threads;
    if (!flags.clocks.empty()) {
        cfg.clocks.clear();
        for (const std::string& c : flags.clocks) cfg.clocks.push_back(parse_clock(c));
    }
    if (!flags.estimators.empty()) {
        cfg.estimators.clear();
        for (const std::string& e : flags.estimators)
            cfg.estimators.push_back(parse_estimator(e));
    }
    cfg.validate();
    return cfg;
}

int cmd_simulate(const CommonFlags& flags) {
    const epps::ExperimentConfig cfg = resolve_config(flags);
    const fs::path out_dir(flags.out_dir);
    fs::create_directories(out_dir);

    const epps::HawkesSpec spec = epps::build_fine_to_coarse_spec(cfg.mu, cfg.alpha_r, cfg.alpha_c,
                                                                  cfg.beta, cfg.horizon);
    const std::uint64_t seed = epps::derive_seed(cfg.master_seed, 0);
    const auto streams = epps::simulate(spec, seed);
    const auto [path1, path2] = epps::build_price_paths(streams, cfg.x0);
    const auto ts1 = epps::to_transactions(path1, cfg.volume_dist, epps::derive_seed(seed, 1));
    const auto ts2 = epps::to_transactions(path2, cfg.volume_dist, epps::derive_seed(seed, 2));

    epps::atomic_write((out_dir / "events.csv").string(), epps::event_streams_csv(streams));
    epps::atomic_write((out_dir / "transactions.csv").string(),
                       epps::transactions_csv(ts1, ts2));
    write_manifest(out_dir, "simulate", experiment_config_to_json(cfg),
                   {"events.csv", "transactions.csv"});
    std::cout << "simulate: " << ts1.size() << " + " << ts2.size() << " transactions -> "
              << out_dir.string() << "\n";
    return 0;
}

std::string curve_file_name(const epps::EppsCurve& curve) {
    return std::string("epps_") + epps::clock_name(curve.clock) + "_" +
           epps::estimator_name(curve.estimator) + ".csv";
}

std::string curve_csv_with_theory(const epps::EppsCurve& curve, const epps::TheoryParams& params) {
    std::string out = "clock,estimator,interval,mean_rho,ribbon_lo,ribbon_hi,n_reps,theory_rho\n";
    for (const epps::EppsPoint& p : curve.points) {
        const std::string theory =
            curve.clock == epps::ClockKind::calendar
                ? epps::format_double(epps::theory_rho(params, static_cast<double>(p.interval)))
                : std::string();
        out += std::string(epps::clock_name(curve.clock)) + "," +
               epps::estimator_name(curve.estimator) + "," + std::to_string(p.interval) + "," +
               epps::format_double(p.mean_rho) + "," + epps::format_double(p.ribbon_lo) + "," +
               epps::format_double(p.ribbon_hi) + "," + std::to_string(p.replications) + "," +
               theory + "\n";
    }
    return out;
}

int cmd_epps(const CommonFlags& flags, bool theory_overlay) {
    const epps::ExperimentConfig cfg = resolve_config(flags);
    const fs::path out_dir(flags.out_dir);
    fs::create_directories(out_dir);

    const epps::SweepResult result = epps::run_epps_sweep(cfg);
    std::vector<std::string> outputs;
    for (const epps::EppsCurve& curve : result.curves) {
        const std::string name = curve_file_name(curve);
        if (theory_overlay) {
            const epps::TheoryParams params = epps::theory_params(
                cfg.mu, cfg.beta, cfg.alpha_r / cfg.beta, cfg.alpha_c / cfg.beta);
            epps::atomic_write((out_dir / name).string(), curve_csv_with_theory(curve, params));
        } else {
            epps::atomic_write((out_dir / name).string(), epps::curve_csv(curve));
        }
        outputs.push_back(name);
    }
    json config = experiment_config_to_json(cfg);
    config["theory_overlay"] = theory_overlay;
    write_manifest(out_dir, "epps", config, outputs);
    std::cout << "epps: " << outputs.size() << " curves -> " << out_dir.string() << "\n";
    return 0;
}

int cmd_theory(const CommonFlags& flags, double dt_min, double dt_max, int points) {
    const epps::ExperimentConfig cfg = resolve_config(flags);
    if (!(dt_min > 0.0) || points < 1 || (points > 1 && dt_max < dt_min))
        throw epps::ConfigError("theory: need 0 < dt-min <= dt-max and points >= 1");
    const fs::path out_dir(flags.out_dir);
    fs::create_directories(out_dir);

    const epps::TheoryParams params =
        epps::theory_params(cfg.mu, cfg.beta, cfg.alpha_r / cfg.beta, cfg.alpha_c / cfg.beta);
    std::string csv = "dt,rho_theory,variance_rate,covariance_rate\n";
    for (int i = 0; i < points; ++i) {
        const double dt =
            points == 1 ? dt_min
                        : dt_min * std::pow(dt_max / dt_min,
                                            static_cast<double>(i) /
                                                static_cast<double>(points - 1));
        csv += epps::format_double(dt) + "," + epps::format_double(epps::theory_rho(params, dt)) +
               "," + epps::format_double(epps::theory_variance_rate(params, dt)) + "," +
               epps::format_double(epps::theory_covariance_rate(params, dt)) + "\n";
    }
    epps::atomic_write((out_dir / "theory.csv").string(), csv);
    json config = experiment_config_to_json(cfg);
    config["dt_min"] = dt_min;
    config["dt_max"] = dt_max;
    config["dt_points"] = points;
    write_manifest(out_dir, "theory", config, {"theory.csv"});
    std::cout << "theory: " << points << " rows -> " << out_dir.string() << "\n";
    return 0;
}

int cmd_ingest(const CommonFlags& flags) {
    const json j = load_config_file(flags.config_path);
    if (!j.contains("files") || !j.contains("symbol_a") || !j.contains("symbol_b"))
        throw epps::ConfigError("ingest config needs 'files', 'symbol_a', 'symbol_b'");

    epps::SessionSpec session;
    if (j.contains("session")) {
        session.start_second =
            epps::detail::parse_clock_time(j["session"].value("start", "09:00:00"), 0);
        session.end_second =
            epps::detail::parse_clock_time(j["session"].value("end", "16:50:00"), 0);
    }
    epps::CsvSchema schema;
    if (j.contains("schema")) {
        const json& s = j["schema"];
        schema.date = s.value("date", schema.date);
        schema.time = s.value("time", schema.time);
        schema.symbol = s.value("symbol", schema.symbol);
        schema.price = s.value("price", schema.price);
        schema.volume = s.value("volume", schema.volume);
    }
    const std::string symbol_a = j["symbol_a"].get<std::string>();
    const std::string symbol_b = j["symbol_b"].get<std::string>();
    const bool log_prices = j.value("log_prices", true);

    epps::ExperimentConfig cfg = experiment_config_from(j);
    cfg.horizon = session.length();

    // Group records by day, VWAP-aggregate each symbol separately.
    std::map<std::string, std::array<std::vector<epps::TradeRecord>, 2>> by_day;
    std::size_t dropped = 0;
    for (const auto& file : j["files"]) {
        const epps::LoadResult loaded =
            epps::load_trades(file.get<std::string>(), schema, session);
        dropped += loaded.dropped_out_of_session;
        for (const epps::TradeRecord& rec : loaded.records) {
            if (rec.symbol == symbol_a) by_day[rec.date][0].push_back(rec);
            if (rec.symbol == symbol_b) by_day[rec.date][1].push_back(rec);
        }
    }
    std::vector<epps::DayPair> days;
    for (auto& [date, pair] : by_day) {
        if (pair[0].empty() || pair[1].empty())
            throw epps::ConfigError("day " + date + " is missing one of the symbols");
        days.push_back({epps::vwap_aggregate(pair[0], session),
                        epps::vwap_aggregate(pair[1], session)});
    }
    if (dropped > 0) std::cout << "ingest: dropped " << dropped << " out-of-session records\n";

    const epps::SweepResult result =
        epps::per_day_epps(days, cfg.interval_list(), cfg.clocks, cfg.estimators,
                           session.length(), log_prices, cfg.ribbon_mode);

    const fs::path out_dir(flags.out_dir);
    fs::create_directories(out_dir);
    std::vector<std::string> outputs;
    for (const epps::EppsCurve& curve : result.curves) {
        const std::string name = curve_file_name(curve);
        epps::atomic_write((out_dir / name).string(), epps::curve_csv(curve));
        outputs.push_back(name);
    }
    json config = experiment_config_to_json(cfg);
    config["files"] = j["files"];
    config["symbol_a"] = symbol_a;
    config["symbol_b"] = symbol_b;
    config["log_prices"] = log_prices;
    write_manifest(out_dir, "ingest", config, outputs);
    std::cout << "ingest: " << days.size() << " days, " << outputs.size() << " curves -> "
              << out_dir.string() << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Epps-effect sampling-scheme pipeline"};
    app.require_subcommand(1);

    CommonFlags sim_flags, epps_flags, theory_flags, ingest_flags;
    bool theory_overlay = false;
    double dt_min = 1.0, dt_max = 1000.0;
    int dt_points = 100;

    CLI::App* sim = app.add_subcommand("simulate", "simulate one replication pair");
    add_common_flags(sim, sim_flags, false);

    CLI::App* epps_cmd = app.add_subcommand("epps", "run the Monte Carlo Epps sweep");
    add_common_flags(epps_cmd, epps_flags);
    epps_cmd->add_flag("--theory-overlay", theory_overlay,
                       "add the closed-form calendar-time curve as a column");

    CLI::App* theory_cmd = app.add_subcommand("theory", "closed-form Epps curve");
    add_common_flags(theory_cmd, theory_flags, false);
    theory_cmd->add_option("--dt-min", dt_min, "smallest interval (seconds)");
    theory_cmd->add_option("--dt-max", dt_max, "largest interval (seconds)");
    theory_cmd->add_option("--dt-points", dt_points, "number of log-spaced grid points");

    CLI::App* ingest_cmd = app.add_subcommand("ingest", "empirical per-day pipeline");
    add_common_flags(ingest_cmd, ingest_flags);

    CLI11_PARSE(app, argc, argv);

    try {
        if (sim->parsed()) return cmd_simulate(sim_flags);
        if (epps_cmd->parsed()) return cmd_epps(epps_flags, theory_overlay);
        if (theory_cmd->parsed()) return cmd_theory(theory_flags, dt_min, dt_max, dt_points);
        if (ingest_cmd->parsed()) return cmd_ingest(ingest_flags);
    } catch (const epps::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const epps::BadParameters& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const epps::ParseError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
