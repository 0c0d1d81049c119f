#include "masr/harness.hpp"

#include <atomic>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <functional>
#include <iostream>
#include <mutex>
#include <thread>

#include <json.hpp>

#include "masr/metrics.hpp"

namespace masr {

const char* scheme_name(Scheme scheme) {
    switch (scheme) {
    case Scheme::MaSaPso: return "ma-sa-pso";
    case Scheme::MaPso: return "ma-pso";
    case Scheme::FixedAntenna: return "fa";
    case Scheme::RandomBeam: return "random-beam";
    }
    return "unknown";
}

std::optional<Scheme> scheme_from_name(const std::string& name) {
    for (Scheme s : kAllSchemes)
        if (name == scheme_name(s))
            return s;
    return std::nullopt;
}

std::vector<AntennaPosition> fa_positions(int antenna_count, double wavelength,
                                          const PlacementRegion& region) {
    if (antenna_count < 1)
        throw std::invalid_argument("fa_positions: need at least one antenna");
    const double spacing = 0.5 * wavelength;
    std::vector<AntennaPosition> out(static_cast<std::size_t>(antenna_count));
    for (int k = 0; k < antenna_count; ++k) {
        out[static_cast<std::size_t>(k)] = {(k - 0.5 * (antenna_count - 1)) * spacing,
                                            0.0};
        const auto& p = out[static_cast<std::size_t>(k)];
        if (!region.contains(p.x, p.y))
            throw std::invalid_argument("fa_positions: array exceeds the region");
    }
    return out;
}

Eigen::VectorXcd random_beamformer(int antenna_count, double max_power_w, Rng& rng) {
    Eigen::VectorXcd g(antenna_count);
    for (int k = 0; k < antenna_count; ++k)
        g[k] = rng.complex_normal(1.0);
    return std::sqrt(max_power_w) * g.normalized();
}

namespace {

void hash_double(std::uint64_t& h, double v) {
    const std::uint64_t bits = std::bit_cast<std::uint64_t>(v);
    for (int i = 0; i < 8; ++i) {
        h ^= (bits >> (8 * i)) & 0xFF;
        h *= 0x100000001B3ULL; // FNV-1a
    }
}

void hash_link(std::uint64_t& h, const LinkRealization& link) {
    hash_double(h, link.wavelength);
    for (const auto& a : link.transmit_angles) {
        hash_double(h, a.azimuth);
        hash_double(h, a.elevation);
    }
    for (const auto& a : link.receive_angles) {
        hash_double(h, a.azimuth);
        hash_double(h, a.elevation);
    }
    for (Eigen::Index m = 0; m < link.path_responses.size(); ++m) {
        hash_double(h, link.path_responses[m].real());
        hash_double(h, link.path_responses[m].imag());
    }
}

} // namespace

std::uint64_t realization_hash(const ScenarioRealization& scenario) {
    std::uint64_t h = 0xCBF29CE484222325ULL;
    hash_double(h, scenario.pu_topology_x);
    hash_link(h, scenario.link_pt_bd);
    hash_link(h, scenario.link_pt_pu);
    hash_link(h, scenario.link_bd_pu);
    hash_double(h, scenario.h_s.real());
    hash_double(h, scenario.h_s.imag());
    return h;
}

namespace {

// Per-scheme rng salts; the scenario draw uses salt 0.
std::uint64_t scheme_salt(Scheme s) {
    switch (s) {
    case Scheme::MaSaPso: return 1;
    case Scheme::MaPso: return 2;
    case Scheme::FixedAntenna: return 3;
    case Scheme::RandomBeam: return 4;
    }
    return 99;
}

SchemeResult run_scheme(Scheme scheme, const ScenarioConfig& cfg,
                        const ScenarioRealization& scenario, std::uint64_t seed) {
    SchemeResult res;
    res.scheme = scheme;
    res.realization_hash = realization_hash(scenario);
    const auto start = std::chrono::steady_clock::now();
    Rng rng(derive_seed(seed, scheme_salt(scheme)));
    const PlacementRegion region = cfg.region();

    switch (scheme) {
    case Scheme::MaSaPso:
    case Scheme::MaPso: {
        std::vector<std::vector<AntennaPosition>> extras;
        try {
            extras.push_back(fa_positions(cfg.antenna_count, cfg.wavelength, region));
        } catch (const std::invalid_argument&) {
            // Array too large for the region; nothing to seed.
        }
        const AoSolution sol = alternate(scenario, cfg, scheme == Scheme::MaSaPso,
                                         rng, extras);
        res.status = sol.status;
        res.rate = sol.rate;
        res.report = sol.feasibility;
        res.outer_iterations = sol.outer_iterations;
        res.rate_trace = sol.rate_trace;
        break;
    }
    case Scheme::FixedAntenna: {
        const auto layout = fa_positions(cfg.antenna_count, cfg.wavelength, region);
        const LinkBudget lb = make_link_budget(scenario, layout,
                                               cfg.reflection_efficiency,
                                               cfg.noise_power);
        const double min_snr = min_snr_for_ber(cfg.ber_cap);
        const ScaResult sca = sca_optimize(lb, cfg.max_power_w, min_snr,
                                           cfg.convergence_tol);
        if (sca.status == ScaStatus::Ok) {
            res.status = SolveStatus::Ok;
            res.rate = primary_rate(primary_sinr(lb, sca.w));
            res.report = evaluate_solution(sca.w, layout, scenario, cfg);
            res.rate_trace = {res.rate};
        } else {
            res.status = sca.status == ScaStatus::Infeasible
                             ? SolveStatus::Infeasible
                             : SolveStatus::NumericalFailure;
        }
        res.outer_iterations = 1;
        break;
    }
    case Scheme::RandomBeam: {
        const auto layout = fa_positions(cfg.antenna_count, cfg.wavelength, region);
        const Eigen::VectorXcd w =
            random_beamformer(cfg.antenna_count, cfg.max_power_w, rng);
        const LinkBudget lb = make_link_budget(scenario, layout,
                                               cfg.reflection_efficiency,
                                               cfg.noise_power);
        res.status = SolveStatus::Ok; // the baseline never enforces the BER cap
        res.rate = primary_rate(primary_sinr(lb, w));
        res.report = evaluate_solution(w, layout, scenario, cfg);
        res.rate_trace = {res.rate};
        res.outer_iterations = 1;
        break;
    }
    }

    res.seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    return res;
}

} // namespace

TrialResult run_trial(const ScenarioConfig& config, std::uint64_t seed,
                      std::span<const Scheme> schemes) {
    TrialResult trial;
    trial.seed = seed;

    Rng scenario_rng(derive_seed(seed, 0));
    const ScenarioRealization scenario = draw_scenario(config, scenario_rng);

    for (Scheme s : schemes)
        trial.schemes.push_back(run_scheme(s, config, scenario, seed));
    return trial;
}

namespace {

ScenarioConfig config_for_axis_value(const ScenarioConfig& base,
                                     const std::string& axis, double value) {
    ScenarioConfig cfg = base;
    if (axis == "power") {
        cfg.max_power_dbm = value;
    } else if (axis == "paths" || axis == "antennas") {
        const double rounded = std::round(value);
        if (std::abs(rounded - value) > 1e-9 || rounded < 1.0)
            throw ConfigError("sweep axis '" + axis +
                              "' needs positive integer values");
        (axis == "paths" ? cfg.path_count : cfg.antenna_count) =
            static_cast<int>(rounded);
    } else if (axis != "none") {
        throw ConfigError("unknown sweep axis '" + axis + "'");
    }
    cfg.finalize();
    return cfg;
}

void parallel_for(int count, int threads, const std::function<void(int)>& fn) {
    if (threads <= 0)
        threads = static_cast<int>(std::thread::hardware_concurrency());
    threads = std::max(1, std::min(threads, count));

    if (threads == 1) {
        for (int i = 0; i < count; ++i)
            fn(i);
        return;
    }

    std::atomic<int> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto worker = [&] {
        for (;;) {
            const int i = next.fetch_add(1);
            if (i >= count)
                return;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!error)
                    error = std::current_exception();
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t)
        pool.emplace_back(worker);
    for (auto& th : pool)
        th.join();
    if (error)
        std::rethrow_exception(error);
}

} // namespace

SweepResults sweep(const ScenarioConfig& config, const std::string& axis,
                   std::span<const double> values, int trials,
                   std::span<const Scheme> schemes, int threads) {
    if (values.empty())
        throw ConfigError("sweep: empty value list");
    if (trials < 1)
        throw ConfigError("sweep: trials must be >= 1");
    if (schemes.empty())
        throw ConfigError("sweep: no schemes requested");

    SweepResults results;
    results.axis = axis;
    results.seed_base = config.seed;
    results.config = config;

    // Validate every axis value up front so workers cannot throw on config.
    std::vector<ScenarioConfig> configs;
    for (double v : values)
        configs.push_back(config_for_axis_value(config, axis, v));

    const int tasks = static_cast<int>(values.size()) * trials;
    results.details.resize(static_cast<std::size_t>(tasks));
    parallel_for(tasks, threads, [&](int task) {
        const int vi = task / trials;
        const int ti = task % trials;
        TrialRecord rec;
        rec.axis_value = values[static_cast<std::size_t>(vi)];
        rec.trial = run_trial(configs[static_cast<std::size_t>(vi)],
                              config.seed + static_cast<std::uint64_t>(ti), schemes);
        rec.trial.index = ti;
        results.details[static_cast<std::size_t>(task)] = std::move(rec);
    });

    // Aggregate per (axis value, scheme) over the common-support trials
    // (those where every requested scheme succeeded), in a fixed order so
    // the output is reproducible byte for byte. Pairing the schemes on the
    // same draws keeps their means directly comparable when rare
    // infeasible draws knock out individual schemes.
    for (std::size_t vi = 0; vi < values.size(); ++vi) {
        std::vector<int> support;
        for (int ti = 0; ti < trials; ++ti) {
            const auto& trial =
                results.details[vi * static_cast<std::size_t>(trials) +
                                static_cast<std::size_t>(ti)]
                    .trial;
            bool all_ok = true;
            for (const auto& sr : trial.schemes)
                all_ok = all_ok && sr.status == SolveStatus::Ok;
            if (all_ok)
                support.push_back(ti);
        }
        for (Scheme s : schemes) {
            std::vector<double> rates;
            for (int ti : support) {
                const auto& trial =
                    results.details[vi * static_cast<std::size_t>(trials) +
                                    static_cast<std::size_t>(ti)]
                        .trial;
                for (const auto& sr : trial.schemes)
                    if (sr.scheme == s && sr.status == SolveStatus::Ok)
                        rates.push_back(sr.rate);
            }
            SweepRow row;
            row.axis = axis;
            row.axis_value = values[vi];
            row.scheme = s;
            row.trials = static_cast<int>(rates.size());
            row.seed_base = config.seed;
            if (!rates.empty()) {
                double sum = 0.0;
                for (double r : rates)
                    sum += r;
                row.mean_rate = sum / static_cast<double>(rates.size());
                double ss = 0.0;
                for (double r : rates)
                    ss += (r - row.mean_rate) * (r - row.mean_rate);
                row.std_rate = std::sqrt(ss / static_cast<double>(rates.size()));
            }
            results.rows.push_back(row);
        }
    }
    return results;
}

namespace {

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

const char* status_name(SolveStatus s) {
    switch (s) {
    case SolveStatus::Ok: return "ok";
    case SolveStatus::Infeasible: return "infeasible";
    case SolveStatus::NumericalFailure: return "numerical-failure";
    }
    return "unknown";
}

SolveStatus status_from_name(const std::string& name) {
    if (name == "ok") return SolveStatus::Ok;
    if (name == "infeasible") return SolveStatus::Infeasible;
    return SolveStatus::NumericalFailure;
}

using nlohmann::ordered_json;

ordered_json config_to_json(const ScenarioConfig& c) {
    return ordered_json{{"antennas", c.antenna_count},
                        {"paths", c.path_count},
                        {"wavelength_m", c.wavelength},
                        {"region_side_m", c.region_side},
                        {"p_max_dbm", c.max_power_dbm},
                        {"reflection_efficiency", c.reflection_efficiency},
                        {"d_min_m", c.min_spacing},
                        {"path_loss_db", c.path_loss_db},
                        {"path_loss_exponent", c.path_loss_exponent},
                        {"noise_power_w", c.noise_power},
                        {"ber_cap", c.ber_cap},
                        {"swarm_size", c.swarm_size},
                        {"swarm_iterations", c.swarm_iterations},
                        {"inertia", c.inertia},
                        {"cognitive_factor", c.cognitive_factor},
                        {"social_factor", c.social_factor},
                        {"penalty", c.penalty},
                        {"initial_temperature", c.initial_temperature},
                        {"convergence_tol", c.convergence_tol},
                        {"max_outer_iterations", c.max_outer_iterations},
                        {"seed", c.seed},
                        {"trials", c.trials}};
}

ScenarioConfig config_from_json(const ordered_json& j) {
    ScenarioConfig c;
    c.antenna_count = j.at("antennas").get<int>();
    c.path_count = j.at("paths").get<int>();
    c.wavelength = j.at("wavelength_m").get<double>();
    c.region_side = j.at("region_side_m").get<double>();
    c.max_power_dbm = j.at("p_max_dbm").get<double>();
    c.reflection_efficiency = j.at("reflection_efficiency").get<double>();
    c.min_spacing = j.at("d_min_m").get<double>();
    c.path_loss_db = j.at("path_loss_db").get<double>();
    c.path_loss_exponent = j.at("path_loss_exponent").get<double>();
    c.noise_power = j.at("noise_power_w").get<double>();
    c.ber_cap = j.at("ber_cap").get<double>();
    c.swarm_size = j.at("swarm_size").get<int>();
    c.swarm_iterations = j.at("swarm_iterations").get<int>();
    c.inertia = j.at("inertia").get<double>();
    c.cognitive_factor = j.at("cognitive_factor").get<double>();
    c.social_factor = j.at("social_factor").get<double>();
    c.penalty = j.at("penalty").get<double>();
    c.initial_temperature = j.at("initial_temperature").get<double>();
    c.convergence_tol = j.at("convergence_tol").get<double>();
    c.max_outer_iterations = j.at("max_outer_iterations").get<int>();
    c.seed = j.at("seed").get<std::uint64_t>();
    c.trials = j.at("trials").get<int>();
    c.finalize();
    return c;
}

} // namespace

std::string to_csv(const SweepResults& results) {
    std::string out =
        "axis_name,axis_value,scheme,mean_rate_bits,std_rate,trials,seed_base\n";
    for (const auto& row : results.rows) {
        out += row.axis;
        out += ',';
        out += format_double(row.axis_value);
        out += ',';
        out += scheme_name(row.scheme);
        out += ',';
        out += format_double(row.mean_rate);
        out += ',';
        out += format_double(row.std_rate);
        out += ',';
        out += std::to_string(row.trials);
        out += ',';
        out += std::to_string(row.seed_base);
        out += '\n';
    }
    return out;
}

std::string to_json_text(const SweepResults& results) {
    ordered_json doc;
    doc["schema"] = "masr-sweep-v1";
    doc["axis"] = results.axis;
    doc["seed_base"] = results.seed_base;
    doc["config"] = config_to_json(results.config);

    doc["rows"] = ordered_json::array();
    for (const auto& row : results.rows)
        doc["rows"].push_back(ordered_json{{"axis_value", row.axis_value},
                                           {"scheme", scheme_name(row.scheme)},
                                           {"mean_rate_bits", row.mean_rate},
                                           {"std_rate", row.std_rate},
                                           {"trials", row.trials}});

    doc["trials"] = ordered_json::array();
    for (const auto& rec : results.details) {
        ordered_json schemes = ordered_json::array();
        for (const auto& sr : rec.trial.schemes) {
            schemes.push_back(ordered_json{
                {"name", scheme_name(sr.scheme)},
                {"status", status_name(sr.status)},
                {"rate_bits", sr.rate},
                {"power_margin", sr.report.power_margin},
                {"ber_margin", sr.report.ber_margin},
                {"region_margin", sr.report.region_margin},
                {"spacing_margin", sr.report.spacing_margin},
                {"outer_iterations", sr.outer_iterations},
                {"rate_trace", sr.rate_trace},
                {"seconds", sr.seconds},
                {"realization_hash", sr.realization_hash}});
        }
        doc["trials"].push_back(ordered_json{{"axis_value", rec.axis_value},
                                             {"index", rec.trial.index},
                                             {"seed", rec.trial.seed},
                                             {"schemes", std::move(schemes)}});
    }
    return doc.dump(2) + "\n";
}

SweepResults parse_results_json(const std::string& text) {
    const ordered_json doc = ordered_json::parse(text);
    if (doc.at("schema").get<std::string>() != "masr-sweep-v1")
        throw std::runtime_error("parse_results_json: unknown schema");

    SweepResults results;
    results.axis = doc.at("axis").get<std::string>();
    results.seed_base = doc.at("seed_base").get<std::uint64_t>();
    results.config = config_from_json(doc.at("config"));

    for (const auto& jr : doc.at("rows")) {
        SweepRow row;
        row.axis = results.axis;
        row.axis_value = jr.at("axis_value").get<double>();
        const auto scheme = scheme_from_name(jr.at("scheme").get<std::string>());
        if (!scheme)
            throw std::runtime_error("parse_results_json: unknown scheme name");
        row.scheme = *scheme;
        row.mean_rate = jr.at("mean_rate_bits").get<double>();
        row.std_rate = jr.at("std_rate").get<double>();
        row.trials = jr.at("trials").get<int>();
        row.seed_base = results.seed_base;
        results.rows.push_back(row);
    }

    for (const auto& jt : doc.at("trials")) {
        TrialRecord rec;
        rec.axis_value = jt.at("axis_value").get<double>();
        rec.trial.index = jt.at("index").get<int>();
        rec.trial.seed = jt.at("seed").get<std::uint64_t>();
        for (const auto& js : jt.at("schemes")) {
            SchemeResult sr;
            const auto scheme = scheme_from_name(js.at("name").get<std::string>());
            if (!scheme)
                throw std::runtime_error("parse_results_json: unknown scheme name");
            sr.scheme = *scheme;
            sr.status = status_from_name(js.at("status").get<std::string>());
            sr.rate = js.at("rate_bits").get<double>();
            sr.report.power_margin = js.at("power_margin").get<double>();
            sr.report.ber_margin = js.at("ber_margin").get<double>();
            sr.report.region_margin = js.at("region_margin").get<double>();
            sr.report.spacing_margin = js.at("spacing_margin").get<double>();
            sr.report.rate = sr.rate;
            sr.outer_iterations = js.at("outer_iterations").get<int>();
            sr.rate_trace = js.at("rate_trace").get<std::vector<double>>();
            sr.seconds = js.at("seconds").get<double>();
            sr.realization_hash = js.at("realization_hash").get<std::uint64_t>();
            rec.trial.schemes.push_back(std::move(sr));
        }
        results.details.push_back(std::move(rec));
    }
    return results;
}

SweepResults load_results_json(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("cannot open results file: " + path);
    std::string text((std::istreambuf_iterator<char>(in)),
                     std::istreambuf_iterator<char>());
    return parse_results_json(text);
}

void write_outputs(const SweepResults& results, const std::string& path,
                   OutputFormat format) {
    const std::string text =
        format == OutputFormat::Csv ? to_csv(results) : to_json_text(results);
    if (path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot open output file: " + path);
    out << text;
    if (!out)
        throw std::runtime_error("write failed: " + path);
}

} // namespace masr
