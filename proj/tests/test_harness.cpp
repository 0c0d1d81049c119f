#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "masr/harness.hpp"
#include "masr/metrics.hpp"

using namespace masr;

namespace {

std::filesystem::path temp_file(const std::string& name) {
    return std::filesystem::temp_directory_path() / name;
}

void write_file(const std::filesystem::path& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary);
    out << text;
}

std::string read_file(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

} // namespace

TEST_CASE("empty config file yields the defaults") {
    const auto path = temp_file("masr_empty.json");
    write_file(path, "  \n\t  ");
    const auto cfg = load_config(path.string());
    const auto ref = ScenarioConfig::defaults();
    CHECK(cfg.antenna_count == ref.antenna_count);
    CHECK(cfg.path_count == ref.path_count);
    CHECK(cfg.max_power_dbm == ref.max_power_dbm);
    CHECK(cfg.swarm_size == 150);
    std::filesystem::remove(path);
}

TEST_CASE("test preset shrinks the search scale") {
    const auto cfg = ScenarioConfig::defaults(Scale::Test);
    CHECK(cfg.swarm_size == 50);
    CHECK(cfg.swarm_iterations == 50);
    CHECK(cfg.trials == 20);
    // physical parameters identical to the full preset
    CHECK(cfg.max_power_dbm == ScenarioConfig::defaults().max_power_dbm);
}

TEST_CASE("dB-domain fields convert exactly once at load") {
    const auto cfg = parse_config(R"({"p_max_dbm": 38, "path_loss_db": -10})");
    CHECK(cfg.max_power_w == doctest::Approx(6.309573444801933).epsilon(1e-12));
    CHECK(cfg.path_loss_linear == doctest::Approx(0.1).epsilon(1e-12));
}

TEST_CASE("config validation names the field") {
    CHECK_THROWS_WITH_AS(parse_config(R"({"noise_power_w": -1})"),
                         doctest::Contains("noise_power_w"), ConfigError);
    CHECK_THROWS_WITH_AS(parse_config(R"({"ber_cap": 0.7})"),
                         doctest::Contains("ber_cap"), ConfigError);
    CHECK_THROWS_WITH_AS(parse_config(R"({"antennas": 0})"),
                         doctest::Contains("antennas"), ConfigError);
    CHECK_THROWS_WITH_AS(parse_config(R"({"bogus_key": 1})"),
                         doctest::Contains("bogus_key"), ConfigError);
    CHECK_THROWS_AS(parse_config("{not json"), ConfigError);
    CHECK_THROWS_AS(load_config("/nonexistent/path.json"), ConfigError);
}

TEST_CASE("geometry follows an explicit wavelength") {
    const auto cfg = parse_config(R"({"wavelength_m": 0.2})");
    CHECK(cfg.region_side == doctest::Approx(0.6));
    CHECK(cfg.min_spacing == doctest::Approx(0.1));
    // explicit overrides still win
    const auto cfg2 = parse_config(R"({"wavelength_m": 0.2, "d_min_m": 0.03})");
    CHECK(cfg2.min_spacing == doctest::Approx(0.03));
}

TEST_CASE("fixed-array layouts") {
    const PlacementRegion reg{-0.15, 0.15, -0.15, 0.15};
    const auto one = fa_positions(1, 0.1, reg);
    REQUIRE(one.size() == 1);
    CHECK(one[0].x == 0.0);
    CHECK(one[0].y == 0.0);

    const auto two = fa_positions(2, 0.1, reg);
    CHECK(two[0].x == doctest::Approx(-0.025));
    CHECK(two[1].x == doctest::Approx(0.025));

    const auto four = fa_positions(4, 0.1, reg);
    CHECK(four.back().x - four.front().x == doctest::Approx(0.15));
    for (const auto& p : four)
        CHECK(reg.contains(p.x, p.y));

    CHECK_THROWS_AS(fa_positions(8, 0.1, reg), std::invalid_argument);
}

TEST_CASE("random beam uses exactly the power budget") {
    Rng rng(5);
    const double p = 6.3;
    const auto w = random_beamformer(4, p, rng);
    CHECK(w.squaredNorm() == doctest::Approx(p).epsilon(1e-12));
    Rng r1(9), r2(9);
    const auto a = random_beamformer(3, p, r1);
    const auto b = random_beamformer(3, p, r2);
    CHECK((a - b).norm() == 0.0);
}

TEST_CASE("scheme names round-trip") {
    for (Scheme s : kAllSchemes) {
        const auto parsed = scheme_from_name(scheme_name(s));
        REQUIRE(parsed.has_value());
        CHECK(*parsed == s);
    }
    CHECK_FALSE(scheme_from_name("nonsense").has_value());
}

TEST_CASE("trials are reproducible and share the realization") {
    ScenarioConfig cfg = ScenarioConfig::defaults(Scale::Test);
    cfg.antenna_count = 2;
    cfg.path_count = 3;
    cfg.swarm_size = 15;
    cfg.swarm_iterations = 10;
    cfg.finalize();
    const auto t1 = run_trial(cfg, 7, kAllSchemes);
    const auto t2 = run_trial(cfg, 7, kAllSchemes);
    REQUIRE(t1.schemes.size() == 4);
    for (std::size_t i = 0; i < t1.schemes.size(); ++i) {
        CHECK(t1.schemes[i].rate == t2.schemes[i].rate);
        CHECK(t1.schemes[i].status == t2.schemes[i].status);
        CHECK(t1.schemes[i].realization_hash == t2.schemes[i].realization_hash);
    }
    // every scheme consumed the same drawn scenario
    for (const auto& sr : t1.schemes)
        CHECK(sr.realization_hash == t1.schemes[0].realization_hash);
}

TEST_CASE("the movable scheme dominates the fixed array on the same trial") {
    ScenarioConfig cfg = ScenarioConfig::defaults(Scale::Test);
    cfg.antenna_count = 2;
    cfg.path_count = 3;
    cfg.swarm_size = 15;
    cfg.swarm_iterations = 10;
    cfg.finalize();
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const auto trial = run_trial(cfg, seed, kAllSchemes);
        const SchemeResult* ma = nullptr;
        const SchemeResult* fa = nullptr;
        for (const auto& sr : trial.schemes) {
            if (sr.scheme == Scheme::MaSaPso)
                ma = &sr;
            if (sr.scheme == Scheme::FixedAntenna)
                fa = &sr;
        }
        REQUIRE(ma != nullptr);
        REQUIRE(fa != nullptr);
        if (fa->status == SolveStatus::Ok) {
            REQUIRE(ma->status == SolveStatus::Ok);
            CHECK(ma->rate >= fa->rate - 1e-9);
        }
    }
}

TEST_CASE("sweep rejects bad arguments") {
    const auto cfg = ScenarioConfig::defaults(Scale::Test);
    const Scheme one[] = {Scheme::RandomBeam};
    CHECK_THROWS_AS(sweep(cfg, "power", {}, 5, one), ConfigError);
    const double v[] = {30.0};
    CHECK_THROWS_AS(sweep(cfg, "voltage", v, 5, one), ConfigError);
    CHECK_THROWS_AS(sweep(cfg, "power", v, 0, one), ConfigError);
    const double frac[] = {2.5};
    CHECK_THROWS_AS(sweep(cfg, "paths", frac, 5, one), ConfigError);
}

TEST_CASE("sweep output is byte-identical across runs and thread counts") {
    ScenarioConfig cfg = ScenarioConfig::defaults(Scale::Test);
    cfg.antenna_count = 2;
    cfg.path_count = 2;
    cfg.swarm_size = 10;
    cfg.swarm_iterations = 8;
    cfg.seed = 11;
    cfg.finalize();
    const Scheme schemes[] = {Scheme::MaSaPso, Scheme::FixedAntenna, Scheme::RandomBeam};
    const double values[] = {34.0, 38.0};

    const auto r1 = sweep(cfg, "power", values, 6, schemes, 1);
    const auto r2 = sweep(cfg, "power", values, 6, schemes, 4);
    CHECK(to_csv(r1) == to_csv(r2));

    const auto r3 = sweep(cfg, "power", values, 6, schemes, 4);
    CHECK(to_csv(r2) == to_csv(r3));
    CHECK(to_csv(r1).starts_with(
        "axis_name,axis_value,scheme,mean_rate_bits,std_rate,trials,seed_base\n"));
}

TEST_CASE("results JSON round-trips byte-identically") {
    ScenarioConfig cfg = ScenarioConfig::defaults(Scale::Test);
    cfg.antenna_count = 2;
    cfg.path_count = 2;
    cfg.swarm_size = 8;
    cfg.swarm_iterations = 6;
    cfg.seed = 3;
    cfg.finalize();
    const Scheme schemes[] = {Scheme::MaPso, Scheme::RandomBeam};
    const double values[] = {3.0, 6.0};
    const auto results = sweep(cfg, "paths", values, 4, schemes, 2);

    const auto path_a = temp_file("masr_results_a.json");
    const auto path_b = temp_file("masr_results_b.json");
    write_outputs(results, path_a.string(), OutputFormat::Json);
    const auto loaded = load_results_json(path_a.string());
    write_outputs(loaded, path_b.string(), OutputFormat::Json);
    CHECK(read_file(path_a) == read_file(path_b));
    CHECK(loaded.axis == results.axis);
    CHECK(loaded.rows.size() == results.rows.size());
    CHECK(loaded.details.size() == results.details.size());
    std::filesystem::remove(path_a);
    std::filesystem::remove(path_b);

    CHECK_THROWS(load_results_json("/nonexistent/file.json"));
}

TEST_CASE("unwritable output path raises") {
    const auto cfg = ScenarioConfig::defaults(Scale::Test);
    SweepResults empty;
    empty.axis = "none";
    empty.config = cfg;
    CHECK_THROWS_AS(write_outputs(empty, "/nonexistent_dir/out.csv", OutputFormat::Csv),
                    std::runtime_error);
}
