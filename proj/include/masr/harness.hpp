#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "masr/ao.hpp"
#include "masr/channel.hpp"
#include "masr/config.hpp"
#include "masr/rng.hpp"

namespace masr {

enum class Scheme { MaSaPso, MaPso, FixedAntenna, RandomBeam };

inline constexpr Scheme kAllSchemes[] = {Scheme::MaSaPso, Scheme::MaPso,
                                         Scheme::FixedAntenna, Scheme::RandomBeam};

const char* scheme_name(Scheme scheme);
std::optional<Scheme> scheme_from_name(const std::string& name);

/// Static baseline layout: uniform linear array along x, half-wavelength
/// spacing, centered at the region origin. Throws when the array does not
/// fit inside the region.
std::vector<AntennaPosition> fa_positions(int antenna_count, double wavelength,
                                          const PlacementRegion& region);

/// Isotropic random beam at full power: sqrt(P) g / ||g|| with g standard
/// complex Gaussian.
Eigen::VectorXcd random_beamformer(int antenna_count, double max_power_w, Rng& rng);

/// Order-invariant digest of a drawn scenario, used to audit that all
/// schemes in a trial consumed the same realization.
std::uint64_t realization_hash(const ScenarioRealization& scenario);

struct SchemeResult {
    Scheme scheme = Scheme::MaSaPso;
    SolveStatus status = SolveStatus::Ok;
    double rate = 0.0;
    ConstraintReport report;
    int outer_iterations = 0;
    std::vector<double> rate_trace;
    double seconds = 0.0;
    std::uint64_t realization_hash = 0;
};

struct TrialResult {
    int index = 0;
    std::uint64_t seed = 0;
    std::vector<SchemeResult> schemes;
};

/// Draw one scenario from the trial seed and evaluate every requested
/// scheme on it. Scheme randomness comes from per-scheme derived seeds, so
/// the scheme list does not perturb individual results. Per-scheme
/// infeasibility is recorded in the result, never thrown.
TrialResult run_trial(const ScenarioConfig& config, std::uint64_t seed,
                      std::span<const Scheme> schemes);

struct SweepRow {
    std::string axis;
    double axis_value = 0.0;
    Scheme scheme = Scheme::MaSaPso;
    double mean_rate = 0.0;
    double std_rate = 0.0;
    int trials = 0;
    std::uint64_t seed_base = 0;
};

struct TrialRecord {
    double axis_value = 0.0;
    TrialResult trial;
};

struct SweepResults {
    std::string axis; // "power" | "paths" | "antennas" | "none"
    std::uint64_t seed_base = 0;
    ScenarioConfig config;
    std::vector<SweepRow> rows;
    std::vector<TrialRecord> details;
};

/// Run `trials` seeded trials per axis value (trial i uses seed_base + i)
/// and aggregate per-scheme mean/std rates over the successful trials.
/// Trials execute concurrently on `threads` workers (0 = hardware); results
/// are identical regardless of the thread count. Throws ConfigError on an
/// unknown axis or empty value list.
SweepResults sweep(const ScenarioConfig& config, const std::string& axis,
                   std::span<const double> values, int trials,
                   std::span<const Scheme> schemes, int threads = 0);

enum class OutputFormat { Csv, Json };

std::string to_csv(const SweepResults& results);
std::string to_json_text(const SweepResults& results);

/// Parse a results JSON document back (replay support).
SweepResults parse_results_json(const std::string& text);
SweepResults load_results_json(const std::string& path);

/// Write results to a file, or to stdout when path is "-". Output is
/// byte-identical for identical inputs. Throws std::runtime_error on an
/// unwritable path.
void write_outputs(const SweepResults& results, const std::string& path,
                   OutputFormat format);

} // namespace masr
