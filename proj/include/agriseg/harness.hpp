#pragma once

// Experiment orchestration: sweep sub-tile size x prompt density x minimum
// mask region area, score every sampled sub-tile, aggregate, and emit
// plot-ready reports.

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "agriseg/mask.hpp"
#include "agriseg/metrics.hpp"
#include "agriseg/raster.hpp"

namespace agriseg {

enum class Metric { fmi, ari, nmi, v_measure, homogeneity, completeness };

inline constexpr std::array<Metric, 6> kAllMetrics{Metric::fmi,         Metric::ari,
                                                   Metric::nmi,         Metric::v_measure,
                                                   Metric::homogeneity, Metric::completeness};

std::string_view metric_name(Metric m);
/// Throws ConfigError for an unknown name.
Metric parse_metric(std::string_view name);
double metric_value(const ConsensusScores& s, Metric m);

enum class SegmenterKind { color_oracle, external };

struct StridePolicy {
    enum class Kind { side, half, pixels };
    Kind kind = Kind::side;
    std::size_t pixels = 0;

    std::size_t stride_for(std::size_t side) const;
};

struct ExperimentConfig {
    std::vector<std::size_t> aoi_factors{1, 2, 4, 8};
    std::vector<double> pps_percents{0.01, 0.02, 0.04, 0.08};
    std::vector<double> mmra_percents{0.0, 0.001, 0.005, 0.01};
    std::size_t samples_per_set = 300;
    std::uint64_t seed = 42;
    StridePolicy stride;
    bool exclude_background = false;
    SegmenterKind segmenter = SegmenterKind::color_oracle;
    int oracle_tolerance = 12;

    std::string nir_band = "B8";
    std::string red_band = "B4";
    std::array<std::string, 3> rgb_bands{"B4", "B3", "B2"};
    StretchPolicy stretch;
    ScreenPolicy screen;
    std::optional<std::filesystem::path> exclusion_list;

    std::size_t tails_k = 5;
    bool strict = false;
    bool emit_timing = false;

    /// Throws ConfigError on empty axes or out-of-range values.
    void validate() const;
};

/// Reads a JSON config; unspecified keys keep their defaults.
ExperimentConfig load_experiment_config(const std::filesystem::path& path);
ExperimentConfig parse_experiment_config(std::string_view json_text);

struct SampleResult {
    std::string sample_id;  // TileSpec::id()
    TileSpec tile;
    std::size_t aoi_factor = 1;
    PromptConfig prompt;
    bool ok = true;
    std::string reason;     // failure reason when !ok
    ConsensusScores scores; // quantized to 6 decimals
    std::size_t mask_count = 0;
    double unassigned_fraction = 0.0;
    double seconds = 0.0;   // not part of the emitted sample table
};

struct MetricStats {
    double mean = 0.0;
    double std = 0.0;  // population
    std::array<double, 7> quantiles{};  // 1, 5, 25, 50, 75, 95, 99 %
};

inline constexpr std::array<double, 7> kQuantileLevels{0.01, 0.05, 0.25, 0.5, 0.75, 0.95, 0.99};

struct CellAggregate {
    std::size_t aoi_factor = 1;
    std::size_t side = 0;
    double pps_percent = 0.0;
    double mmra_percent = 0.0;
    std::size_t rows = 0;
    std::size_t failed = 0;
    std::array<MetricStats, 6> stats{};  // indexed like kAllMetrics
};

struct TailEntry {
    std::string sample_id;
    double value = 0.0;
};

struct Tails {
    std::vector<TailEntry> top;     // descending
    std::vector<TailEntry> bottom;  // ascending
};

struct CellTails {
    std::size_t aoi_factor = 1;
    double pps_percent = 0.0;
    double mmra_percent = 0.0;
    std::array<Tails, 6> per_metric{};
};

struct ScreenedTile {
    std::string tile_id;
    std::string reason;
    double cloud_score = 0.0;
};

struct ConsensusReport {
    std::vector<SampleResult> rows;
    std::vector<CellAggregate> aggregates;
    std::vector<CellTails> tails;
    std::vector<ScreenedTile> screened;
};

/// Linear interpolation between order statistics: h = (n - 1) * p.
double quantile_sorted(std::span<const double> sorted, double p);
MetricStats metric_stats(std::vector<double> values);

/// Rows of one cell are those with matching (factor, pps%, mmra%).
std::vector<CellAggregate> aggregate(std::span<const SampleResult> rows,
                                     const ExperimentConfig& config);

/// Successful rows sorted by metric, ties by sample id. k must not exceed the
/// number of successful rows.
Tails extract_tails(std::span<const SampleResult> rows, Metric metric, std::size_t k);

/// Model-free segmenter: flood-fills the 4-connected region around each
/// prompt whose colors are within `tolerance` (max channel difference) of the
/// prompt pixel. Identical regions are reported once.
MaskSet color_oracle_segmenter(const RgbSnapshot& snapshot, const PromptConfig& config,
                               int tolerance = 12);

/// Data root layout:
///   stacks/<tile>.msst | stacks/<tile>/  or  snapshots/<tile>.png
///   truth/<tile>.lmap
///   masks/<sample_id>/pps<P>_mmra<M>.json   (external segmenter)
ConsensusReport run_experiment(const ExperimentConfig& config,
                               const std::filesystem::path& data_root);

std::filesystem::path maskset_path(const std::filesystem::path& data_root,
                                   const std::string& sample_id, const PromptConfig& prompt);

enum class ReportFormat { csv, json };

/// csv: samples.csv, samples_long.csv, aggregates.csv, tails.json, screened.csv
/// json: report.json
/// Either way timing.csv is added when emit_timing is set.
void emit_report(const ConsensusReport& report, const std::filesystem::path& out_dir,
                 ReportFormat format = ReportFormat::csv, bool emit_timing = false);

/// Parses a samples.csv written by emit_report.
std::vector<SampleResult> read_samples_csv(const std::filesystem::path& path);

/// Round to 6 decimals the way the CSV prints.
double quantize6(double x);

}  // namespace agriseg
