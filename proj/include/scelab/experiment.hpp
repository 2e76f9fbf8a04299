#pragma once

// Experiment sweeps over (mechanism, effort) cells with CSV and JSON output.

#include "scelab/config.hpp"
#include "scelab/equivalence.hpp"
#include "scelab/iec.hpp"
#include "scelab/measurements.hpp"
#include "scelab/parallel.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace scelab {

inline constexpr int kSchemaVersion = 1;

/// The CSV header row (without newline). Pinned by a golden test.
std::string csv_header();

enum class CellMetric { mi, sensitivity, total_payment, sce_mi, sce_sensitivity };
std::string to_string(CellMetric m);
CellMetric parse_cell_metric(std::string_view text);

/// Resolves a named IEC preset. Known: "paper-base".
IecConfig iec_preset(const std::string& name, std::size_t k = 10);

struct ExperimentConfig {
    std::string preset = "paper-base";  // empty when the IEC is spelled out
    std::size_t tasks_k = 10;           // preset multiplier: 5k tasks per agent
    IecConfig iec = paper_base();
    std::vector<Measurement> mechanisms;
    std::vector<double> efforts{0.6};
    std::vector<CellMetric> metrics{CellMetric::mi, CellMetric::sensitivity, CellMetric::total_payment,
                                    CellMetric::sce_mi, CellMetric::sce_sensitivity};
    std::size_t replicates = 500;
    std::size_t iterations = 500;  // sensitivity iterations T
    double sce_step = 5.0;
    double deviation = 0.1;
    double replace_prob = 0.5;
    bool resample = true;
    std::size_t batch = 10;
    bool independent_target = false;
    bool full_grid = false;
    bool isotonic = false;
    std::uint64_t seed = 1;
    std::string output = "results.csv";
    Execution execution = Execution::parallel;

    /// Throws ConfigError on the first problem, before any computation.
    void validate() const;

    static ExperimentConfig from_document(const ConfigDocument& doc);
    static ExperimentConfig load(const std::string& path);
};

struct ResultRow {
    std::string mechanism;
    std::string divergence;
    double effort = 0.0;
    CellMetric metric = CellMetric::mi;
    std::optional<double> value, stderr_value;
    std::size_t replicates = 0;
    std::size_t dropped = 0;
    std::uint64_t seed = 0;
    std::optional<double> borda_scale;
    std::optional<bool> ir_binding;
    std::optional<Clamp> sce_clamped;
    std::vector<CurvePoint> f_curve;
    std::string error;
};

/// Evaluates every configured metric for every (mechanism, effort) cell.
/// Failing cells become rows carrying the error text. Rows come back in
/// (mechanism, effort, metric) configuration order.
std::vector<ResultRow> run(const ExperimentConfig& config);

/// Seed used for one metric family of a run.
Seed metric_seed(std::uint64_t master, CellMetric metric);

void write_csv(std::ostream& out, const std::vector<ResultRow>& rows);

/// Writes config.output and the JSON manifest next to it; returns the rows.
std::vector<ResultRow> run_to_files(const ExperimentConfig& config, const std::string& command = "run");

/// Path of the manifest written alongside an output file.
std::string manifest_path(const std::string& output);

struct ManifestInfo {
    std::string command;
    std::string config_json;  // JSON object text echoing the resolved inputs
    std::vector<std::string> outputs;
    std::string started, finished;  // UTC, ISO 8601
    double seconds = 0.0;
};

/// Resolved configuration as a JSON object.
std::string to_json(const ExperimentConfig& config);
void write_manifest(const std::string& path, const ManifestInfo& info);
std::string utc_timestamp();

/// Shortest round-trip decimal form, identical on every platform.
std::string format_double(double x);
std::string csv_escape(const std::string& field);

}  // namespace scelab
