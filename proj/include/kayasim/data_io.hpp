#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "kayasim/allocation.hpp"
#include "kayasim/monte_carlo.hpp"
#include "kayasim/scenario.hpp"

namespace kayasim {

inline constexpr int kSchemaVersion = 1;

// A dataset bundle is a directory holding one structured document
// (bundle.json: metadata, region map, uncertainty config, scenario
// definitions) plus one delimited anchor table per scenario with columns
// province,parameter,year,value. Schemas are documented in the README.

struct BundleMeta {
    int schema_version = kSchemaVersion;
    std::string name;
    std::string notes;
    std::string created;

    bool operator==(const BundleMeta&) const = default;
};

struct DatasetBundle {
    BundleMeta meta;
    RegionMapping region_map;
    UncertaintyConfig uncertainty;
    std::vector<ScenarioSpec> scenarios;

    const ScenarioSpec& scenario(const std::string& name) const;

    bool operator==(const DatasetBundle&) const = default;
};

struct ValidationIssue {
    std::string file;
    int line = 0; // 0 when the issue is not line-addressable
    std::string field;
    std::string message;

    std::string str() const;
};

struct BundleLoadResult {
    std::optional<DatasetBundle> bundle;
    std::vector<ValidationIssue> issues;

    bool ok() const { return bundle.has_value() && issues.empty(); }
};

/// Loads and fully validates a bundle. `path` may be the bundle directory
/// or its bundle.json. All validation errors are collected, not just the
/// first; the bundle is only returned when the issue list is empty.
/// Throws IoError if the bundle document cannot be read at all.
BundleLoadResult load_bundle(const std::filesystem::path& path);

/// Writes bundle.json plus `<scenario>_anchors.csv` per scenario into
/// `dir`. Anchor values keep full precision so a reload reproduces the
/// bundle exactly.
void save_bundle(const DatasetBundle& bundle, const std::filesystem::path& dir);

enum class ReportFormat {
    Tabular,
    Structured,
    Both,
};

ReportFormat report_format_from_string(const std::string& name);

/// Rounds to 6 significant digits (report precision for values).
double round_sig6(double value);

/// Fixed report formatting: 6 significant digits, shortest form.
std::string format_value(double value);

void write_static_projection_reports(const StaticProjection& projection,
                                     const ScenarioSpec& spec, ReportFormat format,
                                     const std::filesystem::path& out_dir);

/// Simulation reports: distribution summaries, per-year peak
/// probabilities, uncertainty bands, histograms, and the optional
/// per-draw trajectory sample. Bands are paired with unit names.
void write_simulation_reports(
    const SimulationResult& result,
    const std::vector<std::pair<std::string, UncertaintyBands>>& bands,
    ReportFormat format, const std::filesystem::path& out_dir);

void write_allocation_reports(const AllocationScheme& scheme, ReportFormat format,
                              const std::filesystem::path& out_dir);

struct RunManifest {
    std::string engine_version;
    std::string command;
    std::string bundle_path;
    std::vector<std::string> scenarios;
    std::optional<std::uint64_t> seed;
    std::optional<std::uint64_t> draws;
    std::optional<int> workers;
    std::map<std::string, std::string> options; // scope, strategy, ... (sorted)
    std::string out_dir;
    double duration_seconds = 0.0;
};

void write_manifest(const RunManifest& manifest, const std::filesystem::path& out_dir);

// Readers for the file-mediated pipeline: a later stage consumes the
// structured outputs of an earlier one.

struct StaticPeaksDoc {
    std::string scenario;
    std::map<std::string, Peak> emission_peaks; // keyed by province, plus "national"
    std::map<std::string, Peak> energy_peaks;
};

StaticPeaksDoc read_static_peaks(const std::filesystem::path& path);

struct SimulationSummaryDoc {
    std::string scenario;
    SimScope scope = SimScope::National;
    SimQuantity quantity = SimQuantity::Emissions;
    std::map<std::string, PeakDistribution> distributions; // keyed by unit
};

SimulationSummaryDoc read_simulation_summary(const std::filesystem::path& path);

} // namespace kayasim
