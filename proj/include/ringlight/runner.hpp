#pragma once

#include "ringlight/config.hpp"
#include "ringlight/output.hpp"

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace ringlight {

/// Scalars and tables produced by one configuration and one realization.
struct PointResult {
    std::vector<std::pair<std::string, double>> metrics;
    std::vector<std::pair<std::string, Table>> tables; // file stem -> table
    std::vector<LinePlot> plots;                       // title doubles as file stem
    std::vector<std::string> warnings;

    double metric(const std::string& name) const;
};

/// Builds the realization for `seed` (disorder is drawn from it) and runs the
/// selected analysis. With `detailed` the per-point tables are filled in.
PointResult evaluate_point(const ScenarioConfig& cfg, std::uint64_t seed, bool detailed);

/// Name of the metric a sweep plots by default for this analysis.
std::string primary_metric(Analysis analysis);

struct EnsembleResult {
    std::vector<double> values;
    std::vector<std::uint64_t> seeds;
    double mean = 0.0;
    double std = 0.0; // sample standard deviation, 0 for a single realization
};

EnsembleResult reduce_ensemble(std::vector<double> values, std::vector<std::uint64_t> seeds);

struct RunOptions {
    std::string output_dir;             // overrides output.directory
    int jobs = 0;                       // 0 = all cores
    std::vector<std::string> overrides; // recorded verbatim in the manifest
    std::string recipe;                 // figure id when run through `reproduce`
    bool write_files = true;
};

struct RunSummary {
    std::string directory;
    std::string config_hash;
    json summary;
    std::vector<std::string> files;
};

/// Validates `doc` (after applying options.overrides), evaluates every sweep
/// point and realization in parallel and writes CSV, SVG, summary.json and
/// manifest.json. Compute errors are rethrown with the scenario name and the
/// failing point or seed prepended.
RunSummary run_scenario(json doc, const RunOptions& options);

/// Re-runs the configuration stored in a manifest.json.
RunSummary rerun_manifest(const std::string& manifest_path, RunOptions options);

/// Bundled figure recipes. A recipe holds one or more scenario documents.
std::vector<std::string> recipe_ids();
json recipe(const std::string& id);
std::vector<RunSummary> reproduce(const std::string& id, const RunOptions& options);

} // namespace ringlight
