// Command-line driver for the scenario engine. Subcommands form a
// file-mediated pipeline:
//
//   validate  check a dataset bundle and report every problem found
//   project   deterministic per-province and national trajectories + peaks
//   simulate  Monte Carlo peak distributions under parameter uncertainty
//   allocate  turn BAU/decarbonization gaps into reduction assignments
//
// Exit codes: 0 success, 1 validation or domain error, 2 I/O error.

#include <chrono>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "kayasim/allocation.hpp"
#include "kayasim/data_io.hpp"
#include "kayasim/errors.hpp"
#include "kayasim/monte_carlo.hpp"
#include "kayasim/scenario.hpp"
#include "kayasim/version.hpp"

namespace {

using namespace kayasim;

constexpr int kExitOk = 0;
constexpr int kExitDomain = 1;
constexpr int kExitIo = 2;

struct CommonOptions {
    std::string bundle_path;
    std::string out_dir;
    std::string format = "both";
};

DatasetBundle load_bundle_or_fail(const std::string& path)
{
    BundleLoadResult loaded = load_bundle(path);
    if (!loaded.ok()) {
        for (const ValidationIssue& issue : loaded.issues) {
            std::cerr << "error: " << issue.str() << "\n";
        }
        throw ValidationError("bundle " + path + " failed validation with "
                              + std::to_string(loaded.issues.size()) + " issue(s)");
    }
    return std::move(*loaded.bundle);
}

double seconds_since(std::chrono::steady_clock::time_point start)
{
    const auto elapsed = std::chrono::steady_clock::now() - start;
    return std::chrono::duration<double>(elapsed).count();
}

// --- validate -------------------------------------------------------------

int cmd_validate(const std::string& bundle_path)
{
    BundleLoadResult loaded = load_bundle(bundle_path);
    if (!loaded.ok()) {
        for (const ValidationIssue& issue : loaded.issues) {
            std::cerr << "error: " << issue.str() << "\n";
        }
        std::cerr << loaded.issues.size() << " issue(s) found\n";
        return kExitDomain;
    }
    const DatasetBundle& bundle = *loaded.bundle;

    // A loadable bundle must also expand cleanly: interpolation can break
    // share-sum constraints between anchors even when every anchor is valid.
    for (const ScenarioSpec& spec : bundle.scenarios) {
        try {
            expand(spec);
        } catch (const ValidationError& err) {
            std::cerr << "error: scenario " << spec.name << ": " << err.what() << "\n";
            return kExitDomain;
        }
    }

    std::cout << "bundle \"" << bundle.meta.name << "\" is valid\n";
    std::cout << "  provinces: " << bundle.region_map.province_to_region.size() << "\n";
    for (const ScenarioSpec& spec : bundle.scenarios) {
        std::cout << "  scenario " << spec.name << " (" << to_string(spec.kind) << ", "
                  << spec.first_year << ".." << spec.last_year << ", "
                  << to_string(spec.interpolation) << ", " << to_string(spec.bipg_scope)
                  << ")\n";
    }
    return kExitOk;
}

// --- project --------------------------------------------------------------

int cmd_project(const CommonOptions& common, const std::string& scenario_name)
{
    const auto start = std::chrono::steady_clock::now();
    const DatasetBundle bundle = load_bundle_or_fail(common.bundle_path);
    const ScenarioSpec& spec = bundle.scenario(scenario_name);
    const ReportFormat format = report_format_from_string(common.format);

    const StaticProjection projection = project_static(spec);
    write_static_projection_reports(projection, spec, format, common.out_dir);

    RunManifest manifest;
    manifest.engine_version = kEngineVersion;
    manifest.command = "project";
    manifest.bundle_path = common.bundle_path;
    manifest.scenarios = {spec.name};
    manifest.options["format"] = common.format;
    manifest.out_dir = common.out_dir;
    manifest.duration_seconds = seconds_since(start);
    write_manifest(manifest, common.out_dir);

    std::cout << "projected " << projection.provinces.size() << " provinces, "
              << spec.first_year << ".." << spec.last_year << "\n";
    std::cout << "national emission peak: " << format_value(projection.national.emission_peak.value)
              << " MtCO2 in " << projection.national.emission_peak.year << "\n";
    std::cout << "national energy peak: " << format_value(projection.national.energy_peak.value)
              << " Mtce in " << projection.national.energy_peak.year << "\n";
    return kExitOk;
}

// --- simulate -------------------------------------------------------------

struct SimulateOptions {
    std::string scenario;
    std::optional<std::uint64_t> seed;
    std::optional<std::uint64_t> draws;
    std::optional<std::string> mode;
    std::optional<double> sigma_c;
    int workers = 1;
    std::string scope = "national";
    std::string quantity = "emissions";
    int bins = 100;
    std::size_t dump_draws = 0;
};

int cmd_simulate(const CommonOptions& common, const SimulateOptions& opts)
{
    const auto start = std::chrono::steady_clock::now();
    const DatasetBundle bundle = load_bundle_or_fail(common.bundle_path);
    const ScenarioSpec& spec = bundle.scenario(opts.scenario);
    const ReportFormat format = report_format_from_string(common.format);

    UncertaintyConfig config = bundle.uncertainty;
    if (opts.seed) {
        config.seed = *opts.seed;
    }
    if (opts.draws) {
        config.draws = static_cast<std::size_t>(*opts.draws);
    }
    if (opts.mode) {
        config.mode = uncertainty_mode_from_string(*opts.mode);
    }
    if (opts.sigma_c) {
        config.sigma_c = *opts.sigma_c;
    }
    if (!config.seed) {
        throw ValidationError("no seed available: pass --seed or set uncertainty.seed "
                              "in the bundle (runs must be reproducible)");
    }

    RunOptions run;
    run.scope = opts.scope == "province" ? SimScope::Province : SimScope::National;
    run.quantity = opts.quantity == "energy" ? SimQuantity::Energy : SimQuantity::Emissions;
    run.workers = opts.workers;
    run.histogram_bins = static_cast<std::size_t>(opts.bins);
    run.keep_trajectories = opts.dump_draws;

    const SimulationResult result = run_mc(spec, config, run);

    // Analytic dispersion envelopes around the deterministic series; the
    // construction assumes the single aggregate scale factor, so they are
    // only written in that mode.
    std::vector<std::pair<std::string, UncertaintyBands>> bands;
    if (config.mode == UncertaintyMode::Aggregate) {
        const StaticProjection projection = project_static(spec);
        auto band_for = [&](const ProvinceProjection& p) {
            const EmissionTrajectory& series =
                run.quantity == SimQuantity::Energy ? p.energy : p.emissions;
            return uncertainty_bands(series, config.sigma_c, {1, 2, 3},
                                     config.ramp_base_year, config.ramp_end_year);
        };
        if (run.scope == SimScope::National) {
            bands.emplace_back("national", band_for(projection.national));
        } else {
            for (const ProvinceProjection& p : projection.provinces) {
                bands.emplace_back(p.province, band_for(p));
            }
            bands.emplace_back("national", band_for(projection.national));
        }
    }

    write_simulation_reports(result, bands, format, common.out_dir);

    RunManifest manifest;
    manifest.engine_version = kEngineVersion;
    manifest.command = "simulate";
    manifest.bundle_path = common.bundle_path;
    manifest.scenarios = {spec.name};
    manifest.seed = config.seed;
    manifest.draws = config.draws;
    manifest.workers = opts.workers;
    manifest.options["format"] = common.format;
    manifest.options["mode"] = to_string(config.mode);
    manifest.options["scope"] = opts.scope;
    manifest.options["quantity"] = opts.quantity;
    manifest.out_dir = common.out_dir;
    manifest.duration_seconds = seconds_since(start);
    write_manifest(manifest, common.out_dir);

    if (result.units.size() > 1) {
        // Keep the console summary short for province runs; the detail is
        // in the reports.
        std::cout << "simulated " << result.units.size() << " provinces, " << result.draws
                  << " draws each (seed " << result.seed << ")\n";
    } else {
        const UnitSimulation& unit = result.units.front();
        const PeakDistribution& d = unit.distribution;
        std::cout << unit.name << ": peak " << format_value(d.mean_value) << " +/- "
                  << format_value(d.sd_value) << " in " << format_value(d.mean_year)
                  << " +/- " << format_value(d.sd_year) << " (" << d.draws << " draws)\n";
    }
    return kExitOk;
}

// --- allocate -------------------------------------------------------------

struct AllocateOptions {
    std::string strategy = "potential_raw";
    std::string basis = "dynamic_mean_vs_dec_static";
    std::optional<double> target;
    std::string bau_static_dir;
    std::string dec_static_dir;
    std::string bau_sim_dir;
    std::string dec_sim_dir;
};

int cmd_allocate(const CommonOptions& common, const AllocateOptions& opts)
{
    const auto start = std::chrono::steady_clock::now();
    const DatasetBundle bundle = load_bundle_or_fail(common.bundle_path);
    const ReportFormat format = report_format_from_string(common.format);
    const PotentialBasis basis = potential_basis_from_string(opts.basis);
    const AllocationStrategy strategy = allocation_strategy_from_string(opts.strategy);

    const bool needs_bau_sim = basis == PotentialBasis::DynamicMeanVsDecStatic
        || basis == PotentialBasis::DynamicMeanVsDynamicMean;
    const bool needs_dec_sim = basis == PotentialBasis::DynamicMeanVsDynamicMean;
    const bool needs_bau_static = basis == PotentialBasis::StaticVsStatic;
    const bool needs_dec_static = basis != PotentialBasis::DynamicMeanVsDynamicMean;

    if (needs_bau_sim && opts.bau_sim_dir.empty()) {
        throw ValidationError("basis " + opts.basis + " requires --bau-sim "
                              "(a simulate output directory for the BAU scenario)");
    }
    if (needs_dec_sim && opts.dec_sim_dir.empty()) {
        throw ValidationError("basis " + opts.basis + " requires --dec-sim "
                              "(a simulate output directory for the decarbonization scenario)");
    }
    if (needs_bau_static && opts.bau_static_dir.empty()) {
        throw ValidationError("basis " + opts.basis + " requires --bau-static "
                              "(a project output directory for the BAU scenario)");
    }
    if (needs_dec_static && opts.dec_static_dir.empty()) {
        throw ValidationError("basis " + opts.basis + " requires --dec-static "
                              "(a project output directory for the decarbonization scenario)");
    }

    std::optional<StaticPeaksDoc> bau_static;
    std::optional<StaticPeaksDoc> dec_static;
    std::optional<SimulationSummaryDoc> bau_sim;
    std::optional<SimulationSummaryDoc> dec_sim;
    if (needs_bau_static) {
        bau_static = read_static_peaks(opts.bau_static_dir);
    }
    if (needs_dec_static) {
        dec_static = read_static_peaks(opts.dec_static_dir);
    }
    if (needs_bau_sim) {
        bau_sim = read_simulation_summary(opts.bau_sim_dir);
        if (bau_sim->scope != SimScope::Province) {
            throw ValidationError("--bau-sim must come from a province-scope run "
                                  "(per-province distributions are required)");
        }
    }
    if (needs_dec_sim) {
        dec_sim = read_simulation_summary(opts.dec_sim_dir);
        if (dec_sim->scope != SimScope::Province) {
            throw ValidationError("--dec-sim must come from a province-scope run "
                                  "(per-province distributions are required)");
        }
    }

    std::vector<ProvincePeakSummary> summaries;
    for (const auto& [province, region] : bundle.region_map.province_to_region) {
        (void)region;
        ProvincePeakSummary summary;
        summary.province = province;
        if (bau_static) {
            auto it = bau_static->emission_peaks.find(province);
            if (it == bau_static->emission_peaks.end()) {
                throw ValidationError("--bau-static has no peak for province \"" + province + "\"");
            }
            summary.bau_static_peak = it->second;
        }
        if (dec_static) {
            auto it = dec_static->emission_peaks.find(province);
            if (it == dec_static->emission_peaks.end()) {
                throw ValidationError("--dec-static has no peak for province \"" + province + "\"");
            }
            summary.dec_static_peak = it->second;
        }
        if (bau_sim) {
            auto it = bau_sim->distributions.find(province);
            if (it == bau_sim->distributions.end()) {
                throw ValidationError("--bau-sim has no distribution for province \"" + province
                                      + "\"");
            }
            summary.bau_dynamic = it->second;
        }
        if (dec_sim) {
            auto it = dec_sim->distributions.find(province);
            if (it == dec_sim->distributions.end()) {
                throw ValidationError("--dec-sim has no distribution for province \"" + province
                                      + "\"");
            }
            summary.dec_dynamic = it->second;
        }
        summaries.push_back(std::move(summary));
    }

    const AllocationScheme scheme =
        allocate(summaries, strategy, basis, opts.target, bundle.region_map);
    write_allocation_reports(scheme, format, common.out_dir);

    RunManifest manifest;
    manifest.engine_version = kEngineVersion;
    manifest.command = "allocate";
    manifest.bundle_path = common.bundle_path;
    manifest.options["format"] = common.format;
    manifest.options["strategy"] = opts.strategy;
    manifest.options["basis"] = opts.basis;
    if (opts.target) {
        manifest.options["target"] = format_value(*opts.target);
    }
    manifest.out_dir = common.out_dir;
    manifest.duration_seconds = seconds_since(start);
    write_manifest(manifest, common.out_dir);

    double total = 0.0;
    for (const ProvinceReduction& r : scheme.reductions) {
        total += r.reduction;
    }
    std::cout << "allocated " << format_value(total) << " MtCO2 across "
              << scheme.reductions.size() << " provinces\n";
    if (!scheme.reductions.empty()) {
        const ProvinceReduction& top = scheme.reductions.front();
        std::cout << "largest assignment: " << top.province << " ("
                  << format_value(top.reduction) << " MtCO2)\n";
    }
    return kExitOk;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"kayasim: provincial building-emission scenario engine"};
    app.set_version_flag("--version", std::string(kEngineVersion));
    app.require_subcommand(1);

    CommonOptions common;

    auto* validate_cmd = app.add_subcommand("validate", "Check a dataset bundle");
    validate_cmd->add_option("--bundle", common.bundle_path, "Bundle directory or bundle.json")
        ->required();

    auto* project_cmd =
        app.add_subcommand("project", "Deterministic trajectories and peaks");
    std::string project_scenario;
    project_cmd->add_option("--bundle", common.bundle_path, "Bundle directory")->required();
    project_cmd->add_option("--scenario", project_scenario, "Scenario name")->required();
    project_cmd->add_option("--out", common.out_dir, "Output directory")->required();
    project_cmd->add_option("--format", common.format, "csv, json, or both");

    auto* simulate_cmd = app.add_subcommand("simulate", "Monte Carlo peak distributions");
    SimulateOptions sim;
    simulate_cmd->add_option("--bundle", common.bundle_path, "Bundle directory")->required();
    simulate_cmd->add_option("--scenario", sim.scenario, "Scenario name")->required();
    simulate_cmd->add_option("--out", common.out_dir, "Output directory")->required();
    simulate_cmd->add_option("--format", common.format, "csv, json, or both");
    std::uint64_t seed_value = 0;
    auto* seed_opt = simulate_cmd->add_option("--seed", seed_value,
                                              "Random seed (overrides the bundle)");
    std::uint64_t draws_value = 0;
    auto* draws_opt =
        simulate_cmd->add_option("--draws", draws_value, "Number of draws (overrides the bundle)");
    std::string mode_value;
    auto* mode_opt = simulate_cmd->add_option("--mode", mode_value,
                                              "aggregate or per_parameter (overrides the bundle)");
    double sigma_value = 0.0;
    auto* sigma_opt = simulate_cmd->add_option("--sigma-c", sigma_value,
                                               "Aggregate relative sigma (overrides the bundle)");
    simulate_cmd->add_option("--workers", sim.workers, "Worker thread count")
        ->check(CLI::PositiveNumber);
    simulate_cmd->add_option("--scope", sim.scope, "national or province")
        ->check(CLI::IsMember({"national", "province"}));
    simulate_cmd->add_option("--quantity", sim.quantity, "emissions or energy")
        ->check(CLI::IsMember({"emissions", "energy"}));
    simulate_cmd->add_option("--bins", sim.bins, "Histogram bin count")
        ->check(CLI::PositiveNumber);
    simulate_cmd->add_option("--dump-draws", sim.dump_draws,
                             "Write the first N draw trajectories per unit");

    auto* allocate_cmd = app.add_subcommand("allocate", "Reduction assignments from peak gaps");
    AllocateOptions alloc;
    allocate_cmd->add_option("--bundle", common.bundle_path, "Bundle directory")->required();
    allocate_cmd->add_option("--out", common.out_dir, "Output directory")->required();
    allocate_cmd->add_option("--format", common.format, "csv, json, or both");
    allocate_cmd->add_option("--strategy", alloc.strategy,
                             "potential_raw or potential_proportional");
    allocate_cmd->add_option("--basis", alloc.basis,
                             "dynamic_mean_vs_dec_static, static_vs_static, or "
                             "dynamic_mean_vs_dynamic_mean");
    double target_value = 0.0;
    auto* target_opt = allocate_cmd->add_option("--target", target_value,
                                                "National reduction total to distribute");
    allocate_cmd->add_option("--bau-static", alloc.bau_static_dir,
                             "project output directory for the BAU scenario");
    allocate_cmd->add_option("--dec-static", alloc.dec_static_dir,
                             "project output directory for the decarbonization scenario");
    allocate_cmd->add_option("--bau-sim", alloc.bau_sim_dir,
                             "simulate output directory for the BAU scenario");
    allocate_cmd->add_option("--dec-sim", alloc.dec_sim_dir,
                             "simulate output directory for the decarbonization scenario");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& err) {
        const int code = app.exit(err);
        return code == 0 ? kExitOk : kExitDomain;
    }

    if (*seed_opt) {
        sim.seed = seed_value;
    }
    if (*draws_opt) {
        sim.draws = draws_value;
    }
    if (*mode_opt) {
        sim.mode = mode_value;
    }
    if (*sigma_opt) {
        sim.sigma_c = sigma_value;
    }
    if (*target_opt) {
        alloc.target = target_value;
    }

    try {
        if (*validate_cmd) {
            return cmd_validate(common.bundle_path);
        }
        if (*project_cmd) {
            return cmd_project(common, project_scenario);
        }
        if (*simulate_cmd) {
            return cmd_simulate(common, sim);
        }
        if (*allocate_cmd) {
            return cmd_allocate(common, alloc);
        }
    } catch (const IoError& err) {
        std::cerr << "error: " << err.what() << "\n";
        return kExitIo;
    } catch (const ValidationError& err) {
        std::cerr << "error: " << err.what() << "\n";
        return kExitDomain;
    } catch (const SimulationError& err) {
        std::cerr << "error: " << err.what() << "\n";
        return kExitDomain;
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << "\n";
        return kExitDomain;
    }
    return kExitDomain;
}
