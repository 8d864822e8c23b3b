#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "kayasim/emission.hpp"
#include "kayasim/scenario.hpp"
#include "kayasim/stats.hpp"

namespace kayasim {

/// How a draw's uncertainty enters the model.
///
/// Aggregate: one multiplicative disturbance per draw, applied to the
/// static trajectory with a linear time ramp (0 at the base year, 1 at
/// the end year). This is the default trajectory-level procedure.
///
/// PerParameter: four independent disturbances per draw (population,
/// floor area, energy intensity, composite carbon intensity), each
/// ramped by the same time factor and composed through the emission
/// identity year by year.
enum class UncertaintyMode {
    Aggregate,
    PerParameter,
};

const char* to_string(UncertaintyMode mode);
UncertaintyMode uncertainty_mode_from_string(const std::string& name);

struct UncertaintyConfig {
    UncertaintyMode mode = UncertaintyMode::Aggregate;
    double sigma_c = 0.0;                // aggregate disturbance SD
    double sigma_population = 0.0;       // per-parameter SDs
    double sigma_floor_area = 0.0;
    double sigma_energy_intensity = 0.0;
    double sigma_carbon_intensity = 0.0;
    std::uint64_t draws = 100000;
    std::optional<std::uint64_t> seed;   // always explicit, never time-based
    int ramp_base_year = 2020;
    int ramp_end_year = 2060;

    bool operator==(const UncertaintyConfig&) const = default;
};

void validate_config(const UncertaintyConfig& config);

/// One draw's disturbances for the per-parameter mode.
struct OmegaDraws {
    double population = 0.0;
    double floor_area = 0.0;
    double energy_intensity = 0.0;
    double carbon_intensity = 0.0;
};

struct PeakSample {
    std::uint64_t draw_index = 0;
    int peak_year = 0;
    double peak_value = 0.0;

    bool operator==(const PeakSample&) const = default;
};

inline constexpr std::array<double, 5> kPercentileLevels = {2.5, 16.0, 50.0, 84.0, 97.5};

/// Fitted statistics over the per-draw peaks: exact sample moments
/// (n-1 SD), nearest-rank percentiles at 2.5/16/50/84/97.5, and
/// fixed-width histograms (values) plus per-year bins (years).
struct PeakDistribution {
    std::uint64_t draws = 0;
    double mean_value = 0.0;
    double sd_value = 0.0;
    double mean_year = 0.0;
    double sd_year = 0.0;
    std::array<double, 5> value_percentiles{};
    std::array<int, 5> year_percentiles{};
    Histogram value_histogram;
    Histogram year_histogram;
};

/// Linear time ramp of the dynamic model: 0 until the base year, then
/// (T - base) / (end - base).
double time_ramp(int year, int base_year, int end_year);

/// Applies the per-parameter disturbances at the given ramp. Population,
/// floor area, and energy intensity are scaled by (1 + w * ramp); the
/// composite carbon intensity is scaled as a whole, realized by scaling
/// the factor triple (the composite is linear in the factors, so this is
/// exact for every bipg_scope). Throws SimulationError if a multiplier
/// is not positive.
KayaInputs perturb_parameters(const KayaInputs& inputs, const OmegaDraws& omegas,
                              double ramp);

/// Scales each year T >= base by (1 + omega_c * ramp(T)); years before
/// the base year pass through unscaled. The trajectory must not extend
/// past the end year.
EmissionTrajectory dynamic_trajectory(const EmissionTrajectory& static_traj,
                                      double omega_c, int base_year = 2020,
                                      int end_year = 2060);

enum class SimScope {
    National,
    Province,
};

enum class SimQuantity {
    Emissions,
    Energy,
};

const char* to_string(SimScope scope);
const char* to_string(SimQuantity quantity);
SimScope sim_scope_from_string(const std::string& name);
SimQuantity sim_quantity_from_string(const std::string& name);

struct RunOptions {
    SimScope scope = SimScope::National;
    SimQuantity quantity = SimQuantity::Emissions;
    int workers = 1;
    std::size_t histogram_bins = 100;
    std::uint64_t keep_trajectories = 0; // dump the first N draws per unit
};

struct KeptTrajectory {
    std::string unit;
    std::uint64_t draw_index = 0;
    EmissionTrajectory trajectory;
};

struct UnitSimulation {
    std::string name;
    std::vector<PeakSample> samples; // ordered by draw_index
    PeakDistribution distribution;
};

struct SimulationResult {
    std::string scenario;
    SimScope scope = SimScope::National;
    SimQuantity quantity = SimQuantity::Emissions;
    UncertaintyMode mode = UncertaintyMode::Aggregate;
    std::uint64_t draws = 0;
    std::uint64_t seed = 0;
    int first_year = 0;
    int last_year = 0;
    std::vector<UnitSimulation> units;
    std::uint64_t redraws = 0;
    std::vector<KeptTrajectory> kept;
};

/// Runs the seeded simulation. Results are bit-identical for a fixed
/// (spec, config, seed) regardless of worker count: every (unit, draw)
/// cell consumes its own counter-based substream and lands in a
/// preassigned slot. Draws whose disturbance would turn a parameter
/// negative are redrawn; if total redraws exceed 1000x the draw count
/// the run aborts with a diagnostic.
SimulationResult run_mc(const ScenarioSpec& spec, const UncertaintyConfig& config,
                        const RunOptions& options);

PeakDistribution summarize(const std::vector<PeakSample>& samples,
                           std::size_t value_bins = 100);

/// Fraction of draws whose peak year is at or before `year`.
double prob_peak_by_year(const std::vector<PeakSample>& samples, int year);

/// Fraction of draws whose peak value lies in [lo, hi], optionally also
/// requiring the peak year to be at or before `year_bound`.
double prob_peak_in_interval(const std::vector<PeakSample>& samples, double lo,
                             double hi, std::optional<int> year_bound = std::nullopt);

struct UncertaintyBands {
    int start_year = 0;
    std::vector<double> static_values;
    std::vector<int> k_levels;
    std::vector<std::vector<double>> band_values; // one series per k, clamped at 0
    std::vector<double> one_sided_mass;           // Gaussian mass between mean and -k SD
};

/// Lower uncertainty bands static(T) * (1 - k * sigma_c * ramp(T)) for
/// each k, with the analytic one-sided Gaussian masses.
UncertaintyBands uncertainty_bands(const EmissionTrajectory& static_traj,
                                   double sigma_c,
                                   const std::vector<int>& k_levels = {1, 2, 3},
                                   int base_year = 2020, int end_year = 2060);

} // namespace kayasim
