#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace kayasim {

/// How the self-generation share offsets purchased energy when composing
/// the carbon intensity. `CoalOnly` scales only the coal term, which is
/// the default composition; the other two widen the offset to gas or to
/// every fuel and exist for calibration experiments.
enum class BipgScope {
    CoalOnly,
    CoalAndGas,
    AllFuels,
};

const char* to_string(BipgScope scope);
BipgScope bipg_scope_from_string(const std::string& name);

/// Fuel-mix shares of commercial building end use. Shares are fractions
/// in [0,1]; electrification + coal + gas may leave a remainder, which is
/// treated as zero-emission "other" energy.
struct EnergyMix {
    double electrification_rate = 0.0;
    double coal_share = 0.0;
    double gas_share = 0.0;
    double self_generation_share = 0.0;

    bool operator==(const EnergyMix&) const = default;
};

/// Emission factors in kgCO2 per kgce for the three priced carriers.
struct EmissionFactors {
    double electricity = 0.0;
    double coal = 0.0;
    double gas = 0.0;

    bool operator==(const EmissionFactors&) const = default;
};

/// One year of model inputs for one province: population (persons),
/// per-capita commercial floor area (m2/person), energy intensity
/// (kgce/m2/yr), plus the fuel mix and emission factors.
struct KayaInputs {
    double population = 0.0;
    double floor_area_per_capita = 0.0;
    double energy_intensity = 0.0;
    EnergyMix mix;
    EmissionFactors factors;

    bool operator==(const KayaInputs&) const = default;
};

enum class TrajectoryUnit {
    MtCO2,
    Mtce,
};

const char* to_string(TrajectoryUnit unit);

/// Year-indexed annual series with contiguous yearly spacing. values[i]
/// belongs to calendar year start_year + i.
struct EmissionTrajectory {
    int start_year = 0;
    std::vector<double> values;
    TrajectoryUnit unit = TrajectoryUnit::MtCO2;

    int year_at(std::size_t index) const { return start_year + static_cast<int>(index); }
    int last_year() const { return start_year + static_cast<int>(values.size()) - 1; }

    bool operator==(const EmissionTrajectory&) const = default;
};

/// Trajectory maximum. Ties resolve to the earliest year attaining the
/// maximum.
struct Peak {
    int year = 0;
    double value = 0.0;

    bool operator==(const Peak&) const = default;
};

/// Throws ValidationError naming the offending field. `context` is an
/// optional prefix such as "Beijing/2031".
void validate_mix(const EnergyMix& mix, const std::string& context = {});
void validate_factors(const EmissionFactors& factors, const std::string& context = {});
void validate_inputs(const KayaInputs& inputs, const std::string& context = {});
void validate_trajectory(const EmissionTrajectory& trajectory);

/// Composite carbon intensity in kgCO2 per kgce.
double carbon_intensity(const EnergyMix& mix, const EmissionFactors& factors,
                        BipgScope scope = BipgScope::CoalOnly);

/// Annual energy use in Mtce: population * floor area * intensity,
/// converted from kgce.
double annual_energy(const KayaInputs& inputs);

/// Annual emissions in MtCO2: annual energy times composite intensity.
double annual_emissions(const KayaInputs& inputs, BipgScope scope = BipgScope::CoalOnly);

/// Global maximum of the series; earliest year wins ties. Throws on an
/// empty trajectory.
Peak detect_peak(const EmissionTrajectory& trajectory);

} // namespace kayasim
