#include "kayasim/emission.hpp"

#include <cmath>
#include <sstream>

#include "kayasim/errors.hpp"

namespace kayasim {

namespace {

constexpr double kShareSumEpsilon = 1e-9;
constexpr double kKgcePerMtce = 1e9;

std::string prefixed(const std::string& context, const std::string& message) {
    if (context.empty()) {
        return message;
    }
    return context + ": " + message;
}

void check_share(double value, const char* field, const std::string& context) {
    if (!(value >= 0.0 && value <= 1.0)) {
        std::ostringstream os;
        os << field << ": share must be within [0,1] (got " << value << ")";
        throw ValidationError(prefixed(context, os.str()));
    }
}

void check_non_negative(double value, const char* field, const std::string& context) {
    if (!(value >= 0.0)) {
        std::ostringstream os;
        os << field << ": must be >= 0 (got " << value << ")";
        throw ValidationError(prefixed(context, os.str()));
    }
}

} // namespace

const char* to_string(BipgScope scope) {
    switch (scope) {
    case BipgScope::CoalOnly: return "coal_only";
    case BipgScope::CoalAndGas: return "coal_and_gas";
    case BipgScope::AllFuels: return "all_fuels";
    }
    return "coal_only";
}

BipgScope bipg_scope_from_string(const std::string& name) {
    if (name == "coal_only") return BipgScope::CoalOnly;
    if (name == "coal_and_gas") return BipgScope::CoalAndGas;
    if (name == "all_fuels") return BipgScope::AllFuels;
    throw ValidationError("bipg_scope: unknown value '" + name +
                          "' (expected coal_only, coal_and_gas, or all_fuels)");
}

const char* to_string(TrajectoryUnit unit) {
    return unit == TrajectoryUnit::MtCO2 ? "MtCO2" : "Mtce";
}

void validate_mix(const EnergyMix& mix, const std::string& context) {
    check_share(mix.electrification_rate, "electrification_rate", context);
    check_share(mix.coal_share, "coal_share", context);
    check_share(mix.gas_share, "gas_share", context);
    check_share(mix.self_generation_share, "self_generation_share", context);
    const double priced = mix.electrification_rate + mix.coal_share + mix.gas_share;
    if (priced > 1.0 + kShareSumEpsilon) {
        std::ostringstream os;
        os << "electrification_rate + coal_share + gas_share: must not exceed 1 (got "
           << priced << ")";
        throw ValidationError(prefixed(context, os.str()));
    }
}

void validate_factors(const EmissionFactors& factors, const std::string& context) {
    check_non_negative(factors.electricity, "factors.electricity", context);
    check_non_negative(factors.coal, "factors.coal", context);
    check_non_negative(factors.gas, "factors.gas", context);
}

void validate_inputs(const KayaInputs& inputs, const std::string& context) {
    check_non_negative(inputs.population, "population", context);
    check_non_negative(inputs.floor_area_per_capita, "floor_area_per_capita", context);
    check_non_negative(inputs.energy_intensity, "energy_intensity", context);
    validate_mix(inputs.mix, context);
    validate_factors(inputs.factors, context);
}

void validate_trajectory(const EmissionTrajectory& trajectory) {
    if (trajectory.values.empty()) {
        throw ValidationError("trajectory.values: must be non-empty");
    }
    for (std::size_t i = 0; i < trajectory.values.size(); ++i) {
        if (!(trajectory.values[i] >= 0.0)) {
            std::ostringstream os;
            os << "trajectory.values[" << trajectory.year_at(i) << "]: must be >= 0 (got "
               << trajectory.values[i] << ")";
            throw ValidationError(os.str());
        }
    }
}

double carbon_intensity(const EnergyMix& mix, const EmissionFactors& factors,
                        BipgScope scope) {
    validate_mix(mix);
    validate_factors(factors);

    const double self_offset = 1.0 - mix.self_generation_share;
    const double electricity_term = factors.electricity * mix.electrification_rate;
    const double coal_term = factors.coal * mix.coal_share;
    const double gas_term = factors.gas * mix.gas_share;

    switch (scope) {
    case BipgScope::CoalOnly:
        return electricity_term + self_offset * coal_term + gas_term;
    case BipgScope::CoalAndGas:
        return electricity_term + self_offset * (coal_term + gas_term);
    case BipgScope::AllFuels:
        return self_offset * (electricity_term + coal_term + gas_term);
    }
    return electricity_term + self_offset * coal_term + gas_term;
}

double annual_energy(const KayaInputs& inputs) {
    validate_inputs(inputs);
    return inputs.population * inputs.floor_area_per_capita * inputs.energy_intensity /
           kKgcePerMtce;
}

double annual_emissions(const KayaInputs& inputs, BipgScope scope) {
    return annual_energy(inputs) * carbon_intensity(inputs.mix, inputs.factors, scope);
}

Peak detect_peak(const EmissionTrajectory& trajectory) {
    if (trajectory.values.empty()) {
        throw ValidationError("detect_peak: trajectory must be non-empty");
    }
    std::size_t best = 0;
    for (std::size_t i = 1; i < trajectory.values.size(); ++i) {
        if (trajectory.values[i] > trajectory.values[best]) {
            best = i;
        }
    }
    return Peak{trajectory.year_at(best), trajectory.values[best]};
}

} // namespace kayasim
