#include "kayasim/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "kayasim/errors.hpp"

namespace kayasim {

namespace {

const char* kParamNames[kParamCount] = {
    "population",
    "floor_area_per_capita",
    "energy_intensity",
    "electrification_rate",
    "coal_share",
    "gas_share",
    "self_generation_share",
    "k_electricity",
    "k_coal",
    "k_gas",
};

KayaInputs inputs_from_params(const std::array<double, kParamCount>& p) {
    KayaInputs in;
    in.population = p[static_cast<int>(ParamKey::Population)];
    in.floor_area_per_capita = p[static_cast<int>(ParamKey::FloorAreaPerCapita)];
    in.energy_intensity = p[static_cast<int>(ParamKey::EnergyIntensity)];
    in.mix.electrification_rate = p[static_cast<int>(ParamKey::ElectrificationRate)];
    in.mix.coal_share = p[static_cast<int>(ParamKey::CoalShare)];
    in.mix.gas_share = p[static_cast<int>(ParamKey::GasShare)];
    in.mix.self_generation_share = p[static_cast<int>(ParamKey::SelfGenerationShare)];
    in.factors.electricity = p[static_cast<int>(ParamKey::KElectricity)];
    in.factors.coal = p[static_cast<int>(ParamKey::KCoal)];
    in.factors.gas = p[static_cast<int>(ParamKey::KGas)];
    return in;
}

} // namespace

const char* to_string(ScenarioKind kind) {
    return kind == ScenarioKind::Bau ? "bau" : "decarbonization";
}

const char* to_string(Interpolation mode) {
    return mode == Interpolation::Linear ? "linear" : "compound_growth";
}

ScenarioKind scenario_kind_from_string(const std::string& name) {
    if (name == "bau") return ScenarioKind::Bau;
    if (name == "decarbonization") return ScenarioKind::Decarbonization;
    throw ValidationError("kind: unknown value '" + name +
                          "' (expected bau or decarbonization)");
}

Interpolation interpolation_from_string(const std::string& name) {
    if (name == "linear") return Interpolation::Linear;
    if (name == "compound_growth") return Interpolation::CompoundGrowth;
    throw ValidationError("interpolation: unknown value '" + name +
                          "' (expected linear or compound_growth)");
}

const char* to_string(ParamKey key) {
    return kParamNames[static_cast<int>(key)];
}

ParamKey param_key_from_string(const std::string& name) {
    for (int i = 0; i < kParamCount; ++i) {
        if (name == kParamNames[i]) {
            return static_cast<ParamKey>(i);
        }
    }
    throw ValidationError("parameter: unknown name '" + name + "'");
}

bool is_share_param(ParamKey key) {
    switch (key) {
    case ParamKey::ElectrificationRate:
    case ParamKey::CoalShare:
    case ParamKey::GasShare:
    case ParamKey::SelfGenerationShare:
        return true;
    default:
        return false;
    }
}

const std::string& RegionMapping::region_of(const std::string& province) const {
    auto it = province_to_region.find(province);
    if (it == province_to_region.end()) {
        throw ValidationError("region_map: province '" + province + "' is not mapped");
    }
    return it->second;
}

std::vector<std::string> RegionMapping::provinces() const {
    std::vector<std::string> out;
    out.reserve(province_to_region.size());
    for (const auto& [province, region] : province_to_region) {
        out.push_back(province);
    }
    return out;
}

const std::vector<std::string>& canonical_regions() {
    static const std::vector<std::string> regions = {
        "North China",     "Northeast China", "East China",     "Central China",
        "South China",     "Southwest China", "Northwest China",
    };
    return regions;
}

bool is_canonical_region(const std::string& label) {
    const auto& regions = canonical_regions();
    return std::find(regions.begin(), regions.end(), label) != regions.end();
}

void validate_spec(const ScenarioSpec& spec) {
    if (spec.name.empty()) {
        throw ValidationError("scenario.name: must be non-empty");
    }
    if (spec.first_year > spec.last_year) {
        throw ValidationError("scenario '" + spec.name + "': first_year must not exceed last_year");
    }
    if (spec.first_year < kEarliestAnchorYear || spec.last_year > kLatestAnchorYear) {
        std::ostringstream os;
        os << "scenario '" << spec.name << "': horizon must lie within ["
           << kEarliestAnchorYear << "," << kLatestAnchorYear << "]";
        throw ValidationError(os.str());
    }
    if (spec.anchors.empty()) {
        throw ValidationError("scenario '" + spec.name + "': must define at least one province");
    }
    for (const auto& [province, params] : spec.anchors) {
        for (int p = 0; p < kParamCount; ++p) {
            const auto key = static_cast<ParamKey>(p);
            const AnchorSeries& series = params[p];
            const std::string ctx = spec.name + "/" + province + "/" + to_string(key);
            if (series.empty()) {
                throw ValidationError(ctx + ": at least one anchor is required");
            }
            int prev_year = spec.first_year - 1;
            bool first = true;
            for (const ParameterAnchor& a : series) {
                if (a.year < spec.first_year || a.year > spec.last_year) {
                    std::ostringstream os;
                    os << ctx << ": anchor year " << a.year << " outside horizon ["
                       << spec.first_year << "," << spec.last_year << "]";
                    throw ValidationError(os.str());
                }
                if (!first && a.year <= prev_year) {
                    std::ostringstream os;
                    os << ctx << ": anchor years must be strictly increasing (year "
                       << a.year << " after " << prev_year << ")";
                    throw ValidationError(os.str());
                }
                if (is_share_param(key) && !(a.value >= 0.0 && a.value <= 1.0)) {
                    std::ostringstream os;
                    os << ctx << "/" << a.year << ": share must be within [0,1] (got "
                       << a.value << ")";
                    throw ValidationError(os.str());
                }
                if (!is_share_param(key) && !(a.value >= 0.0)) {
                    std::ostringstream os;
                    os << ctx << "/" << a.year << ": must be >= 0 (got " << a.value << ")";
                    throw ValidationError(os.str());
                }
                prev_year = a.year;
                first = false;
            }
        }
    }
}

double interpolate_anchors(const AnchorSeries& series, int year, Interpolation mode,
                           const std::string& context) {
    if (series.empty()) {
        throw ValidationError(context + ": at least one anchor is required");
    }
    // Hold-constant outside the anchored range.
    if (year <= series.front().year) {
        return series.front().value;
    }
    if (year >= series.back().year) {
        return series.back().value;
    }
    // Find the bracketing pair; return anchor values exactly at anchor years.
    auto upper = std::lower_bound(
        series.begin(), series.end(), year,
        [](const ParameterAnchor& a, int y) { return a.year < y; });
    if (upper->year == year) {
        return upper->value;
    }
    const ParameterAnchor& a0 = *(upper - 1);
    const ParameterAnchor& a1 = *upper;
    const double theta = static_cast<double>(year - a0.year) /
                         static_cast<double>(a1.year - a0.year);

    double value = 0.0;
    if (mode == Interpolation::Linear) {
        value = a0.value + (a1.value - a0.value) * theta;
    } else {
        if (!(a0.value > 0.0 && a1.value > 0.0)) {
            std::ostringstream os;
            os << context << ": compound_growth requires strictly positive anchors "
               << "(bracket " << a0.year << "->" << a1.year << " has " << a0.value
               << " and " << a1.value << ")";
            throw ValidationError(os.str());
        }
        value = a0.value * std::pow(a1.value / a0.value, theta);
    }
    // Interpolation is monotone between anchors; clamp out any floating
    // point overshoot so the invariant holds exactly.
    const double lo = std::min(a0.value, a1.value);
    const double hi = std::max(a0.value, a1.value);
    return std::clamp(value, lo, hi);
}

std::vector<ParameterTrajectory> expand(const ScenarioSpec& spec) {
    validate_spec(spec);

    std::vector<ParameterTrajectory> out;
    out.reserve(spec.anchors.size());
    for (const auto& [province, params] : spec.anchors) { // map iterates sorted
        ParameterTrajectory traj;
        traj.province = province;
        traj.first_year = spec.first_year;
        traj.years.reserve(static_cast<std::size_t>(spec.horizon_years()));
        for (int year = spec.first_year; year <= spec.last_year; ++year) {
            std::array<double, kParamCount> values{};
            for (int p = 0; p < kParamCount; ++p) {
                const auto key = static_cast<ParamKey>(p);
                const std::string ctx = spec.name + "/" + province + "/" + to_string(key);
                values[p] = interpolate_anchors(params[p], year, spec.interpolation, ctx);
            }
            KayaInputs inputs = inputs_from_params(values);
            std::ostringstream ctx;
            ctx << spec.name << "/" << province << "/" << year;
            validate_inputs(inputs, ctx.str());
            traj.years.push_back(inputs);
        }
        out.push_back(std::move(traj));
    }
    return out;
}

StaticProjection project_static(const ScenarioSpec& spec) {
    const std::vector<ParameterTrajectory> expanded = expand(spec);
    const auto horizon = static_cast<std::size_t>(spec.horizon_years());

    StaticProjection projection;
    projection.national.province = "national";
    projection.national.emissions =
        EmissionTrajectory{spec.first_year, std::vector<double>(horizon, 0.0),
                           TrajectoryUnit::MtCO2};
    projection.national.energy =
        EmissionTrajectory{spec.first_year, std::vector<double>(horizon, 0.0),
                           TrajectoryUnit::Mtce};

    for (const ParameterTrajectory& traj : expanded) {
        ProvinceProjection p;
        p.province = traj.province;
        p.emissions = EmissionTrajectory{spec.first_year, {}, TrajectoryUnit::MtCO2};
        p.energy = EmissionTrajectory{spec.first_year, {}, TrajectoryUnit::Mtce};
        p.emissions.values.reserve(horizon);
        p.energy.values.reserve(horizon);
        for (std::size_t i = 0; i < horizon; ++i) {
            const KayaInputs& inputs = traj.years[i];
            const double energy = annual_energy(inputs);
            const double emissions =
                energy * carbon_intensity(inputs.mix, inputs.factors, spec.bipg_scope);
            p.energy.values.push_back(energy);
            p.emissions.values.push_back(emissions);
            projection.national.energy.values[i] += energy;
            projection.national.emissions.values[i] += emissions;
        }
        p.emission_peak = detect_peak(p.emissions);
        p.energy_peak = detect_peak(p.energy);
        projection.provinces.push_back(std::move(p));
    }

    projection.national.emission_peak = detect_peak(projection.national.emissions);
    projection.national.energy_peak = detect_peak(projection.national.energy);
    return projection;
}

} // namespace kayasim
