#pragma once

#include <array>
#include <map>
#include <string>
#include <vector>

#include "kayasim/emission.hpp"

namespace kayasim {

enum class ScenarioKind {
    Bau,
    Decarbonization,
};

enum class Interpolation {
    Linear,
    CompoundGrowth,
};

const char* to_string(ScenarioKind kind);
const char* to_string(Interpolation mode);
ScenarioKind scenario_kind_from_string(const std::string& name);
Interpolation interpolation_from_string(const std::string& name);

/// The ten concrete parameter series a province must anchor. The five
/// model families map onto them as: population, floor area and energy
/// intensity are scalar series; the fuel mix contributes four share
/// series; the emission factors contribute three.
enum class ParamKey : int {
    Population = 0,
    FloorAreaPerCapita,
    EnergyIntensity,
    ElectrificationRate,
    CoalShare,
    GasShare,
    SelfGenerationShare,
    KElectricity,
    KCoal,
    KGas,
};

inline constexpr int kParamCount = 10;

const char* to_string(ParamKey key);
ParamKey param_key_from_string(const std::string& name);
bool is_share_param(ParamKey key);

inline constexpr int kEarliestAnchorYear = 2000;
inline constexpr int kLatestAnchorYear = 2060;

struct ParameterAnchor {
    int year = 0;
    double value = 0.0;

    bool operator==(const ParameterAnchor&) const = default;
};

using AnchorSeries = std::vector<ParameterAnchor>;
using ProvinceAnchors = std::array<AnchorSeries, kParamCount>;

/// A named scenario: horizon, interpolation rule, intensity composition
/// mode, and per-province anchors for every parameter series.
struct ScenarioSpec {
    std::string name;
    ScenarioKind kind = ScenarioKind::Bau;
    int first_year = 2000;
    int last_year = 2060;
    Interpolation interpolation = Interpolation::Linear;
    BipgScope bipg_scope = BipgScope::CoalOnly;
    std::map<std::string, ProvinceAnchors> anchors; // keyed by province

    int horizon_years() const { return last_year - first_year + 1; }

    bool operator==(const ScenarioSpec&) const = default;
};

/// Fully expanded yearly inputs for one province.
struct ParameterTrajectory {
    std::string province;
    int first_year = 0;
    std::vector<KayaInputs> years;

    const KayaInputs& at(int year) const { return years.at(static_cast<std::size_t>(year - first_year)); }
};

/// Province-to-region lookup. Region labels are restricted to the seven
/// canonical grand regions.
struct RegionMapping {
    std::map<std::string, std::string> province_to_region;

    bool contains(const std::string& province) const {
        return province_to_region.count(province) != 0;
    }
    const std::string& region_of(const std::string& province) const;
    std::vector<std::string> provinces() const;

    bool operator==(const RegionMapping&) const = default;
};

const std::vector<std::string>& canonical_regions();
bool is_canonical_region(const std::string& label);

/// Throws ValidationError unless the spec satisfies its structural
/// invariants (anchor ordering, horizon bounds, share ranges).
void validate_spec(const ScenarioSpec& spec);

/// Interpolated parameter value at `year` for a single anchor series.
/// Years outside the anchored range hold the nearest anchor constant.
double interpolate_anchors(const AnchorSeries& series, int year, Interpolation mode,
                           const std::string& context);

/// Expands the spec into yearly KayaInputs per province. Every expanded
/// year is validated against the model invariants; failures name the
/// province, parameter, and year.
std::vector<ParameterTrajectory> expand(const ScenarioSpec& spec);

struct ProvinceProjection {
    std::string province;
    EmissionTrajectory emissions; // MtCO2
    EmissionTrajectory energy;    // Mtce
    Peak emission_peak;
    Peak energy_peak;
};

/// Static projection output: per-province series plus the national
/// aggregate (year-wise sum over provinces, provinces in sorted order).
struct StaticProjection {
    std::vector<ProvinceProjection> provinces; // sorted by province name
    ProvinceProjection national;               // province == "national"
};

StaticProjection project_static(const ScenarioSpec& spec);

} // namespace kayasim
