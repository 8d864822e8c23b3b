#include "kayasim/allocation.hpp"

#include <algorithm>
#include <sstream>

#include "kayasim/errors.hpp"

namespace kayasim {

const char* to_string(PotentialBasis basis) {
    switch (basis) {
    case PotentialBasis::DynamicMeanVsDecStatic: return "dynamic_mean_vs_dec_static";
    case PotentialBasis::StaticVsStatic: return "static_vs_static";
    case PotentialBasis::DynamicMeanVsDynamicMean: return "dynamic_mean_vs_dynamic_mean";
    }
    return "dynamic_mean_vs_dec_static";
}

const char* to_string(AllocationStrategy strategy) {
    return strategy == AllocationStrategy::PotentialRaw ? "potential_raw"
                                                        : "potential_proportional";
}

PotentialBasis potential_basis_from_string(const std::string& name) {
    if (name == "dynamic_mean_vs_dec_static") return PotentialBasis::DynamicMeanVsDecStatic;
    if (name == "static_vs_static") return PotentialBasis::StaticVsStatic;
    if (name == "dynamic_mean_vs_dynamic_mean")
        return PotentialBasis::DynamicMeanVsDynamicMean;
    throw ValidationError("basis: unknown value '" + name + "'");
}

AllocationStrategy allocation_strategy_from_string(const std::string& name) {
    if (name == "potential_raw") return AllocationStrategy::PotentialRaw;
    if (name == "potential_proportional") return AllocationStrategy::PotentialProportional;
    throw ValidationError("strategy: unknown value '" + name + "'");
}

double decarbonization_potential(const ProvincePeakSummary& summary,
                                 PotentialBasis basis) {
    double bau_measure = 0.0;
    double dec_measure = 0.0;
    switch (basis) {
    case PotentialBasis::DynamicMeanVsDecStatic:
        if (!summary.bau_dynamic) {
            throw ValidationError(summary.province +
                                  ": bau_dynamic is required for basis " +
                                  to_string(basis));
        }
        bau_measure = summary.bau_dynamic->mean_value;
        dec_measure = summary.dec_static_peak.value;
        break;
    case PotentialBasis::StaticVsStatic:
        bau_measure = summary.bau_static_peak.value;
        dec_measure = summary.dec_static_peak.value;
        break;
    case PotentialBasis::DynamicMeanVsDynamicMean:
        if (!summary.bau_dynamic) {
            throw ValidationError(summary.province +
                                  ": bau_dynamic is required for basis " +
                                  to_string(basis));
        }
        if (!summary.dec_dynamic) {
            throw ValidationError(summary.province +
                                  ": dec_dynamic is required for basis " +
                                  to_string(basis));
        }
        bau_measure = summary.bau_dynamic->mean_value;
        dec_measure = summary.dec_dynamic->mean_value;
        break;
    }
    return std::max(0.0, bau_measure - dec_measure);
}

AllocationScheme allocate(const std::vector<ProvincePeakSummary>& summaries,
                          AllocationStrategy strategy, PotentialBasis basis,
                          std::optional<double> national_target,
                          const RegionMapping& region_map) {
    for (const auto& [province, region] : region_map.province_to_region) {
        const bool covered = std::any_of(
            summaries.begin(), summaries.end(),
            [&](const ProvincePeakSummary& s) { return s.province == province; });
        if (!covered) {
            throw ValidationError("allocate: no peak summary for province '" + province +
                                  "'");
        }
    }
    if (strategy == AllocationStrategy::PotentialProportional && !national_target) {
        throw ValidationError(
            "allocate: potential_proportional requires a national target");
    }
    if (strategy == AllocationStrategy::PotentialRaw && national_target) {
        throw ValidationError(
            "allocate: a national target only applies to potential_proportional");
    }
    if (national_target && !(*national_target > 0.0)) {
        throw ValidationError("target: must be > 0");
    }

    AllocationScheme scheme;
    scheme.strategy = strategy;
    scheme.basis = basis;
    scheme.national_target = national_target;

    double potential_sum = 0.0;
    for (const ProvincePeakSummary& summary : summaries) {
        if (!region_map.contains(summary.province)) {
            throw ValidationError("allocate: province '" + summary.province +
                                  "' is not in the region map");
        }
        const double potential = decarbonization_potential(summary, basis);
        scheme.reductions.push_back(ProvinceReduction{summary.province, potential});
        potential_sum += potential;
    }

    if (strategy == AllocationStrategy::PotentialProportional) {
        if (!(potential_sum > 0.0)) {
            throw ValidationError(
                "allocate: all potentials are zero; nothing to scale to the target");
        }
        const double scale = *national_target / potential_sum;
        for (ProvinceReduction& r : scheme.reductions) {
            r.reduction *= scale;
        }
    }

    std::sort(scheme.reductions.begin(), scheme.reductions.end(),
              [](const ProvinceReduction& a, const ProvinceReduction& b) {
                  if (a.reduction != b.reduction) {
                      return a.reduction > b.reduction;
                  }
                  return a.province < b.province;
              });

    scheme.regions = regional_rollup(scheme, region_map);
    return scheme;
}

std::vector<RegionRollup> regional_rollup(const AllocationScheme& scheme,
                                          const RegionMapping& region_map) {
    std::map<std::string, RegionRollup> by_region;
    for (const ProvinceReduction& r : scheme.reductions) {
        const std::string& region = region_map.region_of(r.province); // throws if unmapped
        RegionRollup& roll = by_region[region];
        roll.region = region;
        roll.total += r.reduction;
        ++roll.province_count;
    }
    std::vector<RegionRollup> out;
    out.reserve(by_region.size());
    for (auto& [region, roll] : by_region) {
        roll.mean = roll.total / static_cast<double>(roll.province_count);
        out.push_back(roll);
    }
    return out;
}

} // namespace kayasim
