#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "kayasim/emission.hpp"
#include "kayasim/monte_carlo.hpp"
#include "kayasim/scenario.hpp"

namespace kayasim {

/// Which peak measures define a province's decarbonization potential.
enum class PotentialBasis {
    DynamicMeanVsDecStatic,
    StaticVsStatic,
    DynamicMeanVsDynamicMean,
};

enum class AllocationStrategy {
    PotentialRaw,
    PotentialProportional,
};

const char* to_string(PotentialBasis basis);
const char* to_string(AllocationStrategy strategy);
PotentialBasis potential_basis_from_string(const std::string& name);
AllocationStrategy allocation_strategy_from_string(const std::string& name);

/// Peak results for one province across the two scenarios. Dynamic
/// distributions are absent when the corresponding simulation was not
/// run; bases that need them fail validation instead of guessing.
struct ProvincePeakSummary {
    std::string province;
    Peak bau_static_peak;
    std::optional<PeakDistribution> bau_dynamic;
    Peak dec_static_peak;
    std::optional<PeakDistribution> dec_dynamic;
};

struct ProvinceReduction {
    std::string province;
    double reduction = 0.0; // MtCO2

    bool operator==(const ProvinceReduction&) const = default;
};

struct RegionRollup {
    std::string region;
    double total = 0.0;
    double mean = 0.0;
    std::size_t province_count = 0;
};

struct AllocationScheme {
    AllocationStrategy strategy = AllocationStrategy::PotentialRaw;
    PotentialBasis basis = PotentialBasis::DynamicMeanVsDecStatic;
    std::optional<double> national_target;
    std::vector<ProvinceReduction> reductions; // sorted descending, ties by name
    std::vector<RegionRollup> regions;         // sorted by region name
};

/// BAU peak measure minus decarbonization peak measure under the chosen
/// basis, clamped at zero.
double decarbonization_potential(const ProvincePeakSummary& summary,
                                 PotentialBasis basis);

/// Builds the provincial reduction scheme. The raw strategy assigns each
/// province its own potential; the proportional strategy rescales the
/// potentials so they sum to the national target while preserving their
/// ratios (target required, all-zero potentials rejected).
AllocationScheme allocate(const std::vector<ProvincePeakSummary>& summaries,
                          AllocationStrategy strategy, PotentialBasis basis,
                          std::optional<double> national_target,
                          const RegionMapping& region_map);

/// Per-region totals and means over the scheme's reductions. Regions
/// with no provinces in the scheme are omitted.
std::vector<RegionRollup> regional_rollup(const AllocationScheme& scheme,
                                          const RegionMapping& region_map);

} // namespace kayasim
