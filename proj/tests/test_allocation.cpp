#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "kayasim/allocation.hpp"
#include "kayasim/errors.hpp"

using namespace kayasim;

namespace {

PeakDistribution dist_with_mean(double mean_value)
{
    PeakDistribution d;
    d.draws = 1000;
    d.mean_value = mean_value;
    d.sd_value = 1.0;
    d.mean_year = 2030.0;
    return d;
}

ProvincePeakSummary make_summary(const std::string& province, double bau_static,
                                 double bau_dynamic_mean, double dec_static)
{
    ProvincePeakSummary s;
    s.province = province;
    s.bau_static_peak = Peak{2030, bau_static};
    s.bau_dynamic = dist_with_mean(bau_dynamic_mean);
    s.dec_static_peak = Peak{2025, dec_static};
    s.dec_dynamic = dist_with_mean(dec_static * 0.98);
    return s;
}

RegionMapping two_region_map()
{
    RegionMapping map;
    map.province_to_region["Anhui"] = "East China";
    map.province_to_region["Shandong"] = "East China";
    map.province_to_region["Henan"] = "Central China";
    return map;
}

} // namespace

TEST_CASE("potential: mean-of-dynamic versus static gap, clamped at zero")
{
    const ProvincePeakSummary s = make_summary("Shandong", 68.0, 69.6, 65.4);

    CHECK(decarbonization_potential(s, PotentialBasis::DynamicMeanVsDecStatic)
          == doctest::Approx(4.2).epsilon(1e-12));
    CHECK(decarbonization_potential(s, PotentialBasis::StaticVsStatic)
          == doctest::Approx(2.6).epsilon(1e-12));
    CHECK(decarbonization_potential(s, PotentialBasis::DynamicMeanVsDynamicMean)
          == doctest::Approx(69.6 - 65.4 * 0.98).epsilon(1e-12));

    // Already below the decarbonization path: nothing to assign.
    const ProvincePeakSummary done = make_summary("Hainan", 5.0, 5.1, 6.0);
    CHECK(decarbonization_potential(done, PotentialBasis::DynamicMeanVsDecStatic) == 0.0);

    ProvincePeakSummary missing = make_summary("Anhui", 10.0, 11.0, 9.0);
    missing.bau_dynamic.reset();
    CHECK_THROWS_WITH_AS(
        decarbonization_potential(missing, PotentialBasis::DynamicMeanVsDecStatic),
        doctest::Contains("Anhui"), ValidationError);
    CHECK(decarbonization_potential(missing, PotentialBasis::StaticVsStatic)
          == doctest::Approx(1.0));
}

TEST_CASE("raw strategy: each province keeps its own potential, sorted descending")
{
    std::vector<ProvincePeakSummary> summaries = {
        make_summary("Anhui", 30.0, 31.0, 29.0),    // potential 2
        make_summary("Shandong", 68.0, 69.6, 65.4), // potential 4.2
        make_summary("Henan", 48.0, 50.0, 46.0),    // potential 4
    };

    const AllocationScheme scheme =
        allocate(summaries, AllocationStrategy::PotentialRaw,
                 PotentialBasis::DynamicMeanVsDecStatic, std::nullopt, two_region_map());

    REQUIRE(scheme.reductions.size() == 3);
    CHECK(scheme.reductions[0].province == "Shandong");
    CHECK(scheme.reductions[1].province == "Henan");
    CHECK(scheme.reductions[2].province == "Anhui");
    CHECK(scheme.reductions[0].reduction == doctest::Approx(4.2).epsilon(1e-12));
    CHECK(std::is_sorted(scheme.reductions.begin(), scheme.reductions.end(),
                         [](const ProvinceReduction& a, const ProvinceReduction& b) {
                             return a.reduction > b.reduction;
                         }));
}

TEST_CASE("proportional strategy: rescaled to the target with ratios preserved")
{
    std::vector<ProvincePeakSummary> summaries = {
        make_summary("Anhui", 30.0, 32.0, 30.0),    // potential 2
        make_summary("Shandong", 68.0, 71.0, 65.0), // potential 6
    };
    RegionMapping map;
    map.province_to_region["Anhui"] = "East China";
    map.province_to_region["Shandong"] = "East China";

    const AllocationScheme scheme =
        allocate(summaries, AllocationStrategy::PotentialProportional,
                 PotentialBasis::DynamicMeanVsDecStatic, 4.0, map);

    REQUIRE(scheme.reductions.size() == 2);
    double total = 0.0;
    for (const ProvinceReduction& r : scheme.reductions) {
        total += r.reduction;
    }
    CHECK(total == doctest::Approx(4.0).epsilon(1e-12));
    CHECK(scheme.reductions[0].province == "Shandong");
    CHECK(scheme.reductions[0].reduction == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(scheme.reductions[1].reduction == doctest::Approx(1.0).epsilon(1e-12));
    // Ratio 6:2 must survive the rescale.
    CHECK(scheme.reductions[0].reduction / scheme.reductions[1].reduction
          == doctest::Approx(3.0).epsilon(1e-9));
}

TEST_CASE("strategy and target combinations are validated")
{
    std::vector<ProvincePeakSummary> summaries = {
        make_summary("Anhui", 30.0, 32.0, 30.0),
        make_summary("Shandong", 68.0, 71.0, 65.0),
        make_summary("Henan", 48.0, 50.0, 46.0),
    };
    const RegionMapping map = two_region_map();

    CHECK_THROWS_WITH_AS(allocate(summaries, AllocationStrategy::PotentialProportional,
                                  PotentialBasis::DynamicMeanVsDecStatic, std::nullopt, map),
                         doctest::Contains("target"), ValidationError);
    CHECK_THROWS_AS(allocate(summaries, AllocationStrategy::PotentialRaw,
                             PotentialBasis::DynamicMeanVsDecStatic, 4.0, map),
                    ValidationError);
    CHECK_THROWS_AS(allocate(summaries, AllocationStrategy::PotentialProportional,
                             PotentialBasis::DynamicMeanVsDecStatic, -2.0, map),
                    ValidationError);

    // All-zero potentials cannot be scaled to a positive target.
    std::vector<ProvincePeakSummary> flat = {
        make_summary("Anhui", 30.0, 29.0, 30.0),
        make_summary("Shandong", 68.0, 64.0, 65.0),
        make_summary("Henan", 48.0, 45.0, 46.0),
    };
    CHECK_THROWS_AS(allocate(flat, AllocationStrategy::PotentialProportional,
                             PotentialBasis::DynamicMeanVsDecStatic, 4.0, map),
                    ValidationError);

    // A mapped province without a summary is an inconsistency.
    std::vector<ProvincePeakSummary> partial = {summaries[0], summaries[1]};
    CHECK_THROWS_WITH_AS(allocate(partial, AllocationStrategy::PotentialRaw,
                                  PotentialBasis::DynamicMeanVsDecStatic, std::nullopt, map),
                         doctest::Contains("Henan"), ValidationError);
}

TEST_CASE("deterministic tie-break: equal reductions order by name")
{
    std::vector<ProvincePeakSummary> summaries = {
        make_summary("Henan", 10.0, 12.0, 10.0),
        make_summary("Anhui", 20.0, 22.0, 20.0),
        make_summary("Shandong", 32.0, 33.0, 30.0),
    };

    const AllocationScheme scheme =
        allocate(summaries, AllocationStrategy::PotentialRaw,
                 PotentialBasis::DynamicMeanVsDecStatic, std::nullopt, two_region_map());
    REQUIRE(scheme.reductions.size() == 3);
    CHECK(scheme.reductions[0].province == "Shandong"); // 3 beats the 2s
    CHECK(scheme.reductions[1].province == "Anhui");    // tie at 2: name order
    CHECK(scheme.reductions[2].province == "Henan");
}

TEST_CASE("input order does not matter")
{
    std::vector<ProvincePeakSummary> summaries = {
        make_summary("Anhui", 30.0, 31.5, 29.0),
        make_summary("Shandong", 68.0, 69.6, 65.4),
        make_summary("Henan", 48.0, 50.0, 46.0),
    };
    const RegionMapping map = two_region_map();

    const AllocationScheme a = allocate(summaries, AllocationStrategy::PotentialRaw,
                                        PotentialBasis::DynamicMeanVsDecStatic,
                                        std::nullopt, map);
    std::reverse(summaries.begin(), summaries.end());
    const AllocationScheme b = allocate(summaries, AllocationStrategy::PotentialRaw,
                                        PotentialBasis::DynamicMeanVsDecStatic,
                                        std::nullopt, map);
    CHECK(a.reductions == b.reductions);
}

TEST_CASE("regional rollup: totals, means, and conservation")
{
    std::vector<ProvincePeakSummary> summaries = {
        make_summary("Anhui", 30.0, 31.0, 29.0),    // potential 2, East
        make_summary("Shandong", 68.0, 69.6, 65.4), // potential 4.2, East
        make_summary("Henan", 48.0, 50.0, 46.0),    // potential 4, Central
    };

    const AllocationScheme scheme =
        allocate(summaries, AllocationStrategy::PotentialRaw,
                 PotentialBasis::DynamicMeanVsDecStatic, std::nullopt, two_region_map());

    REQUIRE(scheme.regions.size() == 2);
    const auto east = std::find_if(scheme.regions.begin(), scheme.regions.end(),
                                   [](const RegionRollup& r) { return r.region == "East China"; });
    const auto central = std::find_if(
        scheme.regions.begin(), scheme.regions.end(),
        [](const RegionRollup& r) { return r.region == "Central China"; });
    REQUIRE(east != scheme.regions.end());
    REQUIRE(central != scheme.regions.end());

    CHECK(east->province_count == 2);
    CHECK(east->total == doctest::Approx(6.2).epsilon(1e-12));
    CHECK(east->mean == doctest::Approx(3.1).epsilon(1e-12));
    CHECK(central->province_count == 1);
    CHECK(central->total == doctest::Approx(4.0).epsilon(1e-12));

    double region_total = 0.0;
    for (const RegionRollup& r : scheme.regions) {
        region_total += r.total;
    }
    double reduction_total = 0.0;
    for (const ProvinceReduction& r : scheme.reductions) {
        reduction_total += r.reduction;
    }
    CHECK(region_total == doctest::Approx(reduction_total).epsilon(1e-9));
}

TEST_CASE("ranking is scale-invariant")
{
    std::mt19937_64 gen(5);
    std::uniform_real_distribution<double> gap(0.0, 8.0);
    RegionMapping map = two_region_map();
    map.province_to_region["Hubei"] = "Central China";
    map.province_to_region["Fujian"] = "East China";

    std::vector<ProvincePeakSummary> summaries;
    for (const auto& [province, region] : map.province_to_region) {
        (void)region;
        const double dec = 20.0 + gap(gen);
        const double bau = dec + gap(gen);
        summaries.push_back(make_summary(province, bau, bau, dec));
    }

    const AllocationScheme raw = allocate(summaries, AllocationStrategy::PotentialRaw,
                                          PotentialBasis::DynamicMeanVsDecStatic,
                                          std::nullopt, map);
    const AllocationScheme scaled =
        allocate(summaries, AllocationStrategy::PotentialProportional,
                 PotentialBasis::DynamicMeanVsDecStatic, 100.0, map);

    REQUIRE(raw.reductions.size() == scaled.reductions.size());
    for (std::size_t i = 0; i < raw.reductions.size(); ++i) {
        CHECK(raw.reductions[i].province == scaled.reductions[i].province);
    }
}
