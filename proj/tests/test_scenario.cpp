#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "kayasim/errors.hpp"
#include "kayasim/scenario.hpp"

using namespace kayasim;

namespace {

AnchorSeries series(std::initializer_list<ParameterAnchor> anchors)
{
    return AnchorSeries(anchors);
}

// A well-formed single-province spec the individual tests then bend.
ScenarioSpec base_spec()
{
    ScenarioSpec spec;
    spec.name = "base";
    spec.kind = ScenarioKind::Bau;
    spec.first_year = 2020;
    spec.last_year = 2060;
    spec.interpolation = Interpolation::Linear;

    ProvinceAnchors& a = spec.anchors["Alpha"];
    a[static_cast<int>(ParamKey::Population)] = series({{2020, 1.0e6}, {2060, 1.2e6}});
    a[static_cast<int>(ParamKey::FloorAreaPerCapita)] = series({{2020, 5.0}});
    a[static_cast<int>(ParamKey::EnergyIntensity)] =
        series({{2020, 40.0}, {2040, 44.0}, {2060, 30.0}});
    a[static_cast<int>(ParamKey::ElectrificationRate)] = series({{2020, 0.5}});
    a[static_cast<int>(ParamKey::CoalShare)] = series({{2020, 0.2}});
    a[static_cast<int>(ParamKey::GasShare)] = series({{2020, 0.1}});
    a[static_cast<int>(ParamKey::SelfGenerationShare)] = series({{2020, 0.1}});
    a[static_cast<int>(ParamKey::KElectricity)] = series({{2020, 0.6}});
    a[static_cast<int>(ParamKey::KCoal)] = series({{2020, 2.66}});
    a[static_cast<int>(ParamKey::KGas)] = series({{2020, 2.09}});
    return spec;
}

} // namespace

TEST_CASE("interpolation: linear midpoint and exact anchor hits")
{
    const AnchorSeries s = series({{2020, 10.0}, {2040, 50.0}});

    CHECK(interpolate_anchors(s, 2030, Interpolation::Linear, "t") == doctest::Approx(30.0));
    CHECK(interpolate_anchors(s, 2020, Interpolation::Linear, "t") == 10.0);
    CHECK(interpolate_anchors(s, 2040, Interpolation::Linear, "t") == 50.0);

    // Hold-constant outside the anchored range.
    CHECK(interpolate_anchors(s, 2000, Interpolation::Linear, "t") == 10.0);
    CHECK(interpolate_anchors(s, 2060, Interpolation::Linear, "t") == 50.0);

    const AnchorSeries one = series({{2030, 7.0}});
    for (int year : {2000, 2030, 2060}) {
        CHECK(interpolate_anchors(one, year, Interpolation::Linear, "t") == 7.0);
    }
}

TEST_CASE("interpolation: compound growth follows the growth-rate curve")
{
    const AnchorSeries s = series({{2020, 100.0}, {2040, 400.0}});

    // Halfway in time means the geometric mean of the endpoints.
    CHECK(interpolate_anchors(s, 2030, Interpolation::CompoundGrowth, "t")
          == doctest::Approx(200.0).epsilon(1e-12));
    CHECK(interpolate_anchors(s, 2020, Interpolation::CompoundGrowth, "t") == 100.0);
    CHECK(interpolate_anchors(s, 2040, Interpolation::CompoundGrowth, "t") == 400.0);

    // A zero anchor has no growth rate.
    const AnchorSeries zero = series({{2020, 0.0}, {2040, 10.0}});
    CHECK_THROWS_AS(interpolate_anchors(zero, 2030, Interpolation::CompoundGrowth, "t"),
                    ValidationError);
}

TEST_CASE("interpolation: interior years never overshoot the bracketing anchors")
{
    std::mt19937_64 gen(1234);
    std::uniform_real_distribution<double> value(0.01, 100.0);

    for (int trial = 0; trial < 200; ++trial) {
        const double v0 = value(gen);
        const double v1 = value(gen);
        const AnchorSeries s = series({{2010, v0}, {2053, v1}});
        const double lo = std::min(v0, v1);
        const double hi = std::max(v0, v1);
        for (int year = 2010; year <= 2053; ++year) {
            for (Interpolation mode : {Interpolation::Linear, Interpolation::CompoundGrowth}) {
                const double v = interpolate_anchors(s, year, mode, "t");
                CHECK(v >= lo);
                CHECK(v <= hi);
            }
        }
    }
}

TEST_CASE("expand: yearly inputs respect anchors and are reproducible")
{
    const ScenarioSpec spec = base_spec();
    const auto trajs = expand(spec);
    REQUIRE(trajs.size() == 1);
    const ParameterTrajectory& t = trajs.front();
    CHECK(t.province == "Alpha");
    CHECK(t.first_year == 2020);
    REQUIRE(t.years.size() == 41);

    CHECK(t.years.front().population == 1.0e6);
    CHECK(t.years.back().population == 1.2e6);
    CHECK(t.at(2040).energy_intensity == 44.0);
    CHECK(t.at(2030).energy_intensity == doctest::Approx(42.0).epsilon(1e-12));
    CHECK(t.at(2050).energy_intensity == doctest::Approx(37.0).epsilon(1e-12));

    // Expansion is a pure function of the spec.
    const auto again = expand(spec);
    REQUIRE(again.size() == 1);
    CHECK(again.front().years == t.years);
}

TEST_CASE("expand: mid-horizon share-sum violations are caught and located")
{
    // Both share series are valid at their own anchors, but their crossing
    // interpolations push the total over 1 in the middle of the horizon.
    ScenarioSpec spec = base_spec();
    ProvinceAnchors& a = spec.anchors["Alpha"];
    a[static_cast<int>(ParamKey::ElectrificationRate)] = series({{2020, 0.3}});
    a[static_cast<int>(ParamKey::CoalShare)] = series({{2020, 0.7}, {2060, 0.0}});
    a[static_cast<int>(ParamKey::GasShare)] = series({{2020, 0.0}, {2040, 0.7}, {2060, 0.0}});

    CHECK_THROWS_WITH_AS(expand(spec), doctest::Contains("Alpha"), ValidationError);
    try {
        expand(spec);
    } catch (const ValidationError& err) {
        const std::string what = err.what();
        CHECK(what.find("share") != std::string::npos);
    }
}

TEST_CASE("validate_spec: structural defects are rejected with context")
{
    ScenarioSpec missing = base_spec();
    missing.anchors["Alpha"][static_cast<int>(ParamKey::KGas)].clear();
    CHECK_THROWS_WITH_AS(validate_spec(missing), doctest::Contains("k_gas"), ValidationError);

    ScenarioSpec out_of_order = base_spec();
    out_of_order.anchors["Alpha"][static_cast<int>(ParamKey::Population)] =
        series({{2040, 1.0}, {2030, 2.0}});
    CHECK_THROWS_WITH_AS(validate_spec(out_of_order), doctest::Contains("increasing"),
                         ValidationError);

    ScenarioSpec outside = base_spec();
    outside.anchors["Alpha"][static_cast<int>(ParamKey::Population)] =
        series({{2010, 1.0e6}});
    CHECK_THROWS_AS(validate_spec(outside), ValidationError);

    ScenarioSpec bad_share = base_spec();
    bad_share.anchors["Alpha"][static_cast<int>(ParamKey::CoalShare)] =
        series({{2020, 1.4}});
    CHECK_THROWS_WITH_AS(validate_spec(bad_share), doctest::Contains("coal_share"),
                         ValidationError);

    ScenarioSpec bad_horizon = base_spec();
    bad_horizon.first_year = 1990;
    CHECK_THROWS_AS(validate_spec(bad_horizon), ValidationError);
}

TEST_CASE("project_static: national series is the exact province sum")
{
    ScenarioSpec spec = base_spec();
    // Add a second province with different levels.
    ProvinceAnchors& b = spec.anchors["Beta"];
    b = spec.anchors["Alpha"];
    b[static_cast<int>(ParamKey::Population)] = series({{2020, 3.0e6}, {2060, 2.0e6}});
    b[static_cast<int>(ParamKey::EnergyIntensity)] = series({{2020, 55.0}});

    const StaticProjection projection = project_static(spec);
    REQUIRE(projection.provinces.size() == 2);
    CHECK(projection.provinces[0].province == "Alpha");
    CHECK(projection.provinces[1].province == "Beta");
    CHECK(projection.national.province == "national");

    for (std::size_t i = 0; i < projection.national.emissions.values.size(); ++i) {
        const double sum = projection.provinces[0].emissions.values[i]
            + projection.provinces[1].emissions.values[i];
        CHECK(projection.national.emissions.values[i]
              == doctest::Approx(sum).epsilon(1e-12));
        const double energy_sum = projection.provinces[0].energy.values[i]
            + projection.provinces[1].energy.values[i];
        CHECK(projection.national.energy.values[i]
              == doctest::Approx(energy_sum).epsilon(1e-12));
    }
}

TEST_CASE("project_static: peak location tracks the shaped input")
{
    // Energy intensity rises to 2040 then falls, everything else is flat
    // or monotone; the emission peak must land on 2040.
    ScenarioSpec spec = base_spec();
    spec.anchors["Alpha"][static_cast<int>(ParamKey::Population)] =
        series({{2020, 1.0e6}});

    const StaticProjection projection = project_static(spec);
    CHECK(projection.national.emission_peak.year == 2040);
    CHECK(projection.national.energy_peak.year == 2040);
    CHECK(projection.provinces[0].emission_peak.year == 2040);
    CHECK(projection.national.emission_peak.value
          == doctest::Approx(*std::max_element(
                 projection.national.emissions.values.begin(),
                 projection.national.emissions.values.end())));
}

TEST_CASE("region mapping: canonical labels and lookups")
{
    CHECK(is_canonical_region("East China"));
    CHECK(is_canonical_region("Northwest China"));
    CHECK_FALSE(is_canonical_region("Atlantis"));
    CHECK(canonical_regions().size() == 7);

    RegionMapping map;
    map.province_to_region["Alpha"] = "East China";
    CHECK(map.contains("Alpha"));
    CHECK_FALSE(map.contains("Beta"));
    CHECK(map.region_of("Alpha") == "East China");
    CHECK_THROWS_AS(map.region_of("Beta"), ValidationError);
}
