#include <doctest.h>

#include <cmath>
#include <random>

#include "kayasim/emission.hpp"
#include "kayasim/errors.hpp"

using namespace kayasim;

namespace {

// Straight-line reference for the composite intensity, written out
// long-hand and kept separate from the library implementation on
// purpose: the production code must agree with this, not the other way
// around.
double reference_intensity(const EnergyMix& m, const EmissionFactors& k, BipgScope scope)
{
    const double electricity = m.electrification_rate * k.electricity;
    const double coal = m.coal_share * k.coal;
    const double gas = m.gas_share * k.gas;
    const double offset = 1.0 - m.self_generation_share;
    switch (scope) {
    case BipgScope::CoalOnly:
        return electricity + offset * coal + gas;
    case BipgScope::CoalAndGas:
        return electricity + offset * (coal + gas);
    case BipgScope::AllFuels:
        return offset * (electricity + coal + gas);
    }
    return 0.0;
}

EnergyMix worked_mix()
{
    EnergyMix m;
    m.electrification_rate = 0.5;
    m.coal_share = 0.3;
    m.gas_share = 0.2;
    m.self_generation_share = 0.1;
    return m;
}

EmissionFactors worked_factors()
{
    EmissionFactors k;
    k.electricity = 0.6;
    k.coal = 2.66;
    k.gas = 2.09;
    return k;
}

} // namespace

TEST_CASE("composite intensity: pinned worked values for all three offset scopes")
{
    const EnergyMix m = worked_mix();
    const EmissionFactors k = worked_factors();

    const double coal_only = carbon_intensity(m, k, BipgScope::CoalOnly);
    const double coal_and_gas = carbon_intensity(m, k, BipgScope::CoalAndGas);
    const double all_fuels = carbon_intensity(m, k, BipgScope::AllFuels);

    CHECK(coal_only == doctest::Approx(1.4362).epsilon(1e-12));
    CHECK(coal_and_gas == doctest::Approx(1.3944).epsilon(1e-12));
    CHECK(all_fuels == doctest::Approx(1.3644).epsilon(1e-12));

    // The scopes are genuinely different models, not aliases.
    CHECK(coal_only != coal_and_gas);
    CHECK(coal_and_gas != all_fuels);
    CHECK(coal_only != all_fuels);
}

TEST_CASE("composite intensity: degenerate mixes")
{
    EmissionFactors k = worked_factors();

    EnergyMix all_other; // nothing but the uncounted remainder
    CHECK(carbon_intensity(all_other, k) == 0.0);

    EnergyMix electric_only;
    electric_only.electrification_rate = 1.0;
    k.electricity = 0.2;
    CHECK(carbon_intensity(electric_only, k) == doctest::Approx(0.2).epsilon(1e-15));

    // Full self-generation wipes out the coal term under the default scope.
    EnergyMix coal_with_full_offset;
    coal_with_full_offset.coal_share = 0.5;
    coal_with_full_offset.self_generation_share = 1.0;
    CHECK(carbon_intensity(coal_with_full_offset, worked_factors()) == 0.0);

    // ... but leaves gas untouched.
    EnergyMix gas_with_full_offset;
    gas_with_full_offset.gas_share = 0.4;
    gas_with_full_offset.self_generation_share = 1.0;
    CHECK(carbon_intensity(gas_with_full_offset, worked_factors())
          == doctest::Approx(0.4 * 2.09).epsilon(1e-15));
}

TEST_CASE("composite intensity: agrees with the long-hand reference on random inputs")
{
    std::mt19937_64 gen(991);
    std::uniform_real_distribution<double> share(0.0, 1.0);
    std::uniform_real_distribution<double> factor(0.0, 4.0);

    for (int i = 0; i < 500; ++i) {
        EnergyMix m;
        // Keep the share total inside the unit interval.
        m.electrification_rate = share(gen) * 0.5;
        m.coal_share = share(gen) * 0.3;
        m.gas_share = share(gen) * 0.2;
        m.self_generation_share = share(gen);
        EmissionFactors k;
        k.electricity = factor(gen);
        k.coal = factor(gen);
        k.gas = factor(gen);

        for (BipgScope scope :
             {BipgScope::CoalOnly, BipgScope::CoalAndGas, BipgScope::AllFuels}) {
            const double got = carbon_intensity(m, k, scope);
            const double want = reference_intensity(m, k, scope);
            CHECK(got == doctest::Approx(want).epsilon(1e-12));
            CHECK(got >= 0.0);
        }
    }
}

TEST_CASE("composite intensity: linear in the emission factors")
{
    const EnergyMix m = worked_mix();
    const EmissionFactors k = worked_factors();
    EmissionFactors doubled = k;
    doubled.electricity *= 2.0;
    doubled.coal *= 2.0;
    doubled.gas *= 2.0;

    for (BipgScope scope :
         {BipgScope::CoalOnly, BipgScope::CoalAndGas, BipgScope::AllFuels}) {
        CHECK(carbon_intensity(m, doubled, scope)
              == doctest::Approx(2.0 * carbon_intensity(m, k, scope)).epsilon(1e-12));
    }
}

TEST_CASE("annual energy and emissions: unit chain")
{
    KayaInputs in;
    in.population = 1.0e6;           // persons
    in.floor_area_per_capita = 5.0;  // m2/person
    in.energy_intensity = 40.0;      // kgce/m2
    in.mix = worked_mix();
    in.factors = worked_factors();

    // 1e6 * 5 * 40 = 2e8 kgce = 0.2 Mtce.
    CHECK(annual_energy(in) == doctest::Approx(0.2).epsilon(1e-15));
    CHECK(annual_emissions(in, BipgScope::CoalOnly)
          == doctest::Approx(0.2 * 1.4362).epsilon(1e-12));

    // Homogeneity: doubling population doubles both outputs.
    KayaInputs big = in;
    big.population *= 2.0;
    CHECK(annual_energy(big) == doctest::Approx(2.0 * annual_energy(in)).epsilon(1e-12));
    CHECK(annual_emissions(big) == doctest::Approx(2.0 * annual_emissions(in)).epsilon(1e-12));
}

TEST_CASE("validation: offending fields are named")
{
    EnergyMix m = worked_mix();
    m.coal_share = 1.3;
    CHECK_THROWS_WITH_AS(validate_mix(m), doctest::Contains("coal_share"), ValidationError);

    EnergyMix sum = worked_mix();
    sum.electrification_rate = 0.9;
    sum.coal_share = 0.9;
    CHECK_THROWS_AS(validate_mix(sum), ValidationError);

    EmissionFactors k = worked_factors();
    k.gas = -0.1;
    CHECK_THROWS_WITH_AS(validate_factors(k), doctest::Contains("gas"), ValidationError);

    KayaInputs in;
    in.population = -1.0;
    in.floor_area_per_capita = 1.0;
    in.energy_intensity = 1.0;
    CHECK_THROWS_WITH_AS(validate_inputs(in, "Alpha/2031"), doctest::Contains("Alpha/2031"),
                         ValidationError);
}

TEST_CASE("peak detection: maximum with earliest-year ties")
{
    EmissionTrajectory t;
    t.start_year = 2020;
    t.values = {1.0, 3.0, 2.0, 3.0, 0.5};

    const Peak peak = detect_peak(t);
    CHECK(peak.year == 2021); // first year attaining the max
    CHECK(peak.value == 3.0);

    EmissionTrajectory flat;
    flat.start_year = 2000;
    flat.values = {7.0, 7.0, 7.0};
    CHECK(detect_peak(flat).year == 2000);

    EmissionTrajectory empty;
    empty.start_year = 2000;
    CHECK_THROWS_AS(detect_peak(empty), ValidationError);
}
