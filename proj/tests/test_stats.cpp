#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "kayasim/stats.hpp"

using namespace kayasim;

TEST_CASE("mean and sample SD: small exact cases")
{
    CHECK(mean({3.0}) == 3.0);
    CHECK(sample_sd({3.0}) == 0.0); // single observation has no spread

    const std::vector<double> two = {1.0, 5.0};
    CHECK(mean(two) == 3.0);
    CHECK(sample_sd(two) == doctest::Approx(std::sqrt(8.0)).epsilon(1e-15));

    const std::vector<double> run = {2.0, 4.0, 4.0, 4.0, 5.0, 5.0, 7.0, 9.0};
    CHECK(mean(run) == doctest::Approx(5.0).epsilon(1e-15));
    // Sum of squared deviations is 32; n-1 denominator gives 32/7.
    CHECK(sample_sd(run) == doctest::Approx(std::sqrt(32.0 / 7.0)).epsilon(1e-15));
}

TEST_CASE("sample SD: identical observations give exactly zero")
{
    // Not approximately zero: downstream degeneracy checks compare == 0.
    const std::vector<double> same(1000, 0.1 + 0.2); // an awkward double on purpose
    CHECK(sample_sd(same) == 0.0);
    CHECK(mean(same) == same.front());
}

TEST_CASE("nearest-rank percentiles")
{
    std::vector<double> sorted(10);
    std::iota(sorted.begin(), sorted.end(), 1.0); // 1..10

    // rank = ceil(p/100 * 10), 1-indexed.
    CHECK(percentile_nearest_rank(sorted, 2.5) == 1.0);
    CHECK(percentile_nearest_rank(sorted, 16.0) == 2.0);
    CHECK(percentile_nearest_rank(sorted, 50.0) == 5.0);
    CHECK(percentile_nearest_rank(sorted, 84.0) == 9.0);
    CHECK(percentile_nearest_rank(sorted, 97.5) == 10.0);
    CHECK(percentile_nearest_rank(sorted, 100.0) == 10.0);
    CHECK(percentile_nearest_rank(sorted, 0.0) == 1.0);

    const std::vector<double> one = {42.0};
    CHECK(percentile_nearest_rank(one, 50.0) == 42.0);
}

TEST_CASE("histogram: structure and counting")
{
    std::mt19937_64 gen(7);
    std::uniform_real_distribution<double> dist(-3.0, 5.0);
    std::vector<double> values(2000);
    for (double& v : values) {
        v = dist(gen);
    }

    const Histogram h = make_histogram(values, 50);
    REQUIRE(h.edges.size() == h.counts.size() + 1);
    CHECK(h.counts.size() == 50);
    CHECK(std::accumulate(h.counts.begin(), h.counts.end(), std::uint64_t{0})
          == values.size());
    for (std::size_t i = 0; i + 1 < h.edges.size(); ++i) {
        CHECK(h.edges[i] < h.edges[i + 1]);
    }

    // The maximum lands in the last (right-closed) bin, not out of range.
    const double top = *std::max_element(values.begin(), values.end());
    std::vector<double> with_top = values;
    with_top.push_back(top);
    const Histogram h2 = make_histogram(with_top, 10);
    CHECK(h2.counts.back() >= 1);
}

TEST_CASE("histogram: degenerate sample gets a unit-wide bin span")
{
    const std::vector<double> same(17, 4.25);
    const Histogram h = make_histogram(same, 5);
    REQUIRE(h.edges.size() == h.counts.size() + 1);
    CHECK(h.edges.front() == doctest::Approx(3.75));
    CHECK(h.edges.back() == doctest::Approx(4.75));
    CHECK(std::accumulate(h.counts.begin(), h.counts.end(), std::uint64_t{0}) == 17);
}

TEST_CASE("one-sided normal mass at whole-sigma offsets")
{
    CHECK(normal_one_sided_mass(1.0) == doctest::Approx(0.3413447).epsilon(1e-6));
    CHECK(normal_one_sided_mass(2.0) == doctest::Approx(0.4772499).epsilon(1e-6));
    CHECK(normal_one_sided_mass(3.0) == doctest::Approx(0.4986501).epsilon(1e-6));
    CHECK(normal_one_sided_mass(0.0) == 0.0);
}
