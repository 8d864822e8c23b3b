#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace kayasim {

/// Fixed-width histogram. edges has counts.size() + 1 entries; bin i covers
/// [edges[i], edges[i+1]), with the last bin closed on the right.
struct Histogram {
    std::vector<double> edges;
    std::vector<std::uint64_t> counts;

    bool operator==(const Histogram&) const = default;
};

double mean(const std::vector<double>& values);

/// Sample standard deviation with the n-1 denominator. Returns exactly 0
/// for a single observation or when every observation is identical.
double sample_sd(const std::vector<double>& values);

/// Nearest-rank percentile on a pre-sorted ascending vector:
/// element ceil(p/100 * n), 1-indexed.
double percentile_nearest_rank(const std::vector<double>& sorted, double p);

/// Fixed-width histogram over [min, max] with `bins` bins. A degenerate
/// sample (min == max) gets the single-unit span [v - 0.5, v + 0.5].
Histogram make_histogram(const std::vector<double>& values, std::size_t bins);

/// One-sided standard normal mass between the mean and -k standard
/// deviations: Phi(k) - 1/2.
double normal_one_sided_mass(double k);

} // namespace kayasim
