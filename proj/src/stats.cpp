#include "kayasim/stats.hpp"

#include <algorithm>
#include <cmath>

#include "kayasim/errors.hpp"

namespace kayasim {

double mean(const std::vector<double>& values) {
    if (values.empty()) {
        throw ValidationError("mean: values must be non-empty");
    }
    const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
    if (*lo == *hi) {
        return *lo;
    }
    double sum = 0.0;
    for (double v : values) {
        sum += v;
    }
    return sum / static_cast<double>(values.size());
}

double sample_sd(const std::vector<double>& values) {
    if (values.empty()) {
        throw ValidationError("sample_sd: values must be non-empty");
    }
    if (values.size() == 1) {
        return 0.0;
    }
    const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
    if (*lo == *hi) {
        return 0.0;
    }
    const double m = mean(values);
    double sum_sq = 0.0;
    for (double v : values) {
        const double d = v - m;
        sum_sq += d * d;
    }
    return std::sqrt(sum_sq / static_cast<double>(values.size() - 1));
}

double percentile_nearest_rank(const std::vector<double>& sorted, double p) {
    if (sorted.empty()) {
        throw ValidationError("percentile: values must be non-empty");
    }
    if (!(p >= 0.0 && p <= 100.0)) {
        throw ValidationError("percentile: p must be within [0,100]");
    }
    const double n = static_cast<double>(sorted.size());
    std::size_t rank = static_cast<std::size_t>(std::ceil(p / 100.0 * n));
    if (rank < 1) {
        rank = 1;
    }
    if (rank > sorted.size()) {
        rank = sorted.size();
    }
    return sorted[rank - 1];
}

Histogram make_histogram(const std::vector<double>& values, std::size_t bins) {
    if (values.empty()) {
        throw ValidationError("histogram: values must be non-empty");
    }
    if (bins == 0) {
        throw ValidationError("histogram: bin count must be >= 1");
    }
    const auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
    double lo = *lo_it;
    double hi = *hi_it;
    if (lo == hi) {
        lo -= 0.5;
        hi += 0.5;
    }
    const double width = (hi - lo) / static_cast<double>(bins);

    Histogram h;
    h.edges.resize(bins + 1);
    for (std::size_t i = 0; i <= bins; ++i) {
        h.edges[i] = lo + width * static_cast<double>(i);
    }
    h.edges.back() = hi;
    h.counts.assign(bins, 0);
    for (double v : values) {
        auto idx = static_cast<std::size_t>((v - lo) / width);
        if (idx >= bins) {
            idx = bins - 1; // right edge of the last bin is closed
        }
        ++h.counts[idx];
    }
    return h;
}

double normal_one_sided_mass(double k) {
    return 0.5 * std::erf(k / std::sqrt(2.0));
}

} // namespace kayasim
