#include "kayasim/monte_carlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <mutex>
#include <sstream>
#include <thread>

#include "kayasim/errors.hpp"
#include "kayasim/rng.hpp"

namespace kayasim {

namespace {

constexpr std::uint64_t kRedrawGuardFactor = 1000;

double draw_omega(CounterRng& rng, double sigma, std::atomic<std::uint64_t>& redraws,
                  std::uint64_t redraw_limit) {
    for (;;) {
        const double omega = sigma * rng.next_gaussian();
        if (omega > -1.0) {
            return omega;
        }
        const std::uint64_t total = redraws.fetch_add(1, std::memory_order_relaxed) + 1;
        if (total > redraw_limit) {
            std::ostringstream os;
            os << "perturbation redraw guard tripped (" << total
               << " redraws); sigma is too large for the multiplicative model";
            throw SimulationError(os.str());
        }
    }
}

// Precomputed per-unit state for the draw loop.
struct UnitPlan {
    std::string name;
    std::vector<double> static_values;            // aggregate mode
    std::vector<const ParameterTrajectory*> members; // per-parameter mode
};

} // namespace

const char* to_string(UncertaintyMode mode) {
    return mode == UncertaintyMode::Aggregate ? "aggregate" : "per_parameter";
}

UncertaintyMode uncertainty_mode_from_string(const std::string& name) {
    if (name == "aggregate") return UncertaintyMode::Aggregate;
    if (name == "per_parameter") return UncertaintyMode::PerParameter;
    throw ValidationError("mode: unknown value '" + name +
                          "' (expected aggregate or per_parameter)");
}

const char* to_string(SimScope scope) {
    return scope == SimScope::National ? "national" : "province";
}

const char* to_string(SimQuantity quantity) {
    return quantity == SimQuantity::Emissions ? "emissions" : "energy";
}

SimScope sim_scope_from_string(const std::string& name) {
    if (name == "national") return SimScope::National;
    if (name == "province") return SimScope::Province;
    throw ValidationError("scope: unknown value '" + name +
                          "' (expected national or province)");
}

SimQuantity sim_quantity_from_string(const std::string& name) {
    if (name == "emissions") return SimQuantity::Emissions;
    if (name == "energy") return SimQuantity::Energy;
    throw ValidationError("quantity: unknown value '" + name +
                          "' (expected emissions or energy)");
}

void validate_config(const UncertaintyConfig& config) {
    const struct { const char* field; double value; } sigmas[] = {
        {"sigma_c", config.sigma_c},
        {"sigma_population", config.sigma_population},
        {"sigma_floor_area", config.sigma_floor_area},
        {"sigma_energy_intensity", config.sigma_energy_intensity},
        {"sigma_carbon_intensity", config.sigma_carbon_intensity},
    };
    for (const auto& s : sigmas) {
        if (!(s.value >= 0.0)) {
            std::ostringstream os;
            os << s.field << ": must be >= 0 (got " << s.value << ")";
            throw ValidationError(os.str());
        }
    }
    if (config.draws < 1) {
        throw ValidationError("draws: must be >= 1");
    }
    if (config.ramp_base_year >= config.ramp_end_year) {
        throw ValidationError("ramp_base_year must be earlier than ramp_end_year");
    }
}

double time_ramp(int year, int base_year, int end_year) {
    if (year <= base_year) {
        return 0.0;
    }
    return static_cast<double>(year - base_year) /
           static_cast<double>(end_year - base_year);
}

KayaInputs perturb_parameters(const KayaInputs& inputs, const OmegaDraws& omegas,
                              double ramp) {
    const double mp = 1.0 + omegas.population * ramp;
    const double mf = 1.0 + omegas.floor_area * ramp;
    const double me = 1.0 + omegas.energy_intensity * ramp;
    const double mk = 1.0 + omegas.carbon_intensity * ramp;
    if (!(mp > 0.0) || !(mf > 0.0) || !(me > 0.0) || !(mk > 0.0)) {
        throw SimulationError("perturb_parameters: disturbance would make a parameter "
                              "non-positive; such draws must be redrawn");
    }
    KayaInputs out = inputs;
    out.population *= mp;
    out.floor_area_per_capita *= mf;
    out.energy_intensity *= me;
    out.factors.electricity *= mk;
    out.factors.coal *= mk;
    out.factors.gas *= mk;
    return out;
}

EmissionTrajectory dynamic_trajectory(const EmissionTrajectory& static_traj,
                                      double omega_c, int base_year, int end_year) {
    validate_trajectory(static_traj);
    if (static_traj.last_year() > end_year) {
        std::ostringstream os;
        os << "dynamic_trajectory: trajectory extends to " << static_traj.last_year()
           << ", past the ramp end year " << end_year;
        throw ValidationError(os.str());
    }
    if (!(1.0 + omega_c > 0.0)) {
        throw SimulationError("dynamic_trajectory: omega_c <= -1 would produce a "
                              "negative end-year value; such draws must be redrawn");
    }
    EmissionTrajectory out = static_traj;
    for (std::size_t i = 0; i < out.values.size(); ++i) {
        const double ramp = time_ramp(out.year_at(i), base_year, end_year);
        out.values[i] = static_traj.values[i] * (1.0 + omega_c * ramp);
    }
    return out;
}

SimulationResult run_mc(const ScenarioSpec& spec, const UncertaintyConfig& config,
                        const RunOptions& options) {
    validate_config(config);
    if (!config.seed.has_value()) {
        throw ValidationError("seed: must be set explicitly for a simulation run");
    }
    if (spec.last_year > config.ramp_end_year) {
        std::ostringstream os;
        os << "scenario '" << spec.name << "': horizon ends " << spec.last_year
           << ", past the ramp end year " << config.ramp_end_year;
        throw ValidationError(os.str());
    }
    if (options.workers < 1) {
        throw ValidationError("workers: must be >= 1");
    }

    const std::uint64_t seed = *config.seed;
    const std::uint64_t draws = config.draws;
    const auto horizon = static_cast<std::size_t>(spec.horizon_years());

    // Precompute the per-year ramp once; it only depends on the calendar.
    std::vector<double> ramp(horizon);
    for (std::size_t i = 0; i < horizon; ++i) {
        ramp[i] = time_ramp(spec.first_year + static_cast<int>(i),
                            config.ramp_base_year, config.ramp_end_year);
    }

    // Build the unit plans. Provinces are keyed in sorted order so that
    // unit indices (and therefore substreams) are stable.
    std::vector<UnitPlan> units;
    StaticProjection statics;
    std::vector<ParameterTrajectory> expanded;

    if (config.mode == UncertaintyMode::Aggregate) {
        statics = project_static(spec);
        if (options.scope == SimScope::National) {
            UnitPlan plan;
            plan.name = "national";
            plan.static_values = options.quantity == SimQuantity::Emissions
                                     ? statics.national.emissions.values
                                     : statics.national.energy.values;
            units.push_back(std::move(plan));
        } else {
            for (const ProvinceProjection& p : statics.provinces) {
                UnitPlan plan;
                plan.name = p.province;
                plan.static_values = options.quantity == SimQuantity::Emissions
                                         ? p.emissions.values
                                         : p.energy.values;
                units.push_back(std::move(plan));
            }
        }
    } else {
        expanded = expand(spec);
        if (options.scope == SimScope::National) {
            UnitPlan plan;
            plan.name = "national";
            for (const ParameterTrajectory& traj : expanded) {
                plan.members.push_back(&traj);
            }
            units.push_back(std::move(plan));
        } else {
            for (const ParameterTrajectory& traj : expanded) {
                UnitPlan plan;
                plan.name = traj.province;
                plan.members.push_back(&traj);
                units.push_back(std::move(plan));
            }
        }
    }

    const std::size_t unit_count = units.size();
    std::vector<std::vector<PeakSample>> samples(unit_count);
    for (auto& s : samples) {
        s.resize(draws);
    }
    const std::uint64_t keep = std::min<std::uint64_t>(options.keep_trajectories, draws);
    std::vector<std::vector<EmissionTrajectory>> kept(unit_count);
    for (auto& k : kept) {
        k.resize(keep);
    }

    std::atomic<std::uint64_t> redraws{0};
    const std::uint64_t redraw_limit = kRedrawGuardFactor * draws;
    std::mutex error_mutex;
    std::exception_ptr first_error;

    const TrajectoryUnit unit_tag = options.quantity == SimQuantity::Emissions
                                        ? TrajectoryUnit::MtCO2
                                        : TrajectoryUnit::Mtce;

    auto worker_body = [&](std::uint64_t begin, std::uint64_t end) {
        std::vector<double> scratch(horizon);
        try {
            for (std::uint64_t d = begin; d < end; ++d) {
                for (std::size_t u = 0; u < unit_count; ++u) {
                    const UnitPlan& plan = units[u];
                    CounterRng rng(seed, u, d);

                    if (config.mode == UncertaintyMode::Aggregate) {
                        const double omega_c =
                            draw_omega(rng, config.sigma_c, redraws, redraw_limit);
                        for (std::size_t i = 0; i < horizon; ++i) {
                            scratch[i] = plan.static_values[i] * (1.0 + omega_c * ramp[i]);
                        }
                    } else {
                        OmegaDraws omegas;
                        omegas.population =
                            draw_omega(rng, config.sigma_population, redraws, redraw_limit);
                        omegas.floor_area =
                            draw_omega(rng, config.sigma_floor_area, redraws, redraw_limit);
                        omegas.energy_intensity = draw_omega(
                            rng, config.sigma_energy_intensity, redraws, redraw_limit);
                        omegas.carbon_intensity = draw_omega(
                            rng, config.sigma_carbon_intensity, redraws, redraw_limit);
                        for (std::size_t i = 0; i < horizon; ++i) {
                            double total = 0.0;
                            for (const ParameterTrajectory* member : plan.members) {
                                const KayaInputs inputs = perturb_parameters(
                                    member->years[i], omegas, ramp[i]);
                                total += options.quantity == SimQuantity::Emissions
                                             ? annual_emissions(inputs, spec.bipg_scope)
                                             : annual_energy(inputs);
                            }
                            scratch[i] = total;
                        }
                    }

                    std::size_t best = 0;
                    for (std::size_t i = 1; i < horizon; ++i) {
                        if (scratch[i] > scratch[best]) {
                            best = i;
                        }
                    }
                    samples[u][d] = PeakSample{
                        d, spec.first_year + static_cast<int>(best), scratch[best]};
                    if (d < keep) {
                        kept[u][d] =
                            EmissionTrajectory{spec.first_year, scratch, unit_tag};
                    }
                }
            }
        } catch (...) {
            std::lock_guard<std::mutex> lock(error_mutex);
            if (!first_error) {
                first_error = std::current_exception();
            }
        }
    };

    const auto workers =
        static_cast<std::uint64_t>(std::min<std::uint64_t>(options.workers, draws));
    if (workers <= 1) {
        worker_body(0, draws);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        const std::uint64_t chunk = (draws + workers - 1) / workers;
        for (std::uint64_t w = 0; w < workers; ++w) {
            const std::uint64_t begin = w * chunk;
            const std::uint64_t end = std::min(draws, begin + chunk);
            if (begin >= end) {
                break;
            }
            pool.emplace_back(worker_body, begin, end);
        }
        for (auto& t : pool) {
            t.join();
        }
    }
    if (first_error) {
        std::rethrow_exception(first_error);
    }

    SimulationResult result;
    result.scenario = spec.name;
    result.scope = options.scope;
    result.quantity = options.quantity;
    result.mode = config.mode;
    result.draws = draws;
    result.seed = seed;
    result.first_year = spec.first_year;
    result.last_year = spec.last_year;
    result.redraws = redraws.load();
    result.units.reserve(unit_count);
    for (std::size_t u = 0; u < unit_count; ++u) {
        UnitSimulation unit;
        unit.name = units[u].name;
        unit.samples = std::move(samples[u]);
        unit.distribution = summarize(unit.samples, options.histogram_bins);
        result.units.push_back(std::move(unit));
        for (std::uint64_t d = 0; d < keep; ++d) {
            result.kept.push_back(KeptTrajectory{units[u].name, d, std::move(kept[u][d])});
        }
    }
    return result;
}

PeakDistribution summarize(const std::vector<PeakSample>& samples,
                           std::size_t value_bins) {
    if (samples.empty()) {
        throw ValidationError("summarize: samples must be non-empty");
    }
    std::vector<double> values;
    std::vector<double> years;
    values.reserve(samples.size());
    years.reserve(samples.size());
    for (const PeakSample& s : samples) {
        values.push_back(s.peak_value);
        years.push_back(static_cast<double>(s.peak_year));
    }

    PeakDistribution dist;
    dist.draws = samples.size();
    dist.mean_value = mean(values);
    dist.sd_value = sample_sd(values);
    dist.mean_year = mean(years);
    dist.sd_year = sample_sd(years);

    std::vector<double> sorted_values = values;
    std::vector<double> sorted_years = years;
    std::sort(sorted_values.begin(), sorted_values.end());
    std::sort(sorted_years.begin(), sorted_years.end());
    for (std::size_t i = 0; i < kPercentileLevels.size(); ++i) {
        dist.value_percentiles[i] =
            percentile_nearest_rank(sorted_values, kPercentileLevels[i]);
        dist.year_percentiles[i] = static_cast<int>(
            percentile_nearest_rank(sorted_years, kPercentileLevels[i]));
    }

    dist.value_histogram = make_histogram(values, value_bins);

    // Years get one bin per calendar year so the peaking-time histogram
    // reads directly as a year count table.
    const auto [ylo, yhi] = std::minmax_element(years.begin(), years.end());
    const int year_lo = static_cast<int>(*ylo);
    const int year_hi = static_cast<int>(*yhi);
    const auto bins = static_cast<std::size_t>(year_hi - year_lo + 1);
    dist.year_histogram.edges.resize(bins + 1);
    for (std::size_t i = 0; i <= bins; ++i) {
        dist.year_histogram.edges[i] = static_cast<double>(year_lo) + static_cast<double>(i);
    }
    dist.year_histogram.counts.assign(bins, 0);
    for (double y : years) {
        ++dist.year_histogram.counts[static_cast<std::size_t>(static_cast<int>(y) - year_lo)];
    }
    return dist;
}

double prob_peak_by_year(const std::vector<PeakSample>& samples, int year) {
    if (samples.empty()) {
        throw ValidationError("prob_peak_by_year: samples must be non-empty");
    }
    std::uint64_t count = 0;
    for (const PeakSample& s : samples) {
        if (s.peak_year <= year) {
            ++count;
        }
    }
    return static_cast<double>(count) / static_cast<double>(samples.size());
}

double prob_peak_in_interval(const std::vector<PeakSample>& samples, double lo,
                             double hi, std::optional<int> year_bound) {
    if (samples.empty()) {
        throw ValidationError("prob_peak_in_interval: samples must be non-empty");
    }
    if (lo > hi) {
        throw ValidationError("prob_peak_in_interval: interval lower bound exceeds upper");
    }
    std::uint64_t count = 0;
    for (const PeakSample& s : samples) {
        if (s.peak_value < lo || s.peak_value > hi) {
            continue;
        }
        if (year_bound && s.peak_year > *year_bound) {
            continue;
        }
        ++count;
    }
    return static_cast<double>(count) / static_cast<double>(samples.size());
}

UncertaintyBands uncertainty_bands(const EmissionTrajectory& static_traj,
                                   double sigma_c, const std::vector<int>& k_levels,
                                   int base_year, int end_year) {
    validate_trajectory(static_traj);
    if (!(sigma_c >= 0.0)) {
        throw ValidationError("sigma_c: must be >= 0");
    }
    UncertaintyBands bands;
    bands.start_year = static_traj.start_year;
    bands.static_values = static_traj.values;
    bands.k_levels = k_levels;
    bands.band_values.reserve(k_levels.size());
    bands.one_sided_mass.reserve(k_levels.size());
    for (int k : k_levels) {
        std::vector<double> series(static_traj.values.size());
        for (std::size_t i = 0; i < series.size(); ++i) {
            const double r = time_ramp(static_traj.year_at(i), base_year, end_year);
            series[i] = std::max(
                0.0, static_traj.values[i] * (1.0 - static_cast<double>(k) * sigma_c * r));
        }
        bands.band_values.push_back(std::move(series));
        bands.one_sided_mass.push_back(normal_one_sided_mass(static_cast<double>(k)));
    }
    return bands;
}

} // namespace kayasim
