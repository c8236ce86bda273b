#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string_view>
#include <vector>

#include "gridlab/series.hpp"

namespace gridlab {

enum class Fuel { coal, gas, hydro, nuclear, re };
inline constexpr std::array<Fuel, 5> kFuels{Fuel::coal, Fuel::gas, Fuel::hydro, Fuel::nuclear,
                                            Fuel::re};
std::string_view fuel_name(Fuel f);

/// A run of consecutive missing rows in a raw timeseries file.
struct Gap {
    std::size_t first_slot = 0;
    std::size_t length = 0;
    friend bool operator==(const Gap&, const Gap&) = default;
};

/// Demand plus observed fuel-wise supply for the base year. Raw data carries
/// NaN in missing cells; cleaned data is finite everywhere.
struct BaseYearData {
    HalfHourlySeries demand;
    std::array<HalfHourlySeries, kFuels.size()> supply;
    double re_correction_factor = 1.0;
    std::vector<Gap> gaps;
    /// Slots whose fuel sum misses demand by more than the residual tolerance.
    std::size_t balance_outliers = 0;

    int year() const noexcept { return demand.year; }
    std::size_t size() const noexcept { return demand.size(); }
    HalfHourlySeries& fuel(Fuel f) { return supply[static_cast<std::size_t>(f)]; }
    const HalfHourlySeries& fuel(Fuel f) const { return supply[static_cast<std::size_t>(f)]; }
};

/// Per-MW output fractions in [0, 1]. `achieved_cuf` is the mean.
struct PerMwShape {
    std::vector<double> values;
    double achieved_cuf = 0.0;

    static PerMwShape from_values(std::vector<double> v);
    std::size_t size() const noexcept { return values.size(); }
};

/// Reads `timestamp,demand_mw,coal_mw,gas_mw,hydro_mw,nuclear_mw,re_mw`.
/// Timestamps are ISO-8601 local time at a 30-minute cadence; empty cells are
/// gaps. Missing rows are recorded in `gaps`; more than 5% missing is an
/// integrity error.
BaseYearData load_timeseries_csv(const std::filesystem::path& path, int year);

/// Reads `slot,fraction`.
PerMwShape load_shape_csv(const std::filesystem::path& path);

inline constexpr double kDefaultResidualTolerance = 0.02;

/// Fills gaps and rescales RE so its annual energy equals `re_annual_target_gwh`.
///
/// Runs of up to `max_gap_slots` missing values are linearly interpolated;
/// longer runs copy the same slot from the nearest day that has a value there.
BaseYearData clean_series(const BaseYearData& raw, std::size_t max_gap_slots,
                          double re_annual_target_gwh,
                          double residual_tolerance = kDefaultResidualTolerance);

/// Scales a shape toward `target_cuf`, clipping at 1 and re-measuring until the
/// mean is within 1e-6 of the target. Throws InfeasibleError with the attainable
/// ceiling (share of nonzero slots) when the target cannot be met.
PerMwShape rescale_to_cuf(const PerMwShape& shape, double target_cuf);

/// Per-MW wind shape from the residual of RE after removing solar, rescaled to
/// `target_cuf`.
PerMwShape derive_wind_shape(const HalfHourlySeries& re_series, const PerMwShape& solar_shape,
                             double solar_capacity_mw, double target_cuf);

/// Deterministic synthetic base year (2021, 17,520 slots): bimodal daily
/// demand, monsoon-heavy wind, diurnal solar, peaking hydro and gas.
BaseYearData synth_shapes(std::uint64_t seed, double peakiness);

/// Historical-like solar per-MW shape matching the one folded into
/// synth_shapes' RE series for the same seed.
PerMwShape synth_solar_shape(std::uint64_t seed);

/// Installed capacities the synthetic RE series was built from.
struct SyntheticReMix {
    double solar_mw = 40'000.0;
    double wind_mw = 48'000.0;
    double other_mw = 10'000.0;
    double other_plf = 0.198;
};
inline constexpr SyntheticReMix kSyntheticReMix{};

}  // namespace gridlab
