#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace gridlab {

inline constexpr int kSlotsPerDay = 48;
inline constexpr double kHoursPerSlot = 0.5;
inline constexpr int kFirstYear = 2021;
inline constexpr int kLastYear = 2030;
inline constexpr int kHorizonYears = kLastYear - kFirstYear + 1;

constexpr bool is_leap_year(int year) {
    return (year % 4 == 0 && year % 100 != 0) || year % 400 == 0;
}
constexpr int days_in_year(int year) { return is_leap_year(year) ? 366 : 365; }
constexpr std::size_t slots_in_year(int year) {
    return static_cast<std::size_t>(days_in_year(year)) * kSlotsPerDay;
}

/// One calendar year of half-hourly MW values for a single quantity.
struct HalfHourlySeries {
    int year = kFirstYear;
    std::vector<double> values;
    std::string label;

    HalfHourlySeries() = default;
    HalfHourlySeries(int y, std::vector<double> v, std::string l = {})
        : year(y), values(std::move(v)), label(std::move(l)) {}

    static HalfHourlySeries zeros(int y, std::string l = {}) {
        return {y, std::vector<double>(slots_in_year(y), 0.0), std::move(l)};
    }

    std::size_t size() const noexcept { return values.size(); }
    std::size_t days() const noexcept { return values.size() / kSlotsPerDay; }
    double& operator[](std::size_t i) { return values[i]; }
    double operator[](std::size_t i) const { return values[i]; }
    std::span<const double> view() const noexcept { return values; }
    std::span<double> view() noexcept { return values; }

    /// Annual energy in MWh.
    double energy_mwh() const;
    double peak() const;
    double mean() const;
};

/// Remaps a series onto another calendar year by day-of-year, dropping or
/// duplicating 29 February as needed.
HalfHourlySeries map_to_year(const HalfHourlySeries& s, int target_year);

inline constexpr double mwh_to_twh(double mwh) { return mwh * 1e-6; }
inline constexpr double mwh_to_gwh(double mwh) { return mwh * 1e-3; }

}  // namespace gridlab
