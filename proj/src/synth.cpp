#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "gridlab/errors.hpp"
#include "gridlab/shapes.hpp"

namespace gridlab {
namespace {

constexpr int kSynthYear = 2021;
constexpr double kBaseDemandMwh = 1.36e9;  // 1,360 BU
constexpr double kHydroMw = 35'500.0;
constexpr double kGasMw = 21'300.0;
constexpr double kNuclearMw = 5'400.0;
constexpr double kCoalCeilingMw = 0.9 * 162'600.0;

// mt19937_64 output is fully specified by the standard; the library
// distributions are not, so uniforms are drawn from the raw bits.
class Noise {
public:
    explicit Noise(std::uint64_t seed) : engine_(seed) {}
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    double symmetric() { return 2.0 * uniform() - 1.0; }

private:
    std::mt19937_64 engine_;
};

double hour_of(int slot) { return (slot + 0.5) * kHoursPerSlot; }

double bump(double hour, double centre, double width) {
    double d = std::abs(hour - centre);
    d = std::min(d, 24.0 - d);
    return std::exp(-0.5 * (d / width) * (d / width));
}

bool monsoon(int day) { return day >= 151 && day < 273; }  // June to September

double daily_profile(double hour) {
    return 0.07 * bump(hour, 10.0, 2.0) + 0.17 * bump(hour, 19.5, 1.7) -
           0.12 * bump(hour, 3.5, 2.5);
}

struct SynthParts {
    std::vector<double> solar;  // per-MW, historical CUF
    std::vector<double> wind;   // per-MW
};

SynthParts synth_re_parts(std::uint64_t seed) {
    const int days = days_in_year(kSynthYear);
    Noise noise(seed ^ 0x5eedULL);
    SynthParts p;
    p.solar.resize(slots_in_year(kSynthYear));
    p.wind.resize(slots_in_year(kSynthYear));
    double wind_state = 0.0;
    for (int d = 0; d < days; ++d) {
        const double cloud = monsoon(d) ? 0.55 + 0.3 * noise.uniform() : 0.85 + 0.15 * noise.uniform();
        wind_state = 0.8 * wind_state + 0.2 * noise.symmetric();
        const double season = monsoon(d) ? 0.55 : (d >= 120 && d < 151) || (d >= 273 && d < 290) ? 0.3 : 0.12;
        const double wind_day = std::clamp(season * (1.0 + 1.2 * wind_state), 0.02, 0.95);
        for (int s = 0; s < kSlotsPerDay; ++s) {
            const double h = hour_of(s);
            const double sun = h > 6.25 && h < 18.75
                                   ? std::pow(std::sin(std::numbers::pi * (h - 6.25) / 12.5), 1.2)
                                   : 0.0;
            const std::size_t i = static_cast<std::size_t>(d) * kSlotsPerDay + static_cast<std::size_t>(s);
            p.solar[i] = std::clamp(0.82 * sun * cloud, 0.0, 1.0);
            const double diurnal = 1.0 + 0.25 * bump(h, 16.0, 4.0) - 0.15 * bump(h, 8.0, 3.0);
            p.wind[i] = std::clamp(wind_day * diurnal * (1.0 + 0.05 * noise.symmetric()), 0.0, 1.0);
        }
    }
    return p;
}

}  // namespace

PerMwShape synth_solar_shape(std::uint64_t seed) {
    return PerMwShape::from_values(synth_re_parts(seed).solar);
}

BaseYearData synth_shapes(std::uint64_t seed, double peakiness) {
    if (!(peakiness >= 0.0)) throw ParameterError("peakiness must be non-negative");
    const int days = days_in_year(kSynthYear);
    const std::size_t n = slots_in_year(kSynthYear);
    Noise noise(seed);

    double profile_mean = 0.0;
    for (int s = 0; s < kSlotsPerDay; ++s) profile_mean += daily_profile(hour_of(s));
    profile_mean /= kSlotsPerDay;

    std::vector<double> demand(n);
    for (int d = 0; d < days; ++d) {
        const double season = 0.08 * std::sin(2.0 * std::numbers::pi * (d - 60) / 365.0);
        const double day_noise = 0.02 * noise.symmetric();
        for (int s = 0; s < kSlotsPerDay; ++s) {
            const double shape = season + daily_profile(hour_of(s)) - profile_mean + day_noise +
                                 0.005 * noise.symmetric();
            demand[static_cast<std::size_t>(d) * kSlotsPerDay + static_cast<std::size_t>(s)] =
                std::max(0.0, 1.0 + peakiness * shape);
        }
    }
    double total = 0.0;
    for (double v : demand) total += v;
    const double to_mw = kBaseDemandMwh / (total * kHoursPerSlot);
    for (double& v : demand) v *= to_mw;

    const SynthParts parts = synth_re_parts(seed);
    const SyntheticReMix mix = kSyntheticReMix;
    std::vector<double> re(n), hydro(n), nuclear(n), gas(n), coal(n);
    for (int d = 0; d < days; ++d) {
        const double hydro_cf = monsoon(d) ? 0.62 : (d >= 273 && d < 334) ? 0.45 : 0.30;
        for (int s = 0; s < kSlotsPerDay; ++s) {
            const std::size_t i = static_cast<std::size_t>(d) * kSlotsPerDay + static_cast<std::size_t>(s);
            const double h = hour_of(s);
            re[i] = mix.solar_mw * parts.solar[i] + mix.wind_mw * parts.wind[i] +
                    mix.other_mw * mix.other_plf;
            const double peaking = 1.0 + 2.5 * (daily_profile(h) - profile_mean);
            hydro[i] = std::min(0.98 * kHydroMw, hydro_cf * kHydroMw * peaking);
            nuclear[i] = 0.86 * kNuclearMw;
            gas[i] = 3'500.0 + 5'000.0 * bump(h, 19.5, 1.8) + 1'500.0 * bump(h, 10.0, 2.0);
            const double residual = demand[i] - re[i] - hydro[i] - nuclear[i] - gas[i];
            coal[i] = std::clamp(residual, 40'000.0, kCoalCeilingMw);
            if (residual > kCoalCeilingMw) {
                gas[i] = std::min(kGasMw, gas[i] + residual - kCoalCeilingMw);
            }
        }
    }

    BaseYearData data;
    data.demand = HalfHourlySeries(kSynthYear, std::move(demand), "demand");
    data.fuel(Fuel::coal) = HalfHourlySeries(kSynthYear, std::move(coal), "coal");
    data.fuel(Fuel::gas) = HalfHourlySeries(kSynthYear, std::move(gas), "gas");
    data.fuel(Fuel::hydro) = HalfHourlySeries(kSynthYear, std::move(hydro), "hydro");
    data.fuel(Fuel::nuclear) = HalfHourlySeries(kSynthYear, std::move(nuclear), "nuclear");
    data.fuel(Fuel::re) = HalfHourlySeries(kSynthYear, std::move(re), "re");
    return data;
}

}  // namespace gridlab
