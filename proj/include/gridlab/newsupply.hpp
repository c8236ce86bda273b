#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "gridlab/dispatch.hpp"
#include "gridlab/scenario.hpp"
#include "gridlab/shapes.hpp"

namespace gridlab {

struct BatterySpec {
    double energy_mwh = 0.0;
    double inverter_mw = 0.0;
    double dod_buffer = 0.05;
    double roundtrip_eff = 0.90;
    double size_fraction = 1.0;
    bool efficiency_on_charge_only = false;

    double floor_mwh() const { return energy_mwh * dod_buffer; }
    double usable_mwh() const { return energy_mwh * (1.0 - dod_buffer); }
    double charge_eff() const;
    double discharge_eff() const;
    /// Same technology scaled to `fraction` of this size.
    BatterySpec scaled(double fraction) const;
};
/// Zero-size battery carrying the scenario's efficiency and DoD settings.
BatterySpec battery_template(const ScenarioParams& p);

/// A charge/discharge cycle: slots [begin, end). Cycles break at a fixed
/// slot of day; `day` is the calendar day the cycle ends in.
struct Cycle {
    std::size_t begin = 0;
    std::size_t end = 0;
    std::size_t day = 0;
};
std::vector<Cycle> battery_cycles(std::size_t n_slots, int boundary_slot);

enum class ChargeSource : std::uint8_t { none, curtailed_re, dedicated_solar, both };
std::string_view charge_source_name(ChargeSource s);

/// Chronological battery state. `soc_mwh` is the physical state of charge;
/// `reported_soc_mwh` subtracts energy the battery failed to deliver since it
/// last charged, so it goes negative when the battery is too small.
struct SocTrace {
    std::vector<double> soc_mwh;  // end of slot
    std::vector<double> reported_soc_mwh;
    std::vector<double> charge_mw;  // drawn from the source, before losses
    std::vector<double> charge_curtailed_mw;
    std::vector<double> charge_solar_mw;
    std::vector<double> discharge_mw;  // delivered
    std::vector<double> secondary_unmet_mw;
    double initial_soc_mwh = 0.0;

    std::size_t size() const noexcept { return soc_mwh.size(); }
    ChargeSource source(std::size_t i) const;
    double secondary_unmet_mwh() const;
    double peak_secondary_mw() const;
    double discharge_mwh() const;
    double charge_mwh() const;
};

/// Starts full, discharges to serve unmet demand, and charges from curtailed
/// RE first and dedicated solar second. Charging is limited by the inverter,
/// a 1C rate and the room left below full.
SocTrace simulate_soc(const BatterySpec& battery, std::span<const double> unmet,
                      std::span<const double> curtailed_re,
                      std::span<const double> dedicated_solar_mw);

/// Full-size requirement scaled by `size_fraction`. Inverter = peak of unmet
/// plus buffer shortfall; energy covers the worst cycle's unmet energy and at
/// least one slot at full inverter output, grossed up for DoD and discharge
/// losses.
BatterySpec size_battery(std::span<const double> unmet, std::span<const double> buffer_shortfall,
                         const ScenarioParams& p, double size_fraction);

struct DedicatedSolarSizing {
    double min_gw = 0.0;
    double max_gw = 0.0;
    double chosen_gw = 0.0;
    double secondary_at_max_mwh = 0.0;
    bool infeasible = false;  // full-size battery still short at the maximum
};
inline constexpr double kDedicatedSolarTolGw = 0.1;
DedicatedSolarSizing size_dedicated_solar(const BatterySpec& battery,
                                          std::span<const double> curtailed_re,
                                          std::span<const double> unmet,
                                          const PerMwShape& solar_shape, double extra,
                                          int boundary_slot);

/// Unmet energy plus the installed-capacity need that biodiesel covers.
struct Residual {
    std::vector<double> secondary_unmet_mw;
    double secondary_unmet_mwh = 0.0;
    double biodiesel_mw = 0.0;  // gross
};
/// Thermal NEW of `capacity_net_mw` serving `unmet`.
Residual undersize_residual(std::span<const double> unmet, std::span<const double> buffer_shortfall,
                            double capacity_net_mw, double biodiesel_aux);
/// Battery case: energy shortfall from the SoC trace plus any capacity gap.
Residual battery_residual(const SocTrace& soc, std::span<const double> unmet,
                          std::span<const double> buffer_shortfall, const BatterySpec& battery,
                          double biodiesel_aux);

/// Yearly NEW capacity, never retired within the horizon.
struct CapacitySchedule {
    std::vector<double> required_net_mw;
    std::vector<double> installed_net_mw;
    std::vector<double> installed_gross_mw;
    std::vector<double> increment_gross_mw;
};
CapacitySchedule size_new_capacity(std::span<const double> required_net_mw, double aux,
                                   bool thermal);

/// Largest value M such that shaving every slot down to M removes
/// `displaced_mwh` of energy (half-hour slots).
double lowered_daily_max(std::span<const double> coal_day_mw, double displaced_mwh);

struct PeakBonus {
    double old_max_mw = 0.0;
    double new_max_mw = 0.0;
    double old_floor_mw = 0.0;
    double new_floor_mw = 0.0;
    double avoided_mwh = 0.0;
};
/// Curtailment avoided on `day` when `coal_displaced_mwh` is shaved off the
/// top of its coal curve and the floor follows the lower maximum.
PeakBonus coal_peak_bonus(const DispatchYear& dy, std::size_t day, double coal_displaced_mwh,
                          double flex_limit);

struct Displacement {
    double spare_mwh = 0.0;  // delivered energy available beyond unmet
    double gas_mwh = 0.0;
    double coal_mwh = 0.0;
    double bonus_mwh = 0.0;  // RE no longer curtailed by the coal floor
    std::vector<double> extra_discharge_mw;
    std::vector<double> extra_charge_mw;
};
/// Spends each day's spare battery energy on gas_slack, then on the top of the
/// coal curve, and relaxes that day's coal floor. `dy` must already carry the
/// battery discharge in its new_supply tranche.
Displacement displace_with_battery(DispatchYear& dy, const SocTrace& soc,
                                   const BatterySpec& battery,
                                   std::span<const double> dedicated_solar_mw, double flex_limit,
                                   int boundary_slot);

struct NewCoalDisplacement {
    double gas_mwh = 0.0;
    double extra_flex_curtailment_mwh = 0.0;
};
/// Spare NEW-coal capacity replaces gas_slack slot by slot; the floor is then
/// re-imposed on the combined coal fleet. `dy` must already carry NEW output.
NewCoalDisplacement displace_gas_with_new_coal(DispatchYear& dy, double new_coal_net_mw,
                                               double flex_limit);

/// One year of NEW supply.
struct YearPlan {
    int year = kFirstYear;
    double required_net_mw = 0.0;
    double installed_net_mw = 0.0;
    double installed_gross_mw = 0.0;
    double increment_gross_mw = 0.0;
    BatterySpec battery;
    double battery_energy_increment_mwh = 0.0;
    DedicatedSolarSizing solar_sizing;
    double dedicated_solar_gw = 0.0;
    double dedicated_solar_increment_gw = 0.0;
    double new_output_mwh = 0.0;
    double secondary_unmet_mwh = 0.0;
    double biodiesel_mw = 0.0;
    double biodiesel_increment_mw = 0.0;
    double displaced_gas_mwh = 0.0;
    double displaced_coal_mwh = 0.0;
    double bonus_mwh = 0.0;
};

struct NewSupplyPlan {
    NewOption option = NewOption::battery_re;
    std::vector<YearPlan> years;

    double peak_capacity_mw() const;
    double secondary_unmet_twh(int year) const;
    bool infeasible() const;
};

void write_soc_csv(const SocTrace& soc, const std::filesystem::path& path);
std::string plan_json(const NewSupplyPlan& plan);

}  // namespace gridlab
