#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "gridlab/series.hpp"
#include "gridlab/shapes.hpp"

namespace gridlab {

enum class NewOption { coal, ocgt, ccgt, gas_ic, diesel_gen, battery_re };
inline constexpr std::array<NewOption, 6> kNewOptions{NewOption::coal,   NewOption::ocgt,
                                                      NewOption::ccgt,   NewOption::gas_ic,
                                                      NewOption::diesel_gen, NewOption::battery_re};
std::string_view option_name(NewOption o);
std::optional<NewOption> parse_option(std::string_view s);
constexpr bool is_thermal(NewOption o) { return o != NewOption::battery_re; }

/// Which fossil escalation path a fuel follows.
enum class FuelFamily { coal, gas, diesel };

/// Capital and running assumptions for one NEW technology.
struct NewTechParams {
    double life_years = 25.0;
    double capex_2021 = 0.0;        // Rs/MW
    double capex_escalation = 0.0;  // per year
    double aux = 0.0;               // auxiliary consumption fraction
    double fuel_price_2021 = 0.0;   // Rs/kWh
    double om_rate = 0.015;         // annual O&M as a share of capex
    FuelFamily family = FuelFamily::coal;
};

/// One fully-resolved point of the parametric grid. Defaults are the base case.
struct ScenarioParams {
    // Demand and system
    double demand_growth = 0.0525;
    double flex_limit = 0.60;
    double ists_losses = 0.0339;
    double grid_buffer = 0.05;
    double coal_maintenance_derate = 0.10;

    // Renewables (capacities in GW)
    double re_2030 = 450.0;
    double solar_share = 8.0 / 12.0;
    double solar_cuf = 0.27;
    double wind_cuf = 0.35;
    double solar_kwh_per_kw_day = 5.85;
    double base_solar_gw = 40.0;
    double other_re_gw = 10.0;
    double other_re_plf = 0.198;
    double re_life_years = 25.0;

    // Renewable costs
    double solar_capex_2021 = 43'000'000.0;  // Rs/MW
    double solar_capex_change = -0.02;
    double wind_capex_2021 = 75'000'000.0;
    double wind_capex_2030 = 70'500'000.0;
    double solar_om = 600'000.0;  // Rs/MW/yr
    double wind_om = 500'000.0;
    double om_inflation = 0.04;

    // Battery
    double battery_price_2021 = 175.0;  // USD/kWh
    double battery_learning_rate = 0.07;
    double inr_per_usd_2021 = 73.65;
    double forex_escalation = 0.03;
    double battery_life_years = 15.0;  // cells; the inverter uses new_battery_re_*
    double dod_buffer = 0.05;
    double roundtrip_eff = 0.90;
    bool efficiency_on_charge_only = false;
    int cycle_boundary_slot = 34;  // 17:00

    // Finance
    double discount_rate = 0.06;
    double wacc = 0.085;
    bool annuity_full_life = false;

    // Existing-fleet fuel (Rs/kWh, 2021) and escalation
    double fuel_price_coal_2019 = 2.6;
    double fuel_price_coal_slack = 3.0;
    double fuel_price_gas_2019 = 3.5;
    double fuel_price_gas_slack = 5.0;
    double coal_escalation = 0.05;
    double gas_escalation = 0.03;
    double diesel_escalation = 0.03;

    // Auxiliary consumption of the existing fleet
    double aux_coal = 0.08;
    double aux_gas = 0.05;
    double aux_hydro = 0.01;
    double aux_nuclear = 0.07;
    double aux_re = 0.0;

    // Capacity trajectory
    double fgd_penalty = 0.025;
    int fgd_ramp_start = 2023;
    int fgd_ramp_end = 2027;
    double coal_retirement_2030 = 20.0;  // GW
    double hydro_growth = 0.03;
    double nuclear_growth = 0.039;

    // NEW supply choice
    NewOption new_option = NewOption::battery_re;
    double battery_size_fraction = 1.0;
    double new_coal_size_fraction = 1.0;
    double dedicated_solar_extra = 0.0;

    std::array<NewTechParams, kNewOptions.size()> new_tech{{
        {25.0, 85'000'000.0, 0.06, 0.080, 2.4, 0.015, FuelFamily::coal},
        {25.0, 50'000'000.0, 0.04, 0.025, 6.8, 0.015, FuelFamily::gas},
        {25.0, 60'000'000.0, 0.05, 0.050, 5.0, 0.015, FuelFamily::gas},
        {18.0, 55'000'000.0, 0.04, 0.005, 5.8, 0.015, FuelFamily::gas},
        {15.0, 20'000'000.0, 0.04, 0.005, 20.0, 0.015, FuelFamily::diesel},
        {13.0, 7'500'000.0, 0.0, 0.050, 0.0, 0.015, FuelFamily::diesel},
    }};

    const NewTechParams& tech(NewOption o) const { return new_tech[static_cast<std::size_t>(o)]; }
    NewTechParams& tech(NewOption o) { return new_tech[static_cast<std::size_t>(o)]; }
    const NewTechParams& biodiesel() const { return tech(NewOption::diesel_gen); }

    double escalation(FuelFamily f) const;
    /// Discharge-side share of the round trip.
    double discharge_eff() const;
    double charge_eff() const;

    /// Throws ParameterError naming the first field out of range.
    void validate() const;
};

/// Reflection over ScenarioParams for config files and grid axes. Field names
/// are the JSON keys; NEW-technology fields are `new_<option>_<field>`.
struct ParamValue {
    std::variant<double, bool, std::string> v;
    friend bool operator==(const ParamValue&, const ParamValue&) = default;
};
std::vector<std::string_view> param_names();
bool has_param(std::string_view name);
/// Throws ParameterError for an unknown key or a value of the wrong kind.
void set_param(ScenarioParams& p, std::string_view name, const ParamValue& value);
ParamValue get_param(const ScenarioParams& p, std::string_view name);
std::string format_param(const ParamValue& v);

/// Per-parameter value lists over a base point. Axis order is the order in
/// which axes were added; the first axis varies slowest.
struct ParamGrid {
    ScenarioParams base;
    std::vector<std::pair<std::string, std::vector<ParamValue>>> axes;

    std::size_t size() const;
    ParamGrid& axis(std::string name, std::vector<ParamValue> values);
    ParamGrid& axis(std::string name, std::vector<double> values);
};

/// The SI grid: growth x flex x 2030 RE x solar share (3 x 3 x 7 x 3).
ParamGrid paper_grid();

std::vector<ScenarioParams> expand_param_grid(const ParamGrid& grid);
/// `name=value;...` over the grid's axes for scenario `index`.
std::string scenario_key(const ParamGrid& grid, std::size_t index);

/// Reads a JSON config of flat keys. Scalar values set the base point; array
/// values become grid axes (in file order). Unknown keys are rejected.
ParamGrid load_param_grid(std::string_view json_text);

/// Net busbar capacity per fuel and year (GW, index 0 = 2021).
struct CapacityPath {
    using Yearly = std::array<double, kHorizonYears>;
    Yearly re_total{}, solar{}, wind{}, other_re{};
    Yearly hydro{}, nuclear{};
    Yearly coal_pre_fgd{}, coal{}, fgd_factor{};
    Yearly gas{};
    Yearly coal_2019_tranche{}, coal_slack_tranche{}, gas_2019_tranche{}, gas_slack_tranche{};

    static std::size_t index(int year);
};

inline constexpr double kBaseReGw = 98.0;
inline constexpr double kBaseHydroGw = 35.5;
inline constexpr double kBaseGasGw = 21.3;
inline constexpr double kBaseNuclearGw = 5.4;
inline constexpr double kBaseCoalGw = 162.6;

/// Capacity trajectories 2021-2030. With `base`, the 2019/slack tranche split
/// is filled from the base-year peak outputs.
CapacityPath build_capacity_path(const ScenarioParams& p, const BaseYearData* base = nullptr);

/// Base demand mapped onto `year` and grown pro rata.
HalfHourlySeries project_demand(const ScenarioParams& p, const BaseYearData& base, int year);

/// Slot-wise despatchable tranche capacities (MW) for one year.
struct TrancheCaps {
    std::vector<double> coal_2019, coal_slack, gas_2019, gas_slack;
    double coal_available_mw = 0.0;
    double gas_available_mw = 0.0;
};
TrancheCaps tranche_capacities(const ScenarioParams& p, const CapacityPath& path,
                               const BaseYearData& base, int year);

/// Prospective per-MW shapes for the projection years.
struct ReShapes {
    PerMwShape solar;  // rescaled to solar_cuf
    PerMwShape wind;   // derived and rescaled to wind_cuf
    PerMwShape dedicated_solar;  // rescaled to solar_kwh_per_kw_day / 24
};
ReShapes build_re_shapes(const ScenarioParams& p, const BaseYearData& base,
                         const PerMwShape& historical_solar);

/// Must-run supply (MW) for one year.
struct MustRun {
    HalfHourlySeries re, hydro, nuclear;
};
MustRun project_must_run(const ScenarioParams& p, const CapacityPath& path,
                         const BaseYearData& base, const ReShapes& shapes, int year);

}  // namespace gridlab
