#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "gridlab/dispatch.hpp"
#include "gridlab/newsupply.hpp"
#include "gridlab/scenario.hpp"

namespace gridlab {

/// base x (1 + escalation)^(year - 2021)
double fuel_price_path(double base, double escalation, int year);
/// Cell price in USD/kWh.
double battery_price_usd(const ScenarioParams& p, int year);
/// Cell price in Rs/kWh.
double battery_price_path(const ScenarioParams& p, int year);
/// Equal yearly payment amortizing `principal` over `n_years`.
double annuity_payment(double principal, double rate, int n_years);

/// Nominal prices per horizon year (index 0 = 2021).
struct PricePath {
    using Yearly = std::array<double, kHorizonYears>;
    Yearly coal_2019{}, coal_slack{}, gas_2019{}, gas_slack{};  // Rs/kWh
    Yearly new_fuel{};   // Rs/kWh for the scenario's NEW option
    Yearly biodiesel{};  // Rs/kWh
    Yearly battery_usd_per_kwh{}, battery_rs_per_kwh{};
    Yearly solar_capex{}, wind_capex{};  // Rs/MW
    Yearly solar_om{}, wind_om{};        // Rs/MW/yr
    std::array<Yearly, kNewOptions.size()> new_capex{};  // Rs/MW
};
PricePath build_price_path(const ScenarioParams& p);

enum class CostComponent : std::size_t {
    re_capex,
    re_om,
    coal_fuel,
    gas_fuel_2019,
    gas_fuel_nonapm,
    new_capex,
    new_fuel,
    new_om,
    biodiesel,
};
inline constexpr std::size_t kCostComponents = 9;
std::string_view component_name(CostComponent c);

/// Tranche energy of one year before and after the NEW feedback loops.
struct YearEnergy {
    int year = kFirstYear;
    std::array<double, kTrancheCount> before_mwh{};
    std::array<double, kTrancheCount> after_mwh{};
    double curtailment_after_mwh = 0.0;
};

struct CostReport {
    using Components = std::array<double, kCostComponents>;
    double npv_total = 0.0;
    Components npv_by_component{};
    std::array<Components, kHorizonYears> yearly{};  // nominal Rs
    std::optional<double> levelized_existing;         // Rs/kWh
    std::optional<double> levelized_new;

    double npv(CostComponent c) const { return npv_by_component[static_cast<std::size_t>(c)]; }
};

/// NPV of non-sunk system cost 2021-2030. Savings from NEW feedback loops
/// are booked under new_fuel.
CostReport npv_system_cost(const ScenarioParams& p, const CapacityPath& path,
                           std::span<const YearEnergy> energy, const NewSupplyPlan& plan,
                           const PricePath& prices);

/// Discounted cost over discounted energy; index 0 is undiscounted.
double levelized_cost(std::span<const double> costs, std::span<const double> energy,
                      double discount);

struct FrontierEntry {
    std::size_t index = 0;  // position in the scenario grid
    double npv_total = 0.0;
    double new_capacity_mw = 0.0;
    double curtailment_twh = 0.0;
    double re_2030 = 0.0;
    NewOption option = NewOption::battery_re;
};
/// Indices into `entries`, cheapest first; ties go to less NEW capacity, then
/// less curtailment, then grid position.
std::vector<std::size_t> frontier(std::span<const FrontierEntry> entries);

/// Cheapest entry per (re_2030, option) cell, cells in ascending order.
struct FrontierCell {
    double re_2030 = 0.0;
    NewOption option = NewOption::battery_re;
    std::size_t best = 0;  // index into entries
};
std::vector<FrontierCell> frontier_cells(std::span<const FrontierEntry> entries);

std::string cost_report_json(const CostReport& r);

}  // namespace gridlab
