#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "gridlab/scenario.hpp"
#include "gridlab/series.hpp"

namespace gridlab {

enum class Tranche : std::size_t {
    re,
    hydro,
    nuclear,
    coal_2019,
    coal_slack,
    gas_2019,
    gas_slack,
    new_supply,
};
inline constexpr std::size_t kTrancheCount = 8;
std::string_view tranche_name(Tranche t);

/// Slot-level despatch for one year. Every slot satisfies
/// sum(supply) + unmet == requirement.
struct DispatchYear {
    int year = kFirstYear;
    std::vector<double> requirement;  // busbar MW to serve (demand plus ISTS losses)
    std::array<std::vector<double>, kTrancheCount> supply;
    std::vector<double> re_available;
    std::vector<double> curtailment;       // all RE curtailment
    std::vector<double> flex_curtailment;  // the part forced by coal floors
    std::vector<double> unmet;

    // Per-slot tranche capacities.
    std::vector<double> coal_2019_cap, coal_slack_cap, gas_2019_cap, gas_slack_cap;

    // Merit-order state before coal floors were applied.
    struct PreFlex {
        std::vector<double> coal_2019, coal_slack, gas_2019, gas_slack, re, hydro;
    } preflex;

    std::vector<double> coal_daily_max;   // per day, pre-flex
    std::vector<double> coal_flex_floor;  // per day
    std::size_t relaxed_floor_slots = 0;
    bool flex_applied = false;

    std::size_t size() const noexcept { return requirement.size(); }
    std::size_t days() const noexcept { return requirement.size() / kSlotsPerDay; }
    std::vector<double>& of(Tranche t) { return supply[static_cast<std::size_t>(t)]; }
    const std::vector<double>& of(Tranche t) const { return supply[static_cast<std::size_t>(t)]; }
    double coal(std::size_t i) const {
        return of(Tranche::coal_2019)[i] + of(Tranche::coal_slack)[i];
    }
    double coal_cap(std::size_t i) const { return coal_2019_cap[i] + coal_slack_cap[i]; }

    double energy_twh(Tranche t) const;
    double requirement_twh() const;
    double curtailment_twh() const;
    double unmet_twh() const;
    double peak_unmet() const;
    /// Largest |sum(supply) + unmet - requirement| over all slots.
    double max_balance_error() const;
};

/// Returns (modified net demand, interim curtailment).
std::pair<HalfHourlySeries, HalfHourlySeries> net_demand(const HalfHourlySeries& demand,
                                                         const HalfHourlySeries& re,
                                                         const HalfHourlySeries& hydro,
                                                         const HalfHourlySeries& nuclear);

struct TrancheInput {
    std::string name;
    std::span<const double> capacity;
};
struct MeritResult {
    std::vector<std::vector<double>> take;  // one per tranche, in input order
    std::vector<double> unmet;
};
/// Greedy fill in the given order, each tranche capped per slot.
MeritResult merit_dispatch(std::span<const double> net, std::span<const TrancheInput> tranches);

/// Steps 2 and 3: nets must-run off the requirement and fills the fossil
/// tranches in the order coal_2019, gas_2019, coal_slack, gas_slack.
DispatchYear dispatch_year(const HalfHourlySeries& requirement, const MustRun& must_run,
                           const TrancheCaps& caps);

/// How one slot meets a coal floor: coal rises toward `min(floor, cap)` and
/// the same MW come out of gas_slack, gas_2019, RE, then hydro.
struct FlexAdjustment {
    double raise = 0.0;
    double from_gas_slack = 0.0;
    double from_gas_2019 = 0.0;
    double from_re = 0.0;
    double from_hydro = 0.0;
    bool relaxed = false;  // floor not reachable in this slot
};
FlexAdjustment flex_slot(double floor, double coal, double coal_cap, double gas_slack,
                         double gas_2019, double re, double hydro);

/// Daily coal part-load floors: floor = flex_limit x that day's pre-flex
/// maximum coal output.
DispatchYear apply_coal_flex(DispatchYear dy, double flex_limit);
/// Same as apply_coal_flex with explicit per-day floors (MW), applied to the
/// pre-flex state.
DispatchYear apply_coal_flex_with_floors(DispatchYear dy, std::span<const double> floors);

struct BufferReport {
    std::vector<double> headroom, required, shortfall;
    double max_shortfall() const;
};
/// Despatchable capacity per slot: coal and gas tranche capacities plus the
/// scheduled hydro and nuclear output plus `new_capacity_mw`.
std::vector<double> despatchable_capacity(const DispatchYear& dy, double new_capacity_mw = 0.0);
BufferReport buffer_check(const DispatchYear& dy, std::span<const double> demand,
                          std::span<const double> despatchable_cap, double grid_buffer);

/// Coal ramp classes in %/min: <=0.5, (0.5,1], (1,2], >2.
struct RampHistogram {
    std::array<std::size_t, 4> counts{};
    double max_ramp_pct_per_min = 0.0;
    std::size_t total() const { return counts[0] + counts[1] + counts[2] + counts[3]; }
};
/// Post-hoc audit; `nominal_coal_mw` is per day.
RampHistogram ramp_audit(const DispatchYear& dy, std::span<const double> nominal_coal_mw);
int ramp_class(double pct_per_min);

struct UnmetResult {
    std::vector<double> energy_unmet;  // MW per slot
    double capacity_requirement = 0.0; // MW
    std::size_t peak_slot = 0;
};
UnmetResult compute_unmet(const DispatchYear& dy, const BufferReport& buffer);

/// Slot-level CSV: slot, requirement, one column per tranche, curtailment, unmet.
void write_dispatch_csv(const DispatchYear& dy, const std::filesystem::path& path);
/// Values sorted descending, one per row (`rank,mw`).
void write_ldc_csv(std::span<const double> values, const std::filesystem::path& path);

}  // namespace gridlab
