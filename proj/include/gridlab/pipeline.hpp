#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "gridlab/dispatch.hpp"
#include "gridlab/economics.hpp"
#include "gridlab/newsupply.hpp"
#include "gridlab/scenario.hpp"
#include "gridlab/shapes.hpp"

namespace gridlab {

/// Cleaned base-year data plus the historical per-MW solar shape.
struct BaseData {
    BaseYearData year;
    PerMwShape solar;
};
/// Deterministic synthetic base year for `seed`.
BaseData synthetic_base(std::uint64_t seed, double peakiness = 1.0);
/// `timeseries.csv` and `solar_shape.csv` from `dir`, gap-filled and with RE
/// rescaled to `re_annual_target_gwh` (0 keeps the observed RE energy).
BaseData load_base(const std::filesystem::path& dir, int year, double re_annual_target_gwh = 0.0);

/// Per-year aggregates kept for every scenario.
struct YearSummary {
    int year = kFirstYear;
    YearEnergy energy;
    double requirement_mwh = 0.0;
    double curtailment_before_mwh = 0.0;
    double curtailment_after_mwh = 0.0;
    double flex_curtailment_mwh = 0.0;
    double unmet_mwh = 0.0;  // before NEW
    double peak_unmet_mw = 0.0;
    double capacity_requirement_mw = 0.0;
    double coal_capacity_mw = 0.0;  // installed, after FGD
    double coal_peak_mw = 0.0;
    std::size_t relaxed_floor_slots = 0;
    double balance_error_before = 0.0;
    double balance_error_after = 0.0;
    RampHistogram ramp;
};

/// Slot-level state for one year, kept only on request.
struct YearDetail {
    DispatchYear before;  // post-flex, before NEW
    DispatchYear after;   // with NEW and its feedback loops
    BufferReport buffer;
    std::vector<double> unmet;
    std::optional<SocTrace> soc;
};

struct ScenarioResult {
    ScenarioParams params;
    CapacityPath path;
    std::vector<YearSummary> years;
    NewSupplyPlan plan;
    CostReport cost;
    std::optional<YearDetail> detail;
};

/// Steps 1-6 for one grid point.
ScenarioResult run_scenario(const ScenarioParams& p, const BaseData& base,
                            std::optional<int> detail_year = std::nullopt);

struct SweepOutcome {
    std::size_t index = 0;
    std::optional<ScenarioResult> result;
    std::string error;  // set when result is empty
};

/// Runs every grid point on up to `parallelism` worker threads. `sink` is
/// called on the calling thread in grid order.
void run_sweep(const ParamGrid& grid, const BaseData& base, unsigned parallelism,
               std::optional<int> detail_year,
               const std::function<void(SweepOutcome&&)>& sink);

}  // namespace gridlab
