#include "gridlab/dispatch.hpp"

#include <algorithm>
#include <cmath>

#include "gridlab/csv.hpp"
#include "gridlab/errors.hpp"
#include "gridlab/kernels.hpp"

namespace gridlab {

std::string_view tranche_name(Tranche t) {
    switch (t) {
        case Tranche::re: return "re";
        case Tranche::hydro: return "hydro";
        case Tranche::nuclear: return "nuclear";
        case Tranche::coal_2019: return "coal_2019";
        case Tranche::coal_slack: return "coal_slack";
        case Tranche::gas_2019: return "gas_2019";
        case Tranche::gas_slack: return "gas_slack";
        case Tranche::new_supply: return "new";
    }
    return "unknown";
}

double DispatchYear::energy_twh(Tranche t) const {
    return mwh_to_twh(kernels::active().sum(of(t)) * kHoursPerSlot);
}
double DispatchYear::requirement_twh() const {
    return mwh_to_twh(kernels::active().sum(requirement) * kHoursPerSlot);
}
double DispatchYear::curtailment_twh() const {
    return mwh_to_twh(kernels::active().sum(curtailment) * kHoursPerSlot);
}
double DispatchYear::unmet_twh() const {
    return mwh_to_twh(kernels::active().sum(unmet) * kHoursPerSlot);
}
double DispatchYear::peak_unmet() const { return kernels::active().max(unmet); }

double DispatchYear::max_balance_error() const {
    double worst = 0.0;
    for (std::size_t i = 0; i < size(); ++i) {
        double total = unmet[i];
        for (const auto& s : supply) total += s[i];
        worst = std::max(worst, std::abs(total - requirement[i]));
    }
    return worst;
}

std::pair<HalfHourlySeries, HalfHourlySeries> net_demand(const HalfHourlySeries& demand,
                                                         const HalfHourlySeries& re,
                                                         const HalfHourlySeries& hydro,
                                                         const HalfHourlySeries& nuclear) {
    const std::size_t n = demand.size();
    if (re.size() != n || hydro.size() != n || nuclear.size() != n) {
        throw ParameterError("net_demand inputs differ in length");
    }
    HalfHourlySeries net = HalfHourlySeries::zeros(demand.year, "net_demand");
    HalfHourlySeries curt = HalfHourlySeries::zeros(demand.year, "curtailment");
    net.values.resize(n);
    curt.values.resize(n);
    kernels::active().net_demand(demand.values, re.values, hydro.values, nuclear.values,
                                 net.values, curt.values);
    return {std::move(net), std::move(curt)};
}

MeritResult merit_dispatch(std::span<const double> net, std::span<const TrancheInput> tranches) {
    const auto& kt = kernels::active();
    MeritResult r;
    r.unmet.assign(net.begin(), net.end());
    r.take.reserve(tranches.size());
    for (const auto& t : tranches) {
        if (t.capacity.size() != net.size()) {
            throw ParameterError("tranche '" + t.name + "' capacity length differs");
        }
        std::vector<double> take(net.size());
        kt.fill_tranche(r.unmet, t.capacity, take);
        r.take.push_back(std::move(take));
    }
    return r;
}

DispatchYear dispatch_year(const HalfHourlySeries& requirement, const MustRun& must_run,
                           const TrancheCaps& caps) {
    const std::size_t n = requirement.size();
    if (caps.coal_2019.size() != n) throw ParameterError("tranche capacities differ in length");
    auto [net, curt] = net_demand(requirement, must_run.re, must_run.hydro, must_run.nuclear);

    DispatchYear dy;
    dy.year = requirement.year;
    dy.requirement = requirement.values;
    dy.re_available = must_run.re.values;
    dy.coal_2019_cap = caps.coal_2019;
    dy.coal_slack_cap = caps.coal_slack;
    dy.gas_2019_cap = caps.gas_2019;
    dy.gas_slack_cap = caps.gas_slack;

    auto& re = dy.of(Tranche::re);
    auto& hydro = dy.of(Tranche::hydro);
    auto& nuclear = dy.of(Tranche::nuclear);
    re.resize(n);
    hydro = must_run.hydro.values;
    nuclear = must_run.nuclear.values;
    for (std::size_t i = 0; i < n; ++i) {
        double excess = curt[i];
        const double from_re = std::min(excess, must_run.re[i]);
        re[i] = must_run.re[i] - from_re;
        excess -= from_re;
        // Hydro and nuclear alone above requirement: spill hydro, then nuclear.
        if (excess > 0.0) {
            const double h = std::min(excess, hydro[i]);
            hydro[i] -= h;
            nuclear[i] -= excess - h;
        }
    }

    const TrancheInput order[] = {
        {"coal_2019", caps.coal_2019},
        {"gas_2019", caps.gas_2019},
        {"coal_slack", caps.coal_slack},
        {"gas_slack", caps.gas_slack},
    };
    MeritResult m = merit_dispatch(net.values, order);
    dy.of(Tranche::coal_2019) = std::move(m.take[0]);
    dy.of(Tranche::gas_2019) = std::move(m.take[1]);
    dy.of(Tranche::coal_slack) = std::move(m.take[2]);
    dy.of(Tranche::gas_slack) = std::move(m.take[3]);
    dy.of(Tranche::new_supply).assign(n, 0.0);
    dy.unmet = std::move(m.unmet);

    dy.curtailment.resize(n);
    for (std::size_t i = 0; i < n; ++i) dy.curtailment[i] = dy.re_available[i] - re[i];
    dy.flex_curtailment.assign(n, 0.0);

    dy.preflex = {dy.of(Tranche::coal_2019), dy.of(Tranche::coal_slack), dy.of(Tranche::gas_2019),
                  dy.of(Tranche::gas_slack), re, hydro};
    const std::size_t days = dy.days();
    dy.coal_daily_max.assign(days, 0.0);
    for (std::size_t d = 0; d < days; ++d) {
        double m_day = 0.0;
        for (std::size_t s = d * kSlotsPerDay; s < (d + 1) * kSlotsPerDay; ++s) {
            m_day = std::max(m_day, dy.coal(s));
        }
        dy.coal_daily_max[d] = m_day;
    }
    dy.coal_flex_floor.assign(days, 0.0);
    return dy;
}

FlexAdjustment flex_slot(double floor, double coal, double coal_cap, double gas_slack,
                         double gas_2019, double re, double hydro) {
    FlexAdjustment a;
    const double target = std::min(floor, coal_cap);
    double need = target - coal;
    if (!(need > 0.0)) return a;
    const auto take = [&need](double available) {
        const double t = std::min(need, std::max(available, 0.0));
        need -= t;
        return t;
    };
    a.from_gas_slack = take(gas_slack);
    a.from_gas_2019 = take(gas_2019);
    a.from_re = take(re);
    a.from_hydro = take(hydro);
    a.raise = a.from_gas_slack + a.from_gas_2019 + a.from_re + a.from_hydro;
    a.relaxed = need > 0.0 || floor > coal_cap;
    return a;
}

DispatchYear apply_coal_flex(DispatchYear dy, double flex_limit) {
    std::vector<double> floors(dy.coal_daily_max.size());
    for (std::size_t d = 0; d < floors.size(); ++d) floors[d] = flex_limit * dy.coal_daily_max[d];
    return apply_coal_flex_with_floors(std::move(dy), floors);
}

DispatchYear apply_coal_flex_with_floors(DispatchYear dy, std::span<const double> floors) {
    if (floors.size() != dy.days()) throw ParameterError("one floor per day required");
    auto& c19 = dy.of(Tranche::coal_2019);
    auto& cs = dy.of(Tranche::coal_slack);
    auto& g19 = dy.of(Tranche::gas_2019);
    auto& gs = dy.of(Tranche::gas_slack);
    auto& re = dy.of(Tranche::re);
    auto& hydro = dy.of(Tranche::hydro);
    c19 = dy.preflex.coal_2019;
    cs = dy.preflex.coal_slack;
    g19 = dy.preflex.gas_2019;
    gs = dy.preflex.gas_slack;
    re = dy.preflex.re;
    hydro = dy.preflex.hydro;

    dy.relaxed_floor_slots = 0;
    dy.coal_flex_floor.assign(floors.begin(), floors.end());
    for (std::size_t i = 0; i < dy.size(); ++i) {
        const double floor = floors[i / kSlotsPerDay];
        const FlexAdjustment a =
            flex_slot(floor, c19[i] + cs[i], dy.coal_cap(i), gs[i], g19[i], re[i], hydro[i]);
        dy.flex_curtailment[i] = a.from_re;
        if (a.relaxed) ++dy.relaxed_floor_slots;
        if (a.raise <= 0.0) continue;
        const double to_2019 = std::min(a.raise, dy.coal_2019_cap[i] - c19[i]);
        c19[i] += to_2019;
        cs[i] += a.raise - to_2019;
        gs[i] -= a.from_gas_slack;
        g19[i] -= a.from_gas_2019;
        re[i] -= a.from_re;
        hydro[i] -= a.from_hydro;
    }
    for (std::size_t i = 0; i < dy.size(); ++i) dy.curtailment[i] = dy.re_available[i] - re[i];
    dy.flex_applied = true;
    return dy;
}

double BufferReport::max_shortfall() const { return kernels::active().max(shortfall); }

std::vector<double> despatchable_capacity(const DispatchYear& dy, double new_capacity_mw) {
    std::vector<double> cap(dy.size());
    for (std::size_t i = 0; i < dy.size(); ++i) {
        cap[i] = dy.coal_cap(i) + dy.gas_2019_cap[i] + dy.gas_slack_cap[i] + dy.preflex.hydro[i] +
                 dy.of(Tranche::nuclear)[i] + new_capacity_mw;
    }
    return cap;
}

BufferReport buffer_check(const DispatchYear& dy, std::span<const double> demand,
                          std::span<const double> despatchable_cap, double grid_buffer) {
    const std::size_t n = dy.size();
    if (demand.size() != n || despatchable_cap.size() != n) {
        throw ParameterError("buffer_check inputs differ in length");
    }
    std::vector<double> output(n);
    for (std::size_t i = 0; i < n; ++i) {
        output[i] = dy.coal(i) + dy.of(Tranche::gas_2019)[i] + dy.of(Tranche::gas_slack)[i] +
                    dy.of(Tranche::hydro)[i] + dy.of(Tranche::nuclear)[i] +
                    dy.of(Tranche::new_supply)[i];
    }
    BufferReport r;
    r.headroom.resize(n);
    r.required.resize(n);
    r.shortfall.resize(n);
    kernels::active().buffer_shortfall(despatchable_cap, output, demand, grid_buffer, r.headroom,
                                       r.required, r.shortfall);
    return r;
}

int ramp_class(double pct_per_min) {
    if (pct_per_min <= 0.5) return 0;
    if (pct_per_min <= 1.0) return 1;
    if (pct_per_min <= 2.0) return 2;
    return 3;
}

RampHistogram ramp_audit(const DispatchYear& dy, std::span<const double> nominal_coal_mw) {
    if (nominal_coal_mw.size() != dy.days()) throw ParameterError("one nominal value per day required");
    RampHistogram h;
    for (std::size_t i = 0; i + 1 < dy.size(); ++i) {
        const double nominal = std::max(nominal_coal_mw[i / kSlotsPerDay],
                                        nominal_coal_mw[(i + 1) / kSlotsPerDay]);
        const double delta = std::abs(dy.coal(i + 1) - dy.coal(i));
        if (!(nominal > 0.0)) {
            if (delta > 0.0 || dy.coal(i) > 0.0) {
                throw IntegrityError("day " + std::to_string(i / kSlotsPerDay) +
                                     " runs coal with zero nominal capacity");
            }
            ++h.counts[0];
            continue;
        }
        const double pct = delta / (30.0 * nominal) * 100.0;
        ++h.counts[static_cast<std::size_t>(ramp_class(pct))];
        h.max_ramp_pct_per_min = std::max(h.max_ramp_pct_per_min, pct);
    }
    return h;
}

UnmetResult compute_unmet(const DispatchYear& dy, const BufferReport& buffer) {
    if (buffer.shortfall.size() != dy.size()) throw ParameterError("buffer report length differs");
    UnmetResult r;
    r.energy_unmet = dy.unmet;
    for (std::size_t i = 0; i < dy.size(); ++i) {
        const double need = dy.unmet[i] + buffer.shortfall[i];
        if (need > r.capacity_requirement) {
            r.capacity_requirement = need;
            r.peak_slot = i;
        }
    }
    return r;
}

void write_dispatch_csv(const DispatchYear& dy, const std::filesystem::path& path) {
    std::vector<std::string> header{"slot", "requirement_mw"};
    for (std::size_t t = 0; t < kTrancheCount; ++t) {
        header.push_back(std::string(tranche_name(static_cast<Tranche>(t))) + "_mw");
    }
    header.insert(header.end(), {"unmet_mw", "curtailment_mw", "flex_curtailment_mw"});
    CsvWriter w(path, header);
    for (std::size_t i = 0; i < dy.size(); ++i) {
        w.cell(i).cell(dy.requirement[i]);
        for (const auto& s : dy.supply) w.cell(s[i]);
        w.cell(dy.unmet[i]).cell(dy.curtailment[i]).cell(dy.flex_curtailment[i]);
        w.end_row();
    }
}

void write_ldc_csv(std::span<const double> values, const std::filesystem::path& path) {
    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end(), std::greater<>());
    CsvWriter w(path, {"rank", "mw"});
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        w.cell(i).cell(sorted[i]);
        w.end_row();
    }
}

}  // namespace gridlab
