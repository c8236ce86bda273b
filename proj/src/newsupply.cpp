#include "gridlab/newsupply.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <json.hpp>
#include <limits>

#include "gridlab/csv.hpp"
#include "gridlab/errors.hpp"
#include "gridlab/kernels.hpp"

namespace gridlab {

namespace {

void require_same_length(std::size_t n, std::initializer_list<std::size_t> others,
                         std::string_view what) {
    for (std::size_t m : others) {
        if (m != n) throw ParameterError(std::string(what) + ": inputs differ in length");
    }
}

double span_max(std::span<const double> v) { return v.empty() ? 0.0 : kernels::active().max(v); }

}  // namespace

double BatterySpec::charge_eff() const {
    return efficiency_on_charge_only ? roundtrip_eff : std::sqrt(roundtrip_eff);
}
double BatterySpec::discharge_eff() const {
    return efficiency_on_charge_only ? 1.0 : std::sqrt(roundtrip_eff);
}
BatterySpec BatterySpec::scaled(double fraction) const {
    BatterySpec b = *this;
    b.energy_mwh *= fraction;
    b.inverter_mw *= fraction;
    b.size_fraction *= fraction;
    return b;
}

BatterySpec battery_template(const ScenarioParams& p) {
    BatterySpec b;
    b.dod_buffer = p.dod_buffer;
    b.roundtrip_eff = p.roundtrip_eff;
    b.efficiency_on_charge_only = p.efficiency_on_charge_only;
    return b;
}

std::vector<Cycle> battery_cycles(std::size_t n_slots, int boundary_slot) {
    if (boundary_slot < 0 || boundary_slot >= kSlotsPerDay) {
        throw ParameterError("cycle boundary slot must be in [0, 48)");
    }
    std::vector<Cycle> out;
    const std::size_t days = n_slots / kSlotsPerDay;
    std::size_t begin = 0;
    for (std::size_t d = 0; d < days; ++d) {
        const std::size_t end = d * kSlotsPerDay + static_cast<std::size_t>(boundary_slot);
        if (end > begin) out.push_back({begin, end, d});
        begin = end;
    }
    if (n_slots > begin) out.push_back({begin, n_slots, days == 0 ? 0 : days - 1});
    return out;
}

std::string_view charge_source_name(ChargeSource s) {
    switch (s) {
        case ChargeSource::none: return "none";
        case ChargeSource::curtailed_re: return "curtailed_re";
        case ChargeSource::dedicated_solar: return "dedicated_solar";
        case ChargeSource::both: return "both";
    }
    return "none";
}

ChargeSource SocTrace::source(std::size_t i) const {
    const bool c = charge_curtailed_mw[i] > 0.0;
    const bool s = charge_solar_mw[i] > 0.0;
    if (c && s) return ChargeSource::both;
    if (c) return ChargeSource::curtailed_re;
    if (s) return ChargeSource::dedicated_solar;
    return ChargeSource::none;
}
double SocTrace::secondary_unmet_mwh() const {
    return kernels::active().sum(secondary_unmet_mw) * kHoursPerSlot;
}
double SocTrace::peak_secondary_mw() const { return span_max(secondary_unmet_mw); }
double SocTrace::discharge_mwh() const {
    return kernels::active().sum(discharge_mw) * kHoursPerSlot;
}
double SocTrace::charge_mwh() const { return kernels::active().sum(charge_mw) * kHoursPerSlot; }

SocTrace simulate_soc(const BatterySpec& battery, std::span<const double> unmet,
                      std::span<const double> curtailed_re,
                      std::span<const double> dedicated_solar_mw) {
    const std::size_t n = unmet.size();
    require_same_length(n, {curtailed_re.size(), dedicated_solar_mw.size()}, "simulate_soc");
    SocTrace t;
    t.soc_mwh.resize(n);
    t.reported_soc_mwh.resize(n);
    t.charge_mw.assign(n, 0.0);
    t.charge_curtailed_mw.assign(n, 0.0);
    t.charge_solar_mw.assign(n, 0.0);
    t.discharge_mw.assign(n, 0.0);
    t.secondary_unmet_mw.assign(n, 0.0);

    const double e = battery.energy_mwh;
    const double floor = battery.floor_mwh();
    const double eta_c = battery.charge_eff();
    const double eta_d = battery.discharge_eff();
    double soc = e;
    double deficit = 0.0;
    t.initial_soc_mwh = soc;
    for (std::size_t i = 0; i < n; ++i) {
        const double u = unmet[i];
        if (u > 0.0) {
            const double deliverable =
                std::min(battery.inverter_mw, std::max(0.0, soc - floor) * eta_d / kHoursPerSlot);
            const double d = std::min(u, deliverable);
            soc -= d * kHoursPerSlot / eta_d;
            t.discharge_mw[i] = d;
            t.secondary_unmet_mw[i] = u - d;
            deficit += (u - d) * kHoursPerSlot / eta_d;
        } else {
            double cap = std::min({battery.inverter_mw, e, (e - soc) / (eta_c * kHoursPerSlot)});
            cap = std::max(cap, 0.0);
            const double from_curt = std::min(std::max(curtailed_re[i], 0.0), cap);
            const double from_solar = std::min(std::max(dedicated_solar_mw[i], 0.0), cap - from_curt);
            const double charge = from_curt + from_solar;
            t.charge_curtailed_mw[i] = from_curt;
            t.charge_solar_mw[i] = from_solar;
            t.charge_mw[i] = charge;
            soc = std::min(e, soc + charge * eta_c * kHoursPerSlot);
            if (charge > 0.0) deficit = 0.0;
        }
        t.soc_mwh[i] = soc;
        t.reported_soc_mwh[i] = soc - deficit;
    }
    return t;
}

BatterySpec size_battery(std::span<const double> unmet, std::span<const double> buffer_shortfall,
                         const ScenarioParams& p, double size_fraction) {
    if (!(size_fraction > 0.0)) throw ParameterError("battery size_fraction must be positive");
    require_same_length(unmet.size(), {buffer_shortfall.size()}, "size_battery");
    BatterySpec b = battery_template(p);
    double inverter = 0.0;
    for (std::size_t i = 0; i < unmet.size(); ++i) {
        inverter = std::max(inverter, unmet[i] + buffer_shortfall[i]);
    }
    double worst_cycle = 0.0;
    for (const Cycle& c : battery_cycles(unmet.size(), p.cycle_boundary_slot)) {
        double e = 0.0;
        for (std::size_t i = c.begin; i < c.end; ++i) e += unmet[i] * kHoursPerSlot;
        worst_cycle = std::max(worst_cycle, e);
    }
    const double need = std::max(worst_cycle, inverter * kHoursPerSlot);
    b.inverter_mw = inverter;
    b.energy_mwh = need / ((1.0 - b.dod_buffer) * b.discharge_eff());
    return b.scaled(size_fraction);
}

namespace {

std::vector<double> solar_output(const PerMwShape& shape, double gw) {
    std::vector<double> out(shape.size());
    kernels::active().scale(shape.values, gw * 1000.0, out);
    return out;
}

// Energy missing from full at the end of every cycle.
double recharge_deficit(const SocTrace& t, double energy_mwh, std::span<const Cycle> cycles) {
    double total = 0.0;
    for (const Cycle& c : cycles) total += energy_mwh - t.soc_mwh[c.end - 1];
    return total;
}

// Smallest grid point in [lo, hi] (step `tol`) satisfying a monotone predicate
// known to hold at hi.
double bisect_gw(double lo, double hi, double tol, const std::function<bool(double)>& ok) {
    if (ok(lo)) return lo;
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        if (ok(mid)) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    return hi;
}

}  // namespace

DedicatedSolarSizing size_dedicated_solar(const BatterySpec& battery,
                                          std::span<const double> curtailed_re,
                                          std::span<const double> unmet,
                                          const PerMwShape& solar_shape, double extra,
                                          int boundary_slot) {
    require_same_length(unmet.size(), {curtailed_re.size(), solar_shape.size()},
                        "size_dedicated_solar");
    if (extra < 0.0 || extra > 1.0) throw ParameterError("dedicated solar extra must be in [0, 1]");
    DedicatedSolarSizing r;
    if (battery.energy_mwh <= 0.0 || battery.inverter_mw <= 0.0) return r;

    const auto cycles = battery_cycles(unmet.size(), boundary_slot);
    const auto run = [&](double gw) {
        return simulate_soc(battery, unmet, curtailed_re, solar_output(solar_shape, gw));
    };
    const double peak_shape = span_max(solar_shape.values);
    double unmet_mwh = 0.0;
    for (double u : unmet) unmet_mwh += u * kHoursPerSlot;
    const double sec_tol = 1e-9 * unmet_mwh + 1e-6;

    if (peak_shape <= 0.0) {
        r.secondary_at_max_mwh = run(0.0).secondary_unmet_mwh();
        r.infeasible = battery.size_fraction >= 1.0 && r.secondary_at_max_mwh > sec_tol;
        return r;
    }

    const double upper_gw =
        20.0 * std::max(battery.inverter_mw, battery.energy_mwh) / peak_shape / 1000.0;
    const double best_deficit = recharge_deficit(run(upper_gw), battery.energy_mwh, cycles);
    const double deficit_tol = 1e-3 * battery.energy_mwh * static_cast<double>(cycles.size());
    r.max_gw = bisect_gw(0.0, upper_gw, kDedicatedSolarTolGw, [&](double gw) {
        return recharge_deficit(run(gw), battery.energy_mwh, cycles) <= best_deficit + deficit_tol;
    });
    r.secondary_at_max_mwh = run(r.max_gw).secondary_unmet_mwh();
    const double target = r.secondary_at_max_mwh + sec_tol;
    r.min_gw = bisect_gw(0.0, r.max_gw, kDedicatedSolarTolGw,
                         [&](double gw) { return run(gw).secondary_unmet_mwh() <= target; });
    r.infeasible = battery.size_fraction >= 1.0 && r.secondary_at_max_mwh > sec_tol;
    r.chosen_gw = r.min_gw + extra * (r.max_gw - r.min_gw);
    return r;
}

Residual undersize_residual(std::span<const double> unmet, std::span<const double> buffer_shortfall,
                            double capacity_net_mw, double biodiesel_aux) {
    require_same_length(unmet.size(), {buffer_shortfall.size()}, "undersize_residual");
    Residual r;
    r.secondary_unmet_mw.resize(unmet.size());
    double peak = 0.0;
    for (std::size_t i = 0; i < unmet.size(); ++i) {
        const double sec = std::max(0.0, unmet[i] - capacity_net_mw);
        r.secondary_unmet_mw[i] = sec;
        r.secondary_unmet_mwh += sec * kHoursPerSlot;
        peak = std::max({peak, sec, unmet[i] + buffer_shortfall[i] - capacity_net_mw});
    }
    r.biodiesel_mw = peak / (1.0 - biodiesel_aux);
    return r;
}

Residual battery_residual(const SocTrace& soc, std::span<const double> unmet,
                          std::span<const double> buffer_shortfall, const BatterySpec& battery,
                          double biodiesel_aux) {
    require_same_length(unmet.size(), {buffer_shortfall.size(), soc.size()}, "battery_residual");
    Residual r;
    r.secondary_unmet_mw = soc.secondary_unmet_mw;
    double peak = 0.0;
    for (std::size_t i = 0; i < unmet.size(); ++i) {
        const double sec = soc.secondary_unmet_mw[i];
        r.secondary_unmet_mwh += sec * kHoursPerSlot;
        peak = std::max({peak, sec, unmet[i] + buffer_shortfall[i] - battery.inverter_mw});
    }
    r.biodiesel_mw = peak / (1.0 - biodiesel_aux);
    return r;
}

CapacitySchedule size_new_capacity(std::span<const double> required_net_mw, double aux,
                                   bool thermal) {
    if (aux < 0.0 || aux >= 1.0) throw ParameterError("aux must be in [0, 1)");
    CapacitySchedule s;
    const double gross_factor = thermal ? 1.0 / (1.0 - aux) : 1.0;
    double installed = 0.0;
    double prev_gross = 0.0;
    for (double req : required_net_mw) {
        installed = std::max(installed, std::max(req, 0.0));
        const double gross = installed * gross_factor;
        s.required_net_mw.push_back(req);
        s.installed_net_mw.push_back(installed);
        s.installed_gross_mw.push_back(gross);
        s.increment_gross_mw.push_back(gross - prev_gross);
        prev_gross = gross;
    }
    return s;
}

double lowered_daily_max(std::span<const double> coal_day_mw, double displaced_mwh) {
    std::vector<double> c(coal_day_mw.begin(), coal_day_mw.end());
    std::sort(c.begin(), c.end(), std::greater<>());
    if (c.empty()) return 0.0;
    if (!(displaced_mwh > 0.0)) return c.front();
    const double target = displaced_mwh / kHoursPerSlot;  // MW-slots
    double top_sum = 0.0;
    for (std::size_t k = 1; k <= c.size(); ++k) {
        top_sum += c[k - 1];
        const double next = k < c.size() ? c[k] : 0.0;
        const double kd = static_cast<double>(k);
        if (top_sum - kd * next >= target) return std::max((top_sum - target) / kd, next);
    }
    return 0.0;
}

PeakBonus coal_peak_bonus(const DispatchYear& dy, std::size_t day, double coal_displaced_mwh,
                          double flex_limit) {
    if (day >= dy.days()) throw ParameterError("day out of range");
    const std::size_t b = day * kSlotsPerDay;
    std::vector<double> coal(kSlotsPerDay);
    for (std::size_t s = 0; s < kSlotsPerDay; ++s) coal[s] = dy.coal(b + s);
    PeakBonus r;
    r.old_max_mw = *std::max_element(coal.begin(), coal.end());
    r.new_max_mw = lowered_daily_max(coal, coal_displaced_mwh);
    r.old_floor_mw = dy.coal_flex_floor[day];
    r.new_floor_mw = std::min(r.old_floor_mw, flex_limit * r.new_max_mw);
    const auto& pf = dy.preflex;
    for (std::size_t i = b; i < b + kSlotsPerDay; ++i) {
        const double coal_pf = pf.coal_2019[i] + pf.coal_slack[i];
        const FlexAdjustment a_old = flex_slot(r.old_floor_mw, coal_pf, dy.coal_cap(i),
                                               pf.gas_slack[i], pf.gas_2019[i], pf.re[i],
                                               pf.hydro[i]);
        const FlexAdjustment a_new = flex_slot(r.new_floor_mw, coal_pf, dy.coal_cap(i),
                                               pf.gas_slack[i], pf.gas_2019[i], pf.re[i],
                                               pf.hydro[i]);
        r.avoided_mwh += (a_old.from_re - a_new.from_re) * kHoursPerSlot;
    }
    return r;
}

namespace {

// Lowers coal in slot i by `mw`, slack first.
void reduce_coal(DispatchYear& dy, std::size_t i, double mw) {
    auto& cs = dy.of(Tranche::coal_slack)[i];
    auto& c19 = dy.of(Tranche::coal_2019)[i];
    const double from_slack = std::min(mw, cs);
    cs -= from_slack;
    c19 = std::max(0.0, c19 - (mw - from_slack));
}

}  // namespace

Displacement displace_with_battery(DispatchYear& dy, const SocTrace& soc,
                                   const BatterySpec& battery,
                                   std::span<const double> dedicated_solar_mw, double flex_limit,
                                   int boundary_slot) {
    const std::size_t n = dy.size();
    require_same_length(n, {soc.size(), dedicated_solar_mw.size()}, "displace_with_battery");
    Displacement out;
    out.extra_discharge_mw.assign(n, 0.0);
    out.extra_charge_mw.assign(n, 0.0);
    if (battery.energy_mwh <= 0.0 || battery.inverter_mw <= 0.0) return out;

    const double eta_c = battery.charge_eff();
    const double eta_d = battery.discharge_eff();
    const double floor_mwh = battery.floor_mwh();
    std::vector<double> extra_charge_curt(n, 0.0);

    // Unused charging MW in slot i given the current dispatch.
    const auto unused_charge = [&](std::size_t i, double* from_curt) {
        if (soc.discharge_mw[i] > 0.0 || out.extra_discharge_mw[i] > 0.0) {
            *from_curt = 0.0;
            return 0.0;
        }
        const double curt =
            std::max(0.0, dy.curtailment[i] - soc.charge_curtailed_mw[i] - extra_charge_curt[i]);
        const double solar = std::max(0.0, dedicated_solar_mw[i] - soc.charge_solar_mw[i] -
                                               (out.extra_charge_mw[i] - extra_charge_curt[i]));
        const double used = soc.charge_mw[i] + out.extra_charge_mw[i];
        const double cap = std::max(
            0.0, std::min(battery.inverter_mw - used, battery.energy_mwh - used));
        *from_curt = std::min(curt, cap);
        return std::min(curt + solar, cap);
    };

    const auto cycles = battery_cycles(n, boundary_slot);
    std::size_t ci = 0;
    for (std::size_t day = 0; day < dy.days(); ++day) {
        // Spare stored energy of every cycle ending today.
        std::vector<std::pair<std::size_t, double>> day_cycles;
        double spare = 0.0;
        for (; ci < cycles.size() && cycles[ci].day == day; ++ci) {
            const Cycle& c = cycles[ci];
            double min_soc = c.begin == 0 ? soc.initial_soc_mwh : soc.soc_mwh[c.begin - 1];
            double capability = 0.0;
            for (std::size_t i = c.begin; i < c.end; ++i) {
                min_soc = std::min(min_soc, soc.soc_mwh[i]);
                double unused_curt = 0.0;
                capability += unused_charge(i, &unused_curt) * kHoursPerSlot * eta_c;
            }
            const double stored = std::max(0.0, std::min(min_soc - floor_mwh, capability));
            day_cycles.emplace_back(ci, stored);
            spare += stored * eta_d;
        }
        if (!(spare > 0.0)) continue;
        out.spare_mwh += spare;

        const std::size_t b = day * kSlotsPerDay;
        const std::size_t e = b + kSlotsPerDay;
        std::vector<double> headroom(kSlotsPerDay, 0.0);
        for (std::size_t i = b; i < e; ++i) {
            double unused_curt = 0.0;
            const bool charging = soc.charge_mw[i] > 0.0 || unused_charge(i, &unused_curt) > 0.0;
            if (!charging) headroom[i - b] = std::max(0.0, battery.inverter_mw - soc.discharge_mw[i]);
        }

        // Non-APM gas first.
        double remaining = spare;
        auto& gs = dy.of(Tranche::gas_slack);
        auto& nw = dy.of(Tranche::new_supply);
        for (std::size_t i = b; i < e && remaining > 0.0; ++i) {
            const double x = std::min({gs[i], headroom[i - b], remaining / kHoursPerSlot});
            if (!(x > 0.0)) continue;
            gs[i] -= x;
            nw[i] += x;
            out.extra_discharge_mw[i] += x;
            headroom[i - b] -= x;
            remaining -= x * kHoursPerSlot;
            out.gas_mwh += x * kHoursPerSlot;
        }

        // Then the top of the coal curve, never below the old floor.
        double coal_mwh = 0.0;
        if (remaining > 0.0) {
            std::vector<double> coal(kSlotsPerDay);
            double m_lo = dy.coal_flex_floor[day];
            for (std::size_t s = 0; s < kSlotsPerDay; ++s) {
                coal[s] = dy.coal(b + s);
                m_lo = std::max(m_lo, coal[s] - headroom[s]);
            }
            double shavable = 0.0;
            for (double c : coal) shavable += std::max(0.0, c - m_lo) * kHoursPerSlot;
            coal_mwh = std::min(remaining, shavable);
        }
        // Recharge what was spent, cycle by cycle, curtailed RE first.
        const auto recharge = [&](double spent_mwh) {
            double to_store = spent_mwh / eta_d;
            for (const auto& [idx, stored] : day_cycles) {
                double take = std::min(to_store, stored);
                to_store -= take;
                const Cycle& c = cycles[idx];
                for (std::size_t i = c.begin; i < c.end && take > 0.0; ++i) {
                    double unused_curt = 0.0;
                    const double mw = unused_charge(i, &unused_curt);
                    const double x = std::min(mw, take / (kHoursPerSlot * eta_c));
                    if (!(x > 0.0)) continue;
                    out.extra_charge_mw[i] += x;
                    extra_charge_curt[i] += std::min(x, unused_curt);
                    take -= x * kHoursPerSlot * eta_c;
                }
            }
        };
        if (!(coal_mwh > 0.0)) {
            recharge(spare - remaining);
            continue;
        }

        const PeakBonus pb = coal_peak_bonus(dy, day, coal_mwh, flex_limit);
        for (std::size_t i = b; i < e; ++i) {
            const double shave = std::max(0.0, dy.coal(i) - pb.new_max_mw);
            if (shave > 0.0) {
                reduce_coal(dy, i, shave);
                nw[i] += shave;
                out.extra_discharge_mw[i] += shave;
            }
        }
        remaining -= coal_mwh;
        out.coal_mwh += coal_mwh;
        recharge(spare - remaining);

        // Lower floor: undo part of the flex raise, RE limited to what the
        // battery is not already taking.
        const auto& pf = dy.preflex;
        auto& re = dy.of(Tranche::re);
        auto& hydro = dy.of(Tranche::hydro);
        auto& g19 = dy.of(Tranche::gas_2019);
        for (std::size_t i = b; i < e; ++i) {
            const double coal_pf = pf.coal_2019[i] + pf.coal_slack[i];
            const FlexAdjustment a_old =
                flex_slot(pb.old_floor_mw, coal_pf, dy.coal_cap(i), pf.gas_slack[i],
                          pf.gas_2019[i], pf.re[i], pf.hydro[i]);
            const FlexAdjustment a_new =
                flex_slot(pb.new_floor_mw, coal_pf, dy.coal_cap(i), pf.gas_slack[i],
                          pf.gas_2019[i], pf.re[i], pf.hydro[i]);
            const double free_curt = std::max(
                0.0, dy.curtailment[i] - soc.charge_curtailed_mw[i] - extra_charge_curt[i]);
            const double r_re = std::min(std::max(0.0, a_old.from_re - a_new.from_re), free_curt);
            const double r_h = std::max(0.0, a_old.from_hydro - a_new.from_hydro);
            const double r_g19 = std::max(0.0, a_old.from_gas_2019 - a_new.from_gas_2019);
            const double r_gs = std::max(0.0, a_old.from_gas_slack - a_new.from_gas_slack);
            const double drop = r_re + r_h + r_g19 + r_gs;
            if (!(drop > 0.0)) continue;
            reduce_coal(dy, i, drop);
            re[i] += r_re;
            hydro[i] += r_h;
            g19[i] += r_g19;
            gs[i] += r_gs;
            dy.curtailment[i] = dy.re_available[i] - re[i];
            dy.flex_curtailment[i] = std::max(0.0, dy.flex_curtailment[i] - r_re);
            out.bonus_mwh += r_re * kHoursPerSlot;
        }
        dy.coal_flex_floor[day] = pb.new_floor_mw;
    }
    return out;
}

NewCoalDisplacement displace_gas_with_new_coal(DispatchYear& dy, double new_coal_net_mw,
                                               double flex_limit) {
    NewCoalDisplacement out;
    auto& gs = dy.of(Tranche::gas_slack);
    auto& g19 = dy.of(Tranche::gas_2019);
    auto& nw = dy.of(Tranche::new_supply);
    auto& re = dy.of(Tranche::re);
    auto& hydro = dy.of(Tranche::hydro);
    auto& c19 = dy.of(Tranche::coal_2019);
    auto& cs = dy.of(Tranche::coal_slack);
    for (std::size_t i = 0; i < dy.size(); ++i) {
        const double x = std::min(std::max(0.0, new_coal_net_mw - nw[i]), gs[i]);
        if (!(x > 0.0)) continue;
        gs[i] -= x;
        nw[i] += x;
        out.gas_mwh += x * kHoursPerSlot;
    }
    for (std::size_t d = 0; d < dy.days(); ++d) {
        const std::size_t b = d * kSlotsPerDay;
        double m = 0.0;
        for (std::size_t i = b; i < b + kSlotsPerDay; ++i) m = std::max(m, dy.coal(i) + nw[i]);
        const double floor = std::max(dy.coal_flex_floor[d], flex_limit * m);
        dy.coal_flex_floor[d] = floor;
        for (std::size_t i = b; i < b + kSlotsPerDay; ++i) {
            const FlexAdjustment a = flex_slot(floor, dy.coal(i) + nw[i],
                                               dy.coal_cap(i) + new_coal_net_mw, gs[i], g19[i],
                                               re[i], hydro[i]);
            if (a.relaxed) ++dy.relaxed_floor_slots;
            if (!(a.raise > 0.0)) continue;
            double rest = a.raise;
            const double to_new = std::min(rest, std::max(0.0, new_coal_net_mw - nw[i]));
            nw[i] += to_new;
            rest -= to_new;
            const double to_2019 = std::min(rest, std::max(0.0, dy.coal_2019_cap[i] - c19[i]));
            c19[i] += to_2019;
            cs[i] += rest - to_2019;
            gs[i] -= a.from_gas_slack;
            g19[i] -= a.from_gas_2019;
            re[i] -= a.from_re;
            hydro[i] -= a.from_hydro;
            dy.curtailment[i] = dy.re_available[i] - re[i];
            dy.flex_curtailment[i] += a.from_re;
            out.extra_flex_curtailment_mwh += a.from_re * kHoursPerSlot;
        }
    }
    return out;
}

double NewSupplyPlan::peak_capacity_mw() const {
    double m = 0.0;
    for (const auto& y : years) m = std::max(m, y.installed_gross_mw);
    return m;
}

double NewSupplyPlan::secondary_unmet_twh(int year) const {
    for (const auto& y : years) {
        if (y.year == year) return mwh_to_twh(y.secondary_unmet_mwh);
    }
    throw IntegrityError("no NEW plan for year " + std::to_string(year));
}

bool NewSupplyPlan::infeasible() const {
    return std::any_of(years.begin(), years.end(),
                       [](const YearPlan& y) { return y.solar_sizing.infeasible; });
}

void write_soc_csv(const SocTrace& soc, const std::filesystem::path& path) {
    CsvWriter w(path, {"slot", "soc_mwh", "reported_soc_mwh", "charge_mw", "discharge_mw",
                       "secondary_unmet_mw", "source"});
    for (std::size_t i = 0; i < soc.size(); ++i) {
        w.cell(i)
            .cell(soc.soc_mwh[i])
            .cell(soc.reported_soc_mwh[i])
            .cell(soc.charge_mw[i])
            .cell(soc.discharge_mw[i])
            .cell(soc.secondary_unmet_mw[i])
            .cell(charge_source_name(soc.source(i)));
        w.end_row();
    }
}

std::string plan_json(const NewSupplyPlan& plan) {
    using nlohmann::ordered_json;
    ordered_json j;
    j["option"] = std::string(option_name(plan.option));
    j["peak_capacity_mw"] = plan.peak_capacity_mw();
    j["infeasible"] = plan.infeasible();
    ordered_json years = ordered_json::array();
    for (const auto& y : plan.years) {
        ordered_json r;
        r["year"] = y.year;
        r["required_net_mw"] = y.required_net_mw;
        r["installed_net_mw"] = y.installed_net_mw;
        r["installed_gross_mw"] = y.installed_gross_mw;
        r["increment_gross_mw"] = y.increment_gross_mw;
        if (plan.option == NewOption::battery_re) {
            r["battery_energy_mwh"] = y.battery.energy_mwh;
            r["battery_inverter_mw"] = y.battery.inverter_mw;
            r["dedicated_solar_gw"] = y.dedicated_solar_gw;
            r["dedicated_solar_min_gw"] = y.solar_sizing.min_gw;
            r["dedicated_solar_max_gw"] = y.solar_sizing.max_gw;
        }
        r["new_output_twh"] = mwh_to_twh(y.new_output_mwh);
        r["secondary_unmet_twh"] = mwh_to_twh(y.secondary_unmet_mwh);
        r["biodiesel_mw"] = y.biodiesel_mw;
        r["displaced_gas_nonapm_twh"] = mwh_to_twh(y.displaced_gas_mwh);
        r["displaced_coal_twh"] = mwh_to_twh(y.displaced_coal_mwh);
        r["bonus_curtailment_avoided_twh"] = mwh_to_twh(y.bonus_mwh);
        years.push_back(std::move(r));
    }
    j["years"] = std::move(years);
    return j.dump(2);
}

}  // namespace gridlab
