#include "gridlab/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <condition_variable>
#include <exception>
#include <map>
#include <mutex>
#include <thread>

#include "gridlab/errors.hpp"
#include "gridlab/kernels.hpp"

namespace gridlab {

BaseData synthetic_base(std::uint64_t seed, double peakiness) {
    return {synth_shapes(seed, peakiness), synth_solar_shape(seed)};
}

BaseData load_base(const std::filesystem::path& dir, int year, double re_annual_target_gwh) {
    const BaseYearData raw = load_timeseries_csv(dir / "timeseries.csv", year);
    BaseData out;
    const double target = re_annual_target_gwh > 0.0
                              ? re_annual_target_gwh
                              : mwh_to_gwh(raw.fuel(Fuel::re).energy_mwh());
    out.year = clean_series(raw, 4, target);
    out.solar = load_shape_csv(dir / "solar_shape.csv");
    if (out.solar.size() != out.year.size()) {
        throw IntegrityError("solar_shape.csv has " + std::to_string(out.solar.size()) +
                             " slots, timeseries.csv has " + std::to_string(out.year.size()));
    }
    return out;
}

namespace {

double energy_mwh(std::span<const double> mw) { return kernels::active().sum(mw) * kHoursPerSlot; }

std::array<double, kTrancheCount> tranche_energy(const DispatchYear& dy) {
    std::array<double, kTrancheCount> e{};
    for (std::size_t t = 0; t < kTrancheCount; ++t) e[t] = energy_mwh(dy.supply[t]);
    return e;
}

std::vector<double> shape_for_year(const PerMwShape& shape, int base_year, int year) {
    return map_to_year(HalfHourlySeries(base_year, shape.values), year).values;
}

}  // namespace

ScenarioResult run_scenario(const ScenarioParams& p, const BaseData& base,
                            std::optional<int> detail_year) {
    p.validate();
    ScenarioResult r;
    r.params = p;
    r.path = build_capacity_path(p, &base.year);
    const ReShapes shapes = build_re_shapes(p, base.year, base.solar);
    const NewTechParams& tech = p.tech(p.new_option);
    const NewTechParams& bio = p.biodiesel();
    const bool battery = p.new_option == NewOption::battery_re;
    const double fraction = battery ? p.battery_size_fraction
                                    : (p.new_option == NewOption::coal ? p.new_coal_size_fraction
                                                                       : 1.0);
    r.plan.option = p.new_option;

    double full_energy = 0.0, full_inverter = 0.0, full_net = 0.0;
    double solar_gw = 0.0, biodiesel_mw = 0.0;
    double prev_energy = 0.0, prev_gross = 0.0;

    for (int year = kFirstYear; year <= kLastYear; ++year) {
        const std::size_t k = CapacityPath::index(year);
        HalfHourlySeries req = project_demand(p, base.year, year);
        kernels::active().scale(req.values, 1.0 + p.ists_losses, req.values);
        const MustRun mr = project_must_run(p, r.path, base.year, shapes, year);
        const TrancheCaps caps = tranche_capacities(p, r.path, base.year, year);
        DispatchYear dy = apply_coal_flex(dispatch_year(req, mr, caps), p.flex_limit);
        const BufferReport buf =
            buffer_check(dy, req.values, despatchable_capacity(dy), p.grid_buffer);
        const UnmetResult um = compute_unmet(dy, buf);
        const std::vector<double>& u = um.energy_unmet;

        YearSummary ys;
        ys.year = year;
        ys.requirement_mwh = energy_mwh(dy.requirement);
        ys.curtailment_before_mwh = energy_mwh(dy.curtailment);
        ys.flex_curtailment_mwh = energy_mwh(dy.flex_curtailment);
        ys.unmet_mwh = energy_mwh(u);
        ys.peak_unmet_mw = dy.peak_unmet();
        ys.capacity_requirement_mw = um.capacity_requirement;
        ys.coal_capacity_mw = r.path.coal[k] * 1000.0;
        ys.relaxed_floor_slots = dy.relaxed_floor_slots;
        ys.balance_error_before = dy.max_balance_error();
        ys.ramp = ramp_audit(dy, dy.coal_daily_max);
        ys.energy.year = year;
        ys.energy.before_mwh = tranche_energy(dy);

        YearPlan yp;
        yp.year = year;
        yp.required_net_mw = um.capacity_requirement;
        DispatchYear after = dy;
        std::optional<SocTrace> soc_kept;
        Residual res;
        if (battery) {
            const BatterySpec full = size_battery(u, buf.shortfall, p, 1.0);
            full_energy = std::max(full_energy, full.energy_mwh);
            full_inverter = std::max(full_inverter, full.inverter_mw);
            BatterySpec bat = battery_template(p);
            bat.energy_mwh = full_energy;
            bat.inverter_mw = full_inverter;
            bat = bat.scaled(fraction);

            PerMwShape dshape;
            dshape.values = shape_for_year(shapes.dedicated_solar, base.year.year(), year);
            dshape.achieved_cuf = shapes.dedicated_solar.achieved_cuf;
            yp.solar_sizing = size_dedicated_solar(bat, dy.curtailment, u, dshape,
                                                   p.dedicated_solar_extra, p.cycle_boundary_slot);
            const double prev_solar = solar_gw;
            solar_gw = std::max(solar_gw, yp.solar_sizing.chosen_gw);
            std::vector<double> dsol(u.size());
            kernels::active().scale(dshape.values, solar_gw * 1000.0, dsol);

            SocTrace soc = simulate_soc(bat, u, dy.curtailment, dsol);
            after.of(Tranche::new_supply) = soc.discharge_mw;
            after.unmet = soc.secondary_unmet_mw;
            const Displacement d =
                displace_with_battery(after, soc, bat, dsol, p.flex_limit, p.cycle_boundary_slot);
            res = battery_residual(soc, u, buf.shortfall, bat, bio.aux);

            yp.battery = bat;
            yp.battery_energy_increment_mwh = bat.energy_mwh - prev_energy;
            prev_energy = bat.energy_mwh;
            yp.installed_net_mw = bat.inverter_mw;
            yp.installed_gross_mw = bat.inverter_mw;
            yp.dedicated_solar_gw = solar_gw;
            yp.dedicated_solar_increment_gw = solar_gw - prev_solar;
            yp.displaced_gas_mwh = d.gas_mwh;
            yp.displaced_coal_mwh = d.coal_mwh;
            yp.bonus_mwh = d.bonus_mwh;
            if (detail_year && *detail_year == year) soc_kept = std::move(soc);
        } else {
            full_net = std::max(full_net, um.capacity_requirement);
            const double net = full_net * fraction;
            auto& nw = after.of(Tranche::new_supply);
            for (std::size_t i = 0; i < u.size(); ++i) {
                nw[i] = std::min(u[i], net);
                after.unmet[i] = u[i] - nw[i];
            }
            if (p.new_option == NewOption::coal) {
                yp.displaced_gas_mwh = displace_gas_with_new_coal(after, net, p.flex_limit).gas_mwh;
            }
            res = undersize_residual(u, buf.shortfall, net, bio.aux);
            yp.installed_net_mw = net;
            yp.installed_gross_mw = net / (1.0 - tech.aux);
        }
        yp.increment_gross_mw = yp.installed_gross_mw - prev_gross;
        prev_gross = yp.installed_gross_mw;
        yp.new_output_mwh = energy_mwh(after.of(Tranche::new_supply));
        yp.secondary_unmet_mwh = res.secondary_unmet_mwh;
        yp.biodiesel_increment_mw = std::max(0.0, res.biodiesel_mw - biodiesel_mw);
        biodiesel_mw = std::max(biodiesel_mw, res.biodiesel_mw);
        yp.biodiesel_mw = biodiesel_mw;

        ys.energy.after_mwh = tranche_energy(after);
        ys.curtailment_after_mwh = energy_mwh(after.curtailment);
        ys.energy.curtailment_after_mwh = ys.curtailment_after_mwh;
        ys.balance_error_after = after.max_balance_error();
        double coal_peak = 0.0;
        for (std::size_t i = 0; i < after.size(); ++i) coal_peak = std::max(coal_peak, after.coal(i));
        ys.coal_peak_mw = coal_peak;

        if (detail_year && *detail_year == year) {
            r.detail = YearDetail{std::move(dy), std::move(after), buf, u, std::move(soc_kept)};
        }
        r.years.push_back(std::move(ys));
        r.plan.years.push_back(std::move(yp));
    }

    std::vector<YearEnergy> energy;
    for (const auto& y : r.years) energy.push_back(y.energy);
    r.cost = npv_system_cost(p, r.path, energy, r.plan, build_price_path(p));
    return r;
}

void run_sweep(const ParamGrid& grid, const BaseData& base, unsigned parallelism,
               std::optional<int> detail_year,
               const std::function<void(SweepOutcome&&)>& sink) {
    const std::vector<ScenarioParams> points = expand_param_grid(grid);
    const std::size_t n = points.size();
    const unsigned workers =
        static_cast<unsigned>(std::min<std::size_t>(std::max(1u, parallelism), std::max<std::size_t>(n, 1)));

    std::mutex mu;
    std::condition_variable ready;
    std::map<std::size_t, SweepOutcome> done;
    std::atomic<std::size_t> next{0};

    const auto work = [&] {
        for (std::size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) {
            SweepOutcome o;
            o.index = i;
            try {
                o.result = run_scenario(points[i], base, i == 0 ? detail_year : std::nullopt);
            } catch (const std::exception& e) {
                o.error = e.what();
            }
            {
                std::lock_guard lock(mu);
                done.emplace(i, std::move(o));
            }
            ready.notify_one();
        }
    };

    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);

    std::exception_ptr sink_error;
    for (std::size_t i = 0; i < n; ++i) {
        SweepOutcome o;
        {
            std::unique_lock lock(mu);
            ready.wait(lock, [&] { return done.count(i) > 0; });
            auto it = done.find(i);
            o = std::move(it->second);
            done.erase(it);
        }
        if (sink_error) continue;
        try {
            sink(std::move(o));
        } catch (...) {
            sink_error = std::current_exception();
        }
    }
    for (auto& t : pool) t.join();
    if (sink_error) std::rethrow_exception(sink_error);
}

}  // namespace gridlab
