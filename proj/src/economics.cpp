#include "gridlab/economics.hpp"

#include <algorithm>
#include <cmath>
#include <json.hpp>
#include <map>
#include <numeric>
#include <tuple>

#include "gridlab/errors.hpp"

namespace gridlab {

namespace {

constexpr double kKwhPerMwh = 1000.0;

double discount_factor(double rate, int year) {
    return std::pow(1.0 + rate, -(year - kFirstYear));
}

void check_horizon(int year) {
    if (year < kFirstYear || year > kLastYear) {
        throw ParameterError("year " + std::to_string(year) + " outside 2021-2030");
    }
}

}  // namespace

double fuel_price_path(double base, double escalation, int year) {
    check_horizon(year);
    return base * std::pow(1.0 + escalation, year - kFirstYear);
}

double battery_price_usd(const ScenarioParams& p, int year) {
    check_horizon(year);
    return p.battery_price_2021 * std::pow(1.0 - p.battery_learning_rate, year - kFirstYear);
}

double battery_price_path(const ScenarioParams& p, int year) {
    return battery_price_usd(p, year) * p.inr_per_usd_2021 *
           std::pow(1.0 + p.forex_escalation, year - kFirstYear);
}

double annuity_payment(double principal, double rate, int n_years) {
    if (n_years < 1) throw ParameterError("annuity needs at least one year");
    if (rate == 0.0) return principal / n_years;
    const double g = std::pow(1.0 + rate, n_years);
    return principal * rate * g / (g - 1.0);
}

PricePath build_price_path(const ScenarioParams& p) {
    PricePath pp;
    const NewTechParams& nt = p.tech(p.new_option);
    const NewTechParams& bio = p.biodiesel();
    for (int y = kFirstYear; y <= kLastYear; ++y) {
        const std::size_t k = CapacityPath::index(y);
        pp.coal_2019[k] = fuel_price_path(p.fuel_price_coal_2019, p.coal_escalation, y);
        pp.coal_slack[k] = fuel_price_path(p.fuel_price_coal_slack, p.coal_escalation, y);
        pp.gas_2019[k] = fuel_price_path(p.fuel_price_gas_2019, p.gas_escalation, y);
        pp.gas_slack[k] = fuel_price_path(p.fuel_price_gas_slack, p.gas_escalation, y);
        pp.new_fuel[k] = fuel_price_path(nt.fuel_price_2021, p.escalation(nt.family), y);
        pp.biodiesel[k] = fuel_price_path(bio.fuel_price_2021, p.escalation(bio.family), y);
        pp.battery_usd_per_kwh[k] = battery_price_usd(p, y);
        pp.battery_rs_per_kwh[k] = battery_price_path(p, y);
        pp.solar_capex[k] = fuel_price_path(p.solar_capex_2021, p.solar_capex_change, y);
        const double f = static_cast<double>(k) / (kHorizonYears - 1);
        pp.wind_capex[k] = p.wind_capex_2021 + f * (p.wind_capex_2030 - p.wind_capex_2021);
        pp.solar_om[k] = fuel_price_path(p.solar_om, p.om_inflation, y);
        pp.wind_om[k] = fuel_price_path(p.wind_om, p.om_inflation, y);
        for (NewOption o : kNewOptions) {
            const NewTechParams& t = p.tech(o);
            pp.new_capex[static_cast<std::size_t>(o)][k] =
                fuel_price_path(t.capex_2021, t.capex_escalation, y);
        }
    }
    return pp;
}

std::string_view component_name(CostComponent c) {
    switch (c) {
        case CostComponent::re_capex: return "re_capex";
        case CostComponent::re_om: return "re_om";
        case CostComponent::coal_fuel: return "coal_fuel";
        case CostComponent::gas_fuel_2019: return "gas_fuel_2019";
        case CostComponent::gas_fuel_nonapm: return "gas_fuel_nonapm";
        case CostComponent::new_capex: return "new_capex";
        case CostComponent::new_fuel: return "new_fuel";
        case CostComponent::new_om: return "new_om";
        case CostComponent::biodiesel: return "biodiesel";
    }
    return "unknown";
}

namespace {

struct Ledger {
    const ScenarioParams& p;
    CostReport& r;
    // Discounted flows that fall after 2030 (full-life annuities only).
    CostReport::Components tail{};

    void add(CostComponent c, int year, double amount) {
        r.yearly[CapacityPath::index(year)][static_cast<std::size_t>(c)] += amount;
    }

    // Capex spent in `year`, repaid in equal instalments at the WACC.
    void annuitize(CostComponent c, int year, double capex, double life_years) {
        if (!(capex > 0.0)) return;
        const int n = std::max(1, static_cast<int>(std::lround(life_years)));
        const double payment = annuity_payment(capex, p.wacc, n);
        for (int t = year; t < year + n; ++t) {
            if (t <= kLastYear) {
                add(c, t, payment);
            } else if (p.annuity_full_life) {
                tail[static_cast<std::size_t>(c)] += payment * discount_factor(p.discount_rate, t);
            } else {
                break;
            }
        }
    }
};

struct FuelCost {
    double coal = 0.0, gas_2019 = 0.0, gas_nonapm = 0.0;
    double total() const { return coal + gas_2019 + gas_nonapm; }
};

FuelCost existing_fuel(const ScenarioParams& p, const PricePath& pp, std::size_t k,
                       const std::array<double, kTrancheCount>& e) {
    const auto at = [&](Tranche t) { return e[static_cast<std::size_t>(t)] * kKwhPerMwh; };
    FuelCost f;
    f.coal = (at(Tranche::coal_2019) * pp.coal_2019[k] + at(Tranche::coal_slack) * pp.coal_slack[k]) /
             (1.0 - p.aux_coal);
    f.gas_2019 = at(Tranche::gas_2019) * pp.gas_2019[k] / (1.0 - p.aux_gas);
    f.gas_nonapm = at(Tranche::gas_slack) * pp.gas_slack[k] / (1.0 - p.aux_gas);
    return f;
}

}  // namespace

CostReport npv_system_cost(const ScenarioParams& p, const CapacityPath& path,
                           std::span<const YearEnergy> energy, const NewSupplyPlan& plan,
                           const PricePath& prices) {
    if (energy.size() != kHorizonYears || plan.years.size() != kHorizonYears) {
        throw IntegrityError("cost model needs all ten horizon years");
    }
    for (std::size_t k = 0; k < kHorizonYears; ++k) {
        const int y = kFirstYear + static_cast<int>(k);
        if (energy[k].year != y || plan.years[k].year != y) {
            throw IntegrityError("missing or out-of-order year " + std::to_string(y));
        }
    }

    CostReport r;
    Ledger L{p, r, {}};
    const NewTechParams& nt = p.tech(p.new_option);
    const NewTechParams& bio = p.biodiesel();
    const std::size_t opt = static_cast<std::size_t>(p.new_option);

    double new_solar_mw = 0.0, new_wind_mw = 0.0;
    double new_capex_spent = 0.0, bio_capex_spent = 0.0;
    for (std::size_t k = 0; k < kHorizonYears; ++k) {
        const int y = kFirstYear + static_cast<int>(k);

        // Planned RE additions beyond the 2021 fleet.
        if (k > 0) {
            const double ds = std::max(0.0, path.solar[k] - path.solar[k - 1]) * 1000.0;
            const double dw = std::max(0.0, path.wind[k] - path.wind[k - 1]) * 1000.0;
            new_solar_mw += ds;
            new_wind_mw += dw;
            L.annuitize(CostComponent::re_capex, y, ds * prices.solar_capex[k], p.re_life_years);
            L.annuitize(CostComponent::re_capex, y, dw * prices.wind_capex[k], p.re_life_years);
        }
        L.add(CostComponent::re_om, y,
              new_solar_mw * prices.solar_om[k] + new_wind_mw * prices.wind_om[k]);

        const FuelCost before = existing_fuel(p, prices, k, energy[k].before_mwh);
        const FuelCost after = existing_fuel(p, prices, k, energy[k].after_mwh);
        L.add(CostComponent::coal_fuel, y, before.coal);
        L.add(CostComponent::gas_fuel_2019, y, before.gas_2019);
        L.add(CostComponent::gas_fuel_nonapm, y, before.gas_nonapm);

        const YearPlan& yp = plan.years[k];
        double capex = 0.0;
        if (p.new_option == NewOption::battery_re) {
            const double cells = yp.battery_energy_increment_mwh * kKwhPerMwh *
                                 prices.battery_rs_per_kwh[k];
            const double inverter = yp.increment_gross_mw * prices.new_capex[opt][k];
            const double solar = yp.dedicated_solar_increment_gw * 1000.0 * prices.solar_capex[k];
            L.annuitize(CostComponent::new_capex, y, cells, p.battery_life_years);
            L.annuitize(CostComponent::new_capex, y, inverter, nt.life_years);
            L.annuitize(CostComponent::new_capex, y, solar, p.re_life_years);
            capex = cells + inverter;
            L.add(CostComponent::new_om, y, yp.dedicated_solar_gw * 1000.0 * prices.solar_om[k]);
        } else {
            capex = yp.increment_gross_mw * prices.new_capex[opt][k];
            L.annuitize(CostComponent::new_capex, y, capex, nt.life_years);
            const double out_kwh = energy[k].after_mwh[static_cast<std::size_t>(Tranche::new_supply)] *
                                   kKwhPerMwh;
            L.add(CostComponent::new_fuel, y, out_kwh * prices.new_fuel[k] / (1.0 - nt.aux));
        }
        new_capex_spent += capex;
        L.add(CostComponent::new_om, y, nt.om_rate * new_capex_spent);
        // Feedback-loop savings (or extra burn) on the existing fleet.
        L.add(CostComponent::new_fuel, y, after.total() - before.total());

        const double bio_capex = yp.biodiesel_increment_mw * prices.new_capex[static_cast<std::size_t>(
                                                                 NewOption::diesel_gen)][k];
        bio_capex_spent += bio_capex;
        L.annuitize(CostComponent::biodiesel, y, bio_capex, bio.life_years);
        L.add(CostComponent::biodiesel, y,
              bio.om_rate * bio_capex_spent +
                  yp.secondary_unmet_mwh * kKwhPerMwh * prices.biodiesel[k] / (1.0 - bio.aux));
    }

    std::array<double, kHorizonYears> existing_cost{}, existing_kwh{}, new_cost{}, new_kwh{};
    for (std::size_t k = 0; k < kHorizonYears; ++k) {
        const int y = kFirstYear + static_cast<int>(k);
        const double df = discount_factor(p.discount_rate, y);
        for (std::size_t c = 0; c < kCostComponents; ++c) {
            r.npv_by_component[c] += r.yearly[k][c] * df;
        }
        const auto& yc = r.yearly[k];
        const auto cc = [&](CostComponent c) { return yc[static_cast<std::size_t>(c)]; };
        existing_cost[k] = cc(CostComponent::re_capex) + cc(CostComponent::re_om) +
                           cc(CostComponent::coal_fuel) + cc(CostComponent::gas_fuel_2019) +
                           cc(CostComponent::gas_fuel_nonapm);
        new_cost[k] = cc(CostComponent::new_capex) + cc(CostComponent::new_fuel) +
                      cc(CostComponent::new_om) + cc(CostComponent::biodiesel);
        const auto& e = energy[k].before_mwh;
        for (std::size_t t = 0; t < kTrancheCount; ++t) {
            if (t != static_cast<std::size_t>(Tranche::new_supply)) existing_kwh[k] += e[t];
        }
        existing_kwh[k] *= kKwhPerMwh;
        new_kwh[k] = (energy[k].after_mwh[static_cast<std::size_t>(Tranche::new_supply)] +
                      plan.years[k].secondary_unmet_mwh) *
                     kKwhPerMwh;
    }
    for (std::size_t c = 0; c < kCostComponents; ++c) r.npv_by_component[c] += L.tail[c];
    r.npv_total = 0.0;
    for (double v : r.npv_by_component) r.npv_total += v;

    const auto lev = [&](const auto& cost, const auto& kwh) -> std::optional<double> {
        try {
            return levelized_cost(cost, kwh, p.discount_rate);
        } catch (const UndefinedCostError&) {
            return std::nullopt;
        }
    };
    r.levelized_existing = lev(existing_cost, existing_kwh);
    r.levelized_new = lev(new_cost, new_kwh);
    return r;
}

double levelized_cost(std::span<const double> costs, std::span<const double> energy,
                      double discount) {
    if (costs.size() != energy.size()) throw ParameterError("cost and energy streams differ in length");
    double c = 0.0, e = 0.0;
    for (std::size_t t = 0; t < costs.size(); ++t) {
        const double df = std::pow(1.0 + discount, -static_cast<double>(t));
        c += costs[t] * df;
        e += energy[t] * df;
    }
    if (!(e > 0.0)) throw UndefinedCostError("discounted energy is zero");
    return c / e;
}

std::vector<std::size_t> frontier(std::span<const FrontierEntry> entries) {
    std::vector<std::size_t> order(entries.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        const auto& x = entries[a];
        const auto& y = entries[b];
        return std::tie(x.npv_total, x.new_capacity_mw, x.curtailment_twh, x.index) <
               std::tie(y.npv_total, y.new_capacity_mw, y.curtailment_twh, y.index);
    });
    return order;
}

std::vector<FrontierCell> frontier_cells(std::span<const FrontierEntry> entries) {
    std::map<std::pair<double, int>, std::size_t> best;
    for (std::size_t i : frontier(entries)) {
        const auto key = std::make_pair(entries[i].re_2030, static_cast<int>(entries[i].option));
        best.emplace(key, i);  // first seen is cheapest
    }
    std::vector<FrontierCell> out;
    for (const auto& [key, idx] : best) {
        out.push_back({key.first, static_cast<NewOption>(key.second), idx});
    }
    return out;
}

std::string cost_report_json(const CostReport& r) {
    using nlohmann::ordered_json;
    ordered_json j;
    j["npv_total"] = r.npv_total;
    ordered_json comp = ordered_json::object();
    for (std::size_t c = 0; c < kCostComponents; ++c) {
        comp[std::string(component_name(static_cast<CostComponent>(c)))] = r.npv_by_component[c];
    }
    j["npv_by_component"] = std::move(comp);
    j["levelized_existing"] =
        r.levelized_existing ? ordered_json(*r.levelized_existing) : ordered_json(nullptr);
    j["levelized_new"] = r.levelized_new ? ordered_json(*r.levelized_new) : ordered_json(nullptr);
    ordered_json yearly = ordered_json::array();
    for (std::size_t k = 0; k < kHorizonYears; ++k) {
        ordered_json y;
        y["year"] = kFirstYear + static_cast<int>(k);
        for (std::size_t c = 0; c < kCostComponents; ++c) {
            y[std::string(component_name(static_cast<CostComponent>(c)))] = r.yearly[k][c];
        }
        yearly.push_back(std::move(y));
    }
    j["yearly"] = std::move(yearly);
    return j.dump(2);
}

}  // namespace gridlab
