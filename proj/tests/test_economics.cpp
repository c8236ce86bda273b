#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <tuple>

#include "gridlab/economics.hpp"
#include "gridlab/errors.hpp"

using namespace gridlab;

namespace {

double powi(double base, int n) {
    double v = 1.0;
    for (int i = 0; i < n; ++i) v *= base;
    return v;
}

// Payment whose discounted stream repays the principal.
double annuity_oracle(double principal, double rate, int n) {
    double pv = 0.0;
    for (int t = 1; t <= n; ++t) pv += 1.0 / powi(1.0 + rate, t);
    return principal / pv;
}

std::vector<YearEnergy> zero_energy() {
    std::vector<YearEnergy> e(kHorizonYears);
    for (std::size_t k = 0; k < e.size(); ++k) e[k].year = kFirstYear + static_cast<int>(k);
    return e;
}

NewSupplyPlan zero_plan(NewOption o) {
    NewSupplyPlan plan;
    plan.option = o;
    plan.years.resize(kHorizonYears);
    for (std::size_t k = 0; k < kHorizonYears; ++k) plan.years[k].year = kFirstYear + static_cast<int>(k);
    return plan;
}

ScenarioParams flat_re(NewOption o) {
    ScenarioParams p;
    p.re_2030 = 98.0;
    p.new_option = o;
    return p;
}

CostReport cost(const ScenarioParams& p, const std::vector<YearEnergy>& e, const NewSupplyPlan& plan) {
    return npv_system_cost(p, build_capacity_path(p), e, plan, build_price_path(p));
}

std::size_t idx(Tranche t) { return static_cast<std::size_t>(t); }
std::size_t idx(CostComponent c) { return static_cast<std::size_t>(c); }

}  // namespace

TEST_CASE("closed-form price paths") {
    CHECK(std::abs(fuel_price_path(2.6, 0.05, 2030) - 4.03) <= 0.01);
    CHECK(fuel_price_path(2.6, 0.05, 2030) == doctest::Approx(2.6 * powi(1.05, 9)).epsilon(1e-14));
    CHECK(fuel_price_path(2.6, 0.05, 2021) == 2.6);
    for (int y = 2021; y <= 2030; ++y) CHECK(fuel_price_path(3.0, 0.0, y) == 3.0);
    CHECK_THROWS_AS(fuel_price_path(1.0, 0.05, 2031), ParameterError);
    CHECK_THROWS_AS(fuel_price_path(1.0, 0.05, 2020), ParameterError);

    ScenarioParams p;
    CHECK(std::abs(battery_price_usd(p, 2030) - 91.1) <= 0.1);
    CHECK(battery_price_usd(p, 2030) == doctest::Approx(175 * powi(0.93, 9)).epsilon(1e-14));
    CHECK(battery_price_usd(p, 2021) == 175);
    CHECK(battery_price_path(p, 2021) == doctest::Approx(175 * 73.65));
    CHECK(battery_price_path(p, 2025) ==
          doctest::Approx(175 * powi(0.93, 4) * 73.65 * powi(1.03, 4)).epsilon(1e-14));
    p.battery_learning_rate = 0;
    p.forex_escalation = 0;
    for (int y = 2021; y <= 2030; ++y) {
        CHECK(battery_price_usd(p, y) == 175);
        CHECK(battery_price_path(p, y) == doctest::Approx(175 * 73.65));
    }
}

TEST_CASE("price path table") {
    ScenarioParams p;
    const PricePath pp = build_price_path(p);
    CHECK(pp.wind_capex[0] == 75e6);
    CHECK(pp.wind_capex[9] == doctest::Approx(70.5e6));
    CHECK(pp.wind_capex[3] == doctest::Approx(75e6 - 4.5e6 / 3));
    CHECK(pp.solar_capex[9] == doctest::Approx(43e6 * powi(0.98, 9)));
    CHECK(pp.solar_om[9] == doctest::Approx(600'000 * powi(1.04, 9)));
    CHECK(pp.gas_slack[9] == doctest::Approx(5.0 * powi(1.03, 9)));
    CHECK(pp.biodiesel[0] == 20.0);
    for (std::size_t k = 0; k < kHorizonYears; ++k) {
        for (double v : {pp.coal_2019[k], pp.coal_slack[k], pp.gas_2019[k], pp.gas_slack[k],
                         pp.biodiesel[k], pp.battery_rs_per_kwh[k], pp.solar_capex[k],
                         pp.wind_capex[k]}) {
            CHECK(v > 0.0);
        }
    }
}

TEST_CASE("annuity payments") {
    CHECK(annuity_payment(1e6, 0.085, 25) == doctest::Approx(annuity_oracle(1e6, 0.085, 25)).epsilon(1e-12));
    CHECK(std::abs(annuity_payment(1e6, 0.085, 25) - 97'712) < 1.0);
    CHECK(annuity_payment(100, 0.0, 10) == 10);
    CHECK(annuity_payment(100, 0.07, 1) == doctest::Approx(107));
    CHECK_THROWS_AS(annuity_payment(100, 0.07, 0), ParameterError);
}

TEST_CASE("levelized cost") {
    const std::vector<double> c(10, 100.0), e(10, 50.0);
    for (double d : {0.0, 0.06, 0.2}) CHECK(levelized_cost(c, e, d) == doctest::Approx(2.0));

    std::vector<double> c1(10, 0.0), e9(10, 0.0);
    c1[1] = 100;
    e9[9] = 50;
    CHECK(levelized_cost(c1, e9, 0.06) == doctest::Approx(2.0 * powi(1.06, 8)));

    const std::vector<double> cs{5, 7, 11}, es{1, 2, 4};
    const double d = 0.1;
    const double oracle = (5 + 7 / 1.1 + 11 / 1.21) / (1 + 2 / 1.1 + 4 / 1.21);
    CHECK(levelized_cost(cs, es, d) == doctest::Approx(oracle).epsilon(1e-14));

    CHECK_THROWS_AS(levelized_cost(cs, std::vector<double>{0, 0, 0}, d), UndefinedCostError);
    CHECK_THROWS_AS(levelized_cost(cs, std::vector<double>{1}, d), ParameterError);
}

TEST_CASE("NPV: degenerate scenario is zero, a single 2030 flow is discounted nine years") {
    const ScenarioParams p = flat_re(NewOption::ocgt);
    const CostReport zero = cost(p, zero_energy(), zero_plan(NewOption::ocgt));
    CHECK(zero.npv_total == 0.0);
    CHECK_FALSE(zero.levelized_existing.has_value());
    CHECK_FALSE(zero.levelized_new.has_value());

    NewSupplyPlan plan = zero_plan(NewOption::ocgt);
    plan.years[9].secondary_unmet_mwh = 1000;
    const CostReport one = cost(p, zero_energy(), plan);
    const double flow = 1000 * 1000 * 20.0 * powi(1.03, 9) / (1 - 0.005);
    CHECK(one.yearly[9][idx(CostComponent::biodiesel)] == doctest::Approx(flow));
    CHECK(one.npv_total == doctest::Approx(flow / powi(1.06, 9)).epsilon(1e-12));
    CHECK(one.npv(CostComponent::biodiesel) == doctest::Approx(one.npv_total));
    CHECK(*one.levelized_new == doctest::Approx(flow / 1e6));
}

TEST_CASE("NPV matches a hand-built cash-flow table") {
    ScenarioParams p = flat_re(NewOption::ocgt);
    auto energy = zero_energy();
    energy[0].before_mwh[idx(Tranche::coal_2019)] = 5000;
    energy[0].after_mwh[idx(Tranche::coal_2019)] = 5000;
    energy[9].after_mwh[idx(Tranche::new_supply)] = 1000;
    NewSupplyPlan plan = zero_plan(NewOption::ocgt);
    plan.years[8].increment_gross_mw = 100;

    const double capex29 = 100 * 50e6 * powi(1.04, 8);
    const double a = annuity_oracle(capex29, 0.085, 25);
    const double om = 0.015 * capex29;
    const double fuel30 = 1000 * 1000 * 6.8 * powi(1.03, 9) / (1 - 0.025);
    const double coal21 = 5000 * 1000 * 2.6 / (1 - 0.08);

    const CostReport r = cost(p, energy, plan);
    CHECK(r.yearly[0][idx(CostComponent::coal_fuel)] == doctest::Approx(coal21));
    CHECK(r.yearly[8][idx(CostComponent::new_capex)] == doctest::Approx(a));
    CHECK(r.yearly[9][idx(CostComponent::new_capex)] == doctest::Approx(a));
    CHECK(r.yearly[8][idx(CostComponent::new_om)] == doctest::Approx(om));
    CHECK(r.yearly[9][idx(CostComponent::new_fuel)] == doctest::Approx(fuel30));
    CHECK(r.npv(CostComponent::coal_fuel) == doctest::Approx(coal21));
    CHECK(r.npv(CostComponent::new_capex) ==
          doctest::Approx(a / powi(1.06, 8) + a / powi(1.06, 9)));
    const double total = coal21 + (a + om) / powi(1.06, 8) + (a + om + fuel30) / powi(1.06, 9);
    CHECK(r.npv_total == doctest::Approx(total).epsilon(1e-12));

    // Counting the full 25-year life adds the discounted tail.
    p.annuity_full_life = true;
    const CostReport full = cost(p, energy, plan);
    double tail = 0;
    for (int t = 2031; t < 2029 + 25; ++t) tail += a / powi(1.06, t - 2021);
    CHECK(full.npv_total == doctest::Approx(total + tail).epsilon(1e-12));
}

TEST_CASE("battery option costs") {
    ScenarioParams p = flat_re(NewOption::battery_re);
    NewSupplyPlan plan = zero_plan(NewOption::battery_re);
    plan.years[2].battery_energy_increment_mwh = 1000;
    plan.years[2].increment_gross_mw = 200;
    plan.years[2].dedicated_solar_increment_gw = 0.5;
    plan.years[2].dedicated_solar_gw = 0.5;
    const CostReport r = cost(p, zero_energy(), plan);
    const double cells = 1000 * 1000 * 175 * powi(0.93, 2) * 73.65 * powi(1.03, 2);
    const double inverter = 200 * 7.5e6;
    const double solar = 500 * 43e6 * powi(0.98, 2);
    const double annual = annuity_oracle(cells, 0.085, 15) + annuity_oracle(inverter, 0.085, 13) +
                          annuity_oracle(solar, 0.085, 25);
    CHECK(r.yearly[2][idx(CostComponent::new_capex)] == doctest::Approx(annual));
    CHECK(r.yearly[9][idx(CostComponent::new_capex)] == doctest::Approx(annual));
    CHECK(r.yearly[2][idx(CostComponent::new_om)] ==
          doctest::Approx(0.015 * (cells + inverter) + 500 * 600'000 * powi(1.04, 2)));
    CHECK(r.yearly[2][idx(CostComponent::new_fuel)] == 0.0);
}

TEST_CASE("RE build capex is annuitized from the year after each addition") {
    ScenarioParams p;
    p.new_option = NewOption::ocgt;
    const CapacityPath path = build_capacity_path(p);
    const CostReport r = cost(p, zero_energy(), zero_plan(NewOption::ocgt));
    CHECK(r.yearly[0][idx(CostComponent::re_capex)] == 0.0);
    const double ds = (path.solar[1] - path.solar[0]) * 1000;
    const double dw = (path.wind[1] - path.wind[0]) * 1000;
    const double a22 = annuity_oracle(ds * 43e6 * 0.98, 0.085, 25) +
                       annuity_oracle(dw * (75e6 - 0.5e6), 0.085, 25);
    CHECK(r.yearly[1][idx(CostComponent::re_capex)] == doctest::Approx(a22));
    CHECK(r.yearly[1][idx(CostComponent::re_om)] ==
          doctest::Approx(ds * 600'000 * 1.04 + dw * 500'000 * 1.04));
}

TEST_CASE("feedback savings are credited to NEW fuel and the sum holds") {
    ScenarioParams p = flat_re(NewOption::battery_re);
    auto energy = zero_energy();
    for (auto& e : energy) {
        e.before_mwh[idx(Tranche::coal_2019)] = 10'000;
        e.before_mwh[idx(Tranche::gas_slack)] = 2'000;
        e.after_mwh = e.before_mwh;
        e.after_mwh[idx(Tranche::gas_slack)] = 500;
        e.after_mwh[idx(Tranche::coal_2019)] = 9'000;
    }
    const CostReport r = cost(p, energy, zero_plan(NewOption::battery_re));
    CHECK(r.npv(CostComponent::new_fuel) < 0.0);
    const double saving21 = (1000 * 1000 * 2.6 / 0.92 + 1500 * 1000 * 5.0 / 0.95);
    CHECK(r.yearly[0][idx(CostComponent::new_fuel)] == doctest::Approx(-saving21));
    CHECK(r.yearly[0][idx(CostComponent::gas_fuel_nonapm)] == doctest::Approx(2000 * 1000 * 5.0 / 0.95));
    double sum = 0;
    for (double v : r.npv_by_component) sum += v;
    CHECK(std::abs(sum - r.npv_total) <= 1e-6 * std::abs(r.npv_total));
}

TEST_CASE("NPV falls as the discount rate rises") {
    ScenarioParams p = flat_re(NewOption::coal);
    auto energy = zero_energy();
    for (std::size_t k = 1; k < kHorizonYears; ++k) {
        energy[k].before_mwh[idx(Tranche::coal_slack)] = 1000.0 * k;
        energy[k].after_mwh = energy[k].before_mwh;
    }
    double prev = std::numeric_limits<double>::infinity();
    for (double d : {0.0, 0.02, 0.06, 0.1, 0.2}) {
        p.discount_rate = d;
        const double v = cost(p, energy, zero_plan(NewOption::coal)).npv_total;
        CHECK(v < prev);
        prev = v;
    }
}

TEST_CASE("NPV rejects missing years") {
    const ScenarioParams p = flat_re(NewOption::coal);
    auto e = zero_energy();
    e.pop_back();
    CHECK_THROWS_AS(cost(p, e, zero_plan(NewOption::coal)), IntegrityError);
    auto shuffled = zero_energy();
    std::swap(shuffled[2], shuffled[3]);
    CHECK_THROWS_AS(cost(p, shuffled, zero_plan(NewOption::coal)), IntegrityError);
}

TEST_CASE("frontier ordering") {
    std::vector<FrontierEntry> one{{0, 5.0, 1, 1, 450, NewOption::coal}};
    CHECK(frontier(one) == std::vector<std::size_t>{0});

    std::vector<FrontierEntry> tie{{0, 5.0, 20, 1, 450, NewOption::coal},
                                   {1, 5.0, 10, 9, 450, NewOption::coal}};
    CHECK(frontier(tie) == std::vector<std::size_t>{1, 0});

    std::mt19937_64 rng(4);
    std::uniform_int_distribution<int> small(0, 3);
    for (int rep = 0; rep < 50; ++rep) {
        std::vector<FrontierEntry> e(60);
        for (std::size_t i = 0; i < e.size(); ++i) {
            e[i] = {i, 1e9 * small(rng), 1.0 * small(rng), 1.0 * small(rng),
                    250.0 + 50 * small(rng), kNewOptions[static_cast<std::size_t>(small(rng))]};
        }
        std::vector<std::size_t> oracle(e.size());
        for (std::size_t i = 0; i < oracle.size(); ++i) oracle[i] = i;
        std::stable_sort(oracle.begin(), oracle.end(), [&](std::size_t a, std::size_t b) {
            if (e[a].npv_total != e[b].npv_total) return e[a].npv_total < e[b].npv_total;
            if (e[a].new_capacity_mw != e[b].new_capacity_mw)
                return e[a].new_capacity_mw < e[b].new_capacity_mw;
            return e[a].curtailment_twh < e[b].curtailment_twh;
        });
        const auto order = frontier(e);
        CHECK(order == oracle);

        auto scaled = e;
        for (auto& x : scaled) x.npv_total *= 3.7;
        CHECK(frontier(scaled) == order);

        // Cells hold their cheapest member.
        for (const auto& c : frontier_cells(e)) {
            for (const auto& x : e) {
                if (x.re_2030 == c.re_2030 && x.option == c.option) {
                    CHECK(e[c.best].npv_total <= x.npv_total);
                }
            }
        }
    }
}

TEST_CASE("cost report JSON") {
    NewSupplyPlan plan = zero_plan(NewOption::ocgt);
    plan.years[9].secondary_unmet_mwh = 10;
    const std::string j = cost_report_json(cost(flat_re(NewOption::ocgt), zero_energy(), plan));
    for (std::size_t c = 0; c < kCostComponents; ++c) {
        CHECK(j.find(std::string(component_name(static_cast<CostComponent>(c)))) != std::string::npos);
    }
    CHECK(j.find("\"levelized_existing\": null") != std::string::npos);
}
