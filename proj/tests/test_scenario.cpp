#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "gridlab/errors.hpp"
#include "gridlab/scenario.hpp"

using namespace gridlab;

namespace {

double compound(double base, double rate, int years) {
    double v = base;
    for (int i = 0; i < years; ++i) v *= 1.0 + rate;
    return v;
}

BaseYearData constant_base(double demand_mw) {
    BaseYearData b;
    b.demand = HalfHourlySeries(2021, std::vector<double>(17520, demand_mw));
    for (auto& s : b.supply) s = HalfHourlySeries(2021, std::vector<double>(17520, demand_mw / 5));
    return b;
}

}  // namespace

TEST_CASE("grid expansion counts") {
    ParamGrid g;
    g.axis("demand_growth", std::vector<double>{0.05, 0.0525, 0.055});
    g.axis("re_2030", std::vector<double>{250, 300, 350, 400, 450, 500, 550});
    CHECK(expand_param_grid(g).size() == 21);
    CHECK(g.size() == 21);

    ParamGrid single;
    single.axis("flex_limit", std::vector<double>{0.6});
    const auto one = expand_param_grid(single);
    REQUIRE(one.size() == 1);
    CHECK(one[0].flex_limit == 0.6);
    CHECK(one[0].re_2030 == ScenarioParams{}.re_2030);
    CHECK(expand_param_grid(ParamGrid{}).size() == 1);

    CHECK(expand_param_grid(paper_grid()).size() == 189);
}

TEST_CASE("expansion order: first axis slowest, keys agree with points") {
    const ParamGrid g = paper_grid();
    const auto pts = expand_param_grid(g);
    CHECK(pts[0].demand_growth == 0.05);
    CHECK(pts[0].solar_share == 6.0 / 12.0);
    CHECK(pts[1].solar_share == 7.0 / 12.0);
    CHECK(pts[3].re_2030 == 300);
    CHECK(pts[21].flex_limit == 0.60);
    CHECK(pts[63].demand_growth == 0.0525);
    CHECK(pts[188].demand_growth == 0.055);
    CHECK(pts[188].solar_share == 8.0 / 12.0);
    CHECK(scenario_key(g, 0) == "demand_growth=0.05;flex_limit=0.55;re_2030=250;solar_share=0.5");
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const std::string key = scenario_key(g, i);
        CHECK(key.find("re_2030=" + format_param({pts[i].re_2030})) != std::string::npos);
        CHECK(key.find("flex_limit=" + format_param({pts[i].flex_limit})) != std::string::npos);
    }
}

TEST_CASE("base point is on the default grid") {
    const ParamGrid g = paper_grid();
    const auto pts = expand_param_grid(g);
    std::size_t found = 0;
    for (const auto& p : pts) {
        if (p.demand_growth == 0.0525 && p.flex_limit == 0.60 && p.re_2030 == 450.0 &&
            p.solar_share == 8.0 / 12.0) {
            ++found;
        }
    }
    CHECK(found == 1);
    const ScenarioParams d;
    CHECK(d.demand_growth == 0.0525);
    CHECK(d.flex_limit == 0.60);
    CHECK(d.re_2030 == 450.0);
    CHECK(d.solar_share == doctest::Approx(8.0 / 12.0));
    CHECK(d.grid_buffer == 0.05);
    CHECK(d.solar_cuf == 0.27);
    CHECK(d.wind_cuf == 0.35);
    CHECK_NOTHROW(d.validate());
}

TEST_CASE("grid construction errors") {
    ParamGrid g;
    CHECK_THROWS_AS(g.axis("demand_growth", std::vector<double>{}), ParameterError);
    CHECK_THROWS_AS(g.axis("no_such_key", std::vector<double>{1.0}), ParameterError);
    g.axis("flex_limit", std::vector<double>{0.6});
    CHECK_THROWS_AS(g.axis("flex_limit", std::vector<double>{0.7}), ParameterError);
    CHECK_THROWS_AS(g.axis("new_option", std::vector<double>{1.0}), ParameterError);

    ParamGrid raw;
    raw.axes.push_back({"flex_limit", {}});
    CHECK_THROWS_AS(expand_param_grid(raw), ParameterError);
}

TEST_CASE("validation names the offending field") {
    ScenarioParams p;
    p.flex_limit = 0.9;
    try {
        p.validate();
        FAIL("expected ParameterError");
    } catch (const ParameterError& e) {
        CHECK(std::string(e.what()).find("flex_limit") != std::string::npos);
    }
    p = {};
    p.dod_buffer = 0.0;
    CHECK_THROWS_AS(p.validate(), ParameterError);
    p = {};
    p.roundtrip_eff = 1.0;
    CHECK_NOTHROW(p.validate());
    p.roundtrip_eff = 1.01;
    CHECK_THROWS_AS(p.validate(), ParameterError);
    p = {};
    p.re_2030 = 90.0;
    CHECK_THROWS_AS(p.validate(), ParameterError);
}

TEST_CASE("parameter registry round-trips every field") {
    ScenarioParams p;
    for (std::string_view name : param_names()) {
        CAPTURE(name);
        const ParamValue v = get_param(p, name);
        ScenarioParams q;
        set_param(q, name, v);
        CHECK(get_param(q, name) == v);
    }
    set_param(p, "new_option", {std::string("ccgt")});
    CHECK(p.new_option == NewOption::ccgt);
    set_param(p, "new_coal_capex_2021", {1.0});
    CHECK(p.tech(NewOption::coal).capex_2021 == 1.0);
    CHECK_THROWS_AS(set_param(p, "new_option", {std::string("nuclear")}), ParameterError);
    CHECK_THROWS_AS(set_param(p, "cycle_boundary_slot", {33.5}), ParameterError);
    CHECK_THROWS_AS(set_param(p, "efficiency_on_charge_only", {1.0}), ParameterError);
    for (NewOption o : kNewOptions) CHECK(parse_option(option_name(o)) == o);
}

TEST_CASE("JSON configs: scalars set the base, arrays become axes in file order") {
    const ParamGrid g = load_param_grid(R"({
        "re_2030": [300, 400],
        "flex_limit": 0.7,
        "new_option": ["coal", "battery_re"],
        "annuity_full_life": true
    })");
    CHECK(g.base.flex_limit == 0.7);
    CHECK(g.base.annuity_full_life);
    REQUIRE(g.axes.size() == 2);
    CHECK(g.axes[0].first == "re_2030");
    CHECK(g.axes[1].first == "new_option");
    const auto pts = expand_param_grid(g);
    REQUIRE(pts.size() == 4);
    CHECK(pts[1].new_option == NewOption::battery_re);
    CHECK(pts[2].re_2030 == 400);
    CHECK(pts[2].new_option == NewOption::coal);

    CHECK(load_param_grid("{}").size() == 1);
    CHECK_THROWS_AS(load_param_grid(R"({"bogus": 1})"), ParameterError);
    CHECK_THROWS_AS(load_param_grid(R"({"flex_limit": "high"})"), ParameterError);
    CHECK_THROWS_AS(load_param_grid(R"({"flex_limit": []})"), ParameterError);
    CHECK_THROWS_AS(load_param_grid("[1, 2]"), ParameterError);
    CHECK_THROWS_AS(load_param_grid("{not json"), ParameterError);
}

TEST_CASE("capacity path endpoints") {
    ScenarioParams p;
    const CapacityPath c = build_capacity_path(p);
    CHECK(c.re_total[0] == 98.0);
    CHECK(c.re_total[9] == 450.0);
    CHECK(c.hydro[0] == 35.5);
    CHECK(c.gas[0] == 21.3);
    CHECK(c.nuclear[0] == 5.4);
    CHECK(c.coal_pre_fgd[0] == 162.6);
    CHECK(c.coal[0] == 162.6);

    // Compound growth by repeated multiplication.
    CHECK(c.hydro[9] == doctest::Approx(compound(35.5, 0.03, 9)).epsilon(1e-12));
    CHECK(c.hydro[9] == doctest::Approx(46.3).epsilon(0.001));
    CHECK(c.nuclear[9] == doctest::Approx(compound(5.4, 0.039, 9)).epsilon(1e-12));
    CHECK(c.coal_pre_fgd[9] == doctest::Approx(142.6).epsilon(1e-12));
    CHECK(c.coal[9] == doctest::Approx(142.6 * 0.975).epsilon(1e-12));
    CHECK(c.gas[9] == 21.3);

    // Intermediate RE years follow the geometric path.
    const double ratio = std::pow(450.0 / 98.0, 1.0 / 9.0);
    CHECK(c.re_total[3] == doctest::Approx(compound(98.0, ratio - 1.0, 3)).epsilon(1e-12));

    p.re_2030 = 97.0;
    CHECK_THROWS_AS(build_capacity_path(p), ParameterError);
}

TEST_CASE("FGD ramp: none before start, full from end year") {
    ScenarioParams p;
    const CapacityPath c = build_capacity_path(p);
    CHECK(c.fgd_factor[CapacityPath::index(2022)] == 1.0);
    CHECK(c.fgd_factor[CapacityPath::index(2023)] == 1.0);
    CHECK(c.fgd_factor[CapacityPath::index(2025)] == doctest::Approx(1.0 - 0.025 * 0.5));
    CHECK(c.fgd_factor[CapacityPath::index(2027)] == doctest::Approx(0.975));
    CHECK(c.fgd_factor[CapacityPath::index(2030)] == doctest::Approx(0.975));
    CHECK_THROWS_AS(CapacityPath::index(2031), ParameterError);
}

TEST_CASE("capacity path property: monotone per fuel, exact RE endpoints") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> re(98.0, 900.0), share(0.0, 1.0), ret(0.0, 80.0),
        g(0.0, 0.08);
    for (int rep = 0; rep < 200; ++rep) {
        ScenarioParams p;
        p.re_2030 = re(rng);
        p.solar_share = share(rng);
        p.coal_retirement_2030 = ret(rng);
        p.hydro_growth = g(rng);
        p.nuclear_growth = g(rng);
        const CapacityPath c = build_capacity_path(p);
        CHECK(std::abs(c.re_total[0] - 98.0) <= 1e-9 * 98.0);
        CHECK(std::abs(c.re_total[9] - p.re_2030) <= 1e-9 * p.re_2030);
        for (std::size_t y = 1; y < kHorizonYears; ++y) {
            CHECK(c.coal[y] <= c.coal[y - 1]);
            CHECK(c.re_total[y] >= c.re_total[y - 1]);
            CHECK(c.solar[y] >= c.solar[y - 1]);
            CHECK(c.wind[y] >= c.wind[y - 1]);
            CHECK(c.hydro[y] >= c.hydro[y - 1]);
            CHECK(c.nuclear[y] >= c.nuclear[y - 1]);
            CHECK(c.solar[y] + c.wind[y] + c.other_re[y] == doctest::Approx(c.re_total[y]));
        }
    }
}

TEST_CASE("tranche split: retirement comes out of slack first") {
    BaseYearData b = constant_base(100'000.0);
    b.fuel(Fuel::coal).values.assign(17520, 120'000.0);
    b.fuel(Fuel::gas).values.assign(17520, 8'000.0);
    ScenarioParams p;
    const CapacityPath c = build_capacity_path(p, &b);
    for (std::size_t y = 0; y < kHorizonYears; ++y) {
        const double avail = c.coal[y] * 0.9;
        CHECK(c.coal_2019_tranche[y] == doctest::Approx(std::min(avail, 120.0 * c.fgd_factor[y])));
        CHECK(c.coal_2019_tranche[y] + c.coal_slack_tranche[y] == doctest::Approx(avail));
        CHECK(c.gas_2019_tranche[y] == doctest::Approx(8.0));
        CHECK(c.gas_slack_tranche[y] == doctest::Approx(13.3));
    }
    CHECK(c.coal_slack_tranche[9] < c.coal_slack_tranche[0]);

    const TrancheCaps t = tranche_capacities(p, c, b, 2030);
    CHECK(t.coal_2019.size() == 17520);
    CHECK(t.coal_available_mw == doctest::Approx(c.coal[9] * 900.0));
    CHECK(t.coal_2019[5] == doctest::Approx(120'000.0 * 0.975));
    CHECK(t.coal_2019[5] + t.coal_slack[5] == doctest::Approx(t.coal_available_mw));
    CHECK(t.gas_2019[5] + t.gas_slack[5] == doctest::Approx(21'300.0));

    const TrancheCaps leap = tranche_capacities(p, c, b, 2024);
    CHECK(leap.coal_2019.size() == 17568);
}

TEST_CASE("demand projection") {
    BaseYearData b = constant_base(0.0);
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0.5, 1.5);
    double total = 0;
    for (double& v : b.demand.values) total += (v = u(rng));
    const double scale = 1.36e9 / (total * 0.5);  // 1,360 BU in MWh
    for (double& v : b.demand.values) v *= scale;
    CHECK(mwh_to_twh(b.demand.energy_mwh()) == doctest::Approx(1360.0));

    ScenarioParams p;
    const HalfHourlySeries d30 = project_demand(p, b, 2030);
    const double twh = mwh_to_twh(d30.energy_mwh());
    CHECK(twh == doctest::Approx(1360.0 * compound(1.0, 0.0525, 9)).epsilon(1e-9));
    CHECK(std::abs(twh - 2160.0) / 2160.0 <= 0.005);

    CHECK(project_demand(p, b, 2021).values == b.demand.values);
    p.demand_growth = 0.0;
    for (int y : {2023, 2025, 2029}) {
        CHECK(project_demand(p, b, y).values == b.demand.values);
    }

    // Leap years carry one extra day.
    p.demand_growth = 0.05;
    const HalfHourlySeries d24 = project_demand(p, b, 2024);
    CHECK(d24.size() == 17568);
    const double f = compound(1.0, 0.05, 3);
    CHECK(d24.peak() == doctest::Approx(b.demand.peak() * f).epsilon(1e-12));
}

TEST_CASE("demand projection property: peak and mean scale together") {
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> u(1000, 5000), g(-0.02, 0.1);
    BaseYearData b = constant_base(0.0);
    for (double& v : b.demand.values) v = u(rng);
    for (int rep = 0; rep < 20; ++rep) {
        ScenarioParams p;
        p.demand_growth = g(rng);
        for (int y = 2021; y <= 2030; ++y) {
            const HalfHourlySeries d = project_demand(p, b, y);
            const double fp = d.peak() / b.demand.peak();
            const double fm = d.mean() / b.demand.mean();
            if (!is_leap_year(y)) CHECK(fp == doctest::Approx(fm).epsilon(1e-12));
            CHECK(fp == doctest::Approx(compound(1.0, p.demand_growth, y - 2021)).epsilon(1e-12));
        }
    }
}

TEST_CASE("must-run supply follows capacity and shapes") {
    BaseYearData b = constant_base(100'000.0);
    b.fuel(Fuel::hydro).values.assign(17520, 10'000.0);
    b.fuel(Fuel::nuclear).values.assign(17520, 4'000.0);
    ReShapes s;
    s.solar = PerMwShape::from_values(std::vector<double>(17520, 0.27));
    s.wind = PerMwShape::from_values(std::vector<double>(17520, 0.35));
    ScenarioParams p;
    const CapacityPath c = build_capacity_path(p, &b);
    const MustRun m = project_must_run(p, c, b, s, 2030);
    const double expect = c.solar[9] * 270.0 + c.wind[9] * 350.0 + 10.0 * 1000.0 * 0.198;
    CHECK(m.re[100] == doctest::Approx(expect));
    CHECK(m.hydro[100] == doctest::Approx(10'000.0 * compound(1.0, 0.03, 9)));
    CHECK(m.nuclear[100] == doctest::Approx(4'000.0 * compound(1.0, 0.039, 9)));
}

TEST_CASE("battery efficiency split") {
    ScenarioParams p;
    CHECK(p.charge_eff() * p.discharge_eff() == doctest::Approx(0.9));
    CHECK(p.charge_eff() == doctest::Approx(std::sqrt(0.9)));
    p.efficiency_on_charge_only = true;
    CHECK(p.charge_eff() == 0.9);
    CHECK(p.discharge_eff() == 1.0);
}
