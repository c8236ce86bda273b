#include "gridlab/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <json.hpp>

#include "gridlab/errors.hpp"
#include "gridlab/kernels.hpp"
#include "gridlab/text.hpp"

namespace gridlab {

std::string_view option_name(NewOption o) {
    switch (o) {
        case NewOption::coal: return "coal";
        case NewOption::ocgt: return "ocgt";
        case NewOption::ccgt: return "ccgt";
        case NewOption::gas_ic: return "gas_ic";
        case NewOption::diesel_gen: return "diesel_gen";
        case NewOption::battery_re: return "battery_re";
    }
    return "unknown";
}

std::optional<NewOption> parse_option(std::string_view s) {
    for (NewOption o : kNewOptions) {
        if (option_name(o) == s) return o;
    }
    return std::nullopt;
}

double ScenarioParams::escalation(FuelFamily f) const {
    switch (f) {
        case FuelFamily::coal: return coal_escalation;
        case FuelFamily::gas: return gas_escalation;
        case FuelFamily::diesel: return diesel_escalation;
    }
    return 0.0;
}

double ScenarioParams::discharge_eff() const {
    return efficiency_on_charge_only ? 1.0 : std::sqrt(roundtrip_eff);
}

double ScenarioParams::charge_eff() const {
    return efficiency_on_charge_only ? roundtrip_eff : std::sqrt(roundtrip_eff);
}

namespace {

void require(bool ok, std::string_view field, std::string_view rule) {
    if (!ok) throw ParameterError(std::string(field) + " must be " + std::string(rule));
}

bool unit(double v) { return v >= 0.0 && v <= 1.0; }

}  // namespace

void ScenarioParams::validate() const {
    require(demand_growth > -1.0 && demand_growth < 1.0, "demand_growth", "in (-1, 1)");
    require(flex_limit >= 0.5 && flex_limit <= 0.8, "flex_limit", "in [0.5, 0.8]");
    require(unit(ists_losses), "ists_losses", "in [0, 1]");
    require(unit(grid_buffer), "grid_buffer", "in [0, 1]");
    require(coal_maintenance_derate >= 0.0 && coal_maintenance_derate < 1.0,
            "coal_maintenance_derate", "in [0, 1)");
    require(re_2030 >= kBaseReGw, "re_2030", "at least the 98 GW base");
    require(unit(solar_share), "solar_share", "in [0, 1]");
    require(solar_cuf > 0.0 && solar_cuf < 1.0, "solar_cuf", "in (0, 1)");
    require(wind_cuf > 0.0 && wind_cuf < 1.0, "wind_cuf", "in (0, 1)");
    require(solar_kwh_per_kw_day > 0.0 && solar_kwh_per_kw_day < 24.0, "solar_kwh_per_kw_day",
            "in (0, 24)");
    require(base_solar_gw >= 0.0, "base_solar_gw", "non-negative");
    require(other_re_gw >= 0.0 && other_re_gw < kBaseReGw, "other_re_gw", "in [0, 98)");
    require(unit(other_re_plf), "other_re_plf", "in [0, 1]");
    require(re_life_years >= 1.0, "re_life_years", "at least 1");
    require(solar_capex_2021 > 0.0 && wind_capex_2021 > 0.0 && wind_capex_2030 > 0.0,
            "re capex", "positive");
    require(solar_capex_change > -1.0, "solar_capex_change", "greater than -1");
    require(solar_om >= 0.0 && wind_om >= 0.0, "re O&M", "non-negative");
    require(battery_price_2021 > 0.0, "battery_price_2021", "positive");
    require(battery_learning_rate >= 0.0 && battery_learning_rate < 1.0, "battery_learning_rate",
            "in [0, 1)");
    require(inr_per_usd_2021 > 0.0, "inr_per_usd_2021", "positive");
    require(forex_escalation > -1.0, "forex_escalation", "greater than -1");
    require(battery_life_years >= 1.0, "battery_life_years", "at least 1");
    require(dod_buffer > 0.0 && dod_buffer < 1.0, "dod_buffer", "in (0, 1)");
    require(roundtrip_eff > 0.0 && roundtrip_eff <= 1.0, "roundtrip_eff", "in (0, 1]");
    require(cycle_boundary_slot >= 0 && cycle_boundary_slot < kSlotsPerDay, "cycle_boundary_slot",
            "in [0, 48)");
    require(discount_rate > -1.0 && wacc > -1.0, "discount_rate and wacc", "greater than -1");
    require(fuel_price_coal_2019 > 0.0 && fuel_price_coal_slack > 0.0 &&
                fuel_price_gas_2019 > 0.0 && fuel_price_gas_slack > 0.0,
            "fuel prices", "positive");
    for (double a : {aux_coal, aux_gas, aux_hydro, aux_nuclear, aux_re}) {
        require(a >= 0.0 && a < 1.0, "aux consumption", "in [0, 1)");
    }
    require(unit(fgd_penalty), "fgd_penalty", "in [0, 1]");
    require(fgd_ramp_end >= fgd_ramp_start, "fgd_ramp_end", "not before fgd_ramp_start");
    require(coal_retirement_2030 >= 0.0 && coal_retirement_2030 <= kBaseCoalGw,
            "coal_retirement_2030", "in [0, 162.6]");
    require(hydro_growth >= 0.0 && nuclear_growth >= 0.0, "hydro/nuclear growth", "non-negative");
    require(battery_size_fraction > 0.0 && battery_size_fraction <= 1.0, "battery_size_fraction",
            "in (0, 1]");
    require(new_coal_size_fraction > 0.0 && new_coal_size_fraction <= 1.0,
            "new_coal_size_fraction", "in (0, 1]");
    require(unit(dedicated_solar_extra), "dedicated_solar_extra", "in [0, 1]");
    for (const auto& t : new_tech) {
        require(t.life_years >= 1.0, "new technology life", "at least 1");
        require(t.capex_2021 >= 0.0 && t.fuel_price_2021 >= 0.0 && t.om_rate >= 0.0,
                "new technology costs", "non-negative");
        require(t.aux >= 0.0 && t.aux < 1.0, "new technology aux", "in [0, 1)");
    }
}

// ---------------------------------------------------------------------------
// Field registry

namespace {

struct TechField {
    NewOption option;
    double NewTechParams::*member;
};

using FieldRef = std::variant<double ScenarioParams::*, int ScenarioParams::*,
                              bool ScenarioParams::*, NewOption ScenarioParams::*, TechField>;

struct Field {
    std::string name;
    FieldRef ref;
};

#define GRIDLAB_FIELD(member) Field{#member, &ScenarioParams::member}

const std::vector<Field>& registry() {
    static const std::vector<Field> fields = [] {
        std::vector<Field> f{
            GRIDLAB_FIELD(demand_growth),
            GRIDLAB_FIELD(flex_limit),
            GRIDLAB_FIELD(ists_losses),
            GRIDLAB_FIELD(grid_buffer),
            GRIDLAB_FIELD(coal_maintenance_derate),
            GRIDLAB_FIELD(re_2030),
            GRIDLAB_FIELD(solar_share),
            GRIDLAB_FIELD(solar_cuf),
            GRIDLAB_FIELD(wind_cuf),
            GRIDLAB_FIELD(solar_kwh_per_kw_day),
            GRIDLAB_FIELD(base_solar_gw),
            GRIDLAB_FIELD(other_re_gw),
            GRIDLAB_FIELD(other_re_plf),
            GRIDLAB_FIELD(re_life_years),
            GRIDLAB_FIELD(solar_capex_2021),
            GRIDLAB_FIELD(solar_capex_change),
            GRIDLAB_FIELD(wind_capex_2021),
            GRIDLAB_FIELD(wind_capex_2030),
            GRIDLAB_FIELD(solar_om),
            GRIDLAB_FIELD(wind_om),
            GRIDLAB_FIELD(om_inflation),
            GRIDLAB_FIELD(battery_price_2021),
            GRIDLAB_FIELD(battery_learning_rate),
            GRIDLAB_FIELD(inr_per_usd_2021),
            GRIDLAB_FIELD(forex_escalation),
            GRIDLAB_FIELD(battery_life_years),
            GRIDLAB_FIELD(dod_buffer),
            GRIDLAB_FIELD(roundtrip_eff),
            GRIDLAB_FIELD(efficiency_on_charge_only),
            GRIDLAB_FIELD(cycle_boundary_slot),
            GRIDLAB_FIELD(discount_rate),
            GRIDLAB_FIELD(wacc),
            GRIDLAB_FIELD(annuity_full_life),
            GRIDLAB_FIELD(fuel_price_coal_2019),
            GRIDLAB_FIELD(fuel_price_coal_slack),
            GRIDLAB_FIELD(fuel_price_gas_2019),
            GRIDLAB_FIELD(fuel_price_gas_slack),
            GRIDLAB_FIELD(coal_escalation),
            GRIDLAB_FIELD(gas_escalation),
            GRIDLAB_FIELD(diesel_escalation),
            GRIDLAB_FIELD(aux_coal),
            GRIDLAB_FIELD(aux_gas),
            GRIDLAB_FIELD(aux_hydro),
            GRIDLAB_FIELD(aux_nuclear),
            GRIDLAB_FIELD(aux_re),
            GRIDLAB_FIELD(fgd_penalty),
            GRIDLAB_FIELD(fgd_ramp_start),
            GRIDLAB_FIELD(fgd_ramp_end),
            GRIDLAB_FIELD(coal_retirement_2030),
            GRIDLAB_FIELD(hydro_growth),
            GRIDLAB_FIELD(nuclear_growth),
            GRIDLAB_FIELD(new_option),
            GRIDLAB_FIELD(battery_size_fraction),
            GRIDLAB_FIELD(new_coal_size_fraction),
            GRIDLAB_FIELD(dedicated_solar_extra),
        };
        const std::pair<std::string_view, double NewTechParams::*> tech_members[] = {
            {"life_years", &NewTechParams::life_years},
            {"capex_2021", &NewTechParams::capex_2021},
            {"capex_escalation", &NewTechParams::capex_escalation},
            {"aux", &NewTechParams::aux},
            {"fuel_price_2021", &NewTechParams::fuel_price_2021},
            {"om_rate", &NewTechParams::om_rate},
        };
        for (NewOption o : kNewOptions) {
            for (const auto& [suffix, member] : tech_members) {
                f.push_back({"new_" + std::string(option_name(o)) + "_" + std::string(suffix),
                             TechField{o, member}});
            }
        }
        return f;
    }();
    return fields;
}

#undef GRIDLAB_FIELD

const Field* find_field(std::string_view name) {
    for (const auto& f : registry()) {
        if (f.name == name) return &f;
    }
    return nullptr;
}

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};

}  // namespace

std::vector<std::string_view> param_names() {
    std::vector<std::string_view> out;
    for (const auto& f : registry()) out.push_back(f.name);
    return out;
}

bool has_param(std::string_view name) { return find_field(name) != nullptr; }

void set_param(ScenarioParams& p, std::string_view name, const ParamValue& value) {
    const Field* f = find_field(name);
    if (!f) throw ParameterError("unknown parameter '" + std::string(name) + "'");
    const auto wrong = [&](std::string_view expected) {
        return ParameterError("parameter '" + std::string(name) + "' expects " +
                              std::string(expected));
    };
    std::visit(
        overloaded{
            [&](double ScenarioParams::*m) {
                const double* d = std::get_if<double>(&value.v);
                if (!d) throw wrong("a number");
                p.*m = *d;
            },
            [&](int ScenarioParams::*m) {
                const double* d = std::get_if<double>(&value.v);
                if (!d || std::floor(*d) != *d) throw wrong("an integer");
                p.*m = static_cast<int>(*d);
            },
            [&](bool ScenarioParams::*m) {
                const bool* b = std::get_if<bool>(&value.v);
                if (!b) throw wrong("a boolean");
                p.*m = *b;
            },
            [&](NewOption ScenarioParams::*m) {
                const std::string* s = std::get_if<std::string>(&value.v);
                const auto opt = s ? parse_option(*s) : std::nullopt;
                if (!opt) throw wrong("one of coal, ocgt, ccgt, gas_ic, diesel_gen, battery_re");
                p.*m = *opt;
            },
            [&](TechField t) {
                const double* d = std::get_if<double>(&value.v);
                if (!d) throw wrong("a number");
                p.tech(t.option).*(t.member) = *d;
            },
        },
        f->ref);
}

ParamValue get_param(const ScenarioParams& p, std::string_view name) {
    const Field* f = find_field(name);
    if (!f) throw ParameterError("unknown parameter '" + std::string(name) + "'");
    return std::visit(
        overloaded{
            [&](double ScenarioParams::*m) { return ParamValue{p.*m}; },
            [&](int ScenarioParams::*m) { return ParamValue{static_cast<double>(p.*m)}; },
            [&](bool ScenarioParams::*m) { return ParamValue{p.*m}; },
            [&](NewOption ScenarioParams::*m) {
                return ParamValue{std::string(option_name(p.*m))};
            },
            [&](TechField t) { return ParamValue{p.tech(t.option).*(t.member)}; },
        },
        f->ref);
}

std::string format_param(const ParamValue& v) {
    return std::visit(overloaded{
                          [](double d) { return text::format_double(d); },
                          [](bool b) { return std::string(b ? "true" : "false"); },
                          [](const std::string& s) { return s; },
                      },
                      v.v);
}

// ---------------------------------------------------------------------------
// Grid

std::size_t ParamGrid::size() const {
    std::size_t n = 1;
    for (const auto& [name, values] : axes) n *= values.size();
    return n;
}

ParamGrid& ParamGrid::axis(std::string name, std::vector<ParamValue> values) {
    if (!has_param(name)) throw ParameterError("unknown parameter '" + name + "'");
    if (values.empty()) throw ParameterError("empty value list for '" + name + "'");
    for (const auto& [existing, _] : axes) {
        if (existing == name) throw ParameterError("duplicate axis '" + name + "'");
    }
    ScenarioParams probe = base;
    for (const auto& v : values) set_param(probe, name, v);
    axes.emplace_back(std::move(name), std::move(values));
    return *this;
}

ParamGrid& ParamGrid::axis(std::string name, std::vector<double> values) {
    std::vector<ParamValue> pv;
    pv.reserve(values.size());
    for (double d : values) pv.push_back({d});
    return axis(std::move(name), std::move(pv));
}

ParamGrid paper_grid() {
    ParamGrid g;
    g.axis("demand_growth", std::vector<double>{0.05, 0.0525, 0.055});
    g.axis("flex_limit", std::vector<double>{0.55, 0.60, 0.70});
    g.axis("re_2030", std::vector<double>{250, 300, 350, 400, 450, 500, 550});
    g.axis("solar_share", std::vector<double>{6.0 / 12.0, 7.0 / 12.0, 8.0 / 12.0});
    return g;
}

std::vector<ScenarioParams> expand_param_grid(const ParamGrid& grid) {
    for (const auto& [name, values] : grid.axes) {
        if (values.empty()) throw ParameterError("empty value list for '" + name + "'");
    }
    const std::size_t n = grid.size();
    std::vector<ScenarioParams> out;
    out.reserve(n);
    std::vector<std::size_t> digit(grid.axes.size(), 0);
    for (std::size_t k = 0; k < n; ++k) {
        ScenarioParams p = grid.base;
        for (std::size_t a = 0; a < grid.axes.size(); ++a) {
            set_param(p, grid.axes[a].first, grid.axes[a].second[digit[a]]);
        }
        out.push_back(p);
        for (std::size_t a = grid.axes.size(); a-- > 0;) {
            if (++digit[a] < grid.axes[a].second.size()) break;
            digit[a] = 0;
        }
    }
    return out;
}

std::string scenario_key(const ParamGrid& grid, std::size_t index) {
    std::vector<std::size_t> digit(grid.axes.size(), 0);
    for (std::size_t a = grid.axes.size(); a-- > 0;) {
        const std::size_t len = grid.axes[a].second.size();
        digit[a] = index % len;
        index /= len;
    }
    std::string key;
    for (std::size_t a = 0; a < grid.axes.size(); ++a) {
        if (a) key += ';';
        key += grid.axes[a].first + "=" + format_param(grid.axes[a].second[digit[a]]);
    }
    return key;
}

namespace {

ParamValue from_json(const nlohmann::ordered_json& j, const std::string& key) {
    if (j.is_boolean()) return {j.get<bool>()};
    if (j.is_number()) return {j.get<double>()};
    if (j.is_string()) return {j.get<std::string>()};
    throw ParameterError("unsupported value for '" + key + "'");
}

}  // namespace

ParamGrid load_param_grid(std::string_view json_text) {
    nlohmann::ordered_json doc;
    try {
        doc = nlohmann::ordered_json::parse(json_text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParameterError(std::string("config is not valid JSON: ") + e.what());
    }
    if (!doc.is_object()) throw ParameterError("config must be a JSON object");
    ParamGrid grid;
    for (const auto& [key, value] : doc.items()) {
        if (!has_param(key)) throw ParameterError("unknown key '" + key + "'");
        if (value.is_array()) continue;
        set_param(grid.base, key, from_json(value, key));
    }
    for (const auto& [key, value] : doc.items()) {
        if (!value.is_array()) continue;
        std::vector<ParamValue> values;
        for (const auto& v : value) values.push_back(from_json(v, key));
        grid.axis(key, std::move(values));
    }
    return grid;
}

// ---------------------------------------------------------------------------
// Capacity trajectories

std::size_t CapacityPath::index(int year) {
    if (year < kFirstYear || year > kLastYear) {
        throw ParameterError("year " + std::to_string(year) + " outside 2021-2030");
    }
    return static_cast<std::size_t>(year - kFirstYear);
}

CapacityPath build_capacity_path(const ScenarioParams& p, const BaseYearData* base) {
    if (!(p.re_2030 >= kBaseReGw)) throw ParameterError("re_2030 below the 98 GW base");
    CapacityPath c;
    const double span = kHorizonYears - 1;
    const double coal_peak_gw = base ? base->fuel(Fuel::coal).peak() / 1000.0 : 0.0;
    const double gas_peak_gw = base ? base->fuel(Fuel::gas).peak() / 1000.0 : 0.0;
    for (std::size_t y = 0; y < kHorizonYears; ++y) {
        const int year = kFirstYear + static_cast<int>(y);
        const double yd = static_cast<double>(y);
        c.re_total[y] = y + 1 == kHorizonYears
                            ? p.re_2030
                            : kBaseReGw * std::pow(p.re_2030 / kBaseReGw, yd / span);
        c.other_re[y] = std::min(p.other_re_gw, c.re_total[y]);
        const double vre = c.re_total[y] - c.other_re[y];
        c.solar[y] = p.solar_share * vre;
        c.wind[y] = vre - c.solar[y];
        c.hydro[y] = kBaseHydroGw * std::pow(1.0 + p.hydro_growth, yd);
        c.nuclear[y] = kBaseNuclearGw * std::pow(1.0 + p.nuclear_growth, yd);

        c.coal_pre_fgd[y] = kBaseCoalGw - p.coal_retirement_2030 * yd / span;
        double ramp = 0.0;
        if (year >= p.fgd_ramp_end) ramp = 1.0;
        else if (year > p.fgd_ramp_start)
            ramp = static_cast<double>(year - p.fgd_ramp_start) /
                   static_cast<double>(p.fgd_ramp_end - p.fgd_ramp_start);
        c.fgd_factor[y] = 1.0 - p.fgd_penalty * ramp;
        c.coal[y] = c.coal_pre_fgd[y] * c.fgd_factor[y];
        c.gas[y] = kBaseGasGw;

        if (base) {
            const double coal_avail = c.coal[y] * (1.0 - p.coal_maintenance_derate);
            c.coal_2019_tranche[y] = std::min(coal_avail, coal_peak_gw * c.fgd_factor[y]);
            c.coal_slack_tranche[y] = coal_avail - c.coal_2019_tranche[y];
            c.gas_2019_tranche[y] = std::min(c.gas[y], gas_peak_gw);
            c.gas_slack_tranche[y] = c.gas[y] - c.gas_2019_tranche[y];
        }
    }
    return c;
}

HalfHourlySeries project_demand(const ScenarioParams& p, const BaseYearData& base, int year) {
    const std::size_t y = CapacityPath::index(year);
    HalfHourlySeries out = map_to_year(base.demand, year);
    out.label = "demand";
    if (y == 0 || p.demand_growth == 0.0) return out;
    const double factor = std::pow(1.0 + p.demand_growth, static_cast<double>(y));
    kernels::active().scale(out.values, factor, out.values);
    return out;
}

TrancheCaps tranche_capacities(const ScenarioParams& p, const CapacityPath& path,
                               const BaseYearData& base, int year) {
    const std::size_t y = CapacityPath::index(year);
    const HalfHourlySeries coal = map_to_year(base.fuel(Fuel::coal), year);
    const HalfHourlySeries gas = map_to_year(base.fuel(Fuel::gas), year);
    const std::size_t n = coal.size();
    TrancheCaps t;
    t.coal_available_mw = path.coal[y] * 1000.0 * (1.0 - p.coal_maintenance_derate);
    t.gas_available_mw = path.gas[y] * 1000.0;
    t.coal_2019.resize(n);
    t.coal_slack.resize(n);
    t.gas_2019.resize(n);
    t.gas_slack.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        t.coal_2019[i] = std::min(coal[i] * path.fgd_factor[y], t.coal_available_mw);
        t.coal_slack[i] = t.coal_available_mw - t.coal_2019[i];
        t.gas_2019[i] = std::min(gas[i], t.gas_available_mw);
        t.gas_slack[i] = t.gas_available_mw - t.gas_2019[i];
    }
    return t;
}

ReShapes build_re_shapes(const ScenarioParams& p, const BaseYearData& base,
                         const PerMwShape& historical_solar) {
    if (historical_solar.size() != base.size()) {
        throw ParameterError("solar shape length does not match the base year");
    }
    ReShapes s;
    s.solar = rescale_to_cuf(historical_solar, p.solar_cuf);
    s.dedicated_solar = rescale_to_cuf(historical_solar, p.solar_kwh_per_kw_day / 24.0);

    HalfHourlySeries wind_and_solar = base.fuel(Fuel::re);
    const double other_mw = p.other_re_gw * 1000.0 * p.other_re_plf;
    for (double& v : wind_and_solar.values) v = std::max(0.0, v - other_mw);
    s.wind = derive_wind_shape(wind_and_solar, historical_solar, p.base_solar_gw * 1000.0,
                               p.wind_cuf);
    return s;
}

MustRun project_must_run(const ScenarioParams& p, const CapacityPath& path,
                         const BaseYearData& base, const ReShapes& shapes, int year) {
    const std::size_t y = CapacityPath::index(year);
    const int base_year = base.year();
    const HalfHourlySeries solar =
        map_to_year(HalfHourlySeries(base_year, shapes.solar.values), year);
    const HalfHourlySeries wind = map_to_year(HalfHourlySeries(base_year, shapes.wind.values), year);
    const auto& kt = kernels::active();

    MustRun m;
    m.re = HalfHourlySeries::zeros(year, "re");
    const double solar_mw = path.solar[y] * 1000.0;
    const double wind_mw = path.wind[y] * 1000.0;
    const double other_mw = path.other_re[y] * 1000.0 * p.other_re_plf;
    std::vector<double> tmp(m.re.size());
    kt.scale(solar.values, solar_mw, m.re.values);
    kt.scale(wind.values, wind_mw, tmp);
    kt.add(m.re.values, tmp, m.re.values);
    for (double& v : m.re.values) v += other_mw;

    m.hydro = map_to_year(base.fuel(Fuel::hydro), year);
    m.hydro.label = "hydro";
    kt.scale(m.hydro.values, path.hydro[y] / path.hydro[0], m.hydro.values);
    m.nuclear = map_to_year(base.fuel(Fuel::nuclear), year);
    m.nuclear.label = "nuclear";
    kt.scale(m.nuclear.values, path.nuclear[y] / path.nuclear[0], m.nuclear.values);
    return m;
}

}  // namespace gridlab
