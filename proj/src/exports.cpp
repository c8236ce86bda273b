#include "gridlab/exports.hpp"

#include <fstream>

#include "gridlab/errors.hpp"
#include "gridlab/text.hpp"

namespace gridlab {

namespace {

std::vector<std::string> with_prefix(std::vector<std::string> head,
                                     const std::vector<std::string>& tail) {
    head.insert(head.end(), tail.begin(), tail.end());
    return head;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IntegrityError("cannot write " + path.string());
    out << text << '\n';
}

}  // namespace

FigureExporter::FigureExporter(std::filesystem::path out_dir, const ParamGrid& grid)
    : out_(std::move(out_dir)), grid_(grid) {
    std::filesystem::create_directories(out_ / "reports");
    for (const auto& [name, values] : grid.axes) axis_names_.push_back(name);

    std::vector<std::string> mix_head{"index", "year", "requirement_twh"};
    for (std::size_t t = 0; t < kTrancheCount; ++t) {
        mix_head.push_back(std::string(tranche_name(static_cast<Tranche>(t))) + "_twh");
    }
    mix_head.insert(mix_head.end(), {"secondary_unmet_twh", "curtailment_twh"});
    mix_ = std::make_unique<CsvWriter>(out_ / "generation_mix.csv", mix_head);
    coal_ = std::make_unique<CsvWriter>(
        out_ / "coal_output.csv",
        std::vector<std::string>{"index", "year", "coal_twh", "coal_capacity_mw", "coal_plf",
                                 "coal_peak_mw", "ramp_le_0_5", "ramp_0_5_1", "ramp_1_2",
                                 "ramp_gt_2", "max_ramp_pct_per_min", "relaxed_floor_slots"});
    need_ = std::make_unique<CsvWriter>(
        out_ / "new_requirement.csv",
        std::vector<std::string>{"index", "year", "option", "unmet_twh", "peak_unmet_mw",
                                 "required_net_mw", "installed_gross_mw", "increment_gross_mw",
                                 "battery_energy_mwh", "dedicated_solar_gw", "secondary_unmet_twh",
                                 "biodiesel_mw", "displaced_gas_nonapm_twh", "displaced_coal_twh",
                                 "bonus_curtailment_avoided_twh"});
    failures_ = std::make_unique<CsvWriter>(out_ / "failures.csv",
                                            std::vector<std::string>{"index", "scenario", "error"});
}

void FigureExporter::add(SweepOutcome&& o) {
    ++seen_;
    const std::string key = scenario_key(grid_, o.index);
    if (!o.result) {
        ++failed_;
        std::string msg = o.error;
        for (char& c : msg) {
            if (c == ',' || c == '\n' || c == '\r' || c == '"') c = ' ';
        }
        failures_->cell(o.index).cell(key).cell(msg);
        failures_->end_row();
        return;
    }
    const ScenarioResult& r = *o.result;

    double curtailment = 0.0;
    for (std::size_t k = 0; k < r.years.size(); ++k) {
        const YearSummary& y = r.years[k];
        const YearPlan& yp = r.plan.years[k];
        curtailment += y.curtailment_after_mwh;

        mix_->cell(o.index).cell(y.year).cell(mwh_to_twh(y.requirement_mwh));
        for (double e : y.energy.after_mwh) mix_->cell(mwh_to_twh(e));
        mix_->cell(mwh_to_twh(yp.secondary_unmet_mwh)).cell(mwh_to_twh(y.curtailment_after_mwh));
        mix_->end_row();

        const double coal_mwh = y.energy.after_mwh[static_cast<std::size_t>(Tranche::coal_2019)] +
                                y.energy.after_mwh[static_cast<std::size_t>(Tranche::coal_slack)];
        const double hours = static_cast<double>(slots_in_year(y.year)) * kHoursPerSlot;
        coal_->cell(o.index)
            .cell(y.year)
            .cell(mwh_to_twh(coal_mwh))
            .cell(y.coal_capacity_mw)
            .cell(y.coal_capacity_mw > 0.0 ? coal_mwh / (y.coal_capacity_mw * hours) : 0.0)
            .cell(y.coal_peak_mw);
        for (std::size_t c : y.ramp.counts) coal_->cell(c);
        coal_->cell(y.ramp.max_ramp_pct_per_min).cell(y.relaxed_floor_slots);
        coal_->end_row();

        need_->cell(o.index)
            .cell(y.year)
            .cell(option_name(r.plan.option))
            .cell(mwh_to_twh(y.unmet_mwh))
            .cell(y.peak_unmet_mw)
            .cell(yp.required_net_mw)
            .cell(yp.installed_gross_mw)
            .cell(yp.increment_gross_mw)
            .cell(yp.battery.energy_mwh)
            .cell(yp.dedicated_solar_gw)
            .cell(mwh_to_twh(yp.secondary_unmet_mwh))
            .cell(yp.biodiesel_mw)
            .cell(mwh_to_twh(yp.displaced_gas_mwh))
            .cell(mwh_to_twh(yp.displaced_coal_mwh))
            .cell(mwh_to_twh(yp.bonus_mwh));
        need_->end_row();
    }

    write_text(out_ / "reports" / (std::to_string(o.index) + ".json"),
               "{\n\"scenario\": \"" + key + "\",\n\"cost\": " + cost_report_json(r.cost) +
                   ",\n\"plan\": " + plan_json(r.plan) + "\n}");
    if (r.detail) {
        write_year_detail(*r.detail, r.detail->before.year, out_ / "detail");
    }

    Row row;
    row.entry.index = o.index;
    row.entry.npv_total = r.cost.npv_total;
    row.entry.new_capacity_mw = r.plan.peak_capacity_mw();
    row.entry.curtailment_twh = mwh_to_twh(curtailment);
    row.entry.re_2030 = r.params.re_2030;
    row.entry.option = r.params.new_option;
    row.key = key;
    for (const auto& name : axis_names_) {
        row.axis_values.push_back(format_param(get_param(r.params, name)));
    }
    row.cost = r.cost;
    rows_.push_back(std::move(row));
}

std::size_t FigureExporter::finish() {
    std::vector<FrontierEntry> entries;
    entries.reserve(rows_.size());
    for (const auto& r : rows_) entries.push_back(r.entry);

    std::vector<std::string> comp;
    for (std::size_t c = 0; c < kCostComponents; ++c) {
        comp.push_back(std::string(component_name(static_cast<CostComponent>(c))));
    }
    const std::vector<std::string> tail = with_prefix(
        with_prefix({"re_2030_gw", "option", "npv_total"}, comp),
        {"levelized_existing", "levelized_new", "new_capacity_mw", "curtailment_twh"});

    {
        CsvWriter w(out_ / "frontier.csv",
                    with_prefix(with_prefix({"rank", "index", "scenario"}, axis_names_), tail));
        std::size_t rank = 1;
        for (std::size_t i : frontier(entries)) {
            const Row& r = rows_[i];
            w.cell(rank++).cell(r.entry.index).cell(r.key);
            for (const auto& v : r.axis_values) w.cell(v);
            w.cell(r.entry.re_2030).cell(option_name(r.entry.option)).cell(r.cost.npv_total);
            for (double v : r.cost.npv_by_component) w.cell(v);
            const auto opt = [&](const std::optional<double>& v) {
                w.cell(v ? text::format_double(*v) : std::string());
            };
            opt(r.cost.levelized_existing);
            opt(r.cost.levelized_new);
            w.cell(r.entry.new_capacity_mw).cell(r.entry.curtailment_twh);
            w.end_row();
        }
    }
    {
        CsvWriter w(out_ / "frontier_cells.csv",
                    {"re_2030_gw", "option", "index", "scenario", "npv_total"});
        for (const auto& c : frontier_cells(entries)) {
            const Row& r = rows_[c.best];
            w.cell(c.re_2030).cell(option_name(c.option)).cell(r.entry.index).cell(r.key).cell(
                r.entry.npv_total);
            w.end_row();
        }
    }
    mix_.reset();
    coal_.reset();
    need_.reset();
    failures_.reset();
    return failed_;
}

void write_year_detail(const YearDetail& d, int year, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    const std::string y = std::to_string(year);
    write_dispatch_csv(d.after, dir / ("dispatch_" + y + ".csv"));
    write_dispatch_csv(d.before, dir / ("dispatch_pre_new_" + y + ".csv"));
    std::vector<double> need(d.unmet.size());
    for (std::size_t i = 0; i < need.size(); ++i) need[i] = d.unmet[i] + d.buffer.shortfall[i];
    write_ldc_csv(need, dir / ("ldc_new_" + y + ".csv"));
    if (d.soc) write_soc_csv(*d.soc, dir / ("soc_" + y + ".csv"));
}

}  // namespace gridlab
