#pragma once

#include <cstddef>
#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include "gridlab/csv.hpp"
#include "gridlab/economics.hpp"
#include "gridlab/pipeline.hpp"
#include "gridlab/scenario.hpp"

namespace gridlab {

/// Figure-ready exports for one sweep. Outcomes must arrive in grid order.
///
///   frontier.csv         scenarios ranked by NPV with cost components
///   frontier_cells.csv   cheapest scenario per (re_2030, new_option)
///   generation_mix.csv   TWh per tranche per scenario-year, after NEW
///   coal_output.csv      coal energy, capacity, PLF and ramp classes
///   new_requirement.csv  NEW sizing per scenario-year
///   failures.csv         grid points that raised an error
///   reports/<index>.json cost report and NEW plan per scenario
///   detail/              slot-level CSVs for the requested year
class FigureExporter {
public:
    FigureExporter(std::filesystem::path out_dir, const ParamGrid& grid);

    void add(SweepOutcome&& outcome);
    /// Writes the ranked files. Returns the number of failed scenarios.
    std::size_t finish();

    std::size_t scenarios() const { return seen_; }

private:
    struct Row {
        FrontierEntry entry;
        std::string key;
        std::vector<std::string> axis_values;
        CostReport cost;
    };

    std::filesystem::path out_;
    const ParamGrid& grid_;
    std::vector<std::string> axis_names_;
    std::unique_ptr<CsvWriter> mix_, coal_, need_, failures_;
    std::vector<Row> rows_;
    std::size_t seen_ = 0;
    std::size_t failed_ = 0;
};

/// Slot-level files for one year: dispatch (chronological mix), LDC of
/// NEW requirement, and the battery SoC trace when present.
void write_year_detail(const YearDetail& d, int year, const std::filesystem::path& dir);

}  // namespace gridlab
