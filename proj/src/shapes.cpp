#include "gridlab/shapes.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <string>

#include "gridlab/errors.hpp"
#include "gridlab/kernels.hpp"
#include "gridlab/text.hpp"

namespace gridlab {

std::string_view fuel_name(Fuel f) {
    switch (f) {
        case Fuel::coal: return "coal";
        case Fuel::gas: return "gas";
        case Fuel::hydro: return "hydro";
        case Fuel::nuclear: return "nuclear";
        case Fuel::re: return "re";
    }
    return "unknown";
}

PerMwShape PerMwShape::from_values(std::vector<double> v) {
    PerMwShape s;
    s.achieved_cuf =
        v.empty() ? 0.0 : kernels::active().sum(v) / static_cast<double>(v.size());
    s.values = std::move(v);
    return s;
}

namespace {

constexpr std::string_view kTimeseriesHeader =
    "timestamp,demand_mw,coal_mw,gas_mw,hydro_mw,nuclear_mw,re_mw";
constexpr double kMaxMissingRowShare = 0.05;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

constexpr int kCumulativeDays[12] = {0, 31, 59, 90, 120, 151, 181, 212, 243, 273, 304, 334};
constexpr int kMonthDays[12] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};

int parse_fixed_int(std::string_view s, std::size_t line, std::string_view what) {
    int v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || p != s.data() + s.size()) {
        throw ParseError(line, "bad " + std::string(what) + " in timestamp");
    }
    return v;
}

struct SlotTime {
    int year;
    std::size_t slot;
};

// Accepts YYYY-MM-DDTHH:MM[:SS] (or a space instead of 'T').
SlotTime parse_timestamp(std::string_view ts, std::size_t line) {
    if (ts.size() < 16 || ts[4] != '-' || ts[7] != '-' || (ts[10] != 'T' && ts[10] != ' ') ||
        ts[13] != ':') {
        throw ParseError(line, "malformed timestamp '" + std::string(ts) + "'");
    }
    const int year = parse_fixed_int(ts.substr(0, 4), line, "year");
    const int month = parse_fixed_int(ts.substr(5, 2), line, "month");
    const int day = parse_fixed_int(ts.substr(8, 2), line, "day");
    const int hour = parse_fixed_int(ts.substr(11, 2), line, "hour");
    const int minute = parse_fixed_int(ts.substr(14, 2), line, "minute");
    int second = 0;
    if (ts.size() > 16) {
        if (ts.size() < 19 || ts[16] != ':') {
            throw ParseError(line, "malformed timestamp '" + std::string(ts) + "'");
        }
        second = parse_fixed_int(ts.substr(17, 2), line, "second");
    }
    if (month < 1 || month > 12 || hour < 0 || hour > 23 || minute < 0 || minute > 59 ||
        second < 0 || second > 59) {
        throw ParseError(line, "timestamp out of range '" + std::string(ts) + "'");
    }
    const int month_len = kMonthDays[month - 1] + (month == 2 && is_leap_year(year) ? 1 : 0);
    if (day < 1 || day > month_len) {
        throw ParseError(line, "day out of range '" + std::string(ts) + "'");
    }
    if ((minute != 0 && minute != 30) || second != 0) {
        throw CadenceError("line " + std::to_string(line) + ": timestamp '" + std::string(ts) +
                           "' is not on the 30-minute grid");
    }
    const int doy = kCumulativeDays[month - 1] + (month > 2 && is_leap_year(year) ? 1 : 0) +
                    (day - 1);
    return {year, static_cast<std::size_t>(doy) * kSlotsPerDay +
                      static_cast<std::size_t>(hour * 2 + minute / 30)};
}

double parse_mw(std::string_view cell, std::size_t line, std::string_view column) {
    cell = text::trim(cell);
    if (cell.empty()) return kNaN;
    double v = 0.0;
    auto [p, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
    if (ec != std::errc{} || p != cell.data() + cell.size() || !std::isfinite(v)) {
        throw ParseError(line, "bad number '" + std::string(cell) + "' in " + std::string(column));
    }
    if (v < 0.0) {
        throw ParseError(line, "negative MW '" + std::string(cell) + "' in " +
                                   std::string(column));
    }
    return v;
}

}  // namespace

BaseYearData load_timeseries_csv(const std::filesystem::path& path, int year) {
    std::ifstream in(path);
    if (!in) throw IntegrityError("cannot open " + path.string());

    const std::size_t n = slots_in_year(year);
    BaseYearData data;
    data.demand = HalfHourlySeries(year, std::vector<double>(n, kNaN), "demand");
    for (Fuel f : kFuels) {
        data.fuel(f) = HalfHourlySeries(year, std::vector<double>(n, kNaN), std::string(fuel_name(f)));
    }

    std::string line;
    std::size_t lineno = 0;
    if (!std::getline(in, line)) throw ParseError(1, "empty file");
    ++lineno;
    if (text::trim(text::strip_bom(line)) != kTimeseriesHeader) {
        throw ParseError(lineno, "expected header '" + std::string(kTimeseriesHeader) + "'");
    }

    std::vector<bool> present(n, false);
    std::size_t rows = 0;
    long long prev_slot = -1;
    while (std::getline(in, line)) {
        ++lineno;
        if (text::trim(line).empty()) continue;
        const auto cells = text::split(line, ',');
        if (cells.size() != 7) {
            throw ParseError(lineno, "expected 7 columns, got " + std::to_string(cells.size()));
        }
        const SlotTime t = parse_timestamp(text::trim(cells[0]), lineno);
        if (t.year != year) {
            throw ParseError(lineno, "timestamp outside year " + std::to_string(year));
        }
        if (static_cast<long long>(t.slot) <= prev_slot) {
            throw CadenceError("line " + std::to_string(lineno) +
                               ": timestamps not strictly increasing");
        }
        prev_slot = static_cast<long long>(t.slot);
        data.demand[t.slot] = parse_mw(cells[1], lineno, "demand_mw");
        for (std::size_t k = 0; k < kFuels.size(); ++k) {
            data.supply[k][t.slot] = parse_mw(cells[2 + k], lineno, std::string(fuel_name(kFuels[k])) + "_mw");
        }
        present[t.slot] = true;
        ++rows;
    }

    for (std::size_t i = 0; i < n;) {
        if (present[i]) {
            ++i;
            continue;
        }
        std::size_t j = i;
        while (j < n && !present[j]) ++j;
        data.gaps.push_back({i, j - i});
        i = j;
    }
    const double missing_share = static_cast<double>(n - rows) / static_cast<double>(n);
    if (missing_share > kMaxMissingRowShare) {
        throw IntegrityError(std::to_string(n - rows) + " of " + std::to_string(n) +
                             " rows missing (limit 5%)");
    }
    return data;
}

PerMwShape load_shape_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IntegrityError("cannot open " + path.string());
    std::string line;
    std::size_t lineno = 1;
    if (!std::getline(in, line) || text::trim(text::strip_bom(line)) != "slot,fraction") {
        throw ParseError(1, "expected header 'slot,fraction'");
    }
    std::vector<double> values;
    while (std::getline(in, line)) {
        ++lineno;
        if (text::trim(line).empty()) continue;
        const auto cells = text::split(line, ',');
        if (cells.size() != 2) throw ParseError(lineno, "expected 2 columns");
        const auto slot_cell = text::trim(cells[0]);
        std::size_t slot = 0;
        auto [p, ec] = std::from_chars(slot_cell.data(), slot_cell.data() + slot_cell.size(), slot);
        if (ec != std::errc{} || p != slot_cell.data() + slot_cell.size() || slot != values.size()) {
            throw ParseError(lineno, "slot index out of sequence");
        }
        const double v = parse_mw(cells[1], lineno, "fraction");
        if (std::isnan(v) || v > 1.0) throw ParseError(lineno, "fraction must lie in [0, 1]");
        values.push_back(v);
    }
    if (values.size() % kSlotsPerDay != 0 || values.empty()) {
        throw IntegrityError("shape length " + std::to_string(values.size()) +
                             " is not a whole number of days");
    }
    return PerMwShape::from_values(std::move(values));
}

namespace {

void fill_gaps(std::vector<double>& v, std::size_t max_gap_slots) {
    const std::vector<double> raw = v;
    const std::size_t n = v.size();
    for (std::size_t i = 0; i < n;) {
        if (!std::isnan(raw[i])) {
            ++i;
            continue;
        }
        std::size_t j = i;
        while (j < n && std::isnan(raw[j])) ++j;
        const std::size_t len = j - i;
        if (len <= max_gap_slots && i > 0 && j < n) {
            const double left = raw[i - 1];
            const double right = raw[j];
            for (std::size_t k = 0; k < len; ++k) {
                const double frac = static_cast<double>(k + 1) / static_cast<double>(len + 1);
                v[i + k] = left + (right - left) * frac;
            }
        } else {
            for (std::size_t k = i; k < j; ++k) {
                bool filled = false;
                for (std::size_t off = kSlotsPerDay; off < n && !filled; off += kSlotsPerDay) {
                    if (k >= off && !std::isnan(raw[k - off])) {
                        v[k] = raw[k - off];
                        filled = true;
                    } else if (k + off < n && !std::isnan(raw[k + off])) {
                        v[k] = raw[k + off];
                        filled = true;
                    }
                }
                if (!filled) {
                    throw IntegrityError("slot " + std::to_string(k % kSlotsPerDay) +
                                         " has no clean value on any day");
                }
            }
        }
        i = j;
    }
}

}  // namespace

BaseYearData clean_series(const BaseYearData& raw, std::size_t max_gap_slots,
                          double re_annual_target_gwh, double residual_tolerance) {
    if (max_gap_slots < 1) throw ParameterError("max_gap_slots must be at least 1");
    if (!(re_annual_target_gwh > 0.0)) throw ParameterError("re_annual_target must be positive");

    BaseYearData out = raw;
    fill_gaps(out.demand.values, max_gap_slots);
    for (auto& s : out.supply) fill_gaps(s.values, max_gap_slots);

    HalfHourlySeries& re = out.fuel(Fuel::re);
    const double current_gwh = mwh_to_gwh(re.energy_mwh());
    if (!(current_gwh > 0.0)) throw ParameterError("RE series has no energy to rescale");
    const double factor = re_annual_target_gwh / current_gwh;
    if (factor != 1.0) kernels::active().scale(re.values, factor, re.values);
    out.re_correction_factor = raw.re_correction_factor * factor;

    out.balance_outliers = 0;
    for (std::size_t i = 0; i < out.size(); ++i) {
        double supply = 0.0;
        for (const auto& s : out.supply) supply += s[i];
        if (std::abs(supply - out.demand[i]) > residual_tolerance * out.demand[i]) {
            ++out.balance_outliers;
        }
    }
    return out;
}

PerMwShape rescale_to_cuf(const PerMwShape& shape, double target_cuf) {
    if (!(target_cuf > 0.0 && target_cuf < 1.0)) {
        throw ParameterError("target_cuf must lie in (0, 1)");
    }
    const std::vector<double>& base = shape.values;
    const std::size_t n = base.size();
    std::size_t nonzero = 0;
    for (double v : base) {
        if (!(v >= 0.0 && v <= 1.0)) throw ParameterError("shape values must lie in [0, 1]");
        if (v > 0.0) ++nonzero;
    }
    if (nonzero == 0) throw DegenerateShapeError("shape has zero mean");
    const double ceiling = static_cast<double>(nonzero) / static_cast<double>(n);
    if (target_cuf > ceiling + 1e-12) {
        throw InfeasibleError("target CUF " + std::to_string(target_cuf) +
                                  " exceeds attainable ceiling " + std::to_string(ceiling),
                              ceiling);
    }

    const auto& kt = kernels::active();
    const double nd = static_cast<double>(n);
    double k = target_cuf / (kt.sum(base) / nd);
    std::vector<double> out(n);
    for (int iter = 0; iter < 100; ++iter) {
        kt.scale_clip1(base, k, out);
        const double achieved = kt.sum(out) / nd;
        if (std::abs(achieved - target_cuf) <= 1e-12) break;

        // Hold the clipped set fixed and solve for the factor that lands the
        // mean exactly; newly clipped slots are picked up on the next pass.
        double clipped = 0.0;
        double unclipped_mass = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            if (base[i] * k >= 1.0) clipped += 1.0;
            else unclipped_mass += base[i];
        }
        if (unclipped_mass <= 0.0) break;
        const double next = (target_cuf * nd - clipped) / unclipped_mass;
        if (!(next > k)) break;
        k = next;
    }
    PerMwShape result = PerMwShape::from_values(std::move(out));
    if (std::abs(result.achieved_cuf - target_cuf) > 1e-6) {
        throw InfeasibleError("CUF rescaling did not converge", ceiling);
    }
    return result;
}

PerMwShape derive_wind_shape(const HalfHourlySeries& re_series, const PerMwShape& solar_shape,
                             double solar_capacity_mw, double target_cuf) {
    if (re_series.size() != solar_shape.size()) {
        throw ParameterError("RE series and solar shape lengths differ");
    }
    if (!(solar_capacity_mw >= 0.0)) throw ParameterError("solar capacity must be non-negative");
    const auto& kt = kernels::active();
    std::vector<double> solar_mw(re_series.size());
    kt.scale(solar_shape.values, solar_capacity_mw, solar_mw);
    std::vector<double> residual(re_series.size());
    kt.sub_floor0(re_series.values, solar_mw, residual);
    const double implied_capacity = kt.max(residual);
    if (!(implied_capacity > 0.0)) {
        throw DegenerateShapeError("RE minus solar leaves no wind output");
    }
    kt.scale(residual, 1.0 / implied_capacity, residual);
    for (double& v : residual) v = v > 1.0 ? 1.0 : v;
    return rescale_to_cuf(PerMwShape::from_values(std::move(residual)), target_cuf);
}

}  // namespace gridlab
