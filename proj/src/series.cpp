#include "gridlab/series.hpp"

#include <algorithm>

#include "gridlab/kernels.hpp"

namespace gridlab {

double HalfHourlySeries::energy_mwh() const { return kernels::active().sum(values) * kHoursPerSlot; }

double HalfHourlySeries::peak() const { return kernels::active().max(values); }

double HalfHourlySeries::mean() const {
    return values.empty() ? 0.0 : kernels::active().sum(values) / static_cast<double>(values.size());
}

namespace {
constexpr int kFeb29 = 59;  // zero-based day-of-year of 29 February in a leap year
}

HalfHourlySeries map_to_year(const HalfHourlySeries& s, int target_year) {
    const bool src_leap = s.days() == 366;
    const bool dst_leap = is_leap_year(target_year);
    if (src_leap == dst_leap) return {target_year, s.values, s.label};

    const int dst_days = days_in_year(target_year);
    std::vector<double> out(slots_in_year(target_year));
    for (int d = 0; d < dst_days; ++d) {
        int src_day = d;
        if (dst_leap && d >= kFeb29) src_day = d == kFeb29 ? kFeb29 - 1 : d - 1;
        if (!dst_leap && d >= kFeb29) src_day = d + 1;
        std::copy_n(s.values.begin() + static_cast<std::ptrdiff_t>(src_day) * kSlotsPerDay,
                    kSlotsPerDay, out.begin() + static_cast<std::ptrdiff_t>(d) * kSlotsPerDay);
    }
    return {target_year, std::move(out), s.label};
}

}  // namespace gridlab
