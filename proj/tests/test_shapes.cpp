#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "gridlab/errors.hpp"
#include "gridlab/shapes.hpp"
#include "test_util.hpp"

using namespace gridlab;

namespace {

const int kMonthDays[12] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};

std::string timestamp_2021(std::size_t slot) {
    int doy = static_cast<int>(slot / 48);
    int month = 0;
    while (doy >= kMonthDays[month]) doy -= kMonthDays[month++];
    const int half = static_cast<int>(slot % 48);
    char buf[32];
    std::snprintf(buf, sizeof buf, "2021-%02d-%02dT%02d:%02d", month + 1, doy + 1, half / 2,
                  (half % 2) * 30);
    return buf;
}

// 2021 file; rows in `skip` are omitted, row `negative_row` gets a negative demand.
std::string make_csv(const std::vector<std::size_t>& skip = {}, long negative_row = -1) {
    std::ostringstream os;
    os << "timestamp,demand_mw,coal_mw,gas_mw,hydro_mw,nuclear_mw,re_mw\n";
    for (std::size_t i = 0; i < 17520; ++i) {
        if (std::find(skip.begin(), skip.end(), i) != skip.end()) continue;
        const double d = 150000 + static_cast<double>(i % 48) * 100;
        os << timestamp_2021(i) << ',' << (static_cast<long>(i) == negative_row ? -50.0 : d) << ','
           << d * 0.7 << ',' << d * 0.05 << ',' << d * 0.1 << ',' << d * 0.03 << ',' << d * 0.12
           << '\n';
    }
    return os.str();
}

BaseYearData flat_base(double value) {
    BaseYearData b;
    b.demand = HalfHourlySeries(2021, std::vector<double>(17520, value));
    for (auto& s : b.supply) s = HalfHourlySeries(2021, std::vector<double>(17520, value / 5));
    return b;
}

}  // namespace

TEST_CASE("well-formed file loads with zero gaps") {
    testutil::TempDir dir;
    testutil::write_file(dir / "ts.csv", make_csv());
    const BaseYearData b = load_timeseries_csv(dir / "ts.csv", 2021);
    CHECK(b.size() == 17520);
    CHECK(b.gaps.empty());
    CHECK(b.demand[47] == doctest::Approx(150000 + 4700));
    CHECK(b.fuel(Fuel::re)[0] == doctest::Approx(150000 * 0.12));
}

TEST_CASE("missing rows 100-103 are one 4-slot gap") {
    testutil::TempDir dir;
    testutil::write_file(dir / "ts.csv", make_csv({100, 101, 102, 103}));
    const BaseYearData b = load_timeseries_csv(dir / "ts.csv", 2021);
    REQUIRE(b.gaps.size() == 1);
    CHECK(b.gaps[0] == Gap{100, 4});
    CHECK(std::isnan(b.demand[101]));
}

TEST_CASE("negative demand is a parse error naming the line") {
    testutil::TempDir dir;
    testutil::write_file(dir / "ts.csv", make_csv({}, 10));
    try {
        load_timeseries_csv(dir / "ts.csv", 2021);
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line() == 12);  // header is line 1, row 10 is line 12
        CHECK(std::string(e.what()).find("-50") != std::string::npos);
    }
}

TEST_CASE("loader rejects bad headers, cadence and ordering") {
    testutil::TempDir dir;
    testutil::write_file(dir / "h.csv", "time,demand\n");
    CHECK_THROWS_AS(load_timeseries_csv(dir / "h.csv", 2021), ParseError);

    const std::string head = "timestamp,demand_mw,coal_mw,gas_mw,hydro_mw,nuclear_mw,re_mw\n";
    testutil::write_file(dir / "c.csv", head + "2021-01-01T00:15,1,1,1,1,1,1\n");
    CHECK_THROWS_AS(load_timeseries_csv(dir / "c.csv", 2021), CadenceError);

    testutil::write_file(dir / "o.csv", head + "2021-01-01T00:30,1,1,1,1,1,1\n" +
                                            "2021-01-01T00:00,1,1,1,1,1,1\n");
    CHECK_THROWS_AS(load_timeseries_csv(dir / "o.csv", 2021), CadenceError);

    testutil::write_file(dir / "n.csv", head + "2021-01-01T00:00,abc,1,1,1,1,1\n");
    CHECK_THROWS_AS(load_timeseries_csv(dir / "n.csv", 2021), ParseError);
}

TEST_CASE("more than 5% missing rows is an integrity error") {
    std::vector<std::size_t> skip;
    for (std::size_t i = 0; i < 900; ++i) skip.push_back(i * 2);
    testutil::TempDir dir;
    testutil::write_file(dir / "ts.csv", make_csv(skip));
    CHECK_THROWS_AS(load_timeseries_csv(dir / "ts.csv", 2021), IntegrityError);
    skip.resize(800);
    testutil::write_file(dir / "ts.csv", make_csv(skip));
    CHECK(load_timeseries_csv(dir / "ts.csv", 2021).gaps.size() == 800);
}

TEST_CASE("shape loader") {
    testutil::TempDir dir;
    std::string text = "slot,fraction\n";
    for (int i = 0; i < 48; ++i) text += std::to_string(i) + "," + (i == 24 ? "0.5" : "0") + "\n";
    testutil::write_file(dir / "s.csv", text);
    const PerMwShape s = load_shape_csv(dir / "s.csv");
    CHECK(s.size() == 48);
    CHECK(s.achieved_cuf == doctest::Approx(0.5 / 48));
    testutil::write_file(dir / "bad.csv", "slot,fraction\n0,1.5\n");
    CHECK_THROWS_AS(load_shape_csv(dir / "bad.csv"), ParseError);
}

TEST_CASE("short gaps are interpolated linearly") {
    BaseYearData b = flat_base(100.0);
    b.demand[9] = 100;
    b.demand[10] = std::nan("");
    b.demand[11] = std::nan("");
    b.demand[12] = 130;
    const BaseYearData c = clean_series(b, 4, mwh_to_gwh(b.fuel(Fuel::re).energy_mwh()));
    CHECK(c.demand[10] == doctest::Approx(110));
    CHECK(c.demand[11] == doctest::Approx(120));
}

TEST_CASE("long gaps copy the same slot from the nearest clean day") {
    BaseYearData b = flat_base(100.0);
    auto& coal = b.fuel(Fuel::coal).values;
    for (std::size_t i = 0; i < coal.size(); ++i) coal[i] = static_cast<double>(i % 48) + (i / 48) * 1000.0;
    for (std::size_t i = 48 * 5 + 3; i < 48 * 5 + 13; ++i) coal[i] = std::nan("");
    const BaseYearData c = clean_series(b, 4, 1.0);
    for (std::size_t i = 48 * 5 + 3; i < 48 * 5 + 13; ++i) {
        CHECK(c.fuel(Fuel::coal)[i] == doctest::Approx(static_cast<double>(i % 48) + 4000.0));
    }
}

TEST_CASE("RE is rescaled to the annual target") {
    BaseYearData b = flat_base(100.0);
    const double current = mwh_to_gwh(b.fuel(Fuel::re).energy_mwh());
    const BaseYearData c = clean_series(b, 4, current * 1.2);
    CHECK(c.re_correction_factor == doctest::Approx(1.2));
    CHECK(c.fuel(Fuel::re)[123] == doctest::Approx(20.0 * 1.2));
    CHECK(mwh_to_gwh(c.fuel(Fuel::re).energy_mwh()) == doctest::Approx(current * 1.2).epsilon(1e-12));

    const BaseYearData same = clean_series(b, 4, current);
    CHECK(same.re_correction_factor == 1.0);
    CHECK(same.fuel(Fuel::re).values == b.fuel(Fuel::re).values);
    CHECK(same.demand.values == b.demand.values);
    CHECK(same.size() == b.size());
    CHECK(same.year() == b.year());

    CHECK_THROWS_AS(clean_series(b, 4, 0.0), ParameterError);
    CHECK_THROWS_AS(clean_series(b, 0, 1.0), ParameterError);
}

TEST_CASE("balance outliers are counted, not fatal") {
    BaseYearData b = flat_base(100.0);
    b.demand[3] = 150;
    const BaseYearData c = clean_series(b, 4, mwh_to_gwh(b.fuel(Fuel::re).energy_mwh()));
    CHECK(c.balance_outliers == 1);
}

TEST_CASE("rescale_to_cuf examples") {
    const PerMwShape flat = PerMwShape::from_values(std::vector<double>(96, 0.25));
    const PerMwShape r = rescale_to_cuf(flat, 0.35);
    for (double v : r.values) CHECK(v == doctest::Approx(0.35));
    CHECK(r.achieved_cuf == doctest::Approx(0.35));

    const PerMwShape same = rescale_to_cuf(flat, 0.25);
    CHECK(same.values == flat.values);

    try {
        rescale_to_cuf(PerMwShape::from_values({1.0, 0.0}), 0.6);
        FAIL("expected InfeasibleError");
    } catch (const InfeasibleError& e) {
        CHECK(e.ceiling() == doctest::Approx(0.5));
    }
    CHECK_THROWS_AS(rescale_to_cuf(flat, 1.0), ParameterError);
    CHECK_THROWS_AS(rescale_to_cuf(PerMwShape::from_values({0.0, 0.0}), 0.2), DegenerateShapeError);
}

TEST_CASE("rescale_to_cuf property: mean on target, values capped at 1") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int rep = 0; rep < 50; ++rep) {
        std::vector<double> v(480);
        for (std::size_t i = 0; i < v.size(); ++i) {
            const double hour = static_cast<double>(i % 48) / 2.0;
            v[i] = hour > 6 && hour < 18 ? u(rng) * std::sin((hour - 6) / 12 * M_PI) : 0.0;
        }
        const PerMwShape s = PerMwShape::from_values(v);
        const double ceiling = [&] {
            double nz = 0;
            for (double x : v) nz += x > 0;
            return nz / v.size();
        }();
        const double target = std::min(0.45, ceiling * (0.2 + 0.75 * u(rng)));
        CAPTURE(target);
        const PerMwShape r = rescale_to_cuf(s, target);
        CHECK(std::abs(r.achieved_cuf - target) <= 1e-6);
        for (double x : r.values) {
            CHECK(x <= 1.0);
            CHECK(x >= 0.0);
        }
    }
}

TEST_CASE("derive_wind_shape") {
    // Zero solar capacity: RE normalised by its peak.
    std::vector<double> re(96);
    for (std::size_t i = 0; i < re.size(); ++i) re[i] = 100.0 + static_cast<double>(i);
    const HalfHourlySeries res(2021, re);
    const PerMwShape solar = PerMwShape::from_values(std::vector<double>(96, 0.5));
    const double mean_norm = (100.0 + 47.5) / 195.0;
    const PerMwShape w = derive_wind_shape(res, solar, 0.0, mean_norm);
    for (std::size_t i = 0; i < re.size(); ++i) CHECK(w.values[i] == doctest::Approx(re[i] / 195.0));

    // Independent slot-by-slot subtraction on a 2-day series.
    std::vector<double> sol(96, 0.0);
    for (std::size_t i = 12; i < 36; ++i) sol[i] = sol[i + 48] = 0.8;
    const PerMwShape ss = PerMwShape::from_values(sol);
    const PerMwShape w2 = derive_wind_shape(res, ss, 100.0, 0.3);
    std::vector<double> oracle(96);
    double peak = 0;
    for (std::size_t i = 0; i < 96; ++i) {
        oracle[i] = std::max(0.0, re[i] - 100.0 * sol[i]);
        peak = std::max(peak, oracle[i]);
    }
    const PerMwShape expected = rescale_to_cuf(
        PerMwShape::from_values([&] {
            for (auto& x : oracle) x /= peak;
            return oracle;
        }()),
        0.3);
    for (std::size_t i = 0; i < 96; ++i) {
        CHECK(w2.values[i] == doctest::Approx(expected.values[i]).epsilon(1e-12));
        CHECK(w2.values[i] >= 0.0);
    }

    // RE exactly equal to solar output.
    std::vector<double> exact(96);
    for (std::size_t i = 0; i < 96; ++i) exact[i] = 100.0 * sol[i];
    CHECK_THROWS_AS(derive_wind_shape(HalfHourlySeries(2021, exact), ss, 100.0, 0.3),
                    DegenerateShapeError);
}

TEST_CASE("synthetic base year is deterministic and shaped") {
    const BaseYearData a = synth_shapes(1, 1.0);
    const BaseYearData b = synth_shapes(1, 1.0);
    CHECK(a.demand.values == b.demand.values);
    for (Fuel f : kFuels) CHECK(a.fuel(f).values == b.fuel(f).values);
    CHECK(synth_shapes(2, 1.0).demand.values != a.demand.values);
    CHECK(a.size() == 17520);
    CHECK(mwh_to_twh(a.demand.energy_mwh()) == doctest::Approx(1360.0).epsilon(1e-9));

    for (Fuel f : kFuels) {
        for (double v : a.fuel(f).values) REQUIRE((std::isfinite(v) && v >= 0.0));
    }

    // Evening peak (19:00-21:00) above the daily mean on most days.
    std::size_t above = 0;
    for (std::size_t d = 0; d < 365; ++d) {
        double mean = 0, eve = 0;
        for (std::size_t s = 0; s < 48; ++s) mean += a.demand[d * 48 + s] / 48;
        for (std::size_t s = 38; s < 42; ++s) eve = std::max(eve, a.demand[d * 48 + s]);
        above += eve > mean;
    }
    CHECK(above > 330);

    const BaseYearData flat = synth_shapes(1, 0.0);
    for (double v : flat.demand.values) REQUIRE(v == doctest::Approx(flat.demand[0]));

    CHECK_THROWS_AS(synth_shapes(1, -1.0), ParameterError);
    const PerMwShape s1 = synth_solar_shape(1);
    CHECK(s1.values == synth_solar_shape(1).values);
    CHECK(s1.size() == 17520);
}
