#include <doctest.h>

#include <algorithm>
#include <random>

#include "growth/dataset.hpp"
#include "test_common.hpp"

using namespace growth;

TEST_CASE("long csv: basic parse groups and sorts") {
    const auto ds = parse_long_csv(
        "region,year,gdp\nWorld,1870,4.0\nWorld,1820,2.0\nAsia,1820,1.0\n");
    REQUIRE(ds.series().size() == 2);
    const TimeSeries& world = ds.get("World");
    REQUIRE(world.size() == 2);
    CHECK(world.observations()[0].year == 1820.0);
    CHECK(world.observations()[0].gdp == 2.0);
    CHECK(world.observations()[1].year == 1870.0);
    CHECK(ds.get("Asia").size() == 1);
}

TEST_CASE("long csv: error cases carry line numbers") {
    CHECK_THROWS_WITH_AS(parse_long_csv("region;year;gdp\n"),
                         doctest::Contains("line 1"), Error);
    try {
        parse_long_csv("region,year,gdp\nWorld,1820,0\n");
        FAIL("expected NonPositiveGdp");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::non_positive_gdp);
        CHECK(std::string(e.what()).find("line 2") != std::string::npos);
    }
    try {
        parse_long_csv("region,year,gdp\nWorld,1820,2.0\nWorld,1820,2.1\n");
        FAIL("expected DuplicateYear");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::duplicate_year);
        CHECK(std::string(e.what()).find("World") != std::string::npos);
        CHECK(std::string(e.what()).find("1820") != std::string::npos);
    }
    try {
        parse_long_csv("region,year,gdp\nWorld,abc,2.0\n");
        FAIL("expected BadNumber");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::bad_number);
    }
}

TEST_CASE("long csv: blank lines and CRLF accepted") {
    const auto ds = parse_long_csv(
        "region,year,gdp\r\n\r\nWorld,1820,2.0\r\n\r\nWorld,1870,4.0\r\n");
    CHECK(ds.get("World").size() == 2);
}

TEST_CASE("horizontal: gaps are absent observations") {
    const auto ds = parse_maddison_horizontal(
        ",1,1000,1500\nWorld,,100.0,200.0\nAfrica,5.0,,7.0\n");
    const TimeSeries& world = ds.get("World");
    REQUIRE(world.size() == 2);
    CHECK(world.observations()[0].year == 1000.0);
    CHECK(world.observations()[0].gdp == 100.0);
    CHECK(world.observations()[1].year == 1500.0);
    const TimeSeries& africa = ds.get("Africa");
    REQUIRE(africa.size() == 2);
    CHECK(africa.observations()[0].year == 1.0);
    CHECK(africa.observations()[0].gdp == 5.0);
    CHECK(africa.observations()[1].year == 1500.0);
    CHECK(africa.observations()[1].gdp == 7.0);
}

TEST_CASE("horizontal: bad cells, quoting, duplicates") {
    try {
        parse_maddison_horizontal(",1,1000\nWorld,abc,2.0\n");
        FAIL("expected BadNumber");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::bad_number);
        CHECK(std::string(e.what()).find("row 2") != std::string::npos);
        CHECK(std::string(e.what()).find("column 2") != std::string::npos);
    }
    // thousands separators inside quoted cells
    const auto ds = parse_maddison_horizontal(",1820\nWorld,\"1,234.5\"\n");
    CHECK(ds.get("World").observations()[0].gdp == doctest::Approx(1234.5));

    CHECK_THROWS_AS(
        parse_maddison_horizontal(",1,2\nWorld,1,2\nWorld,3,4\n"), Error);
    try {
        parse_maddison_horizontal(",x,1000\nWorld,1.0,2.0\n");
        FAIL("expected MalformedHeader");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::malformed_header);
    }
}

TEST_CASE("horizontal parse never invents observations") {
    const std::string text =
        ",1,1000,1500,1600\nA,1.0,,2.0,\nB,,3.0,4.0,5.0\n";
    const auto ds = parse_maddison_horizontal(text);
    std::size_t total = 0;
    for (const auto& s : ds.series()) total += s.size();
    CHECK(total == 5); // exactly the non-empty numeric cells

    const auto fixture = load_fixture_dataset();
    std::size_t fixture_total = 0;
    for (const auto& s : fixture.series()) fixture_total += s.size();
    CHECK(fixture_total == 7 * 17);
}

TEST_CASE("horizontal then flatten equals hand-converted long form") {
    const auto horizontal = parse_maddison_horizontal(
        ",1500,1700\nWorld,10.0,20.0\nAsia,1.5,\n");
    const auto long_form = parse_long_csv(
        "region,year,gdp\nWorld,1500,10\nWorld,1700,20\nAsia,1500,1.5\n");
    REQUIRE(horizontal.series().size() == long_form.series().size());
    for (std::size_t i = 0; i < horizontal.series().size(); ++i) {
        CHECK(horizontal.series()[i] == long_form.series()[i]);
    }
}

TEST_CASE("window: inclusive bounds, empty result, inversion") {
    std::vector<Observation> obs{{1500, 1}, {1700, 2}, {1820, 3}, {1900, 4}};
    const TimeSeries s("World", obs);

    const TimeSeries mid = window(s, 1600, 1850);
    REQUIRE(mid.size() == 2);
    CHECK(mid.observations()[0].year == 1700.0);
    CHECK(mid.observations()[1].year == 1820.0);

    const TimeSeries point = window(s, 1500, 1500);
    REQUIRE(point.size() == 1);
    CHECK(point.observations()[0].year == 1500.0);

    CHECK(window(s, 1901, 1950).empty());

    CHECK_THROWS_AS(window(s, 1950, 1901), Error);

    CHECK(window(s, s.first_year(), s.last_year()) == s);
}

TEST_CASE("round-trip: write_long_csv then parse is the identity") {
    std::mt19937 rng(20260808);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int iter = 0; iter < 50; ++iter) {
        std::vector<TimeSeries> series;
        const int regions = 1 + static_cast<int>(u(rng) * 3.0);
        for (int r = 0; r < regions; ++r) {
            std::vector<Observation> obs;
            double year = 1.0 + 100.0 * u(rng);
            const int n = 1 + static_cast<int>(u(rng) * 20.0);
            for (int i = 0; i < n; ++i) {
                obs.push_back({year, std::exp(10.0 * (u(rng) - 0.3))});
                year += 1.0 + std::floor(80.0 * u(rng));
            }
            series.emplace_back("Region " + std::to_string(r), std::move(obs));
        }
        const RegionDataset ds(std::move(series), "roundtrip");
        const RegionDataset back = parse_long_csv(write_long_csv(ds), "roundtrip");
        CHECK(ds == back);
    }
}

TEST_CASE("TimeSeries validation") {
    CHECK_THROWS_AS(TimeSeries("x", {{1820, 2.0}, {1700, 1.0}}), Error);
    CHECK_THROWS_AS(TimeSeries("x", {{1700, -1.0}}), Error);
    const TimeSeries sorted =
        TimeSeries::from_unsorted("x", {{1820, 2.0}, {1700, 1.0}});
    CHECK(sorted.first_year() == 1700.0);

    // permutation invariance of construction
    std::vector<Observation> obs{{1500, 1}, {1600, 2}, {1700, 3}, {1800, 4}};
    std::mt19937 rng(7);
    for (int i = 0; i < 10; ++i) {
        auto shuffled = obs;
        std::shuffle(shuffled.begin(), shuffled.end(), rng);
        CHECK(TimeSeries::from_unsorted("x", shuffled) == TimeSeries("x", obs));
    }
}

TEST_CASE("fixture dataset is well formed") {
    const auto ds = load_fixture_dataset();
    REQUIRE(ds.series().size() == 7);
    const char* expected[] = {"World",       "Western Europe", "Eastern Europe",
                              "Former USSR", "Asia",           "Africa",
                              "Latin America"};
    for (std::size_t i = 0; i < 7; ++i) {
        CHECK(ds.series()[i].region() == expected[i]);
        CHECK(ds.series()[i].first_year() == 1.0);
        CHECK(ds.series()[i].last_year() == 2008.0);
    }
}
