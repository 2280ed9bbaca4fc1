#include <doctest.h>

#include <cmath>
#include <random>

#include "growth/detection.hpp"
#include "growth/reference.hpp"
#include "test_common.hpp"

using namespace growth;

namespace {

TimeSeries dense_noiseless_hyperbola(double from = 0.0, double to = 2000.0,
                                     double step = 250.0) {
    std::vector<Observation> obs;
    for (double t = from; t <= to; t += step) {
        obs.push_back({t, 1.0 / (5.0 - 0.002 * t)});
    }
    return TimeSeries("hyperbola", std::move(obs));
}

} // namespace

TEST_CASE("chow: exact pooled line degenerates to F=0, p=1") {
    const BreakTest test = chow_break_test(dense_noiseless_hyperbola(), 1000.0);
    CHECK(test.f_statistic == 0.0);
    CHECK(test.p_value == 1.0);
    CHECK(test.sse_pooled <= 1e-20);
}

TEST_CASE("chow: two-slope data split at the junction") {
    const TimeSeries s = two_slope_series();

    // oracle: the same three line fits computed by the naive reference path
    const auto obs = std::span<const Observation>(s.observations());
    const double pooled_oracle = reference::reciprocal_line_sse(obs);
    const double split_oracle = reference::reciprocal_line_sse(obs.subspan(0, 4)) +
                                reference::reciprocal_line_sse(obs.subspan(4));
    CHECK(pooled_oracle == doctest::Approx(0.0607639).epsilon(1e-4));
    CHECK(split_oracle <= 1e-20);

    const BreakTest test = chow_break_test(s, 1000.0);
    CHECK(test.n_pre == 4);
    CHECK(test.n_post == 5);
    CHECK(nearly(test.sse_pooled, pooled_oracle, 1e-9));
    CHECK(test.sse_split <= 1e-20);
    CHECK(test.f_statistic > 1e6);
    CHECK(test.p_value < 0.001);
}

TEST_CASE("chow: insufficient side") {
    const TimeSeries s = two_slope_series(); // years 0..2000
    try {
        chow_break_test(s, 500.0); // 2 observations strictly before
        FAIL("expected InsufficientSide");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::insufficient_side);
        CHECK(std::string(e.what()).find("2") != std::string::npos);
    }
    CHECK_THROWS_AS(chow_break_test(s, 1800.0), Error); // post side short
}

TEST_CASE("find_breakpoints: two-slope fixture") {
    const SegmentedFit seg = find_breakpoints(two_slope_series(), 1);
    REQUIRE(seg.breakpoints.size() == 1);
    CHECK(seg.breakpoints[0] > 1000.0);
    CHECK(seg.breakpoints[0] <= 1250.0);
    CHECK(seg.breakpoints[0] == 1250.0); // first post-segment observation
    REQUIRE(seg.segments.size() == 2);
    CHECK(seg.segments[0].params.decline_rate == doctest::Approx(0.001).epsilon(1e-9));
    CHECK(seg.segments[1].params.decline_rate == doctest::Approx(0.0015).epsilon(1e-9));
    CHECK(seg.total_sse <= 1e-18);

    const SegmentedFit ref =
        reference::find_breakpoints_bruteforce(two_slope_series(), 1);
    CHECK(ref.breakpoints == seg.breakpoints);
}

TEST_CASE("find_breakpoints: parsimony keeps zero breaks on one hyperbola") {
    const SegmentedFit seg = find_breakpoints(dense_noiseless_hyperbola(), 1);
    CHECK(seg.breakpoints.empty());
    REQUIRE(seg.segments.size() == 1);
    CHECK(seg.total_sse <= 1e-20);
}

TEST_CASE("find_breakpoints: needs 3 points per segment") {
    std::vector<Observation> eight;
    for (int i = 0; i < 8; ++i) eight.push_back({i * 100.0, 1.0 + i});
    try {
        find_breakpoints(TimeSeries("eight", eight), 2);
        FAIL("expected TooFewPoints");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::too_few_points);
    }
}

TEST_CASE("find_breakpoints matches the serial brute-force reference") {
    std::mt19937 rng(41);
    for (int i = 0; i < 80; ++i) {
        const TimeSeries s = random_series(rng);
        const SegmentedFit fast = find_breakpoints(s, 1);
        const SegmentedFit slow = reference::find_breakpoints_bruteforce(s, 1);
        REQUIRE(fast.breakpoints == slow.breakpoints);
        CHECK(nearly(fast.total_sse, slow.total_sse, 1e-9));
        if (s.size() >= 9 && i % 3 == 0) {
            const SegmentedFit fast2 = find_breakpoints(s, 2);
            const SegmentedFit slow2 = reference::find_breakpoints_bruteforce(s, 2);
            CHECK(fast2.breakpoints == slow2.breakpoints);
        }
    }
}

TEST_CASE("takeoff: stagnation-then-growth control is detected") {
    const TakeoffVerdict v =
        takeoff_test(stagnation_then_takeoff_series(), TakeoffClaim::developed());
    CHECK(v.verdict == Verdict::present);
    CHECK(v.criterion_prominent);
    CHECK(v.criterion_stagnation_to_growth);
    CHECK(v.criterion_timing);
    CHECK(std::fabs(v.break_year_best - 1750.0) <= v.thresholds.timing_tolerance);
    CHECK(v.pre_rate < 0.001);
    CHECK(v.post_rate == doctest::Approx(0.01).epsilon(0.05));
    CHECK(v.evidence.p_value < v.thresholds.alpha);
}

TEST_CASE("takeoff: a pure hyperbola has no prominent break") {
    const TakeoffVerdict v = takeoff_test(
        dense_noiseless_hyperbola(1500.0, 2000.0, 25.0),
        TakeoffClaim::developed());
    CHECK(v.verdict == Verdict::absent);
    CHECK(!v.criterion_prominent);
    CHECK(v.evidence.f_statistic == 0.0);
    CHECK(v.evidence.p_value == 1.0);
}

TEST_CASE("takeoff: growth-to-growth transition is not a takeoff") {
    const TakeoffVerdict v = takeoff_test(
        two_slope_series(), TakeoffClaim{RegionClass::developed, 1125.0});
    CHECK(v.verdict == Verdict::absent);
    CHECK(!v.criterion_stagnation_to_growth);
    CHECK(v.pre_rate > 0.0);
}

TEST_CASE("takeoff: verdict undecidable when a side has too few points") {
    const TakeoffVerdict v =
        takeoff_test(noiseless_hyperbola5(), TakeoffClaim::developed());
    CHECK(v.verdict == Verdict::undecidable);
    CHECK(std::isnan(v.break_year_best));
    CHECK(std::isnan(v.evidence.p_value));
}

TEST_CASE("takeoff: present verdicts survive loosened thresholds") {
    DetectionThresholds loose;
    loose.alpha *= 2.0;
    loose.timing_tolerance += 20.0;
    const TakeoffVerdict tight =
        takeoff_test(stagnation_then_takeoff_series(), TakeoffClaim::developed());
    const TakeoffVerdict relaxed = takeoff_test(
        stagnation_then_takeoff_series(), TakeoffClaim::developed(), loose);
    REQUIRE(tight.verdict == Verdict::present);
    CHECK(relaxed.verdict == Verdict::present);

    // randomized stagnation-takeoff instances: loosening alpha and tau can
    // only keep or gain the verdict
    std::mt19937 rng(59);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    int present_seen = 0;
    for (int i = 0; i < 60; ++i) {
        const double level = 0.2 + 2.0 * u(rng);
        const double rate = 0.006 + 0.02 * u(rng);
        const double break_year = 1600.0 + 300.0 * u(rng);
        const double step_pre = 20.0 + 40.0 * u(rng);
        const double step_post = 10.0 + 20.0 * u(rng);
        std::vector<Observation> obs;
        for (double t = break_year - 260.0; t < break_year; t += step_pre) {
            obs.push_back({t, level});
        }
        for (double t = break_year; t < break_year + 200.0; t += step_post) {
            obs.push_back({t, level * std::exp(rate * (t - break_year))});
        }
        const TimeSeries s("synthetic", obs);
        const TakeoffClaim claim{RegionClass::developed,
                                 break_year + 25.0 * (u(rng) - 0.5)};
        const TakeoffVerdict base = takeoff_test(s, claim);
        DetectionThresholds relaxed_th;
        relaxed_th.alpha = 0.05 * (1.0 + 3.0 * u(rng));
        relaxed_th.timing_tolerance = 30.0 + 60.0 * u(rng);
        const TakeoffVerdict after = takeoff_test(s, claim, relaxed_th);
        if (base.verdict == Verdict::present) {
            ++present_seen;
            CHECK(after.verdict == Verdict::present);
        }
    }
    CHECK(present_seen > 10); // the generator must actually produce positives
}

TEST_CASE("takeoff: verdict invariant under rescaling and time shift") {
    const TimeSeries control = stagnation_then_takeoff_series();

    std::vector<Observation> scaled, shifted;
    for (const auto& o : control.observations()) {
        scaled.push_back({o.year, o.gdp * 1000.0});
        shifted.push_back({o.year - 1000.0, o.gdp});
    }
    const TakeoffVerdict base =
        takeoff_test(control, TakeoffClaim::developed());
    const TakeoffVerdict v_scaled =
        takeoff_test(TimeSeries("s", scaled), TakeoffClaim::developed());
    const TakeoffVerdict v_shifted = takeoff_test(
        TimeSeries("t", shifted), TakeoffClaim{RegionClass::developed, 750.0});

    CHECK(v_scaled.verdict == base.verdict);
    CHECK(v_scaled.criterion_prominent == base.criterion_prominent);
    CHECK(v_scaled.criterion_stagnation_to_growth ==
          base.criterion_stagnation_to_growth);
    CHECK(v_scaled.criterion_timing == base.criterion_timing);
    CHECK(v_scaled.break_year_best == base.break_year_best);
    CHECK(nearly(v_scaled.evidence.f_statistic, base.evidence.f_statistic, 1e-9));

    CHECK(v_shifted.verdict == base.verdict);
    CHECK(v_shifted.break_year_best == base.break_year_best - 1000.0);
    CHECK(nearly(v_shifted.evidence.p_value, base.evidence.p_value, 1e-9));
}

TEST_CASE("chow invariants on random data") {
    std::mt19937 rng(43);
    int done = 0;
    while (done < 60) {
        const TimeSeries s = random_series(rng, 8, 30);
        const auto& obs = s.observations();
        std::uniform_int_distribution<std::size_t> pick(3, obs.size() - 3);
        const double break_year = obs[pick(rng)].year;
        const BreakTest test = chow_break_test(s, break_year);
        CHECK(test.sse_split <= test.sse_pooled + 1e-20);
        CHECK(test.f_statistic >= 0.0);
        CHECK(test.p_value >= 0.0);
        CHECK(test.p_value <= 1.0);
        ++done;
    }
}

TEST_CASE("classify_transition: sign conventions") {
    // pre observations exactly on 1/y = 4 - 0.001 t
    std::vector<Observation> obs;
    for (double t : {100.0, 400.0, 700.0, 1000.0}) {
        obs.push_back({t, 1.0 / (4.0 - 0.001 * t)});
    }
    // post exactly on the extrapolated line -> none
    std::vector<Observation> on_line = obs;
    for (double t : {1500.0, 1800.0, 2100.0}) {
        on_line.push_back({t, 1.0 / (4.0 - 0.001 * t)});
    }
    const TransitionClass none = classify_transition(
        TimeSeries("x", on_line), 100.0, 1000.0, 1500.0, 2100.0);
    CHECK(none.shift == TrajectoryShift::none);
    CHECK(std::fabs(none.mean_excess_reciprocal) <= 1e-12);
    CHECK(none.at == 1500.0);

    // post reciprocals 1.5x the extrapolation: GDP below trend -> slower
    std::vector<Observation> below = obs;
    for (double t : {1500.0, 1800.0, 2100.0}) {
        below.push_back({t, 1.0 / (1.5 * (4.0 - 0.001 * t))});
    }
    const TransitionClass slower = classify_transition(
        TimeSeries("x", below), 100.0, 1000.0, 1500.0, 2100.0);
    CHECK(slower.shift == TrajectoryShift::slower);
    CHECK(slower.mean_excess_reciprocal > 0.0);

    // errors
    CHECK_THROWS_AS(classify_transition(TimeSeries("x", obs), 100.0, 1000.0,
                                        1500.0, 2100.0),
                    Error); // empty post window
    CHECK_THROWS_AS(classify_transition(TimeSeries("x", on_line), 100.0,
                                        1600.0, 1500.0, 2100.0),
                    Error); // overlapping windows
}

TEST_CASE("classify_transition: mirroring the post data flips the class") {
    std::mt19937 rng(47);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 40; ++i) {
        const double a = 4.0 + 2.0 * u(rng);
        const double k = 0.001;
        std::vector<Observation> pre;
        for (double t : {0.0, 300.0, 600.0, 900.0}) {
            pre.push_back({t, 1.0 / (a - k * t)});
        }
        std::vector<Observation> straight = pre, mirrored = pre;
        bool valid = true;
        for (double t : {1200.0, 1500.0, 1800.0}) {
            const double line = a - k * t;
            const double delta = (0.1 + 0.3 * u(rng)) * line * (u(rng) < 0.5 ? 1 : -1);
            if (line - delta <= 0.0 || line + delta <= 0.0) valid = false;
            straight.push_back({t, 1.0 / (line + delta)});
            mirrored.push_back({t, 1.0 / (line - delta)});
        }
        if (!valid) continue;
        const TransitionClass c1 = classify_transition(
            TimeSeries("x", straight), 0.0, 900.0, 1200.0, 1800.0);
        const TransitionClass c2 = classify_transition(
            TimeSeries("x", mirrored), 0.0, 900.0, 1200.0, 1800.0);
        CHECK(nearly(c1.mean_excess_reciprocal, -c2.mean_excess_reciprocal, 1e-9));
        if (c1.shift == TrajectoryShift::slower) {
            CHECK(c2.shift == TrajectoryShift::faster);
        } else if (c1.shift == TrajectoryShift::faster) {
            CHECK(c2.shift == TrajectoryShift::slower);
        }
    }
}

TEST_CASE("fixture: Asia post-1950 data sit on a faster trajectory") {
    const auto ds = load_fixture_dataset();
    const TransitionClass t =
        classify_transition(ds.get("Asia"), 1500.0, 1940.0, 1950.0, 2008.0);
    CHECK(t.shift == TrajectoryShift::faster);
    CHECK(t.mean_excess_reciprocal < 0.0);
}

TEST_CASE("segmented fit invariants") {
    std::mt19937 rng(53);
    for (int i = 0; i < 30; ++i) {
        const TimeSeries s = random_series(rng, 9, 30);
        const SegmentedFit seg = find_breakpoints(s, 2);
        double sum = 0.0;
        for (const auto& fit : seg.segments) {
            CHECK(fit.n >= 3);
            sum += fit.sse_reciprocal;
        }
        CHECK(seg.total_sse == doctest::Approx(sum));
        CHECK(std::is_sorted(seg.breakpoints.begin(), seg.breakpoints.end()));
        CHECK(seg.segments.size() == seg.breakpoints.size() + 1);
    }
}
