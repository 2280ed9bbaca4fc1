#pragma once

#include <vector>

#include "growth/dataset.hpp"
#include "growth/fitting.hpp"
#include "growth/model.hpp"

namespace growth {

/// Chow-style comparison of one pooled reciprocal-space line against two
/// independent lines split at break_year (pre: year < break, post: year >=
/// break). f = ((sse_pooled - sse_split)/p) / (sse_split/(n - 2p)) with
/// p = 2, defined as 0 when the pooled fit is already exact.
struct BreakTest {
    double break_year = 0.0;
    double f_statistic = 0.0;
    double p_value = 1.0;
    double sse_pooled = 0.0;
    double sse_split = 0.0;
    int n_pre = 0;
    int n_post = 0;
};

/// Requires >= 3 observations strictly before and >= 3 at or after
/// break_year; throws Error(insufficient_side) otherwise.
BreakTest chow_break_test(const TimeSeries& series, double break_year);

/// Piecewise-hyperbolic description: 0, 1 or 2 break years, each reported
/// as the first observation year of its post segment; per-segment fits in
/// reciprocal space.
struct SegmentedFit {
    std::vector<double> breakpoints;
    std::vector<HyperbolicFit> segments;
    double total_sse = 0.0;
};

/// Exhaustive search over admissible splits (every segment >= 3 points)
/// minimizing total reciprocal-space SSE. An extra break is kept only when
/// it reduces the SSE by more than 1% relative; SSE ties prefer the split
/// leaving more points before the break. The candidate scan is
/// OpenMP-parallel; results do not depend on thread count.
SegmentedFit find_breakpoints(const TimeSeries& series, int max_breaks);

/// Detection thresholds; the defaults are deliberately conservative and are
/// reported alongside every verdict.
struct DetectionThresholds {
    double alpha = 0.05;            // break-prominence significance level
    double stagnation_rate = 0.001; // "stagnation": mean rate below 0.1%/yr
    double growth_rate = 0.005;     // "growth": mean rate at least 0.5%/yr
    double timing_tolerance = 30.0; // |break - claim| allowed, years
    double half_window = 150.0;     // nominal locality around the claim
};

enum class Verdict { present, absent, undecidable };

/// Three-criterion evaluation of a claimed takeoff: (1) a prominent break,
/// (2) stagnation before it and growth after it, (3) at the claimed time.
/// present only when all three hold; undecidable when either side of the
/// claimed year lacks 3 observations in the whole series.
struct TakeoffVerdict {
    TakeoffClaim claim;
    bool criterion_prominent = false;
    bool criterion_stagnation_to_growth = false;
    bool criterion_timing = false;
    Verdict verdict = Verdict::undecidable;
    BreakTest evidence;
    double pre_rate = 0.0;
    double post_rate = 0.0;
    double break_year_best = 0.0;
    DetectionThresholds thresholds;
};

/// Evaluates the claim on the series windowed to claimed_year +-
/// half_window; when the nominal window holds fewer than 3 points on a
/// side it is widened to the nearest 3 observations on that side, so sparse
/// benchmark-resolution data stay decidable.
TakeoffVerdict takeoff_test(const TimeSeries& series, const TakeoffClaim& claim,
                            const DetectionThresholds& thresholds = {});

enum class TrajectoryShift { slower, faster, none };

/// Sign of the diversion of post-window data from the pre-window trajectory.
/// mean_excess_reciprocal > 0 means observed reciprocals above the
/// extrapolated line, i.e. GDP below trend: a slower trajectory.
struct TransitionClass {
    double at = 0.0; // first post-window observation year
    TrajectoryShift shift = TrajectoryShift::none;
    double mean_excess_reciprocal = 0.0;
};

/// Fits the pre window, extrapolates its reciprocal line across the post
/// window and classifies the mean signed excess against a dead band of
/// 2% of the post window's mean reciprocal level. Windows are inclusive
/// and must be disjoint with pre before post.
TransitionClass classify_transition(const TimeSeries& series, double pre_from,
                                    double pre_to, double post_from,
                                    double post_to);

} // namespace growth
