#include "growth/detection.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "growth/stats.hpp"

namespace growth {

namespace {

constexpr std::size_t kMinSegment = 3;

// Raw prefix moments of the reciprocal values with globally centered years,
// giving O(1) least-squares SSE for any contiguous index range.
class PrefixMoments {
public:
    explicit PrefixMoments(const std::vector<Observation>& obs) {
        const std::size_t n = obs.size();
        double tsum = 0.0;
        for (const auto& o : obs) tsum += o.year;
        t0_ = n > 0 ? tsum / static_cast<double>(n) : 0.0;

        st_.assign(n + 1, 0.0);
        sr_.assign(n + 1, 0.0);
        stt_.assign(n + 1, 0.0);
        srr_.assign(n + 1, 0.0);
        str_.assign(n + 1, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            const double t = obs[i].year - t0_;
            const double r = 1.0 / obs[i].gdp;
            st_[i + 1] = st_[i] + t;
            sr_[i + 1] = sr_[i] + r;
            stt_[i + 1] = stt_[i] + t * t;
            srr_[i + 1] = srr_[i] + r * r;
            str_[i + 1] = str_[i] + t * r;
        }
    }

    // SSE of the least-squares line over [i, j); j - i >= 2 assumed.
    double segment_sse(std::size_t i, std::size_t j) const {
        const double n = static_cast<double>(j - i);
        const double st = st_[j] - st_[i];
        const double sr = sr_[j] - sr_[i];
        const double stt = stt_[j] - stt_[i];
        const double srr = srr_[j] - srr_[i];
        const double str = str_[j] - str_[i];
        const double sxx = stt - st * st / n;
        const double sxy = str - st * sr / n;
        const double syy = srr - sr * sr / n;
        const double sse = sxx > 0.0 ? syy - sxy * sxy / sxx : syy;
        return std::max(sse, 0.0);
    }

private:
    double t0_ = 0.0;
    std::vector<double> st_, sr_, stt_, srr_, str_;
};

struct SingleSplit {
    std::size_t split = 0; // first index of the post segment
    double sse = std::numeric_limits<double>::infinity();
    bool found = false;
};

// Ties prefer the split leaving more points before the break.
SingleSplit best_single_split(const PrefixMoments& m, std::size_t n) {
    SingleSplit best;
    if (n < 2 * kMinSegment) return best;
    const std::size_t lo = kMinSegment;
    const std::size_t hi = n - kMinSegment; // inclusive upper split index
    std::vector<double> sse(hi - lo + 1);

#pragma omp parallel for schedule(static)
    for (long long off = 0; off <= static_cast<long long>(hi - lo); ++off) {
        const std::size_t s = lo + static_cast<std::size_t>(off);
        sse[off] = m.segment_sse(0, s) + m.segment_sse(s, n);
    }

    for (std::size_t off = 0; off < sse.size(); ++off) {
        if (!best.found || sse[off] <= best.sse) {
            best.found = true;
            best.sse = sse[off];
            best.split = lo + off;
        }
    }
    return best;
}

struct DoubleSplit {
    std::size_t split1 = 0;
    std::size_t split2 = 0;
    double sse = std::numeric_limits<double>::infinity();
    bool found = false;
};

DoubleSplit best_double_split(const PrefixMoments& m, std::size_t n) {
    DoubleSplit best;
    if (n < 3 * kMinSegment) return best;
    const std::size_t lo1 = kMinSegment;
    const std::size_t hi1 = n - 2 * kMinSegment;
    std::vector<DoubleSplit> per_s1(hi1 - lo1 + 1);

#pragma omp parallel for schedule(static)
    for (long long off = 0; off <= static_cast<long long>(hi1 - lo1); ++off) {
        const std::size_t s1 = lo1 + static_cast<std::size_t>(off);
        const double head = m.segment_sse(0, s1);
        DoubleSplit local;
        for (std::size_t s2 = s1 + kMinSegment; s2 + kMinSegment <= n; ++s2) {
            const double total =
                head + m.segment_sse(s1, s2) + m.segment_sse(s2, n);
            if (!local.found || total <= local.sse) {
                local.found = true;
                local.sse = total;
                local.split1 = s1;
                local.split2 = s2;
            }
        }
        per_s1[off] = local;
    }

    for (const auto& local : per_s1) {
        if (!local.found) continue;
        if (!best.found || local.sse < best.sse ||
            (local.sse == best.sse && local.split1 >= best.split1)) {
            best = local;
        }
    }
    return best;
}

TimeSeries slice(const TimeSeries& series, std::size_t i, std::size_t j) {
    const auto& obs = series.observations();
    return TimeSeries(series.region(),
                      std::vector<Observation>(obs.begin() + i, obs.begin() + j));
}

// Refit every segment of a chosen partition so the reported SSE comes from
// the same code path as every other fit in the toolkit.
SegmentedFit assemble(const TimeSeries& series,
                      const std::vector<std::size_t>& splits) {
    const auto& obs = series.observations();
    SegmentedFit out;
    std::size_t start = 0;
    for (std::size_t split : splits) {
        out.breakpoints.push_back(obs[split].year);
        out.segments.push_back(fit_hyperbolic(slice(series, start, split)));
        start = split;
    }
    out.segments.push_back(fit_hyperbolic(slice(series, start, obs.size())));
    out.total_sse = 0.0;
    for (const auto& seg : out.segments) out.total_sse += seg.sse_reciprocal;
    return out;
}

// An extra break must buy more than 1% relative SSE (and more than the
// noise floor in absolute terms), otherwise ties on noiseless data would
// pick arbitrary breaks.
bool worth_extra_break(double fewer_sse, double more_sse) {
    if (fewer_sse - more_sse <= kSseFloor) return false;
    return more_sse < 0.99 * fewer_sse;
}

// Mean growth rate over a side of the break: total log change over total
// span, i.e. the time-weighted mean of the consecutive pairwise rates.
// Irregularly spaced historical data would otherwise let one short gap
// dominate the average.
double mean_rate(std::span<const Observation> obs) {
    if (obs.size() < 2) return 0.0;
    return growth_rate_empirical(obs.front(), obs.back());
}

} // namespace

BreakTest chow_break_test(const TimeSeries& series, double break_year) {
    const auto& obs = series.observations();
    const auto split_it =
        std::lower_bound(obs.begin(), obs.end(), break_year,
                         [](const Observation& o, double y) { return o.year < y; });
    const std::size_t split = static_cast<std::size_t>(split_it - obs.begin());
    const std::size_t n = obs.size();

    if (split < kMinSegment) {
        fail(ErrorKind::insufficient_side,
             "only " + std::to_string(split) +
                 " observations before break year " + std::to_string(break_year));
    }
    if (n - split < kMinSegment) {
        fail(ErrorKind::insufficient_side,
             "only " + std::to_string(n - split) +
                 " observations at or after break year " +
                 std::to_string(break_year));
    }

    BreakTest test;
    test.break_year = break_year;
    test.n_pre = static_cast<int>(split);
    test.n_post = static_cast<int>(n - split);
    test.sse_pooled = fit_hyperbolic(series).sse_reciprocal;
    test.sse_split = fit_hyperbolic(slice(series, 0, split)).sse_reciprocal +
                     fit_hyperbolic(slice(series, split, n)).sse_reciprocal;

    constexpr double p = 2.0; // line parameters per side
    const double dof = static_cast<double>(n) - 2.0 * p;
    if (test.sse_pooled <= kSseFloor) {
        test.f_statistic = 0.0;
        test.p_value = 1.0;
    } else {
        const double denom = std::max(test.sse_split, kSseFloor) / dof;
        test.f_statistic =
            std::max((test.sse_pooled - test.sse_split) / p, 0.0) / denom;
        test.p_value = stats::f_upper_tail(test.f_statistic, p, dof);
    }
    return test;
}

SegmentedFit find_breakpoints(const TimeSeries& series, int max_breaks) {
    if (max_breaks < 0 || max_breaks > 2) {
        fail(ErrorKind::too_few_points,
             "max_breaks must be 0, 1 or 2, got " + std::to_string(max_breaks));
    }
    const std::size_t n = series.size();
    const std::size_t needed = kMinSegment * (static_cast<std::size_t>(max_breaks) + 1);
    if (n < needed) {
        fail(ErrorKind::too_few_points,
             "region '" + series.region() + "': " + std::to_string(n) +
                 " observations, need >= " + std::to_string(needed) + " for " +
                 std::to_string(max_breaks) + " breaks");
    }

    const PrefixMoments moments(series.observations());

    SegmentedFit chosen = assemble(series, {});
    if (max_breaks >= 1) {
        const SingleSplit s1 = best_single_split(moments, n);
        if (s1.found) {
            SegmentedFit one = assemble(series, {s1.split});
            if (worth_extra_break(chosen.total_sse, one.total_sse)) {
                chosen = std::move(one);
            }
        }
    }
    if (max_breaks >= 2) {
        const DoubleSplit s2 = best_double_split(moments, n);
        if (s2.found) {
            SegmentedFit two = assemble(series, {s2.split1, s2.split2});
            if (worth_extra_break(chosen.total_sse, two.total_sse)) {
                chosen = std::move(two);
            }
        }
    }
    return chosen;
}

TakeoffVerdict takeoff_test(const TimeSeries& series, const TakeoffClaim& claim,
                            const DetectionThresholds& thresholds) {
    TakeoffVerdict verdict;
    verdict.claim = claim;
    verdict.thresholds = thresholds;

    const auto undecidable = [&verdict]() {
        constexpr double nan = std::numeric_limits<double>::quiet_NaN();
        verdict.verdict = Verdict::undecidable;
        verdict.break_year_best = nan;
        verdict.pre_rate = nan;
        verdict.post_rate = nan;
        verdict.evidence.break_year = nan;
        verdict.evidence.f_statistic = nan;
        verdict.evidence.p_value = nan;
        verdict.evidence.sse_pooled = nan;
        verdict.evidence.sse_split = nan;
        return verdict;
    };

    const auto& obs = series.observations();
    const std::size_t n = obs.size();
    const auto claim_it = std::lower_bound(
        obs.begin(), obs.end(), claim.claimed_year,
        [](const Observation& o, double y) { return o.year < y; });
    const std::size_t c = static_cast<std::size_t>(claim_it - obs.begin());

    if (c < kMinSegment || n - c < kMinSegment) {
        return undecidable();
    }

    // Nominal window, widened to the nearest 3 observations per side when
    // the data around the claim are sparse.
    const double lo = claim.claimed_year - thresholds.half_window;
    const double hi = claim.claimed_year + thresholds.half_window;
    std::size_t i0 = c;
    while (i0 > 0 && obs[i0 - 1].year >= lo) --i0;
    std::size_t j1 = c;
    while (j1 < n && obs[j1].year <= hi) ++j1;
    if (c - i0 < kMinSegment) i0 = c - kMinSegment;
    if (j1 - c < kMinSegment) j1 = c + kMinSegment;

    const TimeSeries windowed = slice(series, i0, j1);
    const std::size_t wn = windowed.size();

    const PrefixMoments moments(windowed.observations());
    const SingleSplit best = best_single_split(moments, wn);
    if (!best.found) {
        return undecidable();
    }

    verdict.break_year_best = windowed.observations()[best.split].year;
    verdict.evidence = chow_break_test(windowed, verdict.break_year_best);
    verdict.criterion_prominent = verdict.evidence.p_value < thresholds.alpha;

    const auto wobs = std::span<const Observation>(windowed.observations());
    verdict.pre_rate = mean_rate(wobs.subspan(0, best.split));
    verdict.post_rate = mean_rate(wobs.subspan(best.split));
    verdict.criterion_stagnation_to_growth =
        verdict.pre_rate < thresholds.stagnation_rate &&
        verdict.post_rate >=
            std::max(10.0 * verdict.pre_rate, thresholds.growth_rate);

    verdict.criterion_timing =
        std::fabs(verdict.break_year_best - claim.claimed_year) <=
        thresholds.timing_tolerance;

    verdict.verdict = (verdict.criterion_prominent &&
                       verdict.criterion_stagnation_to_growth &&
                       verdict.criterion_timing)
                          ? Verdict::present
                          : Verdict::absent;
    return verdict;
}

TransitionClass classify_transition(const TimeSeries& series, double pre_from,
                                    double pre_to, double post_from,
                                    double post_to) {
    if (!(pre_to < post_from)) {
        fail(ErrorKind::inverted_window,
             "transition windows must be disjoint with pre before post");
    }
    const TimeSeries pre = window(series, pre_from, pre_to);
    const HyperbolicFit fit = fit_hyperbolic(pre);

    const TimeSeries post = window(series, post_from, post_to);
    if (post.empty()) {
        fail(ErrorKind::empty_window, "no observations in the post window");
    }

    double excess = 0.0;
    double level = 0.0;
    for (const auto& o : post.observations()) {
        const double line =
            fit.params.intercept - fit.params.decline_rate * o.year;
        excess += 1.0 / o.gdp - line;
        level += 1.0 / o.gdp;
    }
    const double count = static_cast<double>(post.size());
    excess /= count;
    level /= count;

    TransitionClass out;
    out.at = post.first_year();
    out.mean_excess_reciprocal = excess;
    const double dead_band = 0.02 * level;
    if (excess > dead_band) out.shift = TrajectoryShift::slower;
    else if (excess < -dead_band) out.shift = TrajectoryShift::faster;
    else out.shift = TrajectoryShift::none;
    return out;
}

} // namespace growth
