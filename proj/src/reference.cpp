#include "growth/reference.hpp"

#include <cmath>
#include <limits>
#include <vector>

namespace growth::reference {

double reciprocal_line_sse(std::span<const Observation> obs, double* intercept,
                           double* slope) {
    const std::size_t n = obs.size();
    double tmean = 0.0, rmean = 0.0;
    for (const auto& o : obs) {
        tmean += o.year;
        rmean += 1.0 / o.gdp;
    }
    tmean /= static_cast<double>(n);
    rmean /= static_cast<double>(n);

    double stt = 0.0, str = 0.0;
    for (const auto& o : obs) {
        const double dt = o.year - tmean;
        const double dr = 1.0 / o.gdp - rmean;
        stt += dt * dt;
        str += dt * dr;
    }
    const double m = stt > 0.0 ? str / stt : 0.0;
    const double c = rmean - m * tmean;
    if (intercept) *intercept = c;
    if (slope) *slope = m;

    double sse = 0.0;
    for (const auto& o : obs) {
        const double resid = 1.0 / o.gdp - (c + m * o.year);
        sse += resid * resid;
    }
    return sse;
}

namespace {

constexpr std::size_t kMinSegment = 3;

double partition_sse(std::span<const Observation> obs,
                     const std::vector<std::size_t>& splits) {
    double total = 0.0;
    std::size_t start = 0;
    for (std::size_t split : splits) {
        total += reciprocal_line_sse(obs.subspan(start, split - start));
        start = split;
    }
    total += reciprocal_line_sse(obs.subspan(start));
    return total;
}

SegmentedFit assemble(const TimeSeries& series,
                      const std::vector<std::size_t>& splits) {
    const auto& obs = series.observations();
    SegmentedFit out;
    std::size_t start = 0;
    for (std::size_t split : splits) {
        out.breakpoints.push_back(obs[split].year);
        out.segments.push_back(fit_hyperbolic(TimeSeries(
            series.region(),
            std::vector<Observation>(obs.begin() + start, obs.begin() + split))));
        start = split;
    }
    out.segments.push_back(fit_hyperbolic(TimeSeries(
        series.region(),
        std::vector<Observation>(obs.begin() + start, obs.end()))));
    out.total_sse = 0.0;
    for (const auto& seg : out.segments) out.total_sse += seg.sse_reciprocal;
    return out;
}

bool worth_extra_break(double fewer_sse, double more_sse) {
    if (fewer_sse - more_sse <= kSseFloor) return false;
    return more_sse < 0.99 * fewer_sse;
}

} // namespace

SegmentedFit find_breakpoints_bruteforce(const TimeSeries& series,
                                         int max_breaks) {
    const std::size_t n = series.size();
    const std::size_t needed =
        kMinSegment * (static_cast<std::size_t>(max_breaks) + 1);
    if (n < needed) {
        fail(ErrorKind::too_few_points,
             "region '" + series.region() + "': " + std::to_string(n) +
                 " observations, need >= " + std::to_string(needed));
    }
    const auto obs = std::span<const Observation>(series.observations());

    std::vector<std::size_t> best1, best2;
    double sse1 = std::numeric_limits<double>::infinity();
    double sse2 = std::numeric_limits<double>::infinity();

    if (max_breaks >= 1) {
        for (std::size_t s = kMinSegment; s + kMinSegment <= n; ++s) {
            const double total = partition_sse(obs, {s});
            if (best1.empty() || total <= sse1) {
                sse1 = total;
                best1 = {s};
            }
        }
    }
    if (max_breaks >= 2) {
        for (std::size_t s1 = kMinSegment; s1 + 2 * kMinSegment <= n; ++s1) {
            for (std::size_t s2 = s1 + kMinSegment; s2 + kMinSegment <= n; ++s2) {
                const double total = partition_sse(obs, {s1, s2});
                if (best2.empty() || total <= sse2) {
                    sse2 = total;
                    best2 = {s1, s2};
                }
            }
        }
    }

    SegmentedFit chosen = assemble(series, {});
    if (!best1.empty()) {
        SegmentedFit one = assemble(series, best1);
        if (worth_extra_break(chosen.total_sse, one.total_sse)) {
            chosen = std::move(one);
        }
    }
    if (!best2.empty()) {
        SegmentedFit two = assemble(series, best2);
        if (worth_extra_break(chosen.total_sse, two.total_sse)) {
            chosen = std::move(two);
        }
    }
    return chosen;
}

} // namespace growth::reference
