#pragma once

#include "growth/detection.hpp"

// Serial reference implementations kept for testing and benchmarking.
// These deliberately avoid the prefix-sum machinery and OpenMP used by the
// library kernels: every candidate segmentation is evaluated with a direct
// two-pass least-squares fit so the two code paths share no arithmetic.

namespace growth::reference {

/// Plain two-pass OLS line fit over (t, 1/y); returns the reciprocal-space
/// SSE and writes the line as y-intercept/slope when requested.
double reciprocal_line_sse(std::span<const Observation> obs,
                           double* intercept = nullptr,
                           double* slope = nullptr);

/// Brute-force enumeration of every admissible segmentation (segments of
/// at least 3 points), same acceptance and tie rules as
/// growth::find_breakpoints, serial throughout.
SegmentedFit find_breakpoints_bruteforce(const TimeSeries& series,
                                         int max_breaks);

} // namespace growth::reference
