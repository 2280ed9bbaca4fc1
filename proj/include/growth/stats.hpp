#pragma once

namespace growth::stats {

/// Regularized incomplete beta function I_x(a, b) for a, b > 0 and
/// x in [0, 1]. Continued-fraction evaluation, accurate to ~1e-14.
double regularized_incomplete_beta(double a, double b, double x);

/// Upper-tail probability P(F > f) for an F(df1, df2) distribution.
/// Returns 1 for f <= 0.
double f_upper_tail(double f, double df1, double df2);

} // namespace growth::stats
