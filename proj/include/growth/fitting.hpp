#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "growth/dataset.hpp"
#include "growth/model.hpp"

namespace growth {

/// Sum-of-squares floor that keeps R², F and AIC finite on noiseless data.
inline constexpr double kSseFloor = 1e-20;

/// Residual weighting for the reciprocal-space regression. `gdp_quartic`
/// weights each point by y^4, approximating least squares in GDP space;
/// the default reproduces plain OLS on the reciprocal values.
enum class FitWeighting { none, gdp_quartic };

/// Straight-line least squares on (t, 1/y). r2 and sse live in reciprocal
/// space (the fit's native space); max_rel_err_gdp reports back-transformed
/// quality.
struct HyperbolicFit {
    HyperbolicParams params;
    double window_from = 0.0;
    double window_to = 0.0;
    int n = 0;
    double r2_reciprocal = 0.0;
    double sse_reciprocal = 0.0;
    double max_rel_err_gdp = 0.0;
};

/// Requires at least 3 observations; deterministic.
HyperbolicFit fit_hyperbolic(const TimeSeries& series,
                             FitWeighting weighting = FitWeighting::none);

/// Any candidate model refit with log-space residuals so AIC values are
/// comparable across families. aic = n*ln(max(sse_log, floor)/n) + 2p.
struct ModelFit {
    ModelKind kind;
    std::vector<double> parameters; // family-specific, see fit_model
    double sse_log = 0.0;
    int param_count = 0;
    double aic = 0.0;
};

/// Parameter layout: constant {level}; exponential {level_at_t0, rate};
/// hyperbolic {intercept, decline_rate}; stagnation_then_exponential
/// {level, rate, break_year} with the level held flat before the break and
/// continuous exponential growth after it.
ModelFit fit_model(const TimeSeries& series, const ModelKind& kind);

/// One row of a model comparison; infeasible kinds carry the reason instead
/// of a fit.
struct RankedModel {
    ModelKind kind;
    std::optional<ModelFit> fit;
    std::string infeasible_reason;

    bool feasible() const { return fit.has_value(); }
};

/// Fits every kind and sorts feasible fits by ascending AIC (ties: smaller
/// parameter count, then declaration order). Infeasible kinds are kept at
/// the back, marked, rather than failing the call.
std::vector<RankedModel> compare_models(const TimeSeries& series,
                                        std::span<const ModelKind> kinds);

double aic_value(int n, double sse, int param_count);

} // namespace growth
