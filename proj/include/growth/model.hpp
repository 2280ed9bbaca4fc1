#pragma once

#include <cmath>
#include <string>

#include "growth/dataset.hpp"
#include "growth/errors.hpp"

namespace growth {

/// Hyperbolic trajectory y(t) = 1 / (intercept - decline_rate * t).
/// `intercept` is the reciprocal-GDP value at year 0 (1/billion);
/// `decline_rate` is the reciprocal decline per year (1/(billion*year)),
/// positive for growth. decline_rate == 0 degenerates to a constant.
struct HyperbolicParams {
    double intercept = 0.0;
    double decline_rate = 0.0;
};

/// Year at which a fitted hyperbola diverges; predictions are only valid
/// strictly before it.
struct SingularityTime {
    double year = 0.0;
};

enum class ModelFamily {
    constant,
    hyperbolic,
    exponential,
    stagnation_then_exponential,
};

/// Candidate growth model. For stagnation_then_exponential the break year
/// is a supplied hyper-parameter, not re-fit.
struct ModelKind {
    ModelFamily family = ModelFamily::hyperbolic;
    double break_year = 0.0; // used by stagnation_then_exponential only

    static ModelKind constant() { return {ModelFamily::constant, 0.0}; }
    static ModelKind hyperbolic() { return {ModelFamily::hyperbolic, 0.0}; }
    static ModelKind exponential() { return {ModelFamily::exponential, 0.0}; }
    static ModelKind stagnation_then_exponential(double break_year) {
        return {ModelFamily::stagnation_then_exponential, break_year};
    }

    /// Free-parameter count used in information criteria.
    int param_count() const {
        switch (family) {
        case ModelFamily::constant: return 1;
        case ModelFamily::hyperbolic: return 2;
        case ModelFamily::exponential: return 2;
        case ModelFamily::stagnation_then_exponential: return 4;
        }
        return 0;
    }

    std::string name() const;
};

enum class RegionClass { developed, less_developed };

/// A claimed takeoff date to test a region against.
struct TakeoffClaim {
    RegionClass region_class = RegionClass::developed;
    double claimed_year = 0.0;

    static TakeoffClaim developed(double year = kDevelopedTakeoffYear) {
        return {RegionClass::developed, year};
    }
    static TakeoffClaim less_developed(double year = kLessDevelopedTakeoffYear) {
        return {RegionClass::less_developed, year};
    }

    static constexpr double kDevelopedTakeoffYear = 1750.0;
    static constexpr double kLessDevelopedTakeoffYear = 1900.0;
};

/// Conventional Industrial Revolution window, kept as an annotation
/// constant for figures and reports.
inline constexpr double kIndustrialRevolutionFrom = 1760.0;
inline constexpr double kIndustrialRevolutionTo = 1840.0;

/// Maps each (t, y) to (t, 1/y); order preserved. An involution.
TimeSeries reciprocal(const TimeSeries& series);

/// 1 / (intercept - decline_rate * t); throws at_or_beyond_singularity
/// when the denominator is not positive.
double predict_hyperbolic(const HyperbolicParams& params, double t);

/// t_s = intercept / decline_rate; requires decline_rate > 0.
SingularityTime singularity(const HyperbolicParams& params);

/// (ln y2 - ln y1) / (t2 - t1); throws zero_span on equal years.
double growth_rate_empirical(const Observation& p1, const Observation& p2);

/// Instantaneous relative growth rate of the hyperbola: decline_rate * y(t).
double growth_rate_model(const HyperbolicParams& params, double t);

} // namespace growth
