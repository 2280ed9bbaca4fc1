#include "growth/model.hpp"

#include <cmath>

namespace growth {

std::string ModelKind::name() const {
    switch (family) {
    case ModelFamily::constant: return "constant";
    case ModelFamily::hyperbolic: return "hyperbolic";
    case ModelFamily::exponential: return "exponential";
    case ModelFamily::stagnation_then_exponential:
        return "stagnation_then_exponential";
    }
    return "unknown";
}

TimeSeries reciprocal(const TimeSeries& series) {
    std::vector<Observation> out;
    out.reserve(series.size());
    for (const auto& obs : series.observations()) {
        out.push_back({obs.year, 1.0 / obs.gdp});
    }
    return TimeSeries(series.region(), std::move(out));
}

double predict_hyperbolic(const HyperbolicParams& params, double t) {
    const double denom = params.intercept - params.decline_rate * t;
    if (!(denom > 0.0)) {
        fail(ErrorKind::at_or_beyond_singularity,
             "prediction at t = " + std::to_string(t) +
                 " is at or beyond the singularity");
    }
    return 1.0 / denom;
}

SingularityTime singularity(const HyperbolicParams& params) {
    if (!(params.decline_rate > 0.0)) {
        fail(ErrorKind::no_singularity,
             "no finite-time singularity: decline rate is not positive");
    }
    return {params.intercept / params.decline_rate};
}

double growth_rate_empirical(const Observation& p1, const Observation& p2) {
    if (p1.year == p2.year) {
        fail(ErrorKind::zero_span, "growth rate over a zero-year span");
    }
    return (std::log(p2.gdp) - std::log(p1.gdp)) / (p2.year - p1.year);
}

double growth_rate_model(const HyperbolicParams& params, double t) {
    return params.decline_rate * predict_hyperbolic(params, t);
}

} // namespace growth
